#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "winlsq/dense.hpp"
#include "winlsq/errors.hpp"

namespace winlsq::eigen {

struct PowerConfig {
    double tol = 0.01;          ///< residual threshold on || x*||Ax|| - Ax ||
    std::size_t max_iters = 0;  ///< 0 means 100 * n
    std::uint64_t seed = 1;     ///< start-vector seed
    bool rayleigh_readout = false;  ///< value = xT A x instead of ||A x||
};

struct EigenEstimate {
    double value = 0.0;
    Vector vector;
    std::size_t iterations = 0;
    double residual = 0.0;
};

/// Cap reached before the residual criterion; carries the best estimate so far.
class NotConverged : public Error {
public:
    NotConverged(EigenEstimate best, const std::string& what_arg)
        : Error(what_arg), best_(std::move(best)) {}
    const EigenEstimate& best() const noexcept { return best_; }

private:
    EigenEstimate best_;
};

/// Dominant eigenpair of a symmetric matrix by normalized repeated application.
/// Stops when || x*||Ax|| - Ax || < cfg.tol. `value_trace`, when given, collects
/// the per-iteration magnitude readouts.
EigenEstimate power_iterate(const Matrix& A, const PowerConfig& cfg = {},
                            std::vector<double>* value_trace = nullptr);

/// Smallest eigenvalue via the dominant eigenvalue of (lam_max_hat + eps) I - A.
/// Throws ShiftTooSmall when the shifted matrix turns out indefinite, which
/// signals that lam_max_hat was an underestimate.
EigenEstimate min_eigen_shifted(const Matrix& A, double lam_max_hat, double eps,
                                const PowerConfig& cfg = {});

/// Default shift margin: 1e-3 * lam_max_hat.
double default_shift_eps(double lam_max_hat);

}  // namespace winlsq::eigen
