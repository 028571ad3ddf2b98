#pragma once

#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "winlsq/dense.hpp"
#include "winlsq/errors.hpp"

namespace winlsq::richardson {

/// Keeps the simplest gain off the rho = 1 boundary hit when
/// lam_max equals the row-sum norm (e.g. any multiple of the identity).
inline constexpr double default_safety = 0.99;

struct Preconditioner {
    enum class Kind { Simplest, Optimal, Suboptimal };

    double alpha = 0.0;
    Kind kind = Kind::Simplest;
    double safety = 1.0;
    // Quantities the gain was derived from; NaN where not applicable.
    double inf_norm = std::numeric_limits<double>::quiet_NaN();
    double lam_min = std::numeric_limits<double>::quiet_NaN();
    double lam_max = std::numeric_limits<double>::quiet_NaN();
    double eps = std::numeric_limits<double>::quiet_NaN();
};

/// alpha = safety * 2 / ||A||_inf
Preconditioner precond_simplest(const Matrix& A, double safety = default_safety);
/// alpha = 2 / (lam_min + lam_max); the gain minimizing rho(I - alpha A).
Preconditioner precond_optimal(double lam_min, double lam_max);
/// alpha = 2 / (eps + lam_max_hat); lam_min neglected.
Preconditioner precond_suboptimal(double lam_max_hat, double eps);

/// rho(I - alpha A) for a matrix whose spectrum spans [lam_min, lam_max]:
/// max(|1 - alpha lam_min|, |1 - alpha lam_max|).
double iteration_spectral_radius(double alpha, double lam_min, double lam_max);

struct RichardsonConfig {
    double delta = 0.0;           ///< residual two-norm bound; must be > 0
    std::size_t max_iters = 100000;
    bool record_trace = false;
};

/// delta = rel * ||b||_2
double relative_delta(const Vector& b, double rel = 1e-6);

struct RichardsonResult {
    Vector theta;
    std::size_t iterations = 0;
    double final_residual = 0.0;  ///< ||A theta - b||_2 recomputed at exit
    std::vector<double> trace;    ///< per-iteration residual norms when recorded
};

class NotConverged : public Error {
public:
    NotConverged(RichardsonResult best, const std::string& what_arg)
        : Error(what_arg), best_(std::move(best)) {}
    const RichardsonResult& best() const noexcept { return best_; }

private:
    RichardsonResult best_;
};

/// theta_i = theta_{i-1} - alpha (A theta_{i-1} - b) until the residual
/// two-norm drops to cfg.delta. The only divisions anywhere in this path are
/// the ones inside the preconditioner constructions.
RichardsonResult solve(const Matrix& A, const Vector& b, const Preconditioner& p,
                       const RichardsonConfig& cfg, const Vector& theta0);
RichardsonResult solve(const Matrix& A, const Vector& b, const Preconditioner& p,
                       const RichardsonConfig& cfg);

struct NewtonSchulzDiag {
    std::vector<double> error_norms;  ///< ||I - Gamma A||_F before and after each step
    bool contraction_guaranteed = true;
};

/// Gamma <- Gamma (2I - A Gamma), `steps` times. The inversion error
/// F = I - Gamma A squares on each step once inside the contraction region.
/// Throws Diverging when ||F||_F grows between steps.
Matrix newton_schulz_correct(const Matrix& A, Matrix Gamma, std::size_t steps,
                             NewtonSchulzDiag* diag = nullptr);

}  // namespace winlsq::richardson
