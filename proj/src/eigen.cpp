#include "winlsq/eigen.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace winlsq::eigen {

namespace {

// Deterministic unit start vector. mt19937_64's raw output is fully specified,
// so the sequence is identical across platforms.
Vector seeded_unit_vector(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    Vector x(n);
    double nrm = 0.0;
    while (nrm == 0.0) {
        for (std::size_t i = 0; i < n; ++i) {
            const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;  // [0,1)
            x[i] = 2.0 * u - 1.0;
        }
        nrm = norm2(x);
    }
    x *= 1.0 / nrm;
    return x;
}

}  // namespace

double default_shift_eps(double lam_max_hat) { return 1e-3 * lam_max_hat; }

EigenEstimate power_iterate(const Matrix& A, const PowerConfig& cfg,
                            std::vector<double>* value_trace) {
    if (cfg.tol <= 0.0) throw std::invalid_argument("tol must be positive");
    A.require_symmetric();
    const std::size_t n = A.n();
    const std::size_t cap = cfg.max_iters > 0 ? cfg.max_iters : 100 * n;

    Vector x = seeded_unit_vector(n, cfg.seed);
    Vector y = A * x;
    EigenEstimate est;
    for (std::size_t it = 1; it <= cap; ++it) {
        const double ny = norm2(y);
        if (ny == 0.0) throw ZeroVector();
        x = (1.0 / ny) * y;
        y = A * x;  // image of the freshly normalized iterate
        const double value = norm2(y);
        double resid2 = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double r = x[i] * value - y[i];
            resid2 += r * r;
        }
        est.value = cfg.rayleigh_readout ? dot(x, y) : value;
        est.vector = x;
        est.iterations = it;
        est.residual = std::sqrt(resid2);
        if (value_trace) value_trace->push_back(value);
        if (est.residual < cfg.tol) return est;
    }
    throw NotConverged(est, "power iteration hit the iteration cap (" + std::to_string(cap) +
                                ") with residual " + std::to_string(est.residual));
}

EigenEstimate min_eigen_shifted(const Matrix& A, double lam_max_hat, double eps,
                                const PowerConfig& cfg) {
    if (lam_max_hat <= 0.0 || eps <= 0.0) {
        throw std::invalid_argument("lam_max_hat and eps must be positive");
    }
    const double beta = lam_max_hat + eps;
    const std::size_t n = A.n();
    Matrix B = beta * Matrix::identity(n) - A;  // negated A plus shift keeps symmetry

    // Indefinite B makes the dominant eigenvalue of B ambiguous in sign; the
    // Rayleigh quotient of the iterate exposes a negative branch.
    auto shift_check = [&](const EigenEstimate& e) {
        if (dot(e.vector, B * e.vector) < -1e-10 * beta) throw ShiftTooSmall(beta);
    };

    EigenEstimate top;
    try {
        top = power_iterate(B, cfg);
    } catch (const NotConverged& nc) {
        shift_check(nc.best());
        EigenEstimate best = nc.best();
        best.value = beta - best.value;
        throw NotConverged(best, nc.what());
    }
    shift_check(top);
    if (top.value > beta * (1.0 + 1e-10)) throw ShiftTooSmall(beta);

    EigenEstimate out = top;
    out.value = beta - top.value;
    return out;
}

}  // namespace winlsq::eigen
