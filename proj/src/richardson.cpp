#include "winlsq/richardson.hpp"

#include <cmath>
#include <stdexcept>

#include "winlsq/linalg.hpp"

namespace winlsq::richardson {

Preconditioner precond_simplest(const Matrix& A, double safety) {
    A.require_symmetric();
    if (safety <= 0.0) throw std::invalid_argument("safety must be positive");
    const double inf_norm = max_row_sum_norm(A);
    if (inf_norm == 0.0) throw std::invalid_argument("zero matrix has no preconditioner");
    Preconditioner p;
    p.kind = Preconditioner::Kind::Simplest;
    p.alpha = safety * 2.0 / inf_norm;
    p.safety = safety;
    p.inf_norm = inf_norm;
    return p;
}

Preconditioner precond_optimal(double lam_min, double lam_max) {
    if (!(lam_min > 0.0) || lam_min > lam_max) {
        throw BadSpectrum("need 0 < lam_min <= lam_max");
    }
    Preconditioner p;
    p.kind = Preconditioner::Kind::Optimal;
    p.alpha = 2.0 / (lam_min + lam_max);
    p.lam_min = lam_min;
    p.lam_max = lam_max;
    return p;
}

Preconditioner precond_suboptimal(double lam_max_hat, double eps) {
    if (!(lam_max_hat > 0.0) || !(eps > 0.0)) {
        throw std::invalid_argument("lam_max_hat and eps must be positive");
    }
    Preconditioner p;
    p.kind = Preconditioner::Kind::Suboptimal;
    p.alpha = 2.0 / (eps + lam_max_hat);
    p.lam_max = lam_max_hat;
    p.eps = eps;
    return p;
}

double iteration_spectral_radius(double alpha, double lam_min, double lam_max) {
    return std::max(std::abs(1.0 - alpha * lam_min), std::abs(1.0 - alpha * lam_max));
}

double relative_delta(const Vector& b, double rel) { return rel * norm2(b); }

RichardsonResult solve(const Matrix& A, const Vector& b, const Preconditioner& p,
                       const RichardsonConfig& cfg, const Vector& theta0) {
    if (A.n() != b.size() || A.n() != theta0.size()) {
        throw std::invalid_argument("dimension mismatch");
    }
    if (!(p.alpha > 0.0)) throw std::invalid_argument("alpha must be positive");
    if (!(cfg.delta > 0.0)) throw std::invalid_argument("delta must be positive");

    RichardsonResult out;
    out.theta = theta0;
    Vector r = A * out.theta - b;
    for (std::size_t i = 1; i <= cfg.max_iters; ++i) {
        out.theta.add_scaled(r, -p.alpha);
        r = A * out.theta - b;  // the residual is always recomputed from theta
        const double rn = norm2(r);
        if (cfg.record_trace) out.trace.push_back(rn);
        out.iterations = i;
        out.final_residual = rn;
        if (rn <= cfg.delta) return out;
    }
    throw NotConverged(out, "richardson hit the iteration cap (" + std::to_string(cfg.max_iters) +
                                ") with residual " + std::to_string(out.final_residual));
}

RichardsonResult solve(const Matrix& A, const Vector& b, const Preconditioner& p,
                       const RichardsonConfig& cfg) {
    return solve(A, b, p, cfg, Vector(b.size()));
}

Matrix newton_schulz_correct(const Matrix& A, Matrix Gamma, std::size_t steps,
                             NewtonSchulzDiag* diag) {
    const std::size_t n = A.n();
    if (Gamma.n() != n) throw std::invalid_argument("dimension mismatch");
    const Matrix I = Matrix::identity(n);

    double err = frobenius_norm(I - Gamma * A);
    if (diag) {
        diag->error_norms.push_back(err);
        diag->contraction_guaranteed = err < 1.0;
    }
    // Roundoff keeps ||F|| hovering near its floor once converged; only a
    // factor-two rise counts as genuine divergence.
    const double slack = 1e-13 * std::sqrt(static_cast<double>(n));
    for (std::size_t s = 0; s < steps; ++s) {
        Gamma = Gamma * (2.0 * I - A * Gamma);
        const double next = frobenius_norm(I - Gamma * A);
        if (diag) diag->error_norms.push_back(next);
        if (next > 2.0 * err + slack) throw Diverging(err, next);
        err = next;
    }
    return Gamma;
}

}  // namespace winlsq::richardson
