#include "winlsq/recursive.hpp"

#include <cmath>
#include <stdexcept>

#include "winlsq/linalg.hpp"
#include "winlsq/richardson.hpp"

namespace winlsq::recursive {

namespace {

double inversion_error(const Matrix& gamma, const Matrix& A) {
    return frobenius_norm(Matrix::identity(A.n()) - gamma * A);
}

struct STerms {
    std::array<double, 4> s;   // row-major 2x2
    Vector u_in;               // Gamma phi_in
    Vector u_out;              // Gamma phi_out
    double det;
};

STerms build_s(const State& st, const window::RankTwoUpdate& u) {
    STerms t{{}, st.gamma * u.phi_in, st.gamma * u.phi_out, 0.0};
    t.s[0] = 1.0 + dot(u.phi_in, t.u_in);
    t.s[1] = dot(u.phi_in, t.u_out);
    t.s[2] = dot(u.phi_out, t.u_in);
    t.s[3] = -1.0 + dot(u.phi_out, t.u_out);
    t.det = t.s[0] * t.s[3] - t.s[1] * t.s[2];
    const double fro2 = t.s[0] * t.s[0] + t.s[1] * t.s[1] + t.s[2] * t.s[2] + t.s[3] * t.s[3];
    if (std::abs(t.det) < 1e-12 * fro2) throw SNearSingular(t.det, fro2);
    return t;
}

}  // namespace

std::uint64_t init_flop_estimate(std::size_t n, std::size_t polish_steps) {
    const std::uint64_t n3 = static_cast<std::uint64_t>(n) * n * n;
    // factorization + n triangular solve pairs + the direct theta solve,
    // plus two n^3 products per polish step
    return n3 / 3 + n3 + n3 / 3 + polish_steps * 2 * n3;
}

State init(const Matrix& A_w, const Vector& b_w, const Options& opt) {
    State st;
    st.options = opt;
    st.gamma = invert_via_ldl(A_w);
    if (opt.init_polish_steps > 0) {
        try {
            st.gamma = richardson::newton_schulz_correct(A_w, st.gamma, opt.init_polish_steps);
        } catch (const Diverging&) {
            // Polish cannot help when the direct inverse is outside the
            // contraction region; keep the raw inverse.
        }
    }
    st.gamma.symmetrize();
    st.theta = gauss_solve(A_w, b_w);
    st.inv_error = inversion_error(st.gamma, A_w);
    st.init_flops = init_flop_estimate(A_w.n(), opt.init_polish_steps);
    return st;
}

void update_gamma(State& st, const window::RankTwoUpdate& u) {
    if (u.phi_in.size() != st.gamma.n()) throw std::invalid_argument("dimension mismatch");
    const STerms t = build_s(st, u);

    // Gamma -= U S^{-1} UT expanded through the 2x2 adjugate.
    const double inv_det = 1.0 / t.det;
    const double c_in_in = t.s[3] * inv_det;    //  s11 / det
    const double c_out_out = t.s[0] * inv_det;  //  s00 / det
    const double c_cross = -t.s[1] * inv_det;   // -s01 / det (S is symmetric here)

    const std::size_t n = st.gamma.n();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            st.gamma(i, j) -= c_in_in * t.u_in[i] * t.u_in[j] +
                              c_cross * (t.u_in[i] * t.u_out[j] + t.u_out[i] * t.u_in[j]) +
                              c_out_out * t.u_out[i] * t.u_out[j];
        }
    }
    st.gamma.symmetrize();
    st.s = t.s;
    st.has_s = true;
    st.step += 1;
}

Vector update_theta_form1(const State& st, const window::RankTwoUpdate& u) {
    const STerms t = build_s(st, u);
    Vector inner = st.theta + st.gamma * u.d;

    // [I - U S^{-1} QT] inner
    const double q_in = dot(u.phi_in, inner);
    const double q_out = dot(u.phi_out, inner);
    const double inv_det = 1.0 / t.det;
    const double w_in = (t.s[3] * q_in - t.s[1] * q_out) * inv_det;
    const double w_out = (-t.s[2] * q_in + t.s[0] * q_out) * inv_det;
    inner.add_scaled(t.u_in, -w_in);
    inner.add_scaled(t.u_out, -w_out);
    return inner;
}

Vector update_theta_form2(const State& st, const Vector& b_k) { return st.gamma * b_k; }

StepDiagnostics advance(State& st, const window::RankTwoUpdate& u, const Matrix& A_k,
                        const Vector& b_k) {
    const Options& opt = st.options;
    const std::uint64_t next_step = st.step + 1;
    StepDiagnostics diag;

    auto reinit = [&] {
        const Options o = opt;
        const std::uint64_t flops = st.init_flops;
        st = init(A_k, b_k, o);
        st.init_flops += flops;  // cumulative across the chain
        st.step = next_step;
        diag.reinitialized = true;
        diag.inv_error_after = st.inv_error;
    };

    Vector theta1;
    try {
        theta1 = update_theta_form1(st, u);
        update_gamma(st, u);
    } catch (const SNearSingular&) {
        diag.s_guard_tripped = true;
        reinit();
        diag.inv_error_before = st.inv_error;
        return diag;
    }
    diag.s = st.s;
    diag.inv_error_before = inversion_error(st.gamma, A_k);
    diag.inv_error_after = diag.inv_error_before;

    switch (opt.policy.kind) {
        case CorrectionPolicy::Kind::None:
            st.theta = theta1;
            break;
        case CorrectionPolicy::Kind::NewtonSchulz:
            try {
                st.gamma = richardson::newton_schulz_correct(A_k, st.gamma,
                                                             opt.policy.newton_schulz_steps);
                diag.inv_error_after = inversion_error(st.gamma, A_k);
                diag.corrected = true;
                st.theta = update_theta_form2(st, b_k);
            } catch (const Diverging&) {
                reinit();
                return diag;
            }
            break;
        case CorrectionPolicy::Kind::RichardsonRefresh: {
            st.theta = theta1;
            const std::size_t every = std::max<std::size_t>(opt.policy.refresh_every, 1);
            if (next_step % every == 0) {
                richardson::RichardsonConfig rc;
                rc.delta = richardson::relative_delta(b_k, opt.refresh_delta_rel);
                try {
                    st.theta =
                        richardson::solve(A_k, b_k, richardson::precond_simplest(A_k), rc, st.theta)
                            .theta;
                    diag.corrected = true;
                } catch (const richardson::NotConverged& nc) {
                    st.theta = nc.best().theta;
                }
            }
            break;
        }
    }

    st.inv_error = diag.inv_error_after;
    if (st.inv_error > opt.inv_error_ceiling) reinit();
    return diag;
}

State reinitialize_on_resize(const State& st, const window::WindowState& win) {
    State fresh = init(win.information_matrix(), win.rhs(), st.options);
    fresh.step = win.step();
    fresh.init_flops += st.init_flops;
    return fresh;
}

}  // namespace winlsq::recursive
