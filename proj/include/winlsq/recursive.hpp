#pragma once

#include <array>
#include <cstdint>
#include <optional>

#include "winlsq/dense.hpp"
#include "winlsq/errors.hpp"
#include "winlsq/window.hpp"

namespace winlsq::recursive {

struct CorrectionPolicy {
    enum class Kind { None, NewtonSchulz, RichardsonRefresh };

    Kind kind = Kind::NewtonSchulz;
    std::size_t newton_schulz_steps = 1;  ///< per slide
    std::size_t refresh_every = 1;        ///< slide period for RichardsonRefresh

    static CorrectionPolicy none() { return {Kind::None, 0, 0}; }
    static CorrectionPolicy newton_schulz(std::size_t steps) {
        return {Kind::NewtonSchulz, steps, 0};
    }
    static CorrectionPolicy richardson_refresh(std::size_t every) {
        return {Kind::RichardsonRefresh, 0, every};
    }
};

struct Options {
    CorrectionPolicy policy{};           ///< default: one Newton-Schulz step per slide
    std::size_t init_polish_steps = 2;   ///< Newton-Schulz polish after the direct inverse
    double s_det_rel_tol = 1e-12;        ///< |det S| < tol * ||S||_F^2 aborts the update
    double inv_error_ceiling = 1e-2;     ///< tracked ||I - Gamma A||_F above this re-initializes
    double refresh_delta_rel = 1e-9;     ///< residual bound for RichardsonRefresh, relative to ||b||
};

/// Inverse-tracking state: Gamma follows the window's information-matrix
/// inverse, theta the parameter vector. The 2x2 S from the latest update is
/// kept so its step-to-step constancy can be observed.
struct State {
    Matrix gamma;
    Vector theta;
    std::uint64_t step = 0;
    std::array<double, 4> s{};  ///< row-major 2x2
    bool has_s = false;
    double inv_error = 0.0;     ///< ||I - Gamma A||_F when last tracked
    std::uint64_t init_flops = 0;
    Options options{};
};

/// Gamma from invert_via_ldl (optionally polished), theta from gauss_solve.
State init(const Matrix& A_w, const Vector& b_w, const Options& opt = {});

/// Rank-two inverse update Gamma -= U S^{-1} UT with U = Gamma [in out] and
/// S = diag(1,-1) + [in out]T Gamma [in out]; Gamma symmetrized afterwards.
/// Throws SNearSingular instead of dividing through a collapsed det S.
void update_gamma(State& st, const window::RankTwoUpdate& u);

/// theta = [I - U S^{-1} QT] (theta + Gamma d), evaluated on the pre-update state.
Vector update_theta_form1(const State& st, const window::RankTwoUpdate& u);

/// theta = Gamma b with the current Gamma; independent of the previous theta.
Vector update_theta_form2(const State& st, const Vector& b_k);

struct StepDiagnostics {
    double inv_error_before = 0.0;  ///< ||I - Gamma A_k||_F right after the rank-two update
    double inv_error_after = 0.0;   ///< after the correction (equal when none ran)
    std::array<double, 4> s{};
    bool corrected = false;
    bool reinitialized = false;     ///< guard trip or error ceiling forced a fresh init
    bool s_guard_tripped = false;   ///< the det S guard specifically
};

/// One full window step: form-1 theta from the previous state, the rank-two
/// Gamma update, the configured correction, then a form-2 refresh of theta.
/// A tripped S guard or an inversion error above the ceiling falls back to a
/// full re-initialization from (A_k, b_k).
StepDiagnostics advance(State& st, const window::RankTwoUpdate& u, const Matrix& A_k,
                        const Vector& b_k);

/// Full init on the resized window's accumulators. The flop estimate recorded
/// on the state shows what a resize costs compared with one rank-two step.
State reinitialize_on_resize(const State& st, const window::WindowState& win);

std::uint64_t init_flop_estimate(std::size_t n, std::size_t polish_steps);

}  // namespace winlsq::recursive
