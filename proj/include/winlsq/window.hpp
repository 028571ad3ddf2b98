#pragma once

#include <cstdint>
#include <deque>
#include <span>
#include <utility>
#include <vector>

#include "winlsq/dense.hpp"
#include "winlsq/errors.hpp"

namespace winlsq::window {

/// Angular frequencies (radians per sample) of the cos/sin regressor pairs.
/// Strictly increasing, each in (0, pi).
class HarmonicBasis {
public:
    explicit HarmonicBasis(std::vector<double> frequencies);
    /// q0, 2 q0, ..., count * q0: a fundamental plus count-1 higher harmonics.
    static HarmonicBasis fundamental(double q0, std::size_t count);

    std::size_t dimension() const noexcept { return 2 * freqs_.size(); }
    std::span<const double> frequencies() const noexcept { return freqs_; }

    /// [cos(q0 k), sin(q0 k), ..., cos(qh k), sin(qh k)]
    Vector regressor(std::uint64_t k) const;

private:
    std::vector<double> freqs_;
};

/// What one window movement contributes: the entering and leaving regressors
/// and the right-hand-side increment d = phi_in y_in - phi_out y_out.
struct RankTwoUpdate {
    Vector phi_in;
    Vector phi_out;
    Vector d;
};

/// Sliding accumulator for the normal-equations pair (A, b). The regressor
/// history is stored, not recomputed, so a from-scratch rebuild is exact.
class WindowState {
public:
    /// Builds A and b by direct summation over the first w samples
    /// (step indices k0 .. k0+w-1). Throws WindowTooSmall when w < dimension.
    static WindowState warm_start(const HarmonicBasis& basis, std::size_t w,
                                  std::span<const double> samples, std::uint64_t k0 = 0);

    /// Consumes the next sample: A += in*inT - out*outT, b += d, k += 1.
    RankTwoUpdate slide(double y_new);

    const Matrix& information_matrix() const noexcept { return a_; }
    const Vector& rhs() const noexcept { return b_; }
    /// Step index of the newest sample in the window.
    std::uint64_t step() const noexcept { return k_; }
    std::size_t window_size() const noexcept { return w_; }
    const HarmonicBasis& basis() const noexcept { return basis_; }
    const std::deque<std::pair<Vector, double>>& history() const noexcept { return history_; }

    Matrix rebuild_information_matrix() const;
    Vector rebuild_rhs() const;

private:
    WindowState(HarmonicBasis basis, std::size_t w);

    HarmonicBasis basis_;
    std::size_t w_;
    std::uint64_t k_ = 0;
    std::deque<std::pair<Vector, double>> history_;
    Matrix a_;
    Vector b_;
};

/// phi phiT - psi psiT
Matrix rank_two_matrix(const Vector& phi, const Vector& psi);

/// Extreme (largest, smallest) eigenvalues of a slide update R, estimated by
/// power iterations on shifted copies of R and -R. For a genuine rank-two R
/// they come out as +-||R||_F / sqrt(2); degenerate updates (phi parallel to
/// psi) give a rank <= 1 matrix for which that identity does not apply.
std::pair<double, double> rank_two_eigen_check(const Matrix& R);

}  // namespace winlsq::window
