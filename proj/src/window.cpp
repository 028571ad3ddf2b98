#include "winlsq/window.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "winlsq/eigen.hpp"
#include "winlsq/linalg.hpp"

namespace winlsq::window {

HarmonicBasis::HarmonicBasis(std::vector<double> frequencies) : freqs_(std::move(frequencies)) {
    if (freqs_.empty()) throw std::invalid_argument("at least one frequency required");
    double prev = 0.0;
    for (double q : freqs_) {
        if (!(q > prev)) throw std::invalid_argument("frequencies must be strictly increasing");
        if (!(q < std::numbers::pi)) throw std::invalid_argument("frequency must lie in (0, pi)");
        prev = q;
    }
}

HarmonicBasis HarmonicBasis::fundamental(double q0, std::size_t count) {
    if (count == 0) throw std::invalid_argument("count must be positive");
    std::vector<double> qs(count);
    for (std::size_t i = 0; i < count; ++i) qs[i] = static_cast<double>(i + 1) * q0;
    return HarmonicBasis(std::move(qs));
}

Vector HarmonicBasis::regressor(std::uint64_t k) const {
    Vector phi(dimension());
    const double kd = static_cast<double>(k);
    for (std::size_t i = 0; i < freqs_.size(); ++i) {
        phi[2 * i] = std::cos(freqs_[i] * kd);
        phi[2 * i + 1] = std::sin(freqs_[i] * kd);
    }
    return phi;
}

WindowState::WindowState(HarmonicBasis basis, std::size_t w)
    : basis_(std::move(basis)), w_(w), a_(basis_.dimension()), b_(basis_.dimension()) {}

WindowState WindowState::warm_start(const HarmonicBasis& basis, std::size_t w,
                                    std::span<const double> samples, std::uint64_t k0) {
    if (w < basis.dimension()) throw WindowTooSmall(w, basis.dimension());
    if (samples.size() != w) throw std::invalid_argument("expected exactly w samples");

    WindowState st(basis, w);
    for (std::size_t j = 0; j < w; ++j) {
        Vector phi = basis.regressor(k0 + j);
        st.a_.add_scaled_outer(phi, 1.0);
        st.b_.add_scaled(phi, samples[j]);
        st.history_.emplace_back(std::move(phi), samples[j]);
    }
    st.k_ = k0 + w - 1;
    return st;
}

RankTwoUpdate WindowState::slide(double y_new) {
    const std::uint64_t k_in = k_ + 1;
    Vector phi_in = basis_.regressor(k_in);
    auto [phi_out, y_out] = std::move(history_.front());
    history_.pop_front();

    a_.add_scaled_outer(phi_in, 1.0);
    a_.add_scaled_outer(phi_out, -1.0);
    b_.add_scaled(phi_in, y_new);
    b_.add_scaled(phi_out, -y_out);

    RankTwoUpdate u{phi_in, std::move(phi_out), Vector(basis_.dimension())};
    for (std::size_t i = 0; i < u.d.size(); ++i) {
        u.d[i] = u.phi_in[i] * y_new - u.phi_out[i] * y_out;
    }
    history_.emplace_back(std::move(phi_in), y_new);
    k_ = k_in;
    return u;
}

Matrix WindowState::rebuild_information_matrix() const {
    Matrix A(basis_.dimension());
    for (const auto& [phi, y] : history_) A.add_scaled_outer(phi, 1.0);
    return A;
}

Vector WindowState::rebuild_rhs() const {
    Vector b(basis_.dimension());
    for (const auto& [phi, y] : history_) b.add_scaled(phi, y);
    return b;
}

Matrix rank_two_matrix(const Vector& phi, const Vector& psi) {
    Matrix R(phi.size());
    R.add_scaled_outer(phi, 1.0);
    R.add_scaled_outer(psi, -1.0);
    return R;
}

std::pair<double, double> rank_two_eigen_check(const Matrix& R) {
    const double scale = frobenius_norm(R);
    if (scale == 0.0) return {0.0, 0.0};

    // R is indefinite with its two extremes equal in magnitude, so raw power
    // iteration would oscillate; a positive shift separates each end.
    const std::size_t n = R.n();
    const Matrix shift = scale * Matrix::identity(n);
    eigen::PowerConfig cfg;
    cfg.tol = 1e-9 * scale;
    cfg.max_iters = 2000 * n;

    const double top = eigen::power_iterate(shift + R, cfg).value - scale;
    const double bottom = -(eigen::power_iterate(shift - R, cfg).value - scale);
    return {top, bottom};
}

}  // namespace winlsq::window
