#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "support/builders.hpp"
#include "support/jacobi.hpp"
#include "winlsq/linalg.hpp"
#include "winlsq/window.hpp"

using namespace winlsq;
using window::HarmonicBasis;
using window::WindowState;
using testsupport::TestRng;

namespace {

constexpr double kPi = std::numbers::pi;

HarmonicBasis default_basis() {
    // 60 Hz fundamental plus four higher harmonics at 256 samples per cycle
    return HarmonicBasis::fundamental(2.0 * kPi / 256.0, 5);
}

}  // namespace

TEST_CASE("basis validation") {
    CHECK_THROWS_AS(HarmonicBasis({}), std::invalid_argument);
    CHECK_THROWS_AS(HarmonicBasis({0.5, 0.5}), std::invalid_argument);
    CHECK_THROWS_AS(HarmonicBasis({0.5, 0.2}), std::invalid_argument);
    CHECK_THROWS_AS(HarmonicBasis({kPi}), std::invalid_argument);
    CHECK_THROWS_AS(HarmonicBasis({-0.1}), std::invalid_argument);
    CHECK(default_basis().dimension() == 10);
}

TEST_CASE("regressor values at easy angles") {
    const HarmonicBasis b({0.3, 0.7});
    const Vector phi0 = b.regressor(0);
    CHECK(phi0[0] == 1.0);
    CHECK(phi0[1] == 0.0);
    CHECK(phi0[2] == 1.0);
    CHECK(phi0[3] == 0.0);

    const HarmonicBasis quarter({kPi / 2.0});
    const Vector phi1 = quarter.regressor(1);
    CHECK(std::abs(phi1[0]) < 1e-14);
    CHECK(phi1[1] == doctest::Approx(1.0));

    // quarter cycle at 256 samples per cycle
    const HarmonicBasis slow({2.0 * kPi / 256.0});
    const Vector phi64 = slow.regressor(64);
    CHECK(std::abs(phi64[0]) < 1e-14);
    CHECK(phi64[1] == doctest::Approx(1.0));
}

TEST_CASE("warm_start sums the first w samples directly") {
    // orthogonal regressor steps: q = pi/2 walks through [1,0],[0,1],...
    const HarmonicBasis b({kPi / 2.0});
    const std::vector<double> samples{1.0, 2.0};
    const WindowState st = WindowState::warm_start(b, 2, samples);
    const Matrix& A = st.information_matrix();
    CHECK(A(0, 0) == doctest::Approx(1.0));
    CHECK(A(1, 1) == doctest::Approx(1.0));
    CHECK(std::abs(A(0, 1)) < 1e-15);
    CHECK(st.rhs()[0] == doctest::Approx(1.0));
    CHECK(st.rhs()[1] == doctest::Approx(2.0));
    CHECK(st.step() == 1);
}

TEST_CASE("warm_start with all-zero samples gives a zero rhs") {
    const std::vector<double> zeros(16, 0.0);
    const WindowState st = WindowState::warm_start(default_basis(), 16, zeros);
    CHECK(norm2(st.rhs()) == 0.0);
}

TEST_CASE("full-cycle window is perfectly conditioned") {
    const std::vector<double> zeros(256, 0.0);
    const WindowState st = WindowState::warm_start(default_basis(), 256, zeros);
    const auto ev = testsupport::jacobi_spectrum(st.information_matrix());
    CHECK(ev.back() / ev.front() == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(ev.back() == doctest::Approx(128.0));
}

TEST_CASE("warm_start validates the window size and sample count") {
    const std::vector<double> nine(9, 0.0);
    CHECK_THROWS_AS(WindowState::warm_start(default_basis(), 9, nine), WindowTooSmall);
    const std::vector<double> ten(10, 0.0);
    CHECK_THROWS_AS(WindowState::warm_start(default_basis(), 16, ten), std::invalid_argument);
}

TEST_CASE("slides match the from-scratch rebuild") {
    TestRng rng(2024);
    const HarmonicBasis b = default_basis();
    std::vector<double> samples(16);
    for (auto& s : samples) s = rng.uniform(-1.0, 1.0);
    WindowState st = WindowState::warm_start(b, 16, samples);

    for (int i = 0; i < 200; ++i) {
        st.slide(rng.uniform(-1.0, 1.0));
        const Matrix rebuilt = st.rebuild_information_matrix();
        CHECK(frobenius_norm(st.information_matrix() - rebuilt) <=
              1e-9 * frobenius_norm(rebuilt));
        const Vector brebuilt = st.rebuild_rhs();
        CHECK(norm2(st.rhs() - brebuilt) <= 1e-9 * norm2(brebuilt) + 1e-30);
    }
    CHECK(st.step() == 215);
    CHECK(st.history().size() == 16);
}

TEST_CASE("a zero signal keeps b at zero under any number of slides") {
    const std::vector<double> zeros(12, 0.0);
    WindowState st = WindowState::warm_start(default_basis(), 12, zeros);
    for (int i = 0; i < 50; ++i) st.slide(0.0);
    CHECK(norm2(st.rhs()) == 0.0);
}

TEST_CASE("one slide changes A by a matrix of rank at most two") {
    const HarmonicBasis b({0.4});
    std::vector<double> samples(8, 0.5);
    WindowState st = WindowState::warm_start(b, 8, samples);
    const Matrix before = st.information_matrix();
    st.slide(0.25);
    const Matrix diff = st.information_matrix() - before;

    const auto ev = testsupport::jacobi_spectrum(diff);
    const double scale = frobenius_norm(diff);
    int significant = 0;
    for (double v : ev) {
        if (std::abs(v) > 1e-8 * scale) ++significant;
    }
    CHECK(significant <= 2);
}

TEST_CASE("slide preserves symmetry exactly") {
    TestRng rng(77);
    std::vector<double> samples(12);
    for (auto& s : samples) s = rng.uniform(-2.0, 2.0);
    WindowState st = WindowState::warm_start(default_basis(), 12, samples);
    for (int i = 0; i < 64; ++i) {
        st.slide(rng.uniform(-2.0, 2.0));
        const Matrix& A = st.information_matrix();
        for (std::size_t r = 0; r < A.n(); ++r) {
            for (std::size_t c = r + 1; c < A.n(); ++c) {
                REQUIRE(A(r, c) == A(c, r));
            }
        }
    }
}

TEST_CASE("slide reports the entering and leaving data") {
    const HarmonicBasis b({kPi / 2.0});
    WindowState st = WindowState::warm_start(b, 4, std::vector<double>{1, 2, 3, 4});
    const auto u = st.slide(9.0);
    const Vector expected_in = b.regressor(4);
    const Vector expected_out = b.regressor(0);
    CHECK(norm2(u.phi_in - expected_in) == 0.0);
    CHECK(norm2(u.phi_out - expected_out) == 0.0);
    for (std::size_t i = 0; i < 2; ++i) {
        CHECK(u.d[i] == doctest::Approx(expected_in[i] * 9.0 - expected_out[i] * 1.0));
    }
}

TEST_CASE("rank_two_eigen_check on axis-aligned vectors") {
    const Matrix R = window::rank_two_matrix(Vector{1, 0}, Vector{0, 1});
    const auto [top, bottom] = window::rank_two_eigen_check(R);
    CHECK(top == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(bottom == doctest::Approx(-1.0).epsilon(1e-8));
    CHECK(frobenius_norm(R) / std::sqrt(2.0) == doctest::Approx(1.0));
}

TEST_CASE("rank_two_eigen_check on an identical pair is zero") {
    const Vector phi{0.3, -0.4, 0.5};
    const Matrix R = window::rank_two_matrix(phi, phi);
    const auto [top, bottom] = window::rank_two_eigen_check(R);
    CHECK(top == 0.0);
    CHECK(bottom == 0.0);
}

TEST_CASE("rank_two_eigen_check matches the Frobenius identity on random pairs") {
    TestRng rng(4242);
    for (int trial = 0; trial < 20; ++trial) {
        const Vector phi = testsupport::random_unit_vector(10, rng);
        const Vector psi = testsupport::random_unit_vector(10, rng);
        const Matrix R = window::rank_two_matrix(phi, psi);
        const double c = frobenius_norm(R) / std::sqrt(2.0);

        const auto [top, bottom] = window::rank_two_eigen_check(R);
        CHECK(top == doctest::Approx(c).epsilon(1e-6));
        CHECK(bottom == doctest::Approx(-c).epsilon(1e-6));

        // brute-force reference: two extremes, nothing else above the floor
        const auto ev = testsupport::jacobi_spectrum(R);
        CHECK(ev.back() == doctest::Approx(c).epsilon(1e-9));
        CHECK(ev.front() == doctest::Approx(-c).epsilon(1e-9));
        for (std::size_t i = 1; i + 1 < ev.size(); ++i) {
            CHECK(std::abs(ev[i]) <= 1e-8 * frobenius_norm(R));
        }
    }
}

TEST_CASE("window spectra are unchanged by sliding") {
    const HarmonicBasis b = default_basis();
    const std::size_t w = 16;

    auto spectrum_at = [&](std::uint64_t k_last) {
        Matrix A(b.dimension());
        for (std::uint64_t j = k_last + 1 - w; j <= k_last; ++j) {
            A.add_scaled_outer(b.regressor(j), 1.0);
        }
        return testsupport::jacobi_spectrum(A);
    };

    const auto ref = spectrum_at(w);
    const double scale = std::abs(ref.back());
    for (std::uint64_t k = w + 1; k <= w + 50; ++k) {
        const auto ev = spectrum_at(k);
        for (std::size_t i = 0; i < ev.size(); ++i) {
            CHECK(std::abs(ev[i] - ref[i]) <= 1e-8 * scale);
        }
    }
}
