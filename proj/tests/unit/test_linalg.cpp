#include <doctest.h>

#include <cmath>
#include <vector>

#include "support/builders.hpp"
#include "support/jacobi.hpp"
#include "winlsq/linalg.hpp"

using namespace winlsq;
using testsupport::TestRng;

namespace {

double rel_fro_diff(const Matrix& A, const Matrix& B) {
    return frobenius_norm(A - B) / frobenius_norm(B);
}

}  // namespace

TEST_CASE("ldl_decompose on the 2x2 hand example") {
    const Matrix A(2, {4, 2, 2, 3});
    const LdlFactors f = ldl_decompose(A);
    CHECK(f.L(0, 0) == 1.0);
    CHECK(f.L(1, 1) == 1.0);
    CHECK(f.L(0, 1) == 0.0);
    CHECK(f.L(1, 0) == doctest::Approx(0.5));
    CHECK(f.D[0] == doctest::Approx(4.0));
    CHECK(f.D[1] == doctest::Approx(2.0));
    CHECK(rel_fro_diff(f.reconstruct(), A) < 1e-14);
}

TEST_CASE("ldl_decompose of the identity is trivial") {
    for (std::size_t n : {1, 3, 7}) {
        const LdlFactors f = ldl_decompose(Matrix::identity(n));
        for (std::size_t i = 0; i < n; ++i) {
            CHECK(f.D[i] == 1.0);
            for (std::size_t j = 0; j < i; ++j) CHECK(f.L(i, j) == 0.0);
        }
    }
}

TEST_CASE("ldl_decompose keeps a near-machine-scale pivot") {
    const Matrix A(2, {1e-12, 0, 0, 1});
    const LdlFactors f = ldl_decompose(A);
    CHECK(f.D[0] == doctest::Approx(1e-12));
    CHECK(f.D[1] == doctest::Approx(1.0));
    CHECK(frobenius_norm(f.reconstruct() - A) < 1e-14);
}

TEST_CASE("ldl_decompose errors") {
    CHECK_THROWS_AS(ldl_decompose(Matrix(2, {1, 2, 3, 4})), NotSymmetric);
    CHECK_THROWS_AS(ldl_decompose(Matrix(2, {0, 0, 0, 1})), SingularPivot);
}

TEST_CASE("invert_via_ldl hand examples") {
    CHECK(rel_fro_diff(invert_via_ldl(Matrix::identity(4)), Matrix::identity(4)) == 0.0);

    const Matrix D = invert_via_ldl(Matrix(2, {2, 0, 0, 4}));
    CHECK(D(0, 0) == doctest::Approx(0.5));
    CHECK(D(1, 1) == doctest::Approx(0.25));
    CHECK(D(0, 1) == 0.0);

    const Matrix A(2, {3, 1, 1, 2});
    const Matrix G = invert_via_ldl(A);
    CHECK(G(0, 0) == doctest::Approx(2.0 / 5.0));
    CHECK(G(0, 1) == doctest::Approx(-1.0 / 5.0));
    CHECK(G(1, 0) == doctest::Approx(-1.0 / 5.0));
    CHECK(G(1, 1) == doctest::Approx(3.0 / 5.0));
    CHECK(frobenius_norm(A * G - Matrix::identity(2)) < 1e-14);
}

TEST_CASE("gauss_solve hand examples and back-substitution check") {
    const Vector s1 = gauss_solve(Matrix::identity(2), Vector{5, 7});
    CHECK(s1[0] == 5.0);
    CHECK(s1[1] == 7.0);

    const Vector s2 = gauss_solve(Matrix(2, {2, 0, 0, 4}), Vector{2, 8});
    CHECK(s2[0] == doctest::Approx(1.0));
    CHECK(s2[1] == doctest::Approx(2.0));

    const Matrix A(2, {3, 1, 1, 2});
    const Vector b{4, 3};
    const Vector x = gauss_solve(A, b);
    CHECK(x[0] == doctest::Approx(1.0));
    CHECK(x[1] == doctest::Approx(1.0));
    CHECK(norm2(A * x - b) < 1e-14);
}

TEST_CASE("gauss_solve pivots rows") {
    // zero leading entry forces a swap
    const Matrix A(2, {0, 1, 1, 0});
    const Vector x = gauss_solve(A, Vector{2, 3});
    CHECK(x[0] == 3.0);
    CHECK(x[1] == 2.0);

    CHECK_THROWS_AS(gauss_solve(Matrix(2, {1, 1, 1, 1}), Vector{1, 2}), SingularPivot);
}

TEST_CASE("norms") {
    CHECK(max_row_sum_norm(Matrix::identity(3)) == 1.0);
    CHECK(max_row_sum_norm(Matrix(2, {2, -1, -1, 2})) == 3.0);
    CHECK(max_row_sum_norm(Matrix(2, {3, 1, 1, 2})) == 4.0);

    CHECK(frobenius_norm(Matrix::identity(2)) == doctest::Approx(std::sqrt(2.0)));
    CHECK(frobenius_norm(Matrix(2, {1, 0, 0, -1})) == doctest::Approx(std::sqrt(2.0)));
    CHECK(frobenius_norm(Matrix(2, {3, 4, 0, 0})) == doctest::Approx(5.0));
}

TEST_CASE("condition_estimate on exactly known diagonal spectra") {
    CHECK(condition_estimate(Matrix::identity(3)) == doctest::Approx(1.0).epsilon(1e-6));

    CHECK(condition_estimate(Matrix(2, {1e7, 0, 0, 1})) == doctest::Approx(1e7).epsilon(1e-2));
    CHECK(condition_estimate(Matrix(2, {1e9, 0, 0, 1})) == doctest::Approx(1e9).epsilon(5e-2));

    const std::vector<double> d7{1e7, 3e6, 1e3, 1.0};
    CHECK(condition_estimate(testsupport::diagonal(d7)) == doctest::Approx(1e7).epsilon(1e-2));
}

TEST_CASE("factorization and solver tolerances hold on random SPD instances") {
    TestRng rng(1234);
    for (int trial = 0; trial < 10; ++trial) {
        std::vector<double> spectrum(8);
        for (auto& s : spectrum) s = rng.uniform(0.5, 50.0);
        const Matrix A = testsupport::spd_with_spectrum(spectrum, rng);

        const LdlFactors f = ldl_decompose(A);
        double min_pivot = f.D[0];
        for (std::size_t i = 0; i < f.D.size(); ++i) min_pivot = std::min(min_pivot, f.D[i]);
        REQUIRE(min_pivot > 1e-8 * max_row_sum_norm(A));
        CHECK(frobenius_norm(f.reconstruct() - A) <= 1e-10 * frobenius_norm(A));

        const Vector b = testsupport::random_vector(8, rng);
        const Vector x = gauss_solve(A, b);
        CHECK(norm2(A * x - b) <= 1e-9 * norm2(b));

        CHECK(frobenius_norm(A * invert_via_ldl(A) - Matrix::identity(8)) <= 1e-8);

        // the row-sum norm dominates the spectral radius
        const double rho = eigen::power_iterate(A).value;
        CHECK(max_row_sum_norm(A) >= rho * (1.0 - 1e-9));
    }
}
