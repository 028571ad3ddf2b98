#include <doctest.h>

#include <cmath>
#include <limits>

#include "winlsq/dense.hpp"
#include "winlsq/errors.hpp"

using namespace winlsq;

TEST_CASE("vector arithmetic on 3-vectors") {
    const Vector a{1.0, 2.0, 3.0};
    const Vector b{4.0, -5.0, 6.0};

    CHECK(dot(a, b) == doctest::Approx(4.0 - 10.0 + 18.0));
    CHECK(norm2(Vector{3.0, 4.0, 0.0}) == doctest::Approx(5.0));

    Vector c = a + b;
    CHECK(c[0] == 5.0);
    CHECK(c[1] == -3.0);
    CHECK(c[2] == 9.0);

    c = a - b;
    CHECK(c[1] == 7.0);

    c = 2.0 * a;
    CHECK(c[2] == 6.0);

    Vector d = a;
    d.add_scaled(b, 0.5);
    CHECK(d[0] == doctest::Approx(3.0));
    CHECK(d[1] == doctest::Approx(-0.5));
}

TEST_CASE("vector construction rejects non-finite entries") {
    CHECK_THROWS_AS(Vector({1.0, std::numeric_limits<double>::quiet_NaN()}), std::invalid_argument);
    CHECK_THROWS_AS(Vector::from({std::numeric_limits<double>::infinity()}), std::invalid_argument);
}

TEST_CASE("matrix-vector and matrix-matrix products against hand results") {
    const Matrix A(3, {1, 2, 0, 0, 1, 3, 4, 0, 1});
    const Vector x{1, 1, 1};
    const Vector y = A * x;
    CHECK(y[0] == 3.0);
    CHECK(y[1] == 4.0);
    CHECK(y[2] == 5.0);

    const Matrix B(3, {1, 0, 0, 0, 2, 0, 0, 0, 3});
    const Matrix C = A * B;
    CHECK(C(0, 1) == 4.0);
    CHECK(C(1, 2) == 9.0);
    CHECK(C(2, 0) == 4.0);

    const Matrix I = Matrix::identity(3);
    const Matrix D = A * I;
    for (std::size_t i = 0; i < 3; ++i) {
        for (std::size_t j = 0; j < 3; ++j) CHECK(D(i, j) == A(i, j));
    }
}

TEST_CASE("add_scaled_outer matches the explicit outer product and stays symmetric") {
    const Vector x{0.3, -1.7, 2.5};
    Matrix A(3);
    A.add_scaled_outer(x, 2.0);
    for (std::size_t i = 0; i < 3; ++i) {
        for (std::size_t j = 0; j < 3; ++j) {
            CHECK(A(i, j) == doctest::Approx(2.0 * x[i] * x[j]));
            CHECK(A(i, j) == A(j, i));  // exact
        }
    }
}

TEST_CASE("symmetry check uses a tolerance relative to the largest entry") {
    Matrix A(2, {1e6, 1.0, 1.0 + 1e-7, 1e6});
    CHECK(A.is_symmetric());  // 1e-7 mismatch vs 1e6 scale
    CHECK_NOTHROW(A.require_symmetric());

    Matrix B(2, {1.0, 1.0, 1.5, 1.0});
    CHECK_FALSE(B.is_symmetric());
    CHECK_THROWS_AS(B.require_symmetric(), NotSymmetric);

    B.symmetrize();
    CHECK(B(0, 1) == 1.25);
    CHECK(B(1, 0) == 1.25);
}

TEST_CASE("matrix construction validates shape and entries") {
    CHECK_THROWS_AS(Matrix(2, {1.0, 2.0, 3.0}), std::invalid_argument);
    CHECK_THROWS_AS(Matrix::from_rows(1, {std::numeric_limits<double>::quiet_NaN()}),
                    std::invalid_argument);
}
