#include "winlsq/dense.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

#include "winlsq/errors.hpp"

namespace winlsq {

namespace {

void require_finite(std::span<const double> xs) {
    for (double x : xs) {
        if (!std::isfinite(x)) throw std::invalid_argument("non-finite entry");
    }
}

void require_same_size(std::size_t a, std::size_t b) {
    if (a != b) throw std::invalid_argument("dimension mismatch");
}

}  // namespace

Vector::Vector(std::initializer_list<double> entries) : v_(entries) {
    require_finite(v_);
}

Vector Vector::from(std::vector<double> entries) {
    require_finite(entries);
    Vector v;
    v.v_ = std::move(entries);
    return v;
}

Vector& Vector::operator+=(const Vector& o) {
    require_same_size(size(), o.size());
    for (std::size_t i = 0; i < v_.size(); ++i) v_[i] += o.v_[i];
    return *this;
}

Vector& Vector::operator-=(const Vector& o) {
    require_same_size(size(), o.size());
    for (std::size_t i = 0; i < v_.size(); ++i) v_[i] -= o.v_[i];
    return *this;
}

Vector& Vector::operator*=(double s) {
    for (double& x : v_) x *= s;
    return *this;
}

void Vector::add_scaled(const Vector& o, double s) {
    require_same_size(size(), o.size());
    for (std::size_t i = 0; i < v_.size(); ++i) v_[i] += s * o.v_[i];
}

Vector operator+(Vector a, const Vector& b) { return a += b; }
Vector operator-(Vector a, const Vector& b) { return a -= b; }
Vector operator*(double s, Vector a) { return a *= s; }

double dot(const Vector& a, const Vector& b) {
    require_same_size(a.size(), b.size());
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double norm2(const Vector& a) { return std::sqrt(dot(a, a)); }

Matrix::Matrix(std::size_t n, std::initializer_list<double> row_major) : n_(n), a_(row_major) {
    if (a_.size() != n * n) throw std::invalid_argument("entry count does not match dimension");
    require_finite(a_);
}

Matrix Matrix::identity(std::size_t n) {
    Matrix I(n);
    for (std::size_t i = 0; i < n; ++i) I(i, i) = 1.0;
    return I;
}

Matrix Matrix::from_rows(std::size_t n, std::vector<double> row_major) {
    if (row_major.size() != n * n) throw std::invalid_argument("entry count does not match dimension");
    require_finite(row_major);
    Matrix A;
    A.n_ = n;
    A.a_ = std::move(row_major);
    return A;
}

Matrix& Matrix::operator+=(const Matrix& o) {
    require_same_size(n_, o.n_);
    for (std::size_t i = 0; i < a_.size(); ++i) a_[i] += o.a_[i];
    return *this;
}

Matrix& Matrix::operator-=(const Matrix& o) {
    require_same_size(n_, o.n_);
    for (std::size_t i = 0; i < a_.size(); ++i) a_[i] -= o.a_[i];
    return *this;
}

Matrix& Matrix::operator*=(double s) {
    for (double& x : a_) x *= s;
    return *this;
}

void Matrix::add_scaled_outer(const Vector& x, double s) {
    require_same_size(n_, x.size());
    for (std::size_t i = 0; i < n_; ++i) {
        for (std::size_t j = i; j < n_; ++j) {
            const double t = s * x[i] * x[j];
            (*this)(i, j) += t;
            if (i != j) (*this)(j, i) += t;
        }
    }
}

void Matrix::symmetrize() {
    for (std::size_t i = 0; i < n_; ++i) {
        for (std::size_t j = i + 1; j < n_; ++j) {
            const double m = 0.5 * ((*this)(i, j) + (*this)(j, i));
            (*this)(i, j) = m;
            (*this)(j, i) = m;
        }
    }
}

double Matrix::max_abs() const {
    double m = 0.0;
    for (double x : a_) m = std::max(m, std::abs(x));
    return m;
}

bool Matrix::is_symmetric(double rel_tol) const {
    const double scale = max_abs();
    for (std::size_t i = 0; i < n_; ++i) {
        for (std::size_t j = i + 1; j < n_; ++j) {
            if (std::abs((*this)(i, j) - (*this)(j, i)) > rel_tol * scale) return false;
        }
    }
    return true;
}

void Matrix::require_symmetric(double rel_tol) const {
    const double scale = max_abs();
    double worst = 0.0;
    for (std::size_t i = 0; i < n_; ++i) {
        for (std::size_t j = i + 1; j < n_; ++j) {
            worst = std::max(worst, std::abs((*this)(i, j) - (*this)(j, i)));
        }
    }
    if (worst > rel_tol * scale) throw NotSymmetric(worst);
}

Vector operator*(const Matrix& A, const Vector& x) {
    if (A.n() != x.size()) throw std::invalid_argument("dimension mismatch");
    Vector y(A.n());
    for (std::size_t i = 0; i < A.n(); ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < A.n(); ++j) s += A(i, j) * x[j];
        y[i] = s;
    }
    return y;
}

Matrix operator*(const Matrix& A, const Matrix& B) {
    if (A.n() != B.n()) throw std::invalid_argument("dimension mismatch");
    const std::size_t n = A.n();
    Matrix C(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = 0; k < n; ++k) {
            const double aik = A(i, k);
            if (aik == 0.0) continue;
            for (std::size_t j = 0; j < n; ++j) C(i, j) += aik * B(k, j);
        }
    }
    return C;
}

Matrix operator+(Matrix A, const Matrix& B) { return A += B; }
Matrix operator-(Matrix A, const Matrix& B) { return A -= B; }
Matrix operator*(double s, Matrix A) { return A *= s; }

}  // namespace winlsq
