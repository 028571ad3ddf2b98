#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace winlsq {

/// Dense real vector. Entries are validated to be finite when constructed
/// from user-supplied data.
class Vector {
public:
    Vector() = default;
    explicit Vector(std::size_t n) : v_(n, 0.0) {}
    Vector(std::initializer_list<double> entries);

    /// Takes ownership of `entries`; throws std::invalid_argument on NaN/Inf.
    static Vector from(std::vector<double> entries);

    std::size_t size() const noexcept { return v_.size(); }
    double& operator[](std::size_t i) noexcept { return v_[i]; }
    double operator[](std::size_t i) const noexcept { return v_[i]; }
    double* data() noexcept { return v_.data(); }
    const double* data() const noexcept { return v_.data(); }
    std::span<const double> entries() const noexcept { return v_; }

    Vector& operator+=(const Vector& o);
    Vector& operator-=(const Vector& o);
    Vector& operator*=(double s);
    /// this += s * o
    void add_scaled(const Vector& o, double s);

private:
    std::vector<double> v_;
};

Vector operator+(Vector a, const Vector& b);
Vector operator-(Vector a, const Vector& b);
Vector operator*(double s, Vector a);
double dot(const Vector& a, const Vector& b);
double norm2(const Vector& a);

/// Dense square real matrix, row-major storage.
class Matrix {
public:
    static constexpr double symmetry_rel_tol = 1e-12;

    Matrix() = default;
    explicit Matrix(std::size_t n) : n_(n), a_(n * n, 0.0) {}
    Matrix(std::size_t n, std::initializer_list<double> row_major);
    static Matrix identity(std::size_t n);
    /// Takes ownership of `row_major` (size n*n); throws std::invalid_argument on NaN/Inf.
    static Matrix from_rows(std::size_t n, std::vector<double> row_major);

    std::size_t n() const noexcept { return n_; }
    double& operator()(std::size_t i, std::size_t j) noexcept { return a_[i * n_ + j]; }
    double operator()(std::size_t i, std::size_t j) const noexcept { return a_[i * n_ + j]; }
    const double* data() const noexcept { return a_.data(); }

    Matrix& operator+=(const Matrix& o);
    Matrix& operator-=(const Matrix& o);
    Matrix& operator*=(double s);

    /// this += s * x xT. Both triangles receive the same product, so a
    /// symmetric matrix stays bit-for-bit symmetric.
    void add_scaled_outer(const Vector& x, double s);
    /// this <- (this + thisT) / 2
    void symmetrize();

    double max_abs() const;
    /// Symmetric to within rel_tol of the largest absolute entry.
    bool is_symmetric(double rel_tol = symmetry_rel_tol) const;
    /// Throws NotSymmetric when is_symmetric fails.
    void require_symmetric(double rel_tol = symmetry_rel_tol) const;

private:
    std::size_t n_ = 0;
    std::vector<double> a_;
};

Vector operator*(const Matrix& A, const Vector& x);
Matrix operator*(const Matrix& A, const Matrix& B);
Matrix operator+(Matrix A, const Matrix& B);
Matrix operator-(Matrix A, const Matrix& B);
Matrix operator*(double s, Matrix A);

}  // namespace winlsq
