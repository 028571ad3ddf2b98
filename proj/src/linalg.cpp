#include "winlsq/linalg.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace winlsq {

Matrix LdlFactors::reconstruct() const {
    const std::size_t n = L.n();
    Matrix LD = L;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) LD(i, j) *= D[j];
    }
    Matrix out(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            double s = 0.0;
            for (std::size_t k = 0; k < n; ++k) s += LD(i, k) * L(j, k);
            out(i, j) = s;
        }
    }
    return out;
}

LdlFactors ldl_decompose(const Matrix& A) {
    A.require_symmetric();
    const std::size_t n = A.n();
    if (n == 0) throw std::invalid_argument("empty matrix");

    LdlFactors f{Matrix::identity(n), Vector(n)};
    for (std::size_t j = 0; j < n; ++j) {
        double d = A(j, j);
        for (std::size_t k = 0; k < j; ++k) d -= f.L(j, k) * f.L(j, k) * f.D[k];
        if (std::abs(d) < pivot_abort_abs) throw SingularPivot(j, d);
        f.D[j] = d;
        for (std::size_t i = j + 1; i < n; ++i) {
            double s = A(i, j);
            for (std::size_t k = 0; k < j; ++k) s -= f.L(i, k) * f.L(j, k) * f.D[k];
            f.L(i, j) = s / d;
        }
    }
    return f;
}

namespace {

// Solves L z = e_col, scales by 1/D, then LT x = z, writing x into column
// `col` of Gamma.
void ldl_column_solve(const LdlFactors& f, std::size_t col, Matrix& Gamma) {
    const std::size_t n = f.L.n();
    std::vector<double> z(n, 0.0);
    z[col] = 1.0;
    for (std::size_t i = col + 1; i < n; ++i) {
        double s = z[i];
        for (std::size_t k = col; k < i; ++k) s -= f.L(i, k) * z[k];
        z[i] = s;
    }
    for (std::size_t i = 0; i < n; ++i) z[i] /= f.D[i];
    for (std::size_t ip = n; ip-- > 0;) {
        double s = z[ip];
        for (std::size_t k = ip + 1; k < n; ++k) s -= f.L(k, ip) * z[k];
        z[ip] = s;
        Gamma(ip, col) = s;
    }
}

}  // namespace

Matrix invert_via_ldl(const Matrix& A) {
    const LdlFactors f = ldl_decompose(A);
    const std::size_t n = A.n();
    Matrix Gamma(n);
    for (std::size_t c = 0; c < n; ++c) ldl_column_solve(f, c, Gamma);
    return Gamma;
}

Vector gauss_solve(const Matrix& A, const Vector& b) {
    const std::size_t n = A.n();
    if (n != b.size()) throw std::invalid_argument("dimension mismatch");
    Matrix U = A;
    Vector x = b;

    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        double best = std::abs(U(col, col));
        for (std::size_t i = col + 1; i < n; ++i) {
            const double v = std::abs(U(i, col));
            if (v > best) {
                best = v;
                piv = i;
            }
        }
        if (best < pivot_abort_abs) throw SingularPivot(col, U(piv, col));
        if (piv != col) {
            for (std::size_t j = col; j < n; ++j) std::swap(U(col, j), U(piv, j));
            std::swap(x[col], x[piv]);
        }
        for (std::size_t i = col + 1; i < n; ++i) {
            const double m = U(i, col) / U(col, col);
            if (m == 0.0) continue;
            U(i, col) = 0.0;
            for (std::size_t j = col + 1; j < n; ++j) U(i, j) -= m * U(col, j);
            x[i] -= m * x[col];
        }
    }
    for (std::size_t ip = n; ip-- > 0;) {
        double s = x[ip];
        for (std::size_t j = ip + 1; j < n; ++j) s -= U(ip, j) * x[j];
        x[ip] = s / U(ip, ip);
    }
    return x;
}

double max_row_sum_norm(const Matrix& A) {
    double best = 0.0;
    for (std::size_t i = 0; i < A.n(); ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < A.n(); ++j) s += std::abs(A(i, j));
        best = std::max(best, s);
    }
    return best;
}

double frobenius_norm(const Matrix& A) {
    double s = 0.0;
    for (std::size_t i = 0; i < A.n(); ++i) {
        for (std::size_t j = 0; j < A.n(); ++j) s += A(i, j) * A(i, j);
    }
    return std::sqrt(s);
}

double condition_estimate(const Matrix& A) {
    // Residual threshold scaled to the matrix; the shared default (0.01
    // absolute) is meant for the iteration-count studies, not for ratios.
    eigen::PowerConfig cfg;
    cfg.tol = 1e-9 * std::max(max_row_sum_norm(A), std::numeric_limits<double>::min());
    cfg.max_iters = 1000 * A.n();
    return condition_estimate(A, cfg);
}

double condition_estimate(const Matrix& A, const eigen::PowerConfig& cfg) {
    A.require_symmetric();
    const eigen::EigenEstimate top = eigen::power_iterate(A, cfg);
    const eigen::EigenEstimate bottom =
        eigen::min_eigen_shifted(A, top.value, eigen::default_shift_eps(top.value), cfg);
    if (bottom.value <= 0.0) return std::numeric_limits<double>::infinity();
    return top.value / bottom.value;
}

}  // namespace winlsq
