#pragma once

#include "winlsq/dense.hpp"
#include "winlsq/eigen.hpp"
#include "winlsq/errors.hpp"

namespace winlsq {

/// Pivots below this magnitude abort with SingularPivot; anything above is
/// divided through unchanged so the downstream effect of tiny pivots stays
/// observable.
inline constexpr double pivot_abort_abs = 1e-300;

/// Unit lower-triangular L and diagonal D with A = L diag(D) LT.
struct LdlFactors {
    Matrix L;
    Vector D;
    Matrix reconstruct() const;
};

/// LDL factorization without pivoting (the plain symmetric path).
LdlFactors ldl_decompose(const Matrix& A);

/// Inverse through ldl_decompose and n triangular solves against identity
/// columns. Tiny pivots are used as-is.
Matrix invert_via_ldl(const Matrix& A);

/// Gaussian elimination with partial (row) pivoting.
Vector gauss_solve(const Matrix& A, const Vector& b);

/// ||A||_inf: maximum absolute row sum.
double max_row_sum_norm(const Matrix& A);

double frobenius_norm(const Matrix& A);

/// lam_max / lam_min estimated with the power iterations from eigen.hpp
/// (forward for lam_max, shifted for lam_min). An estimate, not an exact
/// condition number. Returns +inf when the lam_min estimate collapses to
/// zero or below.
double condition_estimate(const Matrix& A);
double condition_estimate(const Matrix& A, const eigen::PowerConfig& cfg);

}  // namespace winlsq
