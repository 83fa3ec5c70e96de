#pragma once

#include <Eigen/Dense>
#include <complex>

#include "krein/errors.hpp"

namespace krein {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

bool all_finite(const Matrix& M);

/// Throws ValidationError naming `what` when M contains NaN or Inf.
void require_finite(const Matrix& M, const char* what);

/// Throws NonSquare naming `what` when M is not square (or empty).
void require_square(const Matrix& M, const char* what);

/// Operator 2-norm (largest singular value); 0 for empty matrices.
double operator_norm(const Matrix& M);

/// Smallest singular value; 0 for empty matrices.
double smallest_singular_value(const Matrix& M);

/// (M + M^H)/2
Matrix hermitian_part(const Matrix& M);

/// Rank with threshold rel_tol * sigma_max.
int numerical_rank(const Matrix& M, double rel_tol);

/// Orthonormal basis of ker M: right singular vectors at sigma <= rel_tol * sigma_max.
/// Returns an n x nullity matrix (0 columns when M has full column rank).
Matrix null_space_basis(const Matrix& M, double rel_tol);

/// Orthonormal basis of the column span of M (left singular vectors at
/// sigma > rel_tol * sigma_max).
Matrix column_space_basis(const Matrix& M, double rel_tol);

} // namespace krein
