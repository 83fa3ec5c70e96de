#pragma once

#include <vector>

#include "krein/matrix.hpp"

namespace krein {

/// Signature counts of a Hermitian form restricted to a subspace.
struct Inertia {
    int n_plus = 0;
    int n_zero = 0;
    int n_minus = 0;

    int total() const { return n_plus + n_zero + n_minus; }
    bool operator==(const Inertia&) const = default;
};

/// A fundamental symmetry J: Hermitian involution (J = J^H, J^2 = I) that
/// turns C^n into an indefinite inner product space via [x, y] = <Jx, y>.
class FundamentalSymmetry {
public:
    /// Validates Hermiticity and the involution property (relative 1e-12).
    explicit FundamentalSymmetry(Matrix J);

    /// diag(s_1, ..., s_n) from entries +-1.
    static FundamentalSymmetry from_signature(const std::vector<int>& signs);

    /// Block diagonal with k copies of [[0,1],[1,0]] (dimension 2k).
    static FundamentalSymmetry flip_blocks(int k);

    const Matrix& matrix() const { return J_; }
    Eigen::Index dim() const { return J_.rows(); }

private:
    Matrix J_;
};

/// An operator together with the symmetry of its ambient space.
struct KreinOperator {
    Matrix T;
    FundamentalSymmetry J;

    KreinOperator(Matrix T, FundamentalSymmetry J);
    Eigen::Index dim() const { return T.rows(); }
};

/// Indefinite adjoint T^[*] = J T^H J.
Matrix krein_adjoint(const Matrix& T, const FundamentalSymmetry& J);

/// ||JA - (JA)^H|| <= tol * (1 + ||A||) in the operator norm.
bool is_j_selfadjoint(const Matrix& A, const FundamentalSymmetry& J, double tol = 1e-10);

/// [x, y] = <Jx, y> = y^H J x; linear in x, conjugate-linear in y.
Complex indefinite_form(const FundamentalSymmetry& J, const Vector& x, const Vector& y);

/// Inertia of the form [.,.] restricted to span of the columns of V.
/// Throws RankDeficientBasis when the columns are numerically dependent
/// (sigma_min <= rank_tol * sigma_max).  Eigenvalues of the compressed
/// Hermitian Gram matrix within zero_tol * ||Gram|| count as zero.
Inertia gram_inertia(const Matrix& V, const FundamentalSymmetry& J, double zero_tol = 1e-9,
                     double rank_tol = 1e-9);

struct ProductPair {
    Matrix left;  // T^[*] T
    Matrix right; // T T^[*]
};

/// Both products, verified J-selfadjoint to check_tol (SelfadjointnessViolation
/// otherwise -- only reachable through broken floating-point inputs).
ProductPair product_pair(const KreinOperator& op, double check_tol = 1e-10);

} // namespace krein
