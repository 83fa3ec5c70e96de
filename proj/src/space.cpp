#include "krein/space.hpp"

#include <cmath>
#include <string>
#include <utility>

#include <Eigen/Eigenvalues>

namespace krein {

FundamentalSymmetry::FundamentalSymmetry(Matrix J) : J_(std::move(J)) {
    require_square(J_, "J");
    require_finite(J_, "J");
    const double scale = operator_norm(J_);
    if (operator_norm(J_ - J_.adjoint()) > 1e-12 * std::max(1.0, scale))
        throw ValidationError("J is not Hermitian (it is not symmetrized implicitly)");
    const Eigen::Index n = J_.rows();
    if (operator_norm(J_ * J_ - Matrix::Identity(n, n)) > 1e-12 * std::max(1.0, scale * scale))
        throw ValidationError("J is not an involution: J^2 != I");
}

FundamentalSymmetry FundamentalSymmetry::from_signature(const std::vector<int>& signs) {
    if (signs.empty()) throw ValidationError("signature must be nonempty");
    Matrix J = Matrix::Zero(signs.size(), signs.size());
    for (size_t i = 0; i < signs.size(); ++i) {
        if (signs[i] != 1 && signs[i] != -1)
            throw ValidationError("signature entries must be +1 or -1");
        J(i, i) = static_cast<double>(signs[i]);
    }
    return FundamentalSymmetry(std::move(J));
}

FundamentalSymmetry FundamentalSymmetry::flip_blocks(int k) {
    if (k < 1) throw ValidationError("flip_blocks requires at least one block");
    Matrix J = Matrix::Zero(2 * k, 2 * k);
    for (int b = 0; b < k; ++b) {
        J(2 * b, 2 * b + 1) = 1.0;
        J(2 * b + 1, 2 * b) = 1.0;
    }
    return FundamentalSymmetry(std::move(J));
}

KreinOperator::KreinOperator(Matrix T_, FundamentalSymmetry J_) : T(std::move(T_)), J(std::move(J_)) {
    require_square(T, "T");
    require_finite(T, "T");
    if (T.rows() != J.dim())
        throw DimensionMismatch("operator dimension " + std::to_string(T.rows()) +
                                " does not match J dimension " + std::to_string(J.dim()));
}

Matrix krein_adjoint(const Matrix& T, const FundamentalSymmetry& J) {
    require_square(T, "T");
    if (T.rows() != J.dim())
        throw DimensionMismatch("operator dimension " + std::to_string(T.rows()) +
                                " does not match J dimension " + std::to_string(J.dim()));
    return J.matrix() * T.adjoint() * J.matrix();
}

bool is_j_selfadjoint(const Matrix& A, const FundamentalSymmetry& J, double tol) {
    if (A.rows() != J.dim() || A.rows() != A.cols()) return false;
    const Matrix JA = J.matrix() * A;
    return operator_norm(JA - JA.adjoint()) <= tol * (1.0 + operator_norm(A));
}

Complex indefinite_form(const FundamentalSymmetry& J, const Vector& x, const Vector& y) {
    if (x.size() != J.dim() || y.size() != J.dim())
        throw DimensionMismatch("form arguments do not match J dimension");
    return (y.adjoint() * J.matrix() * x)(0, 0);
}

Inertia gram_inertia(const Matrix& V, const FundamentalSymmetry& J, double zero_tol,
                     double rank_tol) {
    if (V.rows() != J.dim())
        throw DimensionMismatch("basis rows " + std::to_string(V.rows()) +
                                " do not match J dimension " + std::to_string(J.dim()));
    if (V.cols() == 0) return Inertia{};
    require_finite(V, "basis");
    Eigen::JacobiSVD<Matrix> svd(V);
    const auto& s = svd.singularValues();
    if (s(0) <= 0.0 || s(s.size() - 1) <= rank_tol * s(0))
        throw RankDeficientBasis("basis columns are numerically dependent (sigma_min/sigma_max = " +
                                 std::to_string(s(s.size() - 1) / std::max(s(0), 1e-300)) + ")");

    const Matrix G = hermitian_part(V.adjoint() * J.matrix() * V);
    Eigen::SelfAdjointEigenSolver<Matrix> es(G, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success)
        throw NumericalBreakdown("Gram eigenvalue computation failed");
    const RealVector ev = es.eigenvalues();
    const double scale = std::max(std::abs(ev(0)), std::abs(ev(ev.size() - 1)));
    const double thr = zero_tol * scale;
    Inertia inertia;
    for (Eigen::Index i = 0; i < ev.size(); ++i) {
        if (ev(i) > thr)
            ++inertia.n_plus;
        else if (ev(i) < -thr)
            ++inertia.n_minus;
        else
            ++inertia.n_zero;
    }
    return inertia;
}

ProductPair product_pair(const KreinOperator& op, double check_tol) {
    const Matrix Ts = krein_adjoint(op.T, op.J);
    ProductPair pair{Ts * op.T, op.T * Ts};
    if (!is_j_selfadjoint(pair.left, op.J, check_tol))
        throw SelfadjointnessViolation("T^[*]T failed the J-selfadjointness check");
    if (!is_j_selfadjoint(pair.right, op.J, check_tol))
        throw SelfadjointnessViolation("TT^[*] failed the J-selfadjointness check");
    return pair;
}

} // namespace krein
