#include "krein/matrix.hpp"

#include <cmath>
#include <string>

#include <Eigen/SVD>

namespace krein {

bool all_finite(const Matrix& M) {
    for (Eigen::Index j = 0; j < M.cols(); ++j)
        for (Eigen::Index i = 0; i < M.rows(); ++i) {
            const Complex z = M(i, j);
            if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
        }
    return true;
}

void require_finite(const Matrix& M, const char* what) {
    if (!all_finite(M))
        throw ValidationError(std::string(what) + " contains a non-finite entry");
}

void require_square(const Matrix& M, const char* what) {
    if (M.rows() == 0 || M.rows() != M.cols())
        throw NonSquare(std::string(what) + " must be square and nonempty, got " +
                        std::to_string(M.rows()) + "x" + std::to_string(M.cols()));
}

double operator_norm(const Matrix& M) {
    if (M.size() == 0) return 0.0;
    Eigen::JacobiSVD<Matrix> svd(M);
    return svd.singularValues()(0);
}

double smallest_singular_value(const Matrix& M) {
    if (M.size() == 0) return 0.0;
    Eigen::JacobiSVD<Matrix> svd(M);
    return svd.singularValues()(svd.singularValues().size() - 1);
}

Matrix hermitian_part(const Matrix& M) { return 0.5 * (M + M.adjoint()); }

int numerical_rank(const Matrix& M, double rel_tol) {
    if (M.size() == 0) return 0;
    Eigen::JacobiSVD<Matrix> svd(M);
    const auto& s = svd.singularValues();
    if (s(0) <= 0.0) return 0;
    const double thr = rel_tol * s(0);
    int rank = 0;
    for (Eigen::Index i = 0; i < s.size(); ++i)
        if (s(i) > thr) ++rank;
    return rank;
}

Matrix null_space_basis(const Matrix& M, double rel_tol) {
    if (M.size() == 0) return Matrix(0, 0);
    Eigen::JacobiSVD<Matrix> svd(M, Eigen::ComputeFullV);
    const auto& s = svd.singularValues();
    const double thr = s(0) > 0.0 ? rel_tol * s(0) : 0.0;
    int rank = 0;
    for (Eigen::Index i = 0; i < s.size(); ++i)
        if (s(i) > thr) ++rank;
    const Eigen::Index nullity = M.cols() - rank;
    return svd.matrixV().rightCols(nullity);
}

Matrix column_space_basis(const Matrix& M, double rel_tol) {
    if (M.size() == 0) return Matrix(M.rows(), 0);
    Eigen::JacobiSVD<Matrix> svd(M, Eigen::ComputeFullU);
    const auto& s = svd.singularValues();
    if (s(0) <= 0.0) return Matrix(M.rows(), 0);
    const double thr = rel_tol * s(0);
    int rank = 0;
    for (Eigen::Index i = 0; i < s.size(); ++i)
        if (s(i) > thr) ++rank;
    return svd.matrixU().leftCols(rank);
}

} // namespace krein
