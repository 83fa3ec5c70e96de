#pragma once

// Shared builders for the test suite: deterministic random operators with
// prescribed structure, plus small literal-matrix conveniences.

#include <initializer_list>
#include <vector>

#include <unsupported/Eigen/MatrixFunctions>

#include "krein/matrix.hpp"
#include "krein/rng.hpp"
#include "krein/space.hpp"

namespace test {

using krein::Complex;
using krein::FundamentalSymmetry;
using krein::Matrix;
using krein::RealVector;
using krein::SeededRng;
using krein::Vector;

inline Matrix mat(std::initializer_list<std::initializer_list<Complex>> rows) {
    const Eigen::Index r = static_cast<Eigen::Index>(rows.size());
    const Eigen::Index c = static_cast<Eigen::Index>(rows.begin()->size());
    Matrix M(r, c);
    Eigen::Index i = 0;
    for (const auto& row : rows) {
        Eigen::Index j = 0;
        for (const auto& entry : row) M(i, j++) = entry;
        ++i;
    }
    return M;
}

inline Matrix jordan_block(Eigen::Index n, Complex lambda) {
    Matrix M = lambda * Matrix::Identity(n, n);
    for (Eigen::Index i = 0; i + 1 < n; ++i) M(i, i + 1) = 1.0;
    return M;
}

/// Antidiagonal flip matrix (the canonical form companion of a Jordan block).
inline Matrix flip_matrix(Eigen::Index n) {
    Matrix F = Matrix::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) F(i, n - 1 - i) = 1.0;
    return F;
}

inline FundamentalSymmetry random_signature(SeededRng& rng, int n) {
    std::vector<int> signs(n);
    bool any_plus = false, any_minus = false;
    for (int i = 0; i < n; ++i) {
        signs[i] = rng.uniform() < 0.5 ? 1 : -1;
        (signs[i] > 0 ? any_plus : any_minus) = true;
    }
    // Keep the form genuinely indefinite whenever there is room.
    if (n >= 2 && !any_minus) signs[n - 1] = -1;
    if (n >= 2 && !any_plus) signs[0] = 1;
    return FundamentalSymmetry::from_signature(signs);
}

/// J H with H Hermitian is the general J-selfadjoint matrix.
inline Matrix random_j_selfadjoint(SeededRng& rng, const FundamentalSymmetry& J) {
    const Eigen::Index n = J.dim();
    return J.matrix() * krein::hermitian_part(rng.complex_gaussian(n, n));
}

/// exp(J S) with S skew-Hermitian is J-unitary; the exponent norm is clamped
/// to keep the conditioning of the conjugation moderate.
inline Matrix random_j_unitary(SeededRng& rng, const FundamentalSymmetry& J,
                               double max_norm = 1.0) {
    const Eigen::Index n = J.dim();
    const Matrix G = rng.complex_gaussian(n, n);
    Matrix S = 0.5 * (G - G.adjoint());
    Matrix K = J.matrix() * S;
    const double norm = krein::operator_norm(K);
    if (norm > max_norm) K *= max_norm / norm;
    return K.exp();
}

inline Matrix random_invertible(SeededRng& rng, Eigen::Index n, double min_sigma = 0.3) {
    for (int attempt = 0; attempt < 64; ++attempt) {
        Matrix M = rng.complex_gaussian(n, n);
        if (krein::smallest_singular_value(M) >= min_sigma) return M;
    }
    return Matrix::Identity(n, n);
}

} // namespace test
