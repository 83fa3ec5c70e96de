#pragma once

#include <utility>
#include <vector>

#include "krein/numerics.hpp"
#include "krein/space.hpp"

namespace krein {

enum class SignType { PositiveType, NegativeType, Critical };

const char* to_string(SignType t);

struct SignClassification {
    double eigenvalue = 0.0; // cluster value projected to the real axis
    SignType sign_type = SignType::Critical;
    Inertia eigenspace_inertia; // of [.,.] on ker(A - lambda)
    bool semisimple = false;
    int algebraic_mult = 0;
    std::vector<int> weyr;
    /// (partial multiplicity, +-1) per Jordan block; empty when chains were
    /// longer than the supported maximum and the computation was skipped.
    std::vector<std::pair<int, int>> sign_characteristic;
};

struct ClassifyOptions {
    double cluster_tol = 1e-8;
    double rank_tol = 1e-9;
    double zero_tol = 1e-9;         // Gram zero threshold
    double selfadjoint_tol = 1e-10; // J-selfadjointness gate
    int max_chain_length = 3;       // sign characteristic support limit
};

/// Classifies a real eigenvalue of a J-selfadjoint A as positive type
/// (semisimple with positive definite Gram), negative type (semisimple with
/// negative definite Gram) or critical.  `lambda` must land within the
/// cluster tolerance of a real eigenvalue cluster.
SignClassification classify_real_eigenvalue(const Matrix& A, const FundamentalSymmetry& J,
                                            double lambda, const ClassifyOptions& opt = {});

/// Sign characteristic at a real eigenvalue: one sign per Jordan block,
/// obtained from the inertia of the compressed forms [(A-lambda)^(k-1) x, y]
/// on ker (A-lambda)^k modulo the canonical degeneracy directions.
/// Throws MultiplicityTooLarge when a chain exceeds max_chain_length and
/// DegenerateForm when a compressed form is numerically singular.
std::vector<std::pair<int, int>> sign_characteristic(const Matrix& A,
                                                     const FundamentalSymmetry& J, double lambda,
                                                     const ClassifyOptions& opt = {});

/// Classification of every real eigenvalue cluster, sorted ascending.
std::vector<SignClassification> classify_real_spectrum(const Matrix& A,
                                                       const FundamentalSymmetry& J,
                                                       const ClassifyOptions& opt = {});

/// Real eigenvalues classified Critical, sorted ascending.
std::vector<double> critical_points(const Matrix& A, const FundamentalSymmetry& J,
                                    const ClassifyOptions& opt = {});

struct ProjectionOptions {
    RieszOptions riesz;
    double selfadjoint_tol = 1e-9;
    double zero_tol = 1e-9;
    double rank_tol = 1e-9;
};

struct IntervalProjection {
    Matrix projection;
    Inertia inertia_on_range;
    double norm = 0.0;
};

/// Riesz projection over a real interval together with the inertia of the
/// form on its range.  The projection commutes with A and is J-selfadjoint;
/// violations of the latter beyond tolerance raise SelfadjointnessViolation.
IntervalProjection interval_spectral_projection(const Matrix& A, const FundamentalSymmetry& J,
                                                const Interval& delta,
                                                const ProjectionOptions& opt = {});

struct DefinitizingPolynomial {
    RealVector coefficients; // ascending degree, unit Euclidean norm
    double certified_min_eig = 0.0;
    bool from_fallback = false; // true when the annihilator fallback was used

    int degree() const { return static_cast<int>(coefficients.size()) - 1; }
};

struct DefinitizeOptions {
    int max_degree = 6;
    int restarts = 32;
    std::uint64_t seed = 0;
    double psd_tol = 1e-10; // min eig >= -psd_tol * max(1, ||p(A)||)
    EigenstructureOptions eig;
    double selfadjoint_tol = 1e-10;
};

/// Searches for a real polynomial p with J p(A) positive semidefinite,
/// lowest degree first, over unit coefficient vectors (certificate-driven
/// concave maximization of the smallest eigenvalue, seeded restarts).
/// Falls back to a minimal-polynomial annihilator, which always succeeds;
/// the fallback degree may exceed max_degree.
DefinitizingPolynomial definitize(const Matrix& A, const FundamentalSymmetry& J,
                                  const DefinitizeOptions& opt = {});

/// Evaluates p(A) by Horner's scheme.
Matrix polynomial_at(const RealVector& coefficients, const Matrix& A);

/// Whether J p(A) is positive semidefinite within tolerance.  Throws
/// NotJSelfadjoint when J p(A) is not numerically Hermitian.
bool is_definitizing(const RealVector& coefficients, const Matrix& A,
                     const FundamentalSymmetry& J, double tol = 1e-10);

struct ProductSignTypeReport {
    std::vector<SignClassification> left;  // nonzero real spectrum of T^[*] T
    std::vector<SignClassification> right; // nonzero real spectrum of T T^[*]
    bool positive_axis_match = false; // same values and sign types on (0, inf)
    bool negative_axis_swap = false;  // sign types exchanged on (-inf, 0)
    bool critical_sets_equal = false; // nonzero critical values coincide
    double max_eigvec_identity_residual = 0.0; // [Tx,Tx] = lambda [x,x] check
    bool consistent = false;
};

/// Compares the sign-type pictures of the two products of T: on the positive
/// axis the types agree, on the negative axis they swap, and the critical
/// sets coincide; the eigenvector identity [Tx, Tx] = lambda [x, x] is
/// verified for every computed eigenvector at nonzero eigenvalues.
ProductSignTypeReport product_signtype_compare(const KreinOperator& op,
                                               const ClassifyOptions& opt = {});

} // namespace krein
