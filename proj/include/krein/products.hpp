#pragma once

#include <optional>
#include <vector>

#include "krein/numerics.hpp"

namespace krein {

/// Factors A: p x q and B: q x p of the two products AB (p x p) and BA (q x q).
struct FactorPair {
    Matrix A;
    Matrix B;

    FactorPair(Matrix A_, Matrix B_);

    Eigen::Index p() const { return A.rows(); }
    Eigen::Index q() const { return A.cols(); }
    Matrix ab() const { return A * B; }
    Matrix ba() const { return B * A; }

    /// Absolute threshold below which an eigenvalue counts as zero:
    /// tol * max(1, ||A|| ||B||).
    double nonzero_threshold(double tol) const;
};

struct SpectrumCompareOptions {
    double nonzero_tol = 1e-8;
    EigenstructureOptions eig;
};

struct MatchedClusterPair {
    EigenCluster ab;
    EigenCluster ba;
    double distance = 0.0;
};

struct SpectrumCompareReport {
    std::vector<EigenCluster> nonzero_ab;
    std::vector<EigenCluster> nonzero_ba;
    std::vector<MatchedClusterPair> pairs;
    bool matched = false;    // counts equal and every distance within tolerance
    bool weyr_match = false; // matched pairs carry identical Weyr characteristics
    double max_value_discrepancy = 0.0; // +inf when the counts differ
    double match_tolerance = 0.0;
};

/// Matches the nonzero eigenvalue clusters of AB against those of BA
/// (greedy nearest-neighbour, switching to an optimal assignment for up to
/// 12 clusters) and compares multiplicities structurally.
SpectrumCompareReport compare_nonzero_spectra(const FactorPair& P,
                                              const SpectrumCompareOptions& opt = {});

struct TransportOptions {
    double rank_tol = 1e-9;
    double span_tol = 1e-7;    // max principal-angle sine allowed for A.V vs W
    double nonzero_tol = 1e-8; // zero band guard for lambda
    double cluster_tol = 1e-8;
};

struct TransportReport {
    int dim = 0;    // common dimension of the two kernels
    Matrix basis_ba; // V: orthonormal basis of ker (BA - lambda)^n
    Matrix basis_ab; // W: orthonormal basis of ker (AB - lambda)^n
    Matrix forward;  // W^H A V: the map A restricted to the kernels
    Matrix inverse;  // V^H (B/lambda) W
    double span_residual = 0.0;
    /// || (B/lambda) A V - V ||; only meaningful (and only set) for n = 1,
    /// where B/lambda inverts A between the eigenspaces.
    std::optional<double> roundtrip_residual;
};

/// Carries ker((BA-lambda)^n) onto ker((AB-lambda)^n) through A and certifies
/// the bijection numerically.  Throws NotAnEigenvalue when either kernel is
/// trivial or lambda sits in the zero band, TransportFailure when dimensions
/// disagree or the span residual exceeds span_tol.
TransportReport eigenspace_transport(const FactorPair& P, Complex lambda, int power,
                                     const TransportOptions& opt = {});

struct ResolventIdentityResiduals {
    double one_param = 0.0; // (BA-l)^{-1} = l^{-1} [ B (AB-l)^{-1} A - I ]
    double two_param = 0.0; // (BA-l)^{-1} = l^{-1} (mu + (l-mu) B (AB-l)^{-1} A) (BA-mu)^{-1}
};

/// Residual operator norms of the two product resolvent identities.
/// Requires lambda != 0, lambda in rho(AB) n rho(BA), mu in rho(BA).
ResolventIdentityResiduals resolvent_identity_residuals(const FactorPair& P, Complex lambda,
                                                        Complex mu,
                                                        const ResolventOptions& opt = {});

struct DominationOptions {
    int starts = 64;
    std::uint64_t seed = 0;
    double step_tol = 1e-10; // relative step convergence
    int max_iter = 500;
};

struct DominationConstants {
    double c1 = 0.0; // sup ||Bx|| / (||ABx|| + ||x||)
    double c2 = 0.0; // sup ||Ay|| / (||BAy|| + ||y||)
    double C = 1.0;  // max(1, c1 * c2)
    Vector witness1; // unit maximizer for c1
    Vector witness2; // unit maximizer for c2
};

/// Best domination constants by multistart projected ascent on the unit
/// sphere.  Deterministic for a fixed seed.
DominationConstants domination_constants(const FactorPair& P, const DominationOptions& opt = {});

struct ResolventBoundCheck {
    double lhs = 0.0; // ||(BA - lambda)^{-1}||
    double rhs = 0.0; // explicit two-parameter envelope
    bool holds = false;
    double m1 = 0.0; // max(1, ||(AB - lambda)^{-1}||)
    double m2 = 0.0; // max(1, ||(BA - mu)^{-1}||)
};

/// Checks ||(BA-l)^{-1}|| <= C M1(l) M2(mu) / |l| * (|mu| + |l-mu| (2+|l|)(2+|mu|)).
ResolventBoundCheck resolvent_bound_check(const FactorPair& P, Complex lambda, Complex mu,
                                          const DominationConstants& dom,
                                          const ResolventOptions& opt = {});
ResolventBoundCheck resolvent_bound_check(const FactorPair& P, Complex lambda, Complex mu);

struct ZeroPoleOrder {
    int order_ba = 0;                     // Weyr length of BA at 0 (0 if absent)
    int order_ab = 0;                     // same for AB
    bool zero_in_resolvent_set_ab = false;
    bool zero_in_spectrum_ba = false;
    /// 0 in rho(AB) while 0 in sigma(BA): the zero of BA must then be a
    /// semisimple eigenvalue, i.e. a resolvent pole of order one.
    bool semisimple_zero_expected = false;
};

ZeroPoleOrder zero_pole_order(const FactorPair& P, const SpectrumCompareOptions& opt = {});

} // namespace krein
