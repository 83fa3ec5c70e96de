#pragma once

#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

#include "krein/signtype.hpp"
#include "krein/space.hpp"

namespace krein {

/// Positive strictly decreasing scale sequences n -> s(n), n >= 1.
struct ScaleRule {
    enum class Kind { InversePower, Geometric };
    Kind kind = Kind::InversePower;
    double parameter = 1.0; // exponent a (s = n^-a) or ratio r (s = r^n)

    /// Throws InvalidRule unless the sequence is strictly decreasing to 0.
    void validate() const;
    double operator()(int n) const;
};

/// Non-decreasing conditioning sequences kappa(n) >= 1.
struct KappaRule {
    enum class Kind { Constant, Power, Geometric };
    Kind kind = Kind::Constant;
    double parameter = 1.0; // value c, exponent b (n^b) or base g (g^n)

    void validate() const; // InvalidRule unless non-decreasing with kappa >= 1
    double operator()(int n) const;
};

struct FamilyBlock {
    Matrix T;
    Matrix J;
};

struct ExampleOneParams {
    ScaleRule scale;           // T_n = scale(n) * U_n
    bool random_unitary = true; // J-unitary U_n; identity otherwise
};

struct GradedNeutralityParams {
    ScaleRule eigenvalue; // lambda_n; the block also carries -lambda_n
    KappaRule kappa;      // eigenvector basis conditioning
};

struct ExplicitListParams {
    std::vector<FamilyBlock> blocks;
    bool selfadjoint = false;
};

struct ProductOfBlocksParams {
    double envelope = 1.0; // uniform norm bound for the random factors
    /// Optionally plant one block whose product T T^[*] is a 2x2 Jordan
    /// block at x0 (used for resolvent growth studies).
    std::optional<double> planted_x0;
    int planted_index = 1;
};

/// Deterministic generator of block-diagonal operator families: the pair
/// (T_n, J_n) is a pure function of (seed, n).
class BlockFamily {
public:
    enum class Kind { ExampleOne, GradedNeutrality, ExplicitList, ProductOfBlocks };
    using Params = std::variant<ExampleOneParams, GradedNeutralityParams, ExplicitListParams,
                                ProductOfBlocksParams>;

    BlockFamily(Kind kind, Params params, std::uint64_t seed);

    Kind kind() const { return kind_; }
    std::uint64_t seed() const { return seed_; }
    const Params& params() const { return params_; }

    /// n >= 1; ExplicitList families are exhausted past their block count.
    FamilyBlock block(int n) const;
    int max_blocks() const; // INT_MAX for the generated kinds

    /// True when the blocks themselves are the J-selfadjoint operators under
    /// study (rather than factors whose products are analysed).
    bool selfadjoint_blocks() const;

private:
    Kind kind_;
    Params params_;
    std::uint64_t seed_;
};

BlockFamily example_one_family(std::uint64_t seed, ScaleRule scale, bool random_unitary = true);
BlockFamily graded_neutrality_family(std::uint64_t seed, ScaleRule eigenvalue, KappaRule kappa);
BlockFamily explicit_list_family(std::vector<FamilyBlock> blocks, bool selfadjoint);
BlockFamily product_of_blocks_family(std::uint64_t seed, double envelope = 1.0,
                                     std::optional<double> planted_x0 = std::nullopt,
                                     int planted_index = 1);

/// Direct sum of the first N blocks.  truncate(F, N) embeds as the leading
/// principal part of truncate(F, M) for N <= M.
KreinOperator truncate(const BlockFamily& F, int N);

/// The J-selfadjoint operator a truncation contributes to the analysis:
/// T_N itself for selfadjoint families, T_N^[*] T_N otherwise.
KreinOperator analysis_operator(const BlockFamily& F, int N);

struct GrowthGrid {
    double y_max = 1e-1;
    double y_min = 1e-6;
    int points = 24; // geometric spacing, descending
};

struct GrowthSample {
    double y = 0.0;
    double resolvent_norm = 0.0;
};

struct GrowthFit {
    std::vector<GrowthSample> samples; // descending y
    double slope_raw = 0.0;            // least-squares slope of log||R|| vs -log y
    double m_hat = 1.0;                // slope clamped to >= 1
    int m_int = 1;                     // ceil(m_hat - 0.1)
    double big_m = 0.0;                // max ||R|| y^m / (1+|lambda|)^(2m-2)
    double fit_residual = 0.0;         // rms log deviation over the window
    int window_begin = 0, window_end = 0; // sample index range of the fit
    bool window_stable = false;        // consecutive-pair slopes varied < 0.05
};

/// Fits the non-real resolvent growth order at x0: samples ||(A - x0 - iy)^{-1}||
/// down a geometric y-grid and fits the slope on the smallest-y window where
/// consecutive-pair slopes vary by less than 0.05 (at least one decade wide).
GrowthFit growth_order_fit(const Matrix& A, double x0, const GrowthGrid& grid = {},
                           const ResolventOptions& opt = {});

struct PartnerGrowthReport {
    GrowthFit left;  // T^[*] T
    GrowthFit right; // T T^[*]
    int bound_order = 2;    // right.m_int + 1
    double fitted_constant = 0.0;
    bool bound_holds = false; // left growth order within the partner envelope
};

/// Measures the resolvent growth order of T T^[*] near x0 != 0 and checks
/// that T^[*] T obeys the partner bound with the order raised by one.
PartnerGrowthReport partner_growth_check(const BlockFamily& F, double x0, int N,
                                         const GrowthGrid& grid = {});

enum class TrendVerdict { Bounded, Growing, Inconclusive };
const char* to_string(TrendVerdict v);

enum class TrendMetric { ProjectionNorm, NegativeRank };

struct TruncationTrend {
    TrendMetric metric = TrendMetric::ProjectionNorm;
    std::vector<int> N_values;
    std::vector<Interval> intervals; // per-sample interval actually used
    std::vector<double> values;
    TrendVerdict verdict = TrendVerdict::Inconclusive;
};

struct TrendOptions {
    ProjectionOptions projection;
    double endpoint_guard_tol = 1e-8; // scaled by (1 + rho)
    double bounded_ratio = 2.0;       // last-half max/min for Bounded
    double growing_ratio = 4.0;       // end-to-end ratio for Growing
};

/// || E_N(delta) || across truncations; endpoints are nudged to spectral gap
/// midpoints of the current truncation when they fall within guard distance
/// of an eigenvalue.
TruncationTrend projection_trend(const BlockFamily& F, Interval delta,
                                 const std::vector<int>& N_values, const TrendOptions& opt = {});

/// Same sweep over a shrinking interval sequence at a fixed truncation.
TruncationTrend projection_trend(const BlockFamily& F, const std::vector<Interval>& deltas, int N,
                                 const TrendOptions& opt = {});

/// Rank of the negative part of the form on ran E_N(delta) across truncations.
TruncationTrend negative_rank_trend(const BlockFamily& F, Interval delta,
                                    const std::vector<int>& N_values,
                                    const TrendOptions& opt = {});

TruncationTrend negative_rank_trend(const BlockFamily& F, const std::vector<Interval>& deltas,
                                    int N, const TrendOptions& opt = {});

} // namespace krein
