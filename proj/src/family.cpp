#include "krein/family.hpp"

#include <algorithm>
#include <climits>
#include <cmath>
#include <string>
#include <utility>

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/MatrixFunctions>

#include "krein/rng.hpp"

namespace krein {

void ScaleRule::validate() const {
    switch (kind) {
        case Kind::InversePower:
            if (!(parameter > 0.0) || !std::isfinite(parameter))
                throw InvalidRule("inverse power scale needs a positive exponent");
            return;
        case Kind::Geometric:
            if (!(parameter > 0.0) || !(parameter < 1.0))
                throw InvalidRule("geometric scale needs a ratio in (0, 1)");
            return;
    }
    throw InvalidRule("unknown scale rule");
}

double ScaleRule::operator()(int n) const {
    if (n < 1) throw InvalidRule("block index must be >= 1");
    return kind == Kind::InversePower ? std::pow(static_cast<double>(n), -parameter)
                                      : std::pow(parameter, n);
}

void KappaRule::validate() const {
    switch (kind) {
        case Kind::Constant:
            if (!(parameter >= 1.0)) throw InvalidRule("constant kappa must be >= 1");
            return;
        case Kind::Power:
            if (!(parameter >= 0.0)) throw InvalidRule("power kappa needs a nonnegative exponent");
            return;
        case Kind::Geometric:
            if (!(parameter >= 1.0)) throw InvalidRule("geometric kappa needs base >= 1");
            return;
    }
    throw InvalidRule("unknown kappa rule");
}

double KappaRule::operator()(int n) const {
    if (n < 1) throw InvalidRule("block index must be >= 1");
    switch (kind) {
        case Kind::Constant: return parameter;
        case Kind::Power: return std::pow(static_cast<double>(n), parameter);
        case Kind::Geometric: return std::pow(parameter, n);
    }
    throw InvalidRule("unknown kappa rule");
}

namespace {

Matrix flip2() {
    Matrix J(2, 2);
    J << 0, 1, 1, 0;
    return J;
}

Matrix random_j_unitary(const Matrix& J, SeededRng& rng) {
    Matrix K = rng.complex_gaussian(2, 2);
    Matrix skew = 0.5 * (K - J * K.adjoint() * J); // K^[*] = -K
    const double norm = operator_norm(skew);
    if (norm > 1.0) skew /= norm;
    return skew.exp();
}

// A 2x2 factor T with T T^[*] equal to the Jordan block [[x0, 1], [0, x0]]:
// solve T J T^H = M J by matching the congruence classes of both sides.
Matrix planted_jordan_factor(double x0) {
    Matrix MJ(2, 2);
    MJ << 1.0, x0, x0, 0.0; // [[x0,1],[0,x0]] * flip
    Eigen::SelfAdjointEigenSolver<Matrix> es(MJ);
    const RealVector ev = es.eigenvalues(); // ascending: (-beta, alpha)
    if (!(ev(0) < 0.0 && ev(1) > 0.0))
        throw NumericalBreakdown("planted block lost its (1,1) signature");
    Matrix Qp(2, 2);
    Qp.col(0) = es.eigenvectors().col(1); // positive direction first
    Qp.col(1) = es.eigenvectors().col(0);
    Matrix P(2, 2);
    P << 1, 1, 1, -1;
    P /= std::sqrt(2.0); // flip = P diag(1,-1) P^H
    Vector d(2);
    d << std::sqrt(ev(1)), std::sqrt(-ev(0));
    return Qp * d.asDiagonal() * P.adjoint();
}

} // namespace

BlockFamily::BlockFamily(Kind kind, Params params, std::uint64_t seed)
    : kind_(kind), params_(std::move(params)), seed_(seed) {
    switch (kind_) {
        case Kind::ExampleOne: std::get<ExampleOneParams>(params_).scale.validate(); break;
        case Kind::GradedNeutrality: {
            const auto& p = std::get<GradedNeutralityParams>(params_);
            p.eigenvalue.validate();
            p.kappa.validate();
            break;
        }
        case Kind::ExplicitList: {
            const auto& p = std::get<ExplicitListParams>(params_);
            if (p.blocks.empty()) throw ValidationError("explicit family needs at least one block");
            for (const auto& b : p.blocks) {
                FundamentalSymmetry J(b.J); // validates
                if (b.T.rows() != b.T.cols() || b.T.rows() != J.dim())
                    throw DimensionMismatch("explicit family block dimensions disagree");
            }
            break;
        }
        case Kind::ProductOfBlocks: {
            const auto& p = std::get<ProductOfBlocksParams>(params_);
            if (!(p.envelope > 0.0)) throw InvalidRule("envelope must be positive");
            if (p.planted_x0 && *p.planted_x0 == 0.0)
                throw InvalidRule("planted Jordan block needs x0 != 0");
            if (p.planted_x0 && p.planted_index < 1)
                throw InvalidRule("planted block index must be >= 1");
            break;
        }
    }
}

FamilyBlock BlockFamily::block(int n) const {
    if (n < 1) throw ValidationError("block index must be >= 1");
    switch (kind_) {
        case Kind::ExampleOne: {
            const auto& p = std::get<ExampleOneParams>(params_);
            const Matrix J = flip2();
            Matrix U = Matrix::Identity(2, 2);
            if (p.random_unitary) {
                SeededRng rng(SeededRng::mix(seed_, static_cast<std::uint64_t>(n)));
                U = random_j_unitary(J, rng);
            }
            return {p.scale(n) * U, J};
        }
        case Kind::GradedNeutrality: {
            const auto& p = std::get<GradedNeutralityParams>(params_);
            const double lambda = p.eigenvalue(n);
            const double t = std::sqrt(p.kappa(n));
            Matrix S(2, 2);
            S << t, t, 1.0 / (2.0 * t), -1.0 / (2.0 * t);
            Matrix Sinv(2, 2); // det(S) = -1
            Sinv << 1.0 / (2.0 * t), t, 1.0 / (2.0 * t), -t;
            Vector d(2);
            d << lambda, -lambda;
            return {S * d.asDiagonal() * Sinv, flip2()};
        }
        case Kind::ExplicitList: {
            const auto& p = std::get<ExplicitListParams>(params_);
            if (n > static_cast<int>(p.blocks.size()))
                throw ValidationError("explicit family has only " +
                                      std::to_string(p.blocks.size()) + " blocks");
            return p.blocks[n - 1];
        }
        case Kind::ProductOfBlocks: {
            const auto& p = std::get<ProductOfBlocksParams>(params_);
            if (p.planted_x0 && n == p.planted_index) return {planted_jordan_factor(*p.planted_x0), flip2()};
            SeededRng rng(SeededRng::mix(seed_, static_cast<std::uint64_t>(n)));
            Matrix G = rng.complex_gaussian(2, 2);
            const double norm = operator_norm(G);
            if (norm <= 0.0) return {Matrix::Zero(2, 2), flip2()};
            const double scale = p.envelope * (0.5 + 0.5 * rng.uniform());
            return {scale * G / norm, flip2()};
        }
    }
    throw ValidationError("unknown family kind");
}

int BlockFamily::max_blocks() const {
    if (kind_ == Kind::ExplicitList)
        return static_cast<int>(std::get<ExplicitListParams>(params_).blocks.size());
    return INT_MAX;
}

bool BlockFamily::selfadjoint_blocks() const {
    if (kind_ == Kind::GradedNeutrality) return true;
    if (kind_ == Kind::ExplicitList) return std::get<ExplicitListParams>(params_).selfadjoint;
    return false;
}

BlockFamily example_one_family(std::uint64_t seed, ScaleRule scale, bool random_unitary) {
    return BlockFamily(BlockFamily::Kind::ExampleOne, ExampleOneParams{scale, random_unitary},
                       seed);
}

BlockFamily graded_neutrality_family(std::uint64_t seed, ScaleRule eigenvalue, KappaRule kappa) {
    return BlockFamily(BlockFamily::Kind::GradedNeutrality,
                       GradedNeutralityParams{eigenvalue, kappa}, seed);
}

BlockFamily explicit_list_family(std::vector<FamilyBlock> blocks, bool selfadjoint) {
    return BlockFamily(BlockFamily::Kind::ExplicitList,
                       ExplicitListParams{std::move(blocks), selfadjoint}, 0);
}

BlockFamily product_of_blocks_family(std::uint64_t seed, double envelope,
                                     std::optional<double> planted_x0, int planted_index) {
    return BlockFamily(BlockFamily::Kind::ProductOfBlocks,
                       ProductOfBlocksParams{envelope, planted_x0, planted_index}, seed);
}

KreinOperator truncate(const BlockFamily& F, int N) {
    if (N < 1) throw ValidationError("truncation size must be >= 1");
    if (N > F.max_blocks())
        throw ValidationError("truncation exceeds the family block count");
    std::vector<FamilyBlock> blocks;
    Eigen::Index dim = 0;
    for (int n = 1; n <= N; ++n) {
        blocks.push_back(F.block(n));
        dim += blocks.back().T.rows();
    }
    Matrix T = Matrix::Zero(dim, dim);
    Matrix J = Matrix::Zero(dim, dim);
    Eigen::Index at = 0;
    for (const auto& b : blocks) {
        const Eigen::Index d = b.T.rows();
        T.block(at, at, d, d) = b.T;
        J.block(at, at, d, d) = b.J;
        at += d;
    }
    return KreinOperator(std::move(T), FundamentalSymmetry(std::move(J)));
}

KreinOperator analysis_operator(const BlockFamily& F, int N) {
    KreinOperator op = truncate(F, N);
    if (F.selfadjoint_blocks()) return op;
    ProductPair pp = product_pair(op);
    return KreinOperator(std::move(pp.left), op.J);
}

GrowthFit growth_order_fit(const Matrix& A, double x0, const GrowthGrid& grid,
                           const ResolventOptions& opt) {
    require_square(A, "growth fit input");
    if (!(grid.y_max > grid.y_min) || !(grid.y_min > 0.0))
        throw ValidationError("growth grid needs y_max > y_min > 0");
    if (grid.points < 4) throw ValidationError("growth grid needs at least 4 points");

    GrowthFit fit;
    const int p = grid.points;
    for (int i = 0; i < p; ++i) {
        const double y =
            grid.y_max * std::pow(grid.y_min / grid.y_max, static_cast<double>(i) / (p - 1));
        fit.samples.push_back({y, resolvent_norm(A, Complex(x0, y), opt)});
    }

    // Pair slopes of log ||R|| against -log y, walking towards small y.
    std::vector<double> slope(p - 1);
    for (int i = 0; i + 1 < p; ++i) {
        const double du = std::log(fit.samples[i].y) - std::log(fit.samples[i + 1].y);
        slope[i] = (std::log(fit.samples[i + 1].resolvent_norm) -
                    std::log(fit.samples[i].resolvent_norm)) /
                   du;
    }

    // Largest stable tail: consecutive-pair slopes varying by < 0.05.
    int a = p - 2;
    while (a > 0 && std::abs(slope[a - 1] - slope[a]) < 0.05) --a;
    int begin = a;
    bool stable = true;
    if (fit.samples[begin].y < 10.0 * fit.samples[p - 1].y) {
        // Stable run narrower than a decade; fall back to the last decade.
        begin = p - 2;
        while (begin > 0 && fit.samples[begin - 1].y <= 10.0 * fit.samples[p - 1].y) --begin;
        stable = false;
    } else {
        // Restrict to the smallest decade inside the stable run.
        int c = p - 2;
        while (c > begin && fit.samples[c - 1].y <= 10.0 * fit.samples[p - 1].y) --c;
        begin = std::max(begin, c);
    }
    fit.window_begin = begin;
    fit.window_end = p - 1;
    fit.window_stable = stable;

    double su = 0, sv = 0, suu = 0, suv = 0;
    const int m = p - begin;
    for (int i = begin; i < p; ++i) {
        const double u = -std::log(fit.samples[i].y);
        const double v = std::log(fit.samples[i].resolvent_norm);
        su += u;
        sv += v;
        suu += u * u;
        suv += u * v;
    }
    const double denom = m * suu - su * su;
    fit.slope_raw = denom != 0.0 ? (m * suv - su * sv) / denom : 0.0;
    const double intercept = (sv - fit.slope_raw * su) / m;
    double rss = 0.0;
    for (int i = begin; i < p; ++i) {
        const double u = -std::log(fit.samples[i].y);
        const double v = std::log(fit.samples[i].resolvent_norm);
        const double e = v - (intercept + fit.slope_raw * u);
        rss += e * e;
    }
    fit.fit_residual = std::sqrt(rss / m);

    fit.m_hat = std::max(1.0, fit.slope_raw);
    fit.m_int = static_cast<int>(std::ceil(fit.m_hat - 0.1));
    fit.big_m = 0.0;
    for (const auto& s : fit.samples) {
        const double alam = std::hypot(x0, s.y);
        fit.big_m = std::max(fit.big_m, s.resolvent_norm * std::pow(s.y, fit.m_int) /
                                            std::pow(1.0 + alam, 2 * fit.m_int - 2));
    }
    return fit;
}

PartnerGrowthReport partner_growth_check(const BlockFamily& F, double x0, int N,
                                         const GrowthGrid& grid) {
    if (x0 == 0.0) throw ValidationError("partner growth check requires x0 != 0");
    const KreinOperator op = truncate(F, N);
    const ProductPair pp = product_pair(op);

    PartnerGrowthReport report;
    report.right = growth_order_fit(pp.right, x0, grid);
    report.left = growth_order_fit(pp.left, x0, grid);
    report.bound_order = report.right.m_int + 1;
    report.fitted_constant = 0.0;
    for (const auto& s : report.left.samples) {
        const double alam = std::hypot(x0, s.y);
        report.fitted_constant =
            std::max(report.fitted_constant, s.resolvent_norm * std::pow(s.y, report.bound_order) /
                                                 std::pow(1.0 + alam, 2 * report.bound_order - 2));
    }
    report.bound_holds = report.left.m_hat <= report.bound_order + 0.15;
    return report;
}

const char* to_string(TrendVerdict v) {
    switch (v) {
        case TrendVerdict::Bounded: return "bounded";
        case TrendVerdict::Growing: return "growing";
        case TrendVerdict::Inconclusive: return "inconclusive";
    }
    return "?";
}

namespace {

std::vector<double> real_eigenvalue_positions(const Matrix& A) {
    Eigen::ComplexSchur<Matrix> schur(A, false);
    if (schur.info() != Eigen::Success)
        throw NumericalBreakdown("Schur iteration failed during interval adjustment");
    std::vector<double> re(A.rows());
    for (Eigen::Index i = 0; i < A.rows(); ++i) re[i] = schur.matrixT()(i, i).real();
    std::sort(re.begin(), re.end());
    return re;
}

double adjust_endpoint(double e, const std::vector<double>& re, double guard, double rho) {
    double nearest = std::numeric_limits<double>::infinity();
    for (double r : re) nearest = std::min(nearest, std::abs(e - r));
    if (nearest >= guard) return e;

    // Nudge to the closest admissible spectral gap midpoint.
    const double buffer = std::max(10.0 * guard, 1e-3 * (1.0 + rho));
    std::vector<double> candidates{re.front() - buffer, re.back() + buffer};
    for (size_t i = 0; i + 1 < re.size(); ++i)
        if (re[i + 1] - re[i] > 2.0 * guard) candidates.push_back(0.5 * (re[i] + re[i + 1]));
    double best = std::numeric_limits<double>::quiet_NaN();
    double best_dist = std::numeric_limits<double>::infinity();
    for (double c : candidates) {
        double ok = std::numeric_limits<double>::infinity();
        for (double r : re) ok = std::min(ok, std::abs(c - r));
        if (ok < guard) continue;
        const double d = std::abs(c - e);
        if (d < best_dist) {
            best_dist = d;
            best = c;
        }
    }
    if (!std::isfinite(best))
        throw BoundaryHit("no admissible spectral gap midpoint near endpoint " +
                          std::to_string(e));
    return best;
}

Interval adjust_interval(const Matrix& A, Interval delta, double guard_tol) {
    const std::vector<double> re = real_eigenvalue_positions(A);
    double rho = 0.0;
    for (double r : re) rho = std::max(rho, std::abs(r));
    const double guard = guard_tol * (1.0 + rho);
    Interval out{adjust_endpoint(delta.lo, re, guard, rho),
                 adjust_endpoint(delta.hi, re, guard, rho)};
    if (!(out.lo < out.hi))
        throw BoundaryHit("interval collapsed after endpoint adjustment");
    return out;
}

TrendVerdict trend_verdict(const std::vector<double>& values, const TrendOptions& opt) {
    const int k = static_cast<int>(values.size());
    if (k == 0) return TrendVerdict::Inconclusive;
    const double tiny = 1e-12;
    double vmax = 0.0;
    for (double v : values) vmax = std::max(vmax, std::abs(v));
    if (vmax <= tiny) return TrendVerdict::Bounded;

    const int start = k / 2;
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (int i = start; i < k; ++i) {
        lo = std::min(lo, values[i]);
        hi = std::max(hi, values[i]);
    }
    if (lo > tiny && hi / lo <= opt.bounded_ratio) return TrendVerdict::Bounded;

    bool monotone = true;
    for (int i = 0; i + 1 < k; ++i)
        if (values[i + 1] < values[i] * (1.0 - 1e-9) - tiny) monotone = false;
    if (monotone) {
        const double base = values.front();
        if (base <= tiny || values.back() / base >= opt.growing_ratio)
            return TrendVerdict::Growing;
    }
    return TrendVerdict::Inconclusive;
}

TruncationTrend trend_over_truncations(const BlockFamily& F, Interval delta,
                                       const std::vector<int>& N_values, TrendMetric metric,
                                       const TrendOptions& opt) {
    if (N_values.empty()) throw ValidationError("trend needs at least one truncation size");
    TruncationTrend trend;
    trend.metric = metric;
    for (int N : N_values) {
        const KreinOperator A = analysis_operator(F, N);
        const Interval d = adjust_interval(A.T, delta, opt.endpoint_guard_tol);
        const IntervalProjection proj =
            interval_spectral_projection(A.T, A.J, d, opt.projection);
        trend.N_values.push_back(N);
        trend.intervals.push_back(d);
        trend.values.push_back(metric == TrendMetric::ProjectionNorm
                                   ? proj.norm
                                   : static_cast<double>(proj.inertia_on_range.n_minus));
    }
    trend.verdict = trend_verdict(trend.values, opt);
    return trend;
}

TruncationTrend trend_over_intervals(const BlockFamily& F, const std::vector<Interval>& deltas,
                                     int N, TrendMetric metric, const TrendOptions& opt) {
    if (deltas.empty()) throw ValidationError("trend needs at least one interval");
    TruncationTrend trend;
    trend.metric = metric;
    const KreinOperator A = analysis_operator(F, N);
    for (const Interval& delta : deltas) {
        const Interval d = adjust_interval(A.T, delta, opt.endpoint_guard_tol);
        const IntervalProjection proj =
            interval_spectral_projection(A.T, A.J, d, opt.projection);
        trend.N_values.push_back(N);
        trend.intervals.push_back(d);
        trend.values.push_back(metric == TrendMetric::ProjectionNorm
                                   ? proj.norm
                                   : static_cast<double>(proj.inertia_on_range.n_minus));
    }
    trend.verdict = trend_verdict(trend.values, opt);
    return trend;
}

} // namespace

TruncationTrend projection_trend(const BlockFamily& F, Interval delta,
                                 const std::vector<int>& N_values, const TrendOptions& opt) {
    return trend_over_truncations(F, delta, N_values, TrendMetric::ProjectionNorm, opt);
}

TruncationTrend projection_trend(const BlockFamily& F, const std::vector<Interval>& deltas, int N,
                                 const TrendOptions& opt) {
    return trend_over_intervals(F, deltas, N, TrendMetric::ProjectionNorm, opt);
}

TruncationTrend negative_rank_trend(const BlockFamily& F, Interval delta,
                                    const std::vector<int>& N_values, const TrendOptions& opt) {
    return trend_over_truncations(F, delta, N_values, TrendMetric::NegativeRank, opt);
}

TruncationTrend negative_rank_trend(const BlockFamily& F, const std::vector<Interval>& deltas,
                                    int N, const TrendOptions& opt) {
    return trend_over_intervals(F, deltas, N, TrendMetric::NegativeRank, opt);
}

} // namespace krein
