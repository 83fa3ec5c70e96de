#include "krein/products.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>

#include "krein/rng.hpp"

namespace krein {

FactorPair::FactorPair(Matrix A_, Matrix B_) : A(std::move(A_)), B(std::move(B_)) {
    if (A.rows() == 0 || A.cols() == 0 || B.rows() == 0 || B.cols() == 0)
        throw ValidationError("factors must be nonempty");
    if (A.cols() != B.rows() || B.cols() != A.rows())
        throw DimensionMismatch("factor shapes " + std::to_string(A.rows()) + "x" +
                                std::to_string(A.cols()) + " and " + std::to_string(B.rows()) +
                                "x" + std::to_string(B.cols()) + " are not composable both ways");
    require_finite(A, "A");
    require_finite(B, "B");
}

double FactorPair::nonzero_threshold(double tol) const {
    return tol * std::max(1.0, operator_norm(A) * operator_norm(B));
}

namespace {

// Optimal assignment (min total distance) between two equally sized cluster
// lists; exact bitmask DP, intended for lists of up to 12 clusters.
std::vector<int> assign_optimal(const std::vector<EigenCluster>& lhs,
                                const std::vector<EigenCluster>& rhs) {
    const int k = static_cast<int>(lhs.size());
    const size_t full = size_t(1) << k;
    std::vector<double> dp(full, std::numeric_limits<double>::infinity());
    std::vector<int> choice(full, -1);
    dp[0] = 0.0;
    for (size_t mask = 0; mask < full; ++mask) {
        if (!std::isfinite(dp[mask])) continue;
        const int i = __builtin_popcountll(mask); // next lhs index to place
        if (i >= k) continue;
        for (int j = 0; j < k; ++j) {
            if (mask & (size_t(1) << j)) continue;
            const size_t next = mask | (size_t(1) << j);
            const double cost = dp[mask] + std::abs(lhs[i].value - rhs[j].value);
            if (cost < dp[next]) {
                dp[next] = cost;
                choice[next] = j;
            }
        }
    }
    std::vector<int> match(k, -1);
    size_t mask = full - 1;
    for (int i = k - 1; i >= 0; --i) {
        const int j = choice[mask];
        match[i] = j;
        mask &= ~(size_t(1) << j);
    }
    return match;
}

std::vector<int> assign_greedy(const std::vector<EigenCluster>& lhs,
                               const std::vector<EigenCluster>& rhs) {
    const int k = static_cast<int>(lhs.size());
    std::vector<int> match(k, -1);
    std::vector<char> used(k, 0);
    for (int i = 0; i < k; ++i) {
        double best = std::numeric_limits<double>::infinity();
        int pick = -1;
        for (int j = 0; j < k; ++j) {
            if (used[j]) continue;
            const double d = std::abs(lhs[i].value - rhs[j].value);
            if (d < best) {
                best = d;
                pick = j;
            }
        }
        match[i] = pick;
        used[pick] = 1;
    }
    return match;
}

} // namespace

SpectrumCompareReport compare_nonzero_spectra(const FactorPair& P,
                                              const SpectrumCompareOptions& opt) {
    const Eigenstructure es_ab = eigenstructure(P.ab(), opt.eig);
    const Eigenstructure es_ba = eigenstructure(P.ba(), opt.eig);
    const double zero_band = P.nonzero_threshold(opt.nonzero_tol);

    SpectrumCompareReport report;
    for (const auto& c : es_ab.clusters)
        if (std::abs(c.value) > zero_band) report.nonzero_ab.push_back(c);
    for (const auto& c : es_ba.clusters)
        if (std::abs(c.value) > zero_band) report.nonzero_ba.push_back(c);

    const double rho = std::max(es_ab.spectral_radius(), es_ba.spectral_radius());
    report.match_tolerance = opt.nonzero_tol * (1.0 + rho);

    if (report.nonzero_ab.size() != report.nonzero_ba.size()) {
        report.matched = false;
        report.weyr_match = false;
        report.max_value_discrepancy = std::numeric_limits<double>::infinity();
        return report;
    }
    const int k = static_cast<int>(report.nonzero_ab.size());
    if (k == 0) {
        report.matched = true;
        report.weyr_match = true;
        return report;
    }

    const std::vector<int> match = k <= 12 ? assign_optimal(report.nonzero_ab, report.nonzero_ba)
                                           : assign_greedy(report.nonzero_ab, report.nonzero_ba);
    report.matched = true;
    report.weyr_match = true;
    for (int i = 0; i < k; ++i) {
        MatchedClusterPair pair;
        pair.ab = report.nonzero_ab[i];
        pair.ba = report.nonzero_ba[match[i]];
        pair.distance = std::abs(pair.ab.value - pair.ba.value);
        report.max_value_discrepancy = std::max(report.max_value_discrepancy, pair.distance);
        if (pair.distance > report.match_tolerance) report.matched = false;
        if (pair.ab.weyr != pair.ba.weyr || pair.ab.algebraic_mult != pair.ba.algebraic_mult)
            report.weyr_match = false;
        report.pairs.push_back(std::move(pair));
    }
    return report;
}

TransportReport eigenspace_transport(const FactorPair& P, Complex lambda, int power,
                                     const TransportOptions& opt) {
    if (power < 1) throw ValidationError("transport power must be >= 1");
    if (std::abs(lambda) <= P.nonzero_threshold(opt.nonzero_tol))
        throw NotAnEigenvalue("lambda lies in the zero band; transport requires lambda != 0");

    const Matrix V = kernel_of_power(P.ba(), lambda, power, opt.rank_tol);
    const Matrix W = kernel_of_power(P.ab(), lambda, power, opt.rank_tol);
    if (V.cols() == 0 || W.cols() == 0)
        throw NotAnEigenvalue("lambda is not an eigenvalue of both products");
    if (V.cols() != W.cols())
        throw TransportFailure("kernel dimensions disagree: dim ker (BA-l)^n = " +
                               std::to_string(V.cols()) + ", dim ker (AB-l)^n = " +
                               std::to_string(W.cols()));

    const Matrix AV = P.A * V;
    const Matrix AV_basis = column_space_basis(AV, opt.rank_tol);
    if (AV_basis.cols() != V.cols())
        throw TransportFailure("A is not injective on ker (BA-lambda)^n");

    // Largest principal-angle sine between span(A V) and span(W).
    Eigen::JacobiSVD<Matrix> svd(W.adjoint() * AV_basis);
    const auto& cosines = svd.singularValues();
    const double cos_min = cosines(cosines.size() - 1);
    const double span_residual = std::sqrt(std::max(0.0, 1.0 - cos_min * cos_min));
    if (span_residual > opt.span_tol)
        throw TransportFailure("A ker(BA-l)^n does not match ker(AB-l)^n: residual = " +
                               std::to_string(span_residual));

    TransportReport report;
    report.dim = static_cast<int>(V.cols());
    report.basis_ba = V;
    report.basis_ab = W;
    report.forward = W.adjoint() * AV;
    report.inverse = V.adjoint() * (P.B * W) / lambda;
    report.span_residual = span_residual;
    if (power == 1) report.roundtrip_residual = operator_norm((P.B * AV) / lambda - V);
    return report;
}

ResolventIdentityResiduals resolvent_identity_residuals(const FactorPair& P, Complex lambda,
                                                        Complex mu,
                                                        const ResolventOptions& opt) {
    if (lambda == Complex(0.0, 0.0))
        throw ValidationError("lambda must be nonzero for the product resolvent identities");
    const Matrix AB = P.ab();
    const Matrix BA = P.ba();
    const Eigen::Index q = BA.rows();
    const Matrix R_ab = resolvent(AB, lambda, opt);
    const Matrix R_ba = resolvent(BA, lambda, opt);
    const Matrix R_ba_mu = resolvent(BA, mu, opt);

    const Matrix core = P.B * R_ab * P.A;
    const Matrix rhs_one = (core - Matrix::Identity(q, q)) / lambda;
    const Matrix rhs_two = ((mu * Matrix::Identity(q, q) + (lambda - mu) * core) / lambda) * R_ba_mu;

    ResolventIdentityResiduals out;
    out.one_param = operator_norm(R_ba - rhs_one);
    out.two_param = operator_norm(R_ba - rhs_two);
    return out;
}

namespace {

// sup over the unit sphere of ||Nx|| / (||Mx|| + 1) by projected gradient
// ascent; multistart for the nonconvex landscape.
std::pair<double, Vector> sphere_ascent(const Matrix& N, const Matrix& M,
                                        const DominationOptions& opt, std::uint64_t salt) {
    const Eigen::Index dim = N.cols();
    const Matrix NhN = N.adjoint() * N;
    const Matrix MhM = M.adjoint() * M;
    auto value = [&](const Vector& x) {
        return (N * x).norm() / ((M * x).norm() + 1.0);
    };
    auto gradient = [&](const Vector& x, double fx) {
        const double gn = (N * x).norm();
        const double hm = (M * x).norm() + 1.0;
        Vector grad = Vector::Zero(dim);
        if (gn > 0.0) grad += (NhN * x) / (gn * hm);
        if (hm > 1.0) grad -= fx * (MhM * x) / ((hm - 1.0) * hm);
        return grad;
    };

    double best_val = 0.0;
    Vector best_x = Vector::Unit(dim, 0);
    for (int s = 0; s < opt.starts; ++s) {
        SeededRng rng(SeededRng::mix(opt.seed ^ salt, static_cast<std::uint64_t>(s)));
        Vector x = rng.unit_vector(dim);
        double fx = value(x);
        double step = 0.5;
        for (int it = 0; it < opt.max_iter; ++it) {
            Vector g = gradient(x, fx);
            g -= x * Complex(x.dot(g).real(), 0.0); // tangent component
            const double gnorm = g.norm();
            if (gnorm <= 1e-15) break;
            bool moved = false;
            while (step > 1e-16) {
                Vector cand = x + step * g;
                cand /= cand.norm();
                const double fc = value(cand);
                if (fc > fx) {
                    const double delta = (cand - x).norm();
                    x = cand;
                    fx = fc;
                    step = std::min(step * 1.5, 1.0);
                    moved = true;
                    if (delta < opt.step_tol) it = opt.max_iter; // converged
                    break;
                }
                step *= 0.5;
            }
            if (!moved) break;
        }
        if (fx > best_val) {
            best_val = fx;
            best_x = x;
        }
    }
    return {best_val, best_x};
}

} // namespace

DominationConstants domination_constants(const FactorPair& P, const DominationOptions& opt) {
    DominationConstants out;
    auto [c1, w1] = sphere_ascent(P.B, P.ab(), opt, 0x6231ULL);
    auto [c2, w2] = sphere_ascent(P.A, P.ba(), opt, 0x6232ULL);
    out.c1 = c1;
    out.c2 = c2;
    out.C = std::max(1.0, c1 * c2);
    out.witness1 = w1;
    out.witness2 = w2;
    return out;
}

ResolventBoundCheck resolvent_bound_check(const FactorPair& P, Complex lambda, Complex mu,
                                          const DominationConstants& dom,
                                          const ResolventOptions& opt) {
    if (lambda == Complex(0.0, 0.0))
        throw ValidationError("lambda must be nonzero for the resolvent bound");
    ResolventBoundCheck out;
    out.lhs = resolvent_norm(P.ba(), lambda, opt);
    out.m1 = std::max(1.0, resolvent_norm(P.ab(), lambda, opt));
    out.m2 = std::max(1.0, resolvent_norm(P.ba(), mu, opt));
    const double al = std::abs(lambda);
    const double am = std::abs(mu);
    out.rhs = dom.C * out.m1 * out.m2 / al *
              (am + std::abs(lambda - mu) * (2.0 + al) * (2.0 + am));
    out.holds = out.lhs <= out.rhs;
    return out;
}

ResolventBoundCheck resolvent_bound_check(const FactorPair& P, Complex lambda, Complex mu) {
    return resolvent_bound_check(P, lambda, mu, domination_constants(P), ResolventOptions{});
}

ZeroPoleOrder zero_pole_order(const FactorPair& P, const SpectrumCompareOptions& opt) {
    const Eigenstructure es_ab = eigenstructure(P.ab(), opt.eig);
    const Eigenstructure es_ba = eigenstructure(P.ba(), opt.eig);
    const double zero_band = P.nonzero_threshold(opt.nonzero_tol);

    ZeroPoleOrder out;
    for (const auto& c : es_ab.clusters)
        if (std::abs(c.value) <= zero_band) out.order_ab = std::max(out.order_ab, c.weyr_length());
    for (const auto& c : es_ba.clusters)
        if (std::abs(c.value) <= zero_band) out.order_ba = std::max(out.order_ba, c.weyr_length());
    out.zero_in_resolvent_set_ab = out.order_ab == 0;
    out.zero_in_spectrum_ba = out.order_ba > 0;
    out.semisimple_zero_expected = out.zero_in_resolvent_set_ab && out.zero_in_spectrum_ba;
    return out;
}

} // namespace krein
