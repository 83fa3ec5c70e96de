#include "krein/signtype.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#include "krein/rng.hpp"

namespace krein {

const char* to_string(SignType t) {
    switch (t) {
        case SignType::PositiveType: return "positive";
        case SignType::NegativeType: return "negative";
        case SignType::Critical: return "critical";
    }
    return "?";
}

namespace {

std::vector<std::pair<int, int>> sign_characteristic_of_cluster(const Matrix& A,
                                                                const FundamentalSymmetry& J,
                                                                const EigenCluster& cluster,
                                                                const ClassifyOptions& opt) {
    const int s = cluster.weyr_length();
    if (s > opt.max_chain_length)
        throw MultiplicityTooLarge("Jordan chains of length " + std::to_string(s) +
                                   " exceed the supported maximum of " +
                                   std::to_string(opt.max_chain_length));
    const double lambda0 = cluster.value.real();
    const Eigen::Index n = A.rows();
    const Matrix N = A - lambda0 * Matrix::Identity(n, n);

    // Kernel filtration K_k = ker N^k and the powers N^(k-1).
    std::vector<Matrix> K(s + 2);
    K[0] = Matrix(n, 0);
    for (int k = 1; k <= s; ++k) {
        K[k] = kernel_of_power(A, lambda0, k, opt.rank_tol);
        int expect = 0;
        for (int j = 0; j < k; ++j) expect += cluster.weyr[j];
        if (K[k].cols() != expect)
            throw NumericalBreakdown("kernel filtration dimension " + std::to_string(K[k].cols()) +
                                     " disagrees with the Weyr characteristic at power " +
                                     std::to_string(k));
    }
    K[s + 1] = K[s];
    std::vector<Matrix> Npow(s);
    Npow[0] = Matrix::Identity(n, n);
    for (int k = 1; k < s; ++k) Npow[k] = Npow[k - 1] * N;

    std::vector<std::pair<int, int>> signs;
    for (int k = s; k >= 1; --k) {
        const int blocks = cluster.weyr[k - 1] - (k < s ? cluster.weyr[k] : 0);
        if (blocks == 0) continue;

        // Complement of K_{k-1} + N K_{k+1} inside K_k: the form
        // [N^(k-1) x, y] is nondegenerate exactly on this quotient and its
        // inertia carries one sign per Jordan block of size k.
        Matrix D(n, K[k - 1].cols() + K[k + 1].cols());
        D << K[k - 1], N * K[k + 1];
        Matrix W = K[k];
        if (D.cols() > 0) {
            const Matrix D_on = column_space_basis(D, opt.rank_tol);
            W -= D_on * (D_on.adjoint() * K[k]);
        }
        const Matrix C = column_space_basis(W, opt.rank_tol);
        if (C.cols() != blocks)
            throw DegenerateForm("quotient dimension " + std::to_string(C.cols()) +
                                 " does not match the " + std::to_string(blocks) +
                                 " Jordan blocks of size " + std::to_string(k));

        const Matrix H = hermitian_part(C.adjoint() * J.matrix() * Npow[k - 1] * C);
        Eigen::SelfAdjointEigenSolver<Matrix> es(H, Eigen::EigenvaluesOnly);
        const RealVector ev = es.eigenvalues();
        const double scale = std::max(std::abs(ev(0)), std::abs(ev(ev.size() - 1)));
        const double thr = opt.zero_tol * scale;
        int plus = 0, minus = 0;
        for (Eigen::Index i = 0; i < ev.size(); ++i) {
            if (ev(i) > thr)
                ++plus;
            else if (ev(i) < -thr)
                ++minus;
            else
                throw DegenerateForm("compressed form is numerically singular at block size " +
                                     std::to_string(k));
        }
        for (int i = 0; i < plus; ++i) signs.emplace_back(k, +1);
        for (int i = 0; i < minus; ++i) signs.emplace_back(k, -1);
    }
    std::sort(signs.begin(), signs.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first > b.first;
        return a.second > b.second;
    });
    return signs;
}

SignClassification classify_cluster(const Matrix& A, const FundamentalSymmetry& J,
                                    const EigenCluster& cluster, const ClassifyOptions& opt) {
    SignClassification out;
    out.eigenvalue = cluster.value.real();
    out.algebraic_mult = cluster.algebraic_mult;
    out.weyr = cluster.weyr;
    out.semisimple = cluster.semisimple();

    const Matrix V = kernel_of_power(A, out.eigenvalue, 1, opt.rank_tol);
    out.eigenspace_inertia = gram_inertia(V, J, opt.zero_tol, opt.rank_tol);

    const int k = out.eigenspace_inertia.total();
    if (out.semisimple && out.eigenspace_inertia == Inertia{k, 0, 0})
        out.sign_type = SignType::PositiveType;
    else if (out.semisimple && out.eigenspace_inertia == Inertia{0, 0, k})
        out.sign_type = SignType::NegativeType;
    else
        out.sign_type = SignType::Critical;

    if (cluster.weyr_length() <= opt.max_chain_length) {
        try {
            out.sign_characteristic = sign_characteristic_of_cluster(A, J, cluster, opt);
        } catch (const DegenerateForm&) {
            out.sign_characteristic.clear();
        }
    }
    return out;
}

void require_selfadjoint(const Matrix& A, const FundamentalSymmetry& J, double tol) {
    require_square(A, "A");
    if (A.rows() != J.dim())
        throw DimensionMismatch("operator dimension " + std::to_string(A.rows()) +
                                " does not match J dimension " + std::to_string(J.dim()));
    if (!is_j_selfadjoint(A, J, tol))
        throw NotJSelfadjoint("operator is not J-selfadjoint within tolerance");
}

} // namespace

SignClassification classify_real_eigenvalue(const Matrix& A, const FundamentalSymmetry& J,
                                            double lambda, const ClassifyOptions& opt) {
    require_selfadjoint(A, J, opt.selfadjoint_tol);
    const Eigenstructure es = eigenstructure(A, {opt.cluster_tol, opt.rank_tol});
    const double band = es.cluster_tolerance;

    const EigenCluster* cluster = nullptr;
    double best = std::numeric_limits<double>::infinity();
    for (const auto& c : es.clusters) {
        const double d = std::abs(c.value - Complex(lambda, 0.0));
        if (d < best) {
            best = d;
            cluster = &c;
        }
    }
    if (cluster == nullptr || best > band)
        throw NotAnEigenvalue("no eigenvalue cluster within tolerance of lambda = " +
                              std::to_string(lambda));
    if (std::abs(cluster->value.imag()) > band)
        throw NotAnEigenvalue("nearest cluster at lambda = " + std::to_string(lambda) +
                              " is not real");
    return classify_cluster(A, J, *cluster, opt);
}

std::vector<std::pair<int, int>> sign_characteristic(const Matrix& A,
                                                     const FundamentalSymmetry& J, double lambda,
                                                     const ClassifyOptions& opt) {
    require_selfadjoint(A, J, opt.selfadjoint_tol);
    const Eigenstructure es = eigenstructure(A, {opt.cluster_tol, opt.rank_tol});
    const double band = es.cluster_tolerance;
    for (const auto& c : es.clusters) {
        if (std::abs(c.value - Complex(lambda, 0.0)) <= band) {
            if (std::abs(c.value.imag()) > band)
                throw NotAnEigenvalue("cluster near lambda is not real");
            return sign_characteristic_of_cluster(A, J, c, opt);
        }
    }
    throw NotAnEigenvalue("lambda = " + std::to_string(lambda) + " is not an eigenvalue");
}

std::vector<SignClassification> classify_real_spectrum(const Matrix& A,
                                                       const FundamentalSymmetry& J,
                                                       const ClassifyOptions& opt) {
    require_selfadjoint(A, J, opt.selfadjoint_tol);
    const Eigenstructure es = eigenstructure(A, {opt.cluster_tol, opt.rank_tol});
    const double band = es.cluster_tolerance;
    std::vector<SignClassification> out;
    for (const auto& c : es.clusters)
        if (std::abs(c.value.imag()) <= band) out.push_back(classify_cluster(A, J, c, opt));
    std::sort(out.begin(), out.end(),
              [](const auto& a, const auto& b) { return a.eigenvalue < b.eigenvalue; });
    return out;
}

std::vector<double> critical_points(const Matrix& A, const FundamentalSymmetry& J,
                                    const ClassifyOptions& opt) {
    std::vector<double> out;
    for (const auto& c : classify_real_spectrum(A, J, opt))
        if (c.sign_type == SignType::Critical) out.push_back(c.eigenvalue);
    return out;
}

IntervalProjection interval_spectral_projection(const Matrix& A, const FundamentalSymmetry& J,
                                                const Interval& delta,
                                                const ProjectionOptions& opt) {
    require_selfadjoint(A, J, 1e-9);
    if (!(delta.lo < delta.hi)) throw ValidationError("interval endpoints must satisfy lo < hi");

    IntervalProjection out;
    out.projection = riesz_projection(A, Region{delta}, opt.riesz);
    const double pnorm = operator_norm(out.projection);
    if (operator_norm(krein_adjoint(out.projection, J) - out.projection) >
        opt.selfadjoint_tol * (1.0 + pnorm))
        throw SelfadjointnessViolation("interval projection failed the J-selfadjointness check");

    Eigen::JacobiSVD<Matrix> svd(out.projection, Eigen::ComputeFullU);
    const auto& s = svd.singularValues();
    int rank = 0;
    for (Eigen::Index i = 0; i < s.size(); ++i)
        if (s(i) > 0.5) ++rank; // projector: singular values are >= 1 or ~ 0
    out.norm = rank > 0 ? s(0) : 0.0;
    if (rank > 0)
        out.inertia_on_range =
            gram_inertia(svd.matrixU().leftCols(rank), J, opt.zero_tol, opt.rank_tol);
    return out;
}

Matrix polynomial_at(const RealVector& coefficients, const Matrix& A) {
    require_square(A, "A");
    if (coefficients.size() == 0) throw ValidationError("polynomial must have coefficients");
    const Eigen::Index n = A.rows();
    Matrix P = coefficients(coefficients.size() - 1) * Matrix::Identity(n, n);
    for (Eigen::Index k = coefficients.size() - 2; k >= 0; --k)
        P = P * A + coefficients(k) * Matrix::Identity(n, n);
    return P;
}

namespace {

// Min-norm point in the convex hull of the rows of G (Frank-Wolfe with
// exact line search); returns the hull weights.
RealVector min_norm_hull_weights(const std::vector<RealVector>& G) {
    const int m = static_cast<int>(G.size());
    RealMatrix gram(m, m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j <= i; ++j) gram(i, j) = gram(j, i) = G[i].dot(G[j]);
    RealVector w = RealVector::Constant(m, 1.0 / m);
    for (int it = 0; it < 400; ++it) {
        const RealVector grad = gram * w;
        int jstar = 0;
        for (int j = 1; j < m; ++j)
            if (grad(j) < grad(jstar)) jstar = j;
        const double gap = grad.dot(w) - grad(jstar);
        if (gap <= 1e-16 * std::max(1.0, std::abs(grad.dot(w)))) break;
        RealVector d = -w;
        d(jstar) += 1.0;
        const double denom = d.dot(gram * d);
        const double gamma = denom > 0.0 ? std::clamp(gap / denom, 0.0, 1.0) : 1.0;
        w += gamma * d;
    }
    return w;
}

struct DegreeSearchResult {
    bool feasible = false;
    RealVector coefficients;
    double min_eig = 0.0;
};

DegreeSearchResult search_degree(const std::vector<Matrix>& S, const std::vector<Matrix>& Apow,
                                 int degree, const DefinitizeOptions& opt) {
    const int dim = degree + 1;
    auto matrix_of = [&](const RealVector& c) {
        Matrix H = c(0) * S[0];
        for (int k = 1; k < dim; ++k) H += c(k) * S[k];
        return H;
    };
    auto poly_norm = [&](const RealVector& c) {
        Matrix P = c(0) * Apow[0];
        for (int k = 1; k < dim; ++k) P += c(k) * Apow[k];
        return operator_norm(P);
    };

    DegreeSearchResult best;
    best.min_eig = -std::numeric_limits<double>::infinity();
    std::vector<RealVector> certificates;
    int pinned_breaks = 0; // restarts whose model optimum sat on the PSD boundary

    for (int r = 0; r < opt.restarts && pinned_breaks < 8; ++r) {
        SeededRng rng(SeededRng::mix(opt.seed ^ 0xdef1ULL, static_cast<std::uint64_t>(r) * 131 +
                                                               static_cast<std::uint64_t>(degree)));
        RealVector c = rng.real_unit_vector(dim);
        for (int it = 0; it < 50; ++it) {
            Eigen::SelfAdjointEigenSolver<Matrix> es(matrix_of(c));
            const double min_eig = es.eigenvalues()(0);
            if (min_eig > best.min_eig) {
                best.min_eig = min_eig;
                best.coefficients = c;
            }
            if (min_eig >= -opt.psd_tol * std::max(1.0, poly_norm(c))) {
                best.feasible = true;
                best.coefficients = c;
                best.min_eig = min_eig;
                return best;
            }
            const Vector v = es.eigenvectors().col(0);
            RealVector g(dim);
            for (int k = 0; k < dim; ++k) g(k) = (v.adjoint() * S[k] * v)(0, 0).real();
            certificates.push_back(g);
            if (certificates.size() > 64) certificates.erase(certificates.begin());

            const RealVector w = min_norm_hull_weights(certificates);
            RealVector ghat = RealVector::Zero(dim);
            for (size_t j = 0; j < certificates.size(); ++j) ghat += w(j) * certificates[j];
            const double gnorm = ghat.norm();
            if (gnorm <= 1e-13) { // model optimum pinned at ~0; cannot certify
                ++pinned_breaks;
                break;
            }
            const RealVector c_new = ghat / gnorm;
            if ((c_new - c).norm() <= 1e-14) break;
            c = c_new;
        }
    }
    return best;
}

} // namespace

DefinitizingPolynomial definitize(const Matrix& A, const FundamentalSymmetry& J,
                                  const DefinitizeOptions& opt) {
    require_selfadjoint(A, J, opt.selfadjoint_tol);
    const Eigen::Index n = A.rows();
    const Eigenstructure es = eigenstructure(A, opt.eig);
    const double band = es.cluster_tolerance;

    // Root subspaces at non-real eigenvalues are neutral, so a positive
    // semidefinite J p(A) vanishes on them: p must carry each non-real
    // eigenvalue as a root of order >= its longest chain.  Degrees below the
    // combined total cannot work and are skipped outright.
    int forced_degree = 0;
    for (const auto& c : es.clusters)
        if (std::abs(c.value.imag()) > band) forced_degree += c.weyr_length();

    if (forced_degree == 0) {
        std::vector<Matrix> Apow(opt.max_degree + 1);
        std::vector<Matrix> S(opt.max_degree + 1);
        Apow[0] = Matrix::Identity(n, n);
        for (int k = 1; k <= opt.max_degree; ++k) Apow[k] = Apow[k - 1] * A;
        for (int k = 0; k <= opt.max_degree; ++k) S[k] = hermitian_part(J.matrix() * Apow[k]);

        for (int d = 0; d <= opt.max_degree; ++d) {
            const DegreeSearchResult result = search_degree(S, Apow, d, opt);
            if (result.feasible) {
                DefinitizingPolynomial poly;
                poly.coefficients = result.coefficients;
                poly.certified_min_eig = result.min_eig;
                poly.from_fallback = false;
                return poly;
            }
        }
    } else if (forced_degree <= opt.max_degree) {
        // p = q r with q the forced non-real factor.  q r(A) vanishes on the
        // non-real root subspaces and those are form-orthogonal to the real
        // ones, so J p(A) >= 0 exactly when the compression of J q(A) r(A) to
        // the real spectral subspace is.  Searching r there avoids grinding
        // along the flat zero directions of the full-space problem.
        std::vector<Complex> qc{1.0};
        Matrix real_roots(n, 0);
        for (const auto& c : es.clusters) {
            if (std::abs(c.value.imag()) > band) {
                for (int k = 0; k < c.weyr_length(); ++k) {
                    qc.push_back(0.0);
                    for (size_t i = qc.size() - 1; i > 0; --i)
                        qc[i] = qc[i - 1] - c.value * qc[i];
                    qc[0] = -c.value * qc[0];
                }
            } else {
                const Matrix Kc =
                    kernel_of_power(A, c.value.real(), c.weyr_length(), opt.eig.rank_tol);
                Matrix grown(n, real_roots.cols() + Kc.cols());
                grown << real_roots, Kc;
                real_roots = std::move(grown);
            }
        }
        RealVector q(qc.size());
        for (size_t i = 0; i < qc.size(); ++i) q(i) = qc[i].real(); // pairs cancel Im
        const Matrix qA = polynomial_at(q, A);

        const auto finish = [&](RealVector r) -> std::optional<DefinitizingPolynomial> {
            RealVector p = RealVector::Zero(q.size() + r.size() - 1);
            for (Eigen::Index i = 0; i < q.size(); ++i)
                for (Eigen::Index j = 0; j < r.size(); ++j) p(i + j) += q(i) * r(j);
            p /= p.norm();
            const Matrix H = hermitian_part(J.matrix() * polynomial_at(p, A));
            Eigen::SelfAdjointEigenSolver<Matrix> sa(H, Eigen::EigenvaluesOnly);
            const double min_eig = sa.eigenvalues()(0);
            if (min_eig < -opt.psd_tol * std::max(1.0, operator_norm(polynomial_at(p, A))))
                return std::nullopt; // reconstruction too noisy; use the fallback
            DefinitizingPolynomial poly;
            poly.coefficients = p;
            poly.certified_min_eig = min_eig;
            poly.from_fallback = false;
            return poly;
        };

        if (real_roots.cols() == 0) {
            // No real spectrum: q is already the minimal polynomial.
            if (auto poly = finish(RealVector::Ones(1))) return *poly;
        } else {
            const Matrix V = column_space_basis(real_roots, opt.eig.rank_tol);
            const int e_max = opt.max_degree - forced_degree;
            std::vector<Matrix> Apow_red(e_max + 1);
            std::vector<Matrix> S_red(e_max + 1);
            Matrix Ak = Matrix::Identity(n, n);
            for (int k = 0; k <= e_max; ++k) {
                Apow_red[k] = qA * Ak;
                S_red[k] = hermitian_part(V.adjoint() * J.matrix() * Apow_red[k] * V);
                Ak = Ak * A;
            }
            for (int e = 0; e <= e_max; ++e) {
                const DegreeSearchResult result = search_degree(S_red, Apow_red, e, opt);
                if (!result.feasible) continue;
                if (auto poly = finish(result.coefficients)) return *poly;
                break;
            }
        }
    }

    // Guaranteed fallback: the minimal polynomial annihilates A, so J p(A)
    // is positive semidefinite up to roundoff.
    std::vector<Complex> coeffs{1.0};
    for (const auto& c : es.clusters)
        for (int k = 0; k < c.weyr_length(); ++k) {
            coeffs.push_back(0.0);
            for (size_t i = coeffs.size() - 1; i > 0; --i)
                coeffs[i] = coeffs[i - 1] - c.value * coeffs[i];
            coeffs[0] = -c.value * coeffs[0];
        }
    RealVector real_coeffs(coeffs.size());
    for (size_t i = 0; i < coeffs.size(); ++i) real_coeffs(i) = coeffs[i].real();
    real_coeffs /= real_coeffs.norm();

    DefinitizingPolynomial poly;
    poly.coefficients = real_coeffs;
    poly.from_fallback = true;
    const Matrix H = hermitian_part(J.matrix() * polynomial_at(real_coeffs, A));
    Eigen::SelfAdjointEigenSolver<Matrix> sa(H, Eigen::EigenvaluesOnly);
    poly.certified_min_eig = sa.eigenvalues()(0);
    return poly;
}

bool is_definitizing(const RealVector& coefficients, const Matrix& A,
                     const FundamentalSymmetry& J, double tol) {
    const Matrix pA = polynomial_at(coefficients, A);
    const Matrix JpA = J.matrix() * pA;
    const double scale = operator_norm(pA);
    if (operator_norm(JpA - JpA.adjoint()) > 1e-8 * (1.0 + scale))
        throw NotJSelfadjoint("J p(A) is not numerically Hermitian");
    Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian_part(JpA), Eigen::EigenvaluesOnly);
    return es.eigenvalues()(0) >= -tol * std::max(1.0, scale);
}

namespace {

bool values_pair_up(const std::vector<const SignClassification*>& a,
                    const std::vector<const SignClassification*>& b, double band) {
    if (a.size() != b.size()) return false;
    for (size_t i = 0; i < a.size(); ++i)
        if (std::abs(a[i]->eigenvalue - b[i]->eigenvalue) > band) return false;
    return true;
}

} // namespace

ProductSignTypeReport product_signtype_compare(const KreinOperator& op,
                                               const ClassifyOptions& opt) {
    const ProductPair pp = product_pair(op, opt.selfadjoint_tol);
    const double scale = std::max(1.0, std::max(operator_norm(pp.left), operator_norm(pp.right)));
    const double band = opt.cluster_tol * (1.0 + scale);

    ProductSignTypeReport report;
    for (const auto& c : classify_real_spectrum(pp.left, op.J, opt))
        if (std::abs(c.eigenvalue) > band) report.left.push_back(c);
    for (const auto& c : classify_real_spectrum(pp.right, op.J, opt))
        if (std::abs(c.eigenvalue) > band) report.right.push_back(c);

    auto select = [](const std::vector<SignClassification>& list, auto pred) {
        std::vector<const SignClassification*> out;
        for (const auto& c : list)
            if (pred(c)) out.push_back(&c);
        return out;
    };
    const auto pos_l = select(report.left, [](const auto& c) { return c.eigenvalue > 0; });
    const auto pos_r = select(report.right, [](const auto& c) { return c.eigenvalue > 0; });
    const auto neg_l = select(report.left, [](const auto& c) { return c.eigenvalue < 0; });
    const auto neg_r = select(report.right, [](const auto& c) { return c.eigenvalue < 0; });

    report.positive_axis_match = values_pair_up(pos_l, pos_r, band);
    if (report.positive_axis_match)
        for (size_t i = 0; i < pos_l.size(); ++i)
            if (pos_l[i]->sign_type != pos_r[i]->sign_type) report.positive_axis_match = false;

    auto swapped = [](SignType a, SignType b) {
        if (a == SignType::Critical || b == SignType::Critical) return a == b;
        return (a == SignType::PositiveType && b == SignType::NegativeType) ||
               (a == SignType::NegativeType && b == SignType::PositiveType);
    };
    report.negative_axis_swap = values_pair_up(neg_l, neg_r, band);
    if (report.negative_axis_swap)
        for (size_t i = 0; i < neg_l.size(); ++i)
            if (!swapped(neg_l[i]->sign_type, neg_r[i]->sign_type))
                report.negative_axis_swap = false;

    const auto crit = [](const auto& c) { return c.sign_type == SignType::Critical; };
    report.critical_sets_equal =
        values_pair_up(select(report.left, crit), select(report.right, crit), band);

    // [Tx, Tx] = lambda [x, x] for every computed eigenvector of T^[*]T at
    // nonzero lambda, real or not.
    const Eigenstructure es = eigenstructure(pp.left, {opt.cluster_tol, opt.rank_tol});
    double worst = 0.0;
    for (const auto& c : es.clusters) {
        if (std::abs(c.value) <= band) continue;
        const Matrix V = kernel_of_power(pp.left, c.value, 1, opt.rank_tol);
        for (Eigen::Index j = 0; j < V.cols(); ++j) {
            const Vector x = V.col(j);
            const Vector Tx = op.T * x;
            const Complex lhs = indefinite_form(op.J, Tx, Tx);
            const Complex rhs = c.value * indefinite_form(op.J, x, x);
            worst = std::max(worst, std::abs(lhs - rhs) / scale);
        }
    }
    report.max_eigvec_identity_residual = worst;
    report.consistent = report.positive_axis_match && report.negative_axis_swap &&
                        report.critical_sets_equal && worst <= 1e-9;
    return report;
}

} // namespace krein
