#include "krein/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace krein {

int Eigenstructure::dimension() const {
    int n = 0;
    for (const auto& c : clusters) n += c.algebraic_mult;
    return n;
}

double Eigenstructure::spectral_radius() const {
    double rho = 0.0;
    for (const auto& c : clusters) rho = std::max(rho, std::abs(c.value));
    return rho;
}

namespace {

// Single-linkage clustering of eigenvalues with an absolute merge distance.
std::vector<std::vector<int>> cluster_indices(const Vector& eigs, double dist) {
    const int n = static_cast<int>(eigs.size());
    std::vector<int> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int i) {
        while (parent[i] != i) i = parent[i] = parent[parent[i]];
        return i;
    };
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (std::abs(eigs(i) - eigs(j)) <= dist) parent[find(i)] = find(j);
    std::vector<std::vector<int>> groups(n);
    for (int i = 0; i < n; ++i) groups[find(i)].push_back(i);
    std::vector<std::vector<int>> out;
    for (auto& g : groups)
        if (!g.empty()) out.push_back(std::move(g));
    return out;
}

// Singular values of (M - lambda)^k are gauged against (||M - lambda|| +
// |lambda|)^k rather than against sigma_max of the power itself.  A relative
// gauge fails at both extremes: once a nilpotent part is annihilated the
// whole power is rounding noise (and rank would be hallucinated in it), and
// when the cluster exhausts the matrix the shift is itself noise-sized.
int rank_at_scale(const Matrix& P, double threshold) {
    Eigen::JacobiSVD<Matrix> svd(P);
    const auto& s = svd.singularValues();
    int r = 0;
    while (r < s.size() && s(r) > threshold) ++r;
    return r;
}

std::vector<int> weyr_characteristic(const Matrix& M, Complex lambda, int mult, double rank_tol) {
    const Eigen::Index n = M.rows();
    const Matrix shifted = M - lambda * Matrix::Identity(n, n);
    const double gauge = operator_norm(shifted) + std::abs(lambda);
    Matrix power = Matrix::Identity(n, n);
    std::vector<int> weyr;
    int prev_nullity = 0;
    for (int k = 1; k <= mult; ++k) {
        power = power * shifted;
        const int nullity =
            static_cast<int>(n) - rank_at_scale(power, rank_tol * std::pow(gauge, k));
        const int wk = nullity - prev_nullity;
        if (wk <= 0)
            throw NumericalBreakdown("kernel of (M - lambda)^" + std::to_string(k) +
                                     " stopped growing before reaching multiplicity " +
                                     std::to_string(mult));
        if (!weyr.empty() && wk > weyr.back())
            throw NumericalBreakdown("Weyr characteristic not monotone at power " +
                                     std::to_string(k));
        weyr.push_back(wk);
        prev_nullity = nullity;
        if (nullity >= mult) break;
    }
    if (prev_nullity != mult)
        throw NumericalBreakdown("root subspace dimension " + std::to_string(prev_nullity) +
                                 " does not match clustered multiplicity " +
                                 std::to_string(mult));
    return weyr;
}

} // namespace

Eigenstructure eigenstructure(const Matrix& M, const EigenstructureOptions& opt) {
    require_square(M, "eigenstructure input");
    require_finite(M, "eigenstructure input");

    Eigen::ComplexSchur<Matrix> schur(M, /*computeU=*/false);
    if (schur.info() != Eigen::Success)
        throw NumericalBreakdown("complex Schur iteration failed to converge");
    const Vector eigs = schur.matrixT().diagonal();

    double rho = 0.0;
    for (Eigen::Index i = 0; i < eigs.size(); ++i) rho = std::max(rho, std::abs(eigs(i)));
    const double dist = opt.cluster_tol * (1.0 + rho);

    Eigenstructure out;
    out.cluster_tolerance = dist;
    for (const auto& group : cluster_indices(eigs, dist)) {
        EigenCluster c;
        Complex sum = 0.0;
        for (int idx : group) sum += eigs(idx);
        c.value = sum / static_cast<double>(group.size());
        c.algebraic_mult = static_cast<int>(group.size());
        c.weyr = weyr_characteristic(M, c.value, c.algebraic_mult, opt.rank_tol);
        out.clusters.push_back(std::move(c));
    }
    std::sort(out.clusters.begin(), out.clusters.end(), [](const auto& a, const auto& b) {
        if (a.value.real() != b.value.real()) return a.value.real() < b.value.real();
        return a.value.imag() < b.value.imag();
    });
    return out;
}

bool region_contains(const Region& region, Complex z) {
    if (const auto* iv = std::get_if<Interval>(&region))
        return iv->lo <= z.real() && z.real() <= iv->hi;
    const auto& disk = std::get<Disk>(region);
    return std::abs(z - disk.center) < disk.radius;
}

double region_boundary_distance(const Region& region, Complex z) {
    if (const auto* iv = std::get_if<Interval>(&region))
        return std::min(std::abs(z.real() - iv->lo), std::abs(z.real() - iv->hi));
    const auto& disk = std::get<Disk>(region);
    return std::abs(std::abs(z - disk.center) - disk.radius);
}

Matrix resolvent(const Matrix& M, Complex lambda, const ResolventOptions& opt) {
    require_square(M, "resolvent input");
    require_finite(M, "resolvent input");
    const Eigen::Index n = M.rows();
    const Matrix shifted = M - lambda * Matrix::Identity(n, n);
    Eigen::JacobiSVD<Matrix> svd(shifted, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const auto& s = svd.singularValues();
    const double smax = s(0);
    const double smin = s(n - 1);
    if (smax <= 0.0 || smin < opt.guard_tol * smax)
        throw SpectrumHit("lambda within the spectral guard band: sigma_min = " +
                          std::to_string(smin));
    Vector inv(n);
    for (Eigen::Index i = 0; i < n; ++i) inv(i) = Complex(1.0 / s(i), 0.0);
    return svd.matrixV() * inv.asDiagonal() * svd.matrixU().adjoint();
}

double resolvent_norm(const Matrix& M, Complex lambda, const ResolventOptions& opt) {
    require_square(M, "resolvent input");
    const Eigen::Index n = M.rows();
    const Matrix shifted = M - lambda * Matrix::Identity(n, n);
    Eigen::JacobiSVD<Matrix> svd(shifted);
    const auto& s = svd.singularValues();
    const double smax = s(0);
    const double smin = s(n - 1);
    if (smax <= 0.0 || smin < opt.guard_tol * smax)
        throw SpectrumHit("lambda within the spectral guard band: sigma_min = " +
                          std::to_string(smin));
    return 1.0 / smin;
}

namespace {

// Swaps the adjacent diagonal entries T(k,k), T(k+1,k+1) of an upper
// triangular T by a unitary similarity, updating Q alongside.
void swap_adjacent(Matrix& T, Matrix& Q, Eigen::Index k) {
    const Complex a = T(k, k);
    const Complex b = T(k, k + 1);
    const Complex c = T(k + 1, k + 1);
    // Eigenvector of [[a, b], [0, c]] for eigenvalue c; rotate it to e1.
    Complex v1 = b;
    Complex v2 = c - a;
    const double norm = std::sqrt(std::norm(v1) + std::norm(v2));
    if (norm == 0.0) return; // identical entries; nothing to do
    v1 /= norm;
    v2 /= norm;
    Eigen::Matrix2cd G;
    G << v1, -std::conj(v2), v2, std::conj(v1);
    T.block(0, k, k + 2, 2) = T.block(0, k, k + 2, 2) * G;
    T.block(k, k, 2, T.cols() - k) = G.adjoint() * T.block(k, k, 2, T.cols() - k);
    Q.middleCols(k, 2) = Q.middleCols(k, 2) * G;
    T(k + 1, k) = 0.0;
}

// X T22 - T11 X = T12 with both Tii upper triangular (forward column sweep).
Matrix solve_triangular_sylvester(const Matrix& T11, const Matrix& T22, const Matrix& T12) {
    const Eigen::Index s = T11.rows();
    const Eigen::Index t = T22.rows();
    Matrix X(s, t);
    for (Eigen::Index j = 0; j < t; ++j) {
        Vector rhs = T12.col(j);
        for (Eigen::Index k = 0; k < j; ++k) rhs -= X.col(k) * T22(k, j);
        // (T22(j,j) I - T11) x = rhs, upper triangular back substitution.
        for (Eigen::Index i = s - 1; i >= 0; --i) {
            Complex acc = rhs(i);
            for (Eigen::Index m = i + 1; m < s; ++m) acc += T11(i, m) * X(m, j);
            const Complex d = T22(j, j) - T11(i, i);
            if (std::abs(d) == 0.0)
                throw NumericalBreakdown("coincident eigenvalues across the region boundary");
            X(i, j) = acc / d;
        }
    }
    return X;
}

} // namespace

Matrix riesz_projection(const Matrix& M, const Region& region, const RieszOptions& opt) {
    require_square(M, "projection input");
    require_finite(M, "projection input");
    const Eigen::Index n = M.rows();

    Eigen::ComplexSchur<Matrix> schur(M, /*computeU=*/true);
    if (schur.info() != Eigen::Success)
        throw NumericalBreakdown("complex Schur iteration failed to converge");
    Matrix T = schur.matrixT();
    Matrix Q = schur.matrixU();

    double rho = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) rho = std::max(rho, std::abs(T(i, i)));
    const double guard = opt.boundary_guard_tol * (1.0 + rho);
    for (Eigen::Index i = 0; i < n; ++i)
        if (region_boundary_distance(region, T(i, i)) < guard)
            throw BoundaryHit("eigenvalue " + std::to_string(T(i, i).real()) + "+" +
                              std::to_string(T(i, i).imag()) +
                              "i within guard distance of the region boundary");

    std::vector<char> selected(n);
    Eigen::Index count = 0;
    for (Eigen::Index i = 0; i < n; ++i) {
        selected[i] = region_contains(region, T(i, i)) ? 1 : 0;
        count += selected[i];
    }
    if (count == 0) return Matrix::Zero(n, n);
    if (count == n) return Matrix::Identity(n, n);

    // Bubble every selected eigenvalue to the leading block.
    Eigen::Index front = 0;
    for (Eigen::Index k = 0; k < n; ++k) {
        if (!selected[k]) continue;
        for (Eigen::Index j = k; j > front; --j) {
            swap_adjacent(T, Q, j - 1);
            std::swap(selected[j - 1], selected[j]);
        }
        ++front;
    }

    const Eigen::Index s = count;
    const Matrix T11 = T.topLeftCorner(s, s);
    const Matrix T12 = T.topRightCorner(s, n - s);
    const Matrix T22 = T.bottomRightCorner(n - s, n - s);
    const Matrix X = solve_triangular_sylvester(T11, T22, T12);

    Matrix P_T = Matrix::Zero(n, n);
    P_T.topLeftCorner(s, s) = Matrix::Identity(s, s);
    P_T.topRightCorner(s, n - s) = -X;
    return Q * P_T * Q.adjoint();
}

Complex PseudospectrumGrid::point(int ix, int iy) const {
    const double re =
        nx > 1 ? rect.re_lo + (rect.re_hi - rect.re_lo) * ix / (nx - 1) : rect.re_lo;
    const double im =
        ny > 1 ? rect.im_lo + (rect.im_hi - rect.im_lo) * iy / (ny - 1) : rect.im_lo;
    return Complex(re, im);
}

PseudospectrumGrid pseudospectrum_grid(const Matrix& M, const Rectangle& rect, int nx, int ny) {
    require_square(M, "pseudospectrum input");
    require_finite(M, "pseudospectrum input");
    if (nx < 2 || ny < 2)
        throw ValidationError("grid resolution must be at least 2x2");
    if (!(rect.re_lo < rect.re_hi) || !(rect.im_lo < rect.im_hi))
        throw ValidationError("degenerate pseudospectrum rectangle");

    PseudospectrumGrid grid;
    grid.rect = rect;
    grid.nx = nx;
    grid.ny = ny;
    grid.sigma_min.resize(static_cast<size_t>(nx) * ny);
    const Eigen::Index n = M.rows();
    // Deterministic map over the grid: assembled row-major regardless of the
    // evaluation schedule.
    for (int iy = 0; iy < ny; ++iy)
        for (int ix = 0; ix < nx; ++ix) {
            const Complex z = grid.point(ix, iy);
            Eigen::JacobiSVD<Matrix> svd(M - z * Matrix::Identity(n, n));
            grid.sigma_min[static_cast<size_t>(iy) * nx + ix] =
                svd.singularValues()(n - 1);
        }
    return grid;
}

Matrix kernel_of_power(const Matrix& M, Complex lambda, int power, double rank_tol) {
    require_square(M, "kernel input");
    if (power < 1) throw ValidationError("kernel power must be >= 1");
    const Eigen::Index n = M.rows();
    const Matrix shifted = M - lambda * Matrix::Identity(n, n);
    Matrix P = shifted;
    for (int k = 1; k < power; ++k) P = P * shifted;
    // Same power-collapse gauge as the Weyr computation above.
    const double threshold =
        rank_tol * std::pow(operator_norm(shifted) + std::abs(lambda), power);
    Eigen::JacobiSVD<Matrix> svd(P, Eigen::ComputeFullV);
    const auto& s = svd.singularValues();
    Eigen::Index rank = 0;
    while (rank < s.size() && s(rank) > threshold) ++rank;
    return svd.matrixV().rightCols(n - rank);
}

} // namespace krein
