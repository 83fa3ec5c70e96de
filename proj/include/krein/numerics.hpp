#pragma once

#include <optional>
#include <variant>
#include <vector>

#include "krein/matrix.hpp"

namespace krein {

/// One clustered eigenvalue with its multiplicity data.
struct EigenCluster {
    Complex value;
    int algebraic_mult = 0;
    /// weyr[k-1] = dim ker (M - value)^k - dim ker (M - value)^(k-1).
    /// Non-increasing; sums to algebraic_mult; length = largest Jordan block.
    std::vector<int> weyr;

    int geometric_mult() const { return weyr.empty() ? 0 : weyr.front(); }
    int weyr_length() const { return static_cast<int>(weyr.size()); }
    bool semisimple() const { return weyr.size() <= 1; }
};

struct Eigenstructure {
    std::vector<EigenCluster> clusters; // sorted by (Re, Im) of value
    double cluster_tolerance = 0.0;     // absolute merge distance actually used

    int dimension() const;
    double spectral_radius() const;
};

struct EigenstructureOptions {
    double cluster_tol = 1e-8; // scaled by (1 + spectral radius)
    double rank_tol = 1e-9;    // relative threshold for kernel dimensions
};

/// Eigenvalue clustering plus per-cluster Weyr characteristics.
/// Clustering is single-linkage with absolute distance cluster_tol * (1 + rho(M));
/// kernel dimensions come from rank-revealing SVDs of the shifted powers.
Eigenstructure eigenstructure(const Matrix& M, const EigenstructureOptions& opt = {});

/// Regions of the complex plane used to select spectral subsets.
/// An Interval selects the vertical strip lo <= Re z <= hi; for operators
/// that are selfadjoint in an indefinite inner product the spectrum is
/// symmetric with respect to the real axis, so the strip keeps conjugate
/// pairs together and interval projections stay compatible with the form.
struct Interval {
    double lo = 0.0, hi = 0.0;
};
struct Disk {
    Complex center;
    double radius = 0.0;
};
using Region = std::variant<Interval, Disk>;

bool region_contains(const Region& region, Complex z);
double region_boundary_distance(const Region& region, Complex z);

struct ResolventOptions {
    double guard_tol = 1e-12; // SpectrumHit when sigma_min < guard_tol * sigma_max
};

/// (M - lambda)^{-1} via SVD.  Throws SpectrumHit inside the guard band.
Matrix resolvent(const Matrix& M, Complex lambda, const ResolventOptions& opt = {});

/// ||(M - lambda)^{-1}|| = 1 / sigma_min(M - lambda), with the same guard.
double resolvent_norm(const Matrix& M, Complex lambda, const ResolventOptions& opt = {});

struct RieszOptions {
    double boundary_guard_tol = 1e-8; // scaled by (1 + rho(M))
};

/// Spectral (Riesz) projection onto the root subspaces of the eigenvalues
/// inside `region`, computed from a reordered Schur form and a triangular
/// Sylvester solve (no contour quadrature).  Throws BoundaryHit when an
/// eigenvalue sits within the guard distance of the region boundary.
Matrix riesz_projection(const Matrix& M, const Region& region, const RieszOptions& opt = {});

struct Rectangle {
    double re_lo = 0.0, re_hi = 0.0, im_lo = 0.0, im_hi = 0.0;
};

struct PseudospectrumGrid {
    Rectangle rect;
    int nx = 0, ny = 0;
    std::vector<double> sigma_min; // row-major: iy outer, ix inner

    double at(int ix, int iy) const { return sigma_min[static_cast<size_t>(iy) * nx + ix]; }
    Complex point(int ix, int iy) const;
};

/// sigma_min(M - z) sampled over an nx-by-ny grid; deterministic ordering.
PseudospectrumGrid pseudospectrum_grid(const Matrix& M, const Rectangle& rect, int nx, int ny);

/// Orthonormal basis of ker((M - lambda)^power).
Matrix kernel_of_power(const Matrix& M, Complex lambda, int power, double rank_tol = 1e-9);

} // namespace krein
