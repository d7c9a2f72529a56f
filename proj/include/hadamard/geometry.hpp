#ifndef HADAMARD_GEOMETRY_HPP
#define HADAMARD_GEOMETRY_HPP

#include "hadamard/warp.hpp"

#include <memory>
#include <vector>

namespace hadamard {

/// Result of a geodesic-ball volume computation.  For strongly curved models
/// the volume overflows double range; the log is always valid and
/// `overflowed` flags that `value` is +inf.
struct BallVolume {
    double value;
    double log_value;
    bool overflowed;
};

/// The n-dimensional rotationally symmetric model manifold
///     dr^2 + psi(r)^2 (round unit-sphere metric),
/// whose radial sectional curvature is exactly -c(r).  All geometry (volume
/// element, ball volumes, exp-map Jacobian, distances) derives from the warp
/// solution.
class ModelManifold {
public:
    ModelManifold(int n, WarpSolution warp);

    int dim() const { return n_; }
    const WarpSolution& warp() const { return *warp_; }
    double r_max() const { return warp_->theta_max(); }
    /// Volume of the unit ball in flat n-space.
    double flat_unit_ball_volume() const { return omega_n_; }

    /// det A(r) = psi(r)^{n-1}; behaves like r^{n-1} near the pole.
    double volume_element(double r) const;
    double log_volume_element(double r) const;

    /// |B_R(o)| = n omega_n int_0^R psi^{n-1}, adaptive quadrature with
    /// relative error ~1e-9, computed in log-domain so growth beyond double
    /// range only flags the value as overflowed.
    BallVolume ball_volume(double R) const;
    double log_ball_volume(double R) const { return ball_volume(R).log_value; }

    /// Jacobian of exp_o at radius r: (psi(r)/r)^{n-1} = exp((n-1) H(r)) >= 1.
    double jacobian_exp(double r) const;

private:
    int n_;
    std::shared_ptr<const WarpSolution> warp_;
    double omega_n_;
};

enum class DistanceMethod { FastMarch, BVPRefined };

struct DistanceOptions {
    int fmm_nr = 512;
    int fmm_nphi = 512;
    int bvp_segments = 200; // doubled once for Richardson extrapolation
    double bvp_grad_tol = 1e-12;
};

/// Geodesic distance between the points at radii r1, r2 with angular
/// separation alpha in [0, pi].  Rotational symmetry confines the geodesic
/// to the 2-surface dr^2 + psi(r)^2 dphi^2, where either a first-order
/// upwind eikonal solve (FastMarch) or a relaxed polyline geodesic
/// (BVPRefined, relative error ~1e-6) computes it.  Radial and antipodal
/// configurations are exact.  The result always respects the comparison
/// brackets chord <= d <= r1 + r2.
double distance(const ModelManifold& m, double r1, double r2, double alpha,
                DistanceMethod method = DistanceMethod::BVPRefined,
                const DistanceOptions& opt = {});

/// One eikonal solve from the source radius r1: d(r1, r, phi) on a regular
/// (r, phi) grid over [0, r_max] x [0, pi].
struct DistanceField {
    double source_radius;
    int nr, nphi;
    double r_max;                // phi always spans [0, pi]
    std::vector<double> values;  // row-major, index = i*nphi + j
    DistanceMethod method;
    double error_estimate;

    double spacing_r() const { return r_max / (nr - 1); }
    double spacing_phi() const;
    double at(int i, int j) const { return values[static_cast<std::size_t>(i) * nphi + j]; }
    /// Bilinear interpolation; clamps to the grid.
    double interpolate(double r, double phi) const;
};

DistanceField distance_field(const ModelManifold& m, double r1, int nr, int nphi,
                             double r_max, bool estimate_error = true);

/// Euclidean chord lower bound sqrt(r1^2 + r2^2 - 2 r1 r2 cos alpha); the
/// comparison-theorem floor for any Cartan-Hadamard distance.
double chord_lower_bound(double r1, double r2, double alpha);

/// Constant-curvature hyperbolic law-of-cosines distance at curvature -c.
double hyperbolic_law_of_cosines(double c, double r1, double r2, double alpha);

} // namespace hadamard

#endif
