#ifndef HADAMARD_DENSITY_HPP
#define HADAMARD_DENSITY_HPP

#include "hadamard/geometry.hpp"
#include "hadamard/pairwise.hpp"

#include <functional>
#include <memory>
#include <vector>

namespace hadamard {

/// Radial probability density on a model manifold, stored per Riemannian
/// volume (not per dr) at grid nodes and interpreted as piecewise linear in
/// between.  The physical density is value * exp(log_scale): the scale factor
/// keeps nodal values O(1) even when the normalizing ball volume is around
/// e^1000.  Jump discontinuities are represented by repeated abscissae
/// (zero-width cells), so a uniform ball is exact: constant value up to R, a
/// double node at R, zero beyond.
///
/// Radial symmetry makes the center-of-mass condition of the admissible
/// class hold identically; it is asserted by the odd-symmetry of the angular
/// quadrature rather than integrated.
class RadialDensity {
public:
    RadialDensity(std::shared_ptr<const ModelManifold> m, std::vector<double> r_grid,
                  std::vector<double> values, double log_scale = 0.0);

    const ModelManifold& manifold() const { return *manifold_; }
    std::shared_ptr<const ModelManifold> manifold_ptr() const { return manifold_; }
    const std::vector<double>& grid() const { return r_; }
    const std::vector<double>& values() const { return rho_; }
    double log_scale() const { return log_scale_; }
    /// log of the physical density at node i (-inf where the value is 0).
    double log_density(std::size_t i) const;

    /// n omega_n int rho psi^{n-1} dr; 1 within 1e-9 for constructed densities.
    double mass() const;
    /// First moment n omega_n int r rho psi^{n-1} dr = W1 distance to the
    /// pole Dirac (transport to a point costs the mean distance).
    double w1_to_pole() const;
    /// int log(1 + r^2) rho dvol, the log-moment the HLS inequality needs.
    double log_moment() const;
    /// Generic radial integral n omega_n int f(r) rho psi^{n-1} dr.
    double integral_against(const std::function<double(double)>& f) const;

    /// Node masses against the hat basis on `kernel_grid` (nodes with equal
    /// abscissae are lumped together); sums to mass().
    std::vector<double> node_masses(const std::vector<double>& kernel_grid) const;

    /// Divides values by mass(); makes mass() == 1 exactly (the quadrature
    /// is linear in the nodal values).
    void normalize();

    /// Cumulative mass at each grid node.
    std::vector<double> cumulative_mass() const;
    /// Smallest grid radius with cumulative mass >= (1 - tail) * mass().
    double support_radius(double tail = 1e-6) const;

private:
    std::shared_ptr<const ModelManifold> manifold_;
    std::vector<double> r_, rho_;
    double log_scale_ = 0.0;
    mutable double cached_mass_ = -1.0;
};

/// rho_R = 1/|B_R(o)| inside the ball, 0 outside, on `nodes` uniform cells
/// plus the exact jump node at R.
RadialDensity make_uniform_ball(std::shared_ptr<const ModelManifold> m, double R,
                                double grid_r_max, int nodes = 513);

/// Gaussian-in-distance profile rho ~ exp(-r^2/(2 s^2)) normalized against
/// the manifold volume element; normalization is done in log-domain so
/// rapidly growing volume cannot overflow.  The grid extends to grid_r_max
/// (the profile is truncated there; for fast-growing curvature the true
/// profile may not be normalizable on [0, inf), the truncated one always is).
RadialDensity make_radial_gaussian(std::shared_ptr<const ModelManifold> m, double s,
                                   double grid_r_max, int nodes = 513);

/// mean pairwise distance iint d(x,y) rho(x) rho(y) dx dy through the
/// distance kernel of `k` (throws state_error if `k` lacks it).
double mean_pairwise_distance(const RadialDensity& rho, const RadialKernelSet& k);

} // namespace hadamard

#endif
