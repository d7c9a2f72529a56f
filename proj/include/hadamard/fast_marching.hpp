#ifndef HADAMARD_FAST_MARCHING_HPP
#define HADAMARD_FAST_MARCHING_HPP

#include <vector>

namespace hadamard {

class ModelManifold;

/// First-order upwind fast marching for the eikonal equation
///     (dT/dr)^2 + (dT/dphi)^2 / psi(r)^2 = 1
/// on a uniform grid over [0, r_max] x [0, pi] with symmetry (Neumann)
/// boundaries at phi = 0 and phi = pi.  The r = 0 column is the pole, a
/// single logical point seeded with the exact radial distance; nodes within
/// a few cells of the source are seeded with the local metric distance so
/// the O(h) seeding error of a point source does not pollute the solve.
///
/// psi is capped at exp(300) internally: beyond that the angular term
/// underflows to zero and propagation degenerates to radial, which is the
/// correct limit for strongly curved models.
std::vector<double> fast_march(const ModelManifold& m, double source_r,
                               int nr, int nphi, double r_max);

} // namespace hadamard

#endif
