#ifndef HADAMARD_GEODESIC_HPP
#define HADAMARD_GEODESIC_HPP

namespace hadamard {

class ModelManifold;

/// Length of the geodesic between (r1, 0) and (r2 cos alpha, r2 sin alpha)
/// on the 2-surface dr^2 + psi(r)^2 dphi^2, via a relaxed polyline.
///
/// The polyline lives in the exponential chart x = (r cos phi, r sin phi),
/// where the metric is g(x)(w,w) = (1-mu)(w.xhat)^2 + mu |w|^2 with
/// mu(r) = (psi(r)/r)^2; the chart is smooth through the pole, so
/// through-pole geodesics need no special casing.  Each segment uses the
/// metric at its midpoint; the discrete energy is minimized by L-BFGS and
/// the O(h^2) length error removed by one Richardson step (n and 2n
/// segments).
double geodesic_length_bvp(const ModelManifold& m, double r1, double r2, double alpha,
                           int segments, double grad_tol);

} // namespace hadamard

#endif
