#include "hadamard/geometry.hpp"
#include "hadamard/errors.hpp"
#include "hadamard/fast_marching.hpp"
#include "hadamard/geodesic.hpp"
#include "hadamard/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hadamard {

ModelManifold::ModelManifold(int n, WarpSolution warp)
    : n_(n), warp_(std::make_shared<const WarpSolution>(std::move(warp))) {
    if (n < 2) throw std::invalid_argument("ModelManifold: dimension n >= 2 required");
    omega_n_ = std::pow(M_PI, 0.5 * n) / std::tgamma(0.5 * n + 1.0);
}

double ModelManifold::log_volume_element(double r) const {
    if (r == 0) return -std::numeric_limits<double>::infinity();
    return (n_ - 1) * warp_->log_warp(r);
}

double ModelManifold::volume_element(double r) const {
    if (r == 0) return 0.0;
    return std::exp(log_volume_element(r));
}

BallVolume ModelManifold::ball_volume(double R) const {
    if (!(R > 0) || R > r_max() * (1 + 1e-12))
        throw std::out_of_range("ball_volume: R outside (0, r_max]");
    const auto g = [this](double t) {
        return t > 0 ? (n_ - 1) * warp_->log_warp(t) : -std::numeric_limits<double>::infinity();
    };
    const double log_integral = log_integrate_exp(g, 0.0, std::min(R, r_max()), 1e-9);
    const double log_total = std::log(static_cast<double>(n_) * omega_n_) + log_integral;
    BallVolume out;
    out.log_value = log_total;
    out.overflowed = log_total > 700.0;
    out.value = out.overflowed ? std::numeric_limits<double>::infinity() : std::exp(log_total);
    return out;
}

double ModelManifold::jacobian_exp(double r) const {
    if (r == 0) return 1.0;
    if (!(r > 0) || r > r_max() * (1 + 1e-12))
        throw std::out_of_range("jacobian_exp: r outside [0, r_max]");
    return std::exp((n_ - 1) * warp_->log_stretch(std::min(r, r_max())));
}

double chord_lower_bound(double r1, double r2, double alpha) {
    const double c2 = r1 * r1 + r2 * r2 - 2 * r1 * r2 * std::cos(alpha);
    return std::sqrt(std::max(c2, 0.0));
}

double hyperbolic_law_of_cosines(double c, double r1, double r2, double alpha) {
    if (!(c > 0)) return chord_lower_bound(r1, r2, alpha);
    const double s = std::sqrt(c);
    // cosh(s d) = cosh(s r1) cosh(s r2) - sinh(s r1) sinh(s r2) cos(alpha);
    // evaluated in log-domain for large arguments.
    const double a = s * r1, b = s * r2;
    if (std::max(a, b) < 350.0) {
        const double ch = std::cosh(a) * std::cosh(b) - std::sinh(a) * std::sinh(b) * std::cos(alpha);
        return std::acosh(std::max(1.0, ch)) / s;
    }
    // large radii: cosh ~ sinh ~ e^x/2, d ~ r1 + r2 + log((1-cos)/2)/s
    const double one_minus_cos = std::max(1e-300, 1.0 - std::cos(alpha));
    return std::max(std::abs(r1 - r2), r1 + r2 + std::log(one_minus_cos / 2.0) / s);
}

double DistanceField::spacing_phi() const { return M_PI / (nphi - 1); }

double DistanceField::interpolate(double r, double phi) const {
    const double hr = spacing_r(), hp = spacing_phi();
    double fi = std::clamp(r / hr, 0.0, static_cast<double>(nr - 1));
    double fj = std::clamp(phi / hp, 0.0, static_cast<double>(nphi - 1));
    const int i = std::min(static_cast<int>(fi), nr - 2);
    const int j = std::min(static_cast<int>(fj), nphi - 2);
    const double tx = fi - i, ty = fj - j;
    return (1 - tx) * (1 - ty) * at(i, j) + tx * (1 - ty) * at(i + 1, j) +
           (1 - tx) * ty * at(i, j + 1) + tx * ty * at(i + 1, j + 1);
}

DistanceField distance_field(const ModelManifold& m, double r1, int nr, int nphi,
                             double r_max, bool estimate_error) {
    if (!(r_max > 0)) throw std::invalid_argument("distance_field: r_max must be > 0");
    DistanceField f;
    f.source_radius = r1;
    f.nr = nr;
    f.nphi = nphi;
    f.r_max = r_max;
    f.method = DistanceMethod::FastMarch;
    f.values = fast_march(m, r1, nr, nphi, r_max);
    f.error_estimate = 0.0;
    if (estimate_error) {
        // compare against a half-resolution solve on the shared nodes
        const int nr2 = (nr + 1) / 2, nphi2 = (nphi + 1) / 2;
        const auto coarse = fast_march(m, r1, nr2, nphi2, r_max);
        double worst = 0.0;
        for (int i = 0; i < nr2; ++i)
            for (int j = 0; j < nphi2; ++j) {
                const double r = r_max * i / (nr2 - 1);
                const double phi = M_PI * j / (nphi2 - 1);
                const double fine = f.interpolate(r, phi);
                worst = std::max(worst, std::abs(fine - coarse[static_cast<std::size_t>(i) * nphi2 + j]));
            }
        f.error_estimate = worst;
    }
    return f;
}

double distance(const ModelManifold& m, double r1, double r2, double alpha,
                DistanceMethod method, const DistanceOptions& opt) {
    if (!(r1 >= 0) || !(r2 >= 0) || r1 > m.r_max() || r2 > m.r_max())
        throw std::out_of_range("distance: radii outside [0, r_max]");
    if (!(alpha >= 0) || alpha > M_PI + 1e-12)
        throw std::invalid_argument("distance: alpha must lie in [0, pi]");
    alpha = std::min(alpha, M_PI);

    // canonical order makes d(r1,r2,.) = d(r2,r1,.) exact by construction
    double lo = std::min(r1, r2), hi = std::max(r1, r2);
    if (alpha == 0.0 || lo == 0.0) return hi - lo == 0.0 ? 0.0 : (lo == 0.0 ? hi : hi - lo);
    if (alpha == M_PI) return lo + hi;

    const double chord = chord_lower_bound(lo, hi, alpha);
    double d;
    if (method == DistanceMethod::FastMarch) {
        const double pad = 3.0 * hi / (opt.fmm_nr - 1);
        const double domain = std::min(m.r_max(), hi + pad);
        const auto field = distance_field(m, lo, opt.fmm_nr, opt.fmm_nphi, domain, false);
        d = field.interpolate(hi, alpha);
    } else {
        d = geodesic_length_bvp(m, lo, hi, alpha, opt.bvp_segments, opt.bvp_grad_tol);
    }
    // comparison brackets that hold for the exact distance; projecting into
    // them can only reduce the numerical error
    return std::clamp(d, chord, lo + hi);
}

} // namespace hadamard
