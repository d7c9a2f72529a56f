#include "hadamard/density.hpp"
#include "hadamard/errors.hpp"
#include "hadamard/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hadamard {

namespace {

// 4-node Gauss rule on [0,1]; enough for (linear rho) x (smooth weight) cells
const double kGl4Nodes[4] = {0.06943184420297371, 0.33000947820757187,
                             0.66999052179242813, 0.93056815579702629};
const double kGl4Weights[4] = {0.17392742256872693, 0.32607257743127307,
                               0.32607257743127307, 0.17392742256872693};

} // namespace

RadialDensity::RadialDensity(std::shared_ptr<const ModelManifold> m, std::vector<double> r_grid,
                             std::vector<double> values, double log_scale)
    : manifold_(std::move(m)), r_(std::move(r_grid)), rho_(std::move(values)),
      log_scale_(log_scale) {
    if (!manifold_) throw std::invalid_argument("RadialDensity: null manifold");
    if (r_.size() != rho_.size() || r_.size() < 2)
        throw std::invalid_argument("RadialDensity: need >= 2 matching nodes");
    for (std::size_t i = 0; i < r_.size(); ++i) {
        if (!(rho_[i] >= 0) || !std::isfinite(rho_[i]))
            throw std::invalid_argument("RadialDensity: values must be finite and >= 0");
        if (i > 0 && r_[i] < r_[i - 1])
            throw std::invalid_argument("RadialDensity: grid must be non-decreasing");
    }
    if (!(r_.front() >= 0)) throw std::invalid_argument("RadialDensity: negative radius");
    if (r_.back() > manifold_->r_max() * (1 + 1e-12))
        throw std::out_of_range("RadialDensity: grid beyond solved warp range");
}

double RadialDensity::log_density(std::size_t i) const {
    return rho_[i] > 0 ? std::log(rho_[i]) + log_scale_
                       : -std::numeric_limits<double>::infinity();
}

double RadialDensity::integral_against(const std::function<double(double)>& f) const {
    const int n = manifold_->dim();
    const double front = static_cast<double>(n) * manifold_->flat_unit_ball_volume();
    std::vector<double> cells(r_.size() - 1, 0.0);
    for (std::size_t i = 0; i + 1 < r_.size(); ++i) {
        const double a = r_[i], b = r_[i + 1];
        if (!(b > a)) continue; // jump node
        double acc = 0.0;
        for (int g = 0; g < 4; ++g) {
            const double t = kGl4Nodes[g];
            const double r = a + (b - a) * t;
            const double rho = rho_[i] + (rho_[i + 1] - rho_[i]) * t;
            if (!(rho > 0) || r <= 0) continue;
            // physical density x volume element in one exp; the exponent is
            // bounded by construction of the constructors' log_scale
            const double expo = std::log(rho) + log_scale_ + manifold_->log_volume_element(r);
            acc += kGl4Weights[g] * std::exp(std::min(expo, 700.0)) * f(r);
        }
        cells[i] = acc * (b - a);
    }
    return front * pairwise_sum(cells);
}

double RadialDensity::mass() const {
    if (cached_mass_ >= 0) return cached_mass_;
    cached_mass_ = integral_against([](double) { return 1.0; });
    return cached_mass_;
}

double RadialDensity::w1_to_pole() const {
    return integral_against([](double r) { return r; });
}

double RadialDensity::log_moment() const {
    return integral_against([](double r) { return std::log1p(r * r); });
}

void RadialDensity::normalize() {
    const double m = mass();
    if (!(m > 0) || !std::isfinite(m))
        throw numerical_error("RadialDensity: cannot normalize, mass = " + std::to_string(m));
    for (auto& v : rho_) v /= m;
    cached_mass_ = -1.0;
}

std::vector<double> RadialDensity::node_masses(const std::vector<double>& kernel_grid) const {
    // lump each cell's mass onto its two end nodes with linear shape weights,
    // then map onto the kernel grid by abscissa
    const int n = manifold_->dim();
    const double front = static_cast<double>(n) * manifold_->flat_unit_ball_volume();
    std::vector<double> own(r_.size(), 0.0);
    for (std::size_t i = 0; i + 1 < r_.size(); ++i) {
        const double a = r_[i], b = r_[i + 1];
        if (!(b > a)) continue;
        double to_lo = 0.0, to_hi = 0.0;
        for (int g = 0; g < 4; ++g) {
            const double t = kGl4Nodes[g];
            const double r = a + (b - a) * t;
            const double rho = rho_[i] + (rho_[i + 1] - rho_[i]) * t;
            if (!(rho > 0) || r <= 0) continue;
            const double expo = std::log(rho) + log_scale_ + manifold_->log_volume_element(r);
            const double contrib = kGl4Weights[g] * std::exp(std::min(expo, 700.0)) * (b - a);
            to_lo += contrib * (1 - t);
            to_hi += contrib * t;
        }
        own[i] += front * to_lo;
        own[i + 1] += front * to_hi;
    }

    std::vector<double> out(kernel_grid.size(), 0.0);
    std::size_t k = 0;
    for (std::size_t i = 0; i < r_.size(); ++i) {
        while (k + 1 < kernel_grid.size() &&
               std::abs(kernel_grid[k + 1] - r_[i]) <= std::abs(kernel_grid[k] - r_[i]))
            ++k;
        if (std::abs(kernel_grid[k] - r_[i]) > 1e-9 * std::max(1.0, r_[i]))
            throw std::invalid_argument(
                "RadialDensity: grid node not on kernel grid (r = " + std::to_string(r_[i]) + ")");
        out[k] += own[i];
    }
    return out;
}

std::vector<double> RadialDensity::cumulative_mass() const {
    const int n = manifold_->dim();
    const double front = static_cast<double>(n) * manifold_->flat_unit_ball_volume();
    std::vector<double> cum(r_.size(), 0.0);
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < r_.size(); ++i) {
        const double a = r_[i], b = r_[i + 1];
        if (b > a) {
            double cell = 0.0;
            for (int g = 0; g < 4; ++g) {
                const double t = kGl4Nodes[g];
                const double r = a + (b - a) * t;
                const double rho = rho_[i] + (rho_[i + 1] - rho_[i]) * t;
                if (!(rho > 0) || r <= 0) continue;
                const double expo =
                    std::log(rho) + log_scale_ + manifold_->log_volume_element(r);
                cell += kGl4Weights[g] * std::exp(std::min(expo, 700.0));
            }
            acc += front * cell * (b - a);
        }
        cum[i + 1] = acc;
    }
    return cum;
}

double RadialDensity::support_radius(double tail) const {
    const auto cum = cumulative_mass();
    const double target = (1.0 - tail) * mass();
    for (std::size_t i = 0; i < r_.size(); ++i)
        if (cum[i] >= target) return r_[i];
    return r_.back();
}

RadialDensity make_uniform_ball(std::shared_ptr<const ModelManifold> m, double R,
                                double grid_r_max, int nodes) {
    if (!(R > 0) || R > m->r_max() * (1 + 1e-12))
        throw std::out_of_range("make_uniform_ball: R outside (0, r_max]");
    if (!(grid_r_max >= R)) throw std::invalid_argument("make_uniform_ball: grid must cover R");
    const double log_vol = m->log_ball_volume(R);

    std::vector<double> r, v;
    r.reserve(nodes + 2);
    v.reserve(nodes + 2);
    bool jump_done = false;
    for (int i = 0; i < nodes; ++i) {
        const double x = grid_r_max * i / (nodes - 1);
        if (!jump_done && x >= R - 1e-12 * grid_r_max) {
            r.push_back(R);
            v.push_back(1.0);
            r.push_back(R);
            v.push_back(0.0);
            jump_done = true;
            if (x <= R) continue; // grid node coincides with (or sits just below) R
        }
        r.push_back(x);
        v.push_back(jump_done ? 0.0 : 1.0);
    }
    if (!jump_done) {
        r.push_back(R);
        v.push_back(1.0);
        r.push_back(R);
        v.push_back(0.0);
    }
    RadialDensity rho(std::move(m), std::move(r), std::move(v), -log_vol);
    rho.normalize(); // remove the quadrature-vs-closed-form drift
    return rho;
}

RadialDensity make_radial_gaussian(std::shared_ptr<const ModelManifold> m, double s,
                                   double grid_r_max, int nodes) {
    if (!(s > 0)) throw std::invalid_argument("make_radial_gaussian: s must be > 0");
    if (!(grid_r_max > 0) || grid_r_max > m->r_max() * (1 + 1e-12))
        throw std::out_of_range("make_radial_gaussian: grid beyond solved warp");
    std::vector<double> r(nodes), v(nodes);
    // shift the exponent so the peak of the mass integrand is O(1)
    double log_peak = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < nodes; ++i) {
        r[i] = grid_r_max * i / (nodes - 1);
        const double lw = r[i] > 0 ? m->log_volume_element(r[i])
                                   : -std::numeric_limits<double>::infinity();
        log_peak = std::max(log_peak, -r[i] * r[i] / (2 * s * s) + lw);
    }
    for (int i = 0; i < nodes; ++i) {
        const double expo = -r[i] * r[i] / (2 * s * s) - log_peak;
        v[i] = std::exp(std::max(expo, -745.0));
        if (expo < -700) v[i] = 0.0; // keep true zeros exact
    }
    RadialDensity rho(std::move(m), std::move(r), std::move(v), log_peak);
    rho.normalize();
    return rho;
}

double mean_pairwise_distance(const RadialDensity& rho, const RadialKernelSet& k) {
    if (!k.has_distance()) throw state_error("mean_pairwise_distance: distance kernel missing");
    return k.quadratic_form_distance(rho.node_masses(k.grid()));
}

} // namespace hadamard
