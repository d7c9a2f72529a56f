#include "hadamard/energy.hpp"
#include "hadamard/errors.hpp"
#include "hadamard/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace hadamard {

// --- InteractionPotential ---

InteractionPotential InteractionPotential::zero() {
    return InteractionPotential(Kind::Zero, 0, 0);
}

InteractionPotential InteractionPotential::power(double a, double p) {
    if (!(a > 0) || !(p > 0))
        throw std::invalid_argument("InteractionPotential: power requires a, p > 0");
    return InteractionPotential(Kind::Power, a, p);
}

InteractionPotential InteractionPotential::exp_growth(double a, double b) {
    if (!(a > 0) || !(b > 0))
        throw std::invalid_argument("InteractionPotential: exp_growth requires a, b > 0");
    return InteractionPotential(Kind::ExpGrowth, a, b);
}

InteractionPotential InteractionPotential::log_plus(double a) {
    if (!(a > 0)) throw std::invalid_argument("InteractionPotential: log_plus requires a > 0");
    return InteractionPotential(Kind::LogPlus, a, 0);
}

InteractionPotential InteractionPotential::tabulated(std::vector<double> nodes,
                                                     std::vector<double> values) {
    if (nodes.size() != values.size() || nodes.size() < 2)
        throw std::invalid_argument("InteractionPotential: tabulated needs >= 2 matching nodes");
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!(values[i] >= 0)) throw std::invalid_argument("InteractionPotential: h >= 0 required");
        if (i > 0 && values[i] < values[i - 1] - 1e-12)
            throw std::invalid_argument("InteractionPotential: h must be non-decreasing");
    }
    InteractionPotential h(Kind::Tabulated, 0, 0);
    auto slopes = pchip_slopes(nodes, values);
    h.table_ = std::make_shared<CubicHermiteSeries>(std::move(nodes), std::move(values),
                                                    std::move(slopes));
    return h;
}

double InteractionPotential::operator()(double theta) const {
    if (!(theta >= 0)) throw std::invalid_argument("InteractionPotential: theta >= 0 required");
    switch (kind_) {
        case Kind::Zero:      return 0.0;
        case Kind::Power:     return a_ * std::pow(theta, b_);
        case Kind::ExpGrowth: return a_ * std::expm1(b_ * theta);
        case Kind::LogPlus:   return a_ * std::log1p(theta);
        case Kind::Tabulated: {
            const auto& x = table_->abscissae();
            if (theta > x.back() * (1 + 1e-12))
                throw std::out_of_range("InteractionPotential: theta beyond tabulated range");
            return std::max(0.0, (*table_)(std::min(theta, x.back())));
        }
    }
    return 0.0;
}

std::string InteractionPotential::describe() const {
    char buf[96];
    switch (kind_) {
        case Kind::Zero:      return "zero";
        case Kind::Power:     std::snprintf(buf, sizeof buf, "power(a=%g, p=%g)", a_, b_); break;
        case Kind::ExpGrowth: std::snprintf(buf, sizeof buf, "exp_growth(a=%g, b=%g)", a_, b_); break;
        case Kind::LogPlus:   std::snprintf(buf, sizeof buf, "log_plus(a=%g)", a_); break;
        case Kind::Tabulated:
            std::snprintf(buf, sizeof buf, "tabulated(%zu nodes)", table_->abscissae().size());
            break;
    }
    return buf;
}

bool InteractionPotential::self_convex() const {
    switch (kind_) {
        case Kind::Zero:      return true;
        case Kind::Power:     return b_ >= 1.0;
        case Kind::ExpGrowth: return true;
        case Kind::LogPlus:   return false;
        case Kind::Tabulated: {
            const auto& x = table_->abscissae();
            double prev_slope = -std::numeric_limits<double>::infinity();
            for (std::size_t i = 1; i < x.size(); ++i) {
                const double s = ((*table_)(x[i]) - (*table_)(x[i - 1])) / (x[i] - x[i - 1]);
                if (s < prev_slope - 1e-10 * std::max(1.0, std::abs(s))) return false;
                prev_slope = s;
            }
            return true;
        }
    }
    return false;
}

void InteractionPotential::attach_minorant(InteractionPotential phi, double check_theta_max) {
    // validate: phi convex and phi <= h on a sampled grid
    const int kSamples = 1024;
    double prev_slope = -std::numeric_limits<double>::infinity();
    double prev_val = phi(0.0);
    for (int i = 1; i <= kSamples; ++i) {
        const double t = check_theta_max * i / kSamples;
        const double val = phi(t);
        if (val > (*this)(t) + 1e-9 * std::max(1.0, val))
            throw std::invalid_argument("attach_minorant: phi exceeds h at theta=" +
                                        std::to_string(t));
        const double slope = (val - prev_val) / (check_theta_max / kSamples);
        if (slope < prev_slope - 1e-7 * std::max(1.0, std::abs(slope)))
            throw std::invalid_argument("attach_minorant: phi is not convex near theta=" +
                                        std::to_string(t));
        prev_slope = slope;
        prev_val = val;
    }
    minorant_ = std::make_shared<const InteractionPotential>(std::move(phi));
}

std::function<double(double)> InteractionPotential::convex_minorant(double theta_max) const {
    if (minorant_) {
        auto phi = minorant_;
        return [phi](double t) { return (*phi)(t); };
    }
    if (self_convex()) {
        auto self = *this;
        return [self](double t) { return self(t); };
    }
    // lower convex hull of the sampled graph: the largest convex minorant of
    // the sampled h on [0, theta_max]
    const int kSamples = 4096;
    std::vector<double> xs(kSamples + 1), ys(kSamples + 1);
    for (int i = 0; i <= kSamples; ++i) {
        xs[i] = theta_max * i / kSamples;
        ys[i] = (*this)(xs[i]);
    }
    std::vector<int> hull;
    for (int i = 0; i <= kSamples; ++i) {
        while (hull.size() >= 2) {
            const int a = hull[hull.size() - 2], b = hull.back();
            // drop b if it lies above segment (a, i)
            const double cross = (xs[b] - xs[a]) * (ys[i] - ys[a]) -
                                 (ys[b] - ys[a]) * (xs[i] - xs[a]);
            if (cross <= 0) hull.pop_back();
            else break;
        }
        hull.push_back(i);
    }
    std::vector<double> hx(hull.size()), hy(hull.size());
    for (std::size_t k = 0; k < hull.size(); ++k) {
        hx[k] = xs[hull[k]];
        hy[k] = ys[hull[k]];
    }
    return [hx = std::move(hx), hy = std::move(hy)](double t) {
        const std::size_t i = locate_interval(hx, t);
        const double w = (t - hx[i]) / (hx[i + 1] - hx[i]);
        return hy[i] + w * (hy[i + 1] - hy[i]);
    };
}

// --- EnergyEvaluator ---

EnergyEvaluator::EnergyEvaluator(std::shared_ptr<const ModelManifold> m,
                                 std::vector<double> radial_grid, InteractionPotential h)
    : EnergyEvaluator(std::move(m), std::move(radial_grid), std::move(h), Config()) {}

EnergyEvaluator::EnergyEvaluator(std::shared_ptr<const ModelManifold> m,
                                 std::vector<double> radial_grid, InteractionPotential h,
                                 const Config& cfg)
    : manifold_(std::move(m)), grid_(std::move(radial_grid)), h_(std::move(h)) {
    PairwiseRequest req;
    req.potentials.push_back([this](double d) { return h_(d); });
    if (cfg.inequality_kernels) {
        req.distance = true;
        req.log_distance = true;
        req.log_chord = true;
        req.stretch = true;
    }
    kernels_ = std::make_unique<RadialKernelSet>(*manifold_, grid_, req, cfg.pairwise);
    if (cfg.error_companion) {
        PairwiseConfig half = cfg.pairwise;
        half.alpha_nodes = std::max(8, cfg.pairwise.alpha_nodes / 2);
        half.fmm_nr = std::max(33, cfg.pairwise.fmm_nr / 2 + 1);
        half.fmm_nphi = std::max(17, cfg.pairwise.fmm_nphi / 2 + 1);
        PairwiseRequest req_half;
        req_half.potentials.push_back([this](double d) { return h_(d); });
        coarse_ = std::make_unique<RadialKernelSet>(*manifold_, grid_, req_half, half);
    }
}

double EnergyEvaluator::entropy(const RadialDensity& rho) const {
    // per-cell Gauss on rho log rho; rho is piecewise linear, cells where it
    // vanishes contribute 0 (0 log 0 = 0)
    static const double kNodes[8] = {0.019855071751231856, 0.101666761293186630,
                                     0.237233795041835507, 0.408282678752175098,
                                     0.591717321247824902, 0.762766204958164493,
                                     0.898333238706813370, 0.980144928248768144};
    static const double kWeights[8] = {0.050614268145188130, 0.111190517226687235,
                                       0.156853322938943644, 0.181341891689180991,
                                       0.181341891689180991, 0.156853322938943644,
                                       0.111190517226687235, 0.050614268145188130};
    const auto& r = rho.grid();
    const auto& v = rho.values();
    const double ls = rho.log_scale();
    const int n = manifold_->dim();
    const double front = static_cast<double>(n) * manifold_->flat_unit_ball_volume();
    std::vector<double> cells(r.size() - 1, 0.0);
    for (std::size_t i = 0; i + 1 < r.size(); ++i) {
        const double a = r[i], b = r[i + 1];
        if (!(b > a)) continue;
        double acc = 0.0;
        for (int g = 0; g < 8; ++g) {
            const double t = kNodes[g];
            const double rr = a + (b - a) * t;
            const double val = v[i] + (v[i + 1] - v[i]) * t;
            if (!(val > 0) || rr <= 0) continue;
            const double log_rho = std::log(val) + ls;
            const double expo = log_rho + manifold_->log_volume_element(rr);
            acc += kWeights[g] * std::exp(std::min(expo, 700.0)) * log_rho;
        }
        cells[i] = acc * (b - a);
    }
    return front * pairwise_sum(cells);
}

double EnergyEvaluator::interaction(const RadialDensity& rho) const {
    const auto masses = rho.node_masses(grid_);
    return 0.5 * kernels_->quadratic_form_potential(0, masses);
}

double EnergyEvaluator::interaction_error_estimate(const RadialDensity& rho) const {
    if (!coarse_) return 0.0;
    const auto masses = rho.node_masses(grid_);
    const double fine = 0.5 * kernels_->quadratic_form_potential(0, masses);
    const double rough = 0.5 * coarse_->quadratic_form_potential(0, masses);
    return std::abs(fine - rough);
}

EnergyBreakdown EnergyEvaluator::free_energy(const RadialDensity& rho) const {
    EnergyBreakdown out;
    out.entropy = entropy(rho);
    out.interaction = interaction(rho);
    out.total = out.entropy + out.interaction;
    out.quadrature_error = interaction_error_estimate(rho) + 1e-12 * std::abs(out.entropy);
    return out;
}

std::vector<double> EnergyEvaluator::convolve_masses(const std::vector<double>& masses) const {
    return kernels_->apply_potential(0, masses);
}

std::vector<double> EnergyEvaluator::convolve(const RadialDensity& rho) const {
    return convolve_masses(rho.node_masses(grid_));
}

double EnergyEvaluator::mean_pairwise_distance(const RadialDensity& rho) const {
    if (!kernels_->has_distance())
        throw state_error("EnergyEvaluator: built without inequality kernels");
    return kernels_->quadratic_form_distance(rho.node_masses(grid_));
}

HlsGapReport EnergyEvaluator::hls_gap(const RadialDensity& rho) const {
    if (!kernels_->has_log_distance())
        throw state_error("EnergyEvaluator: built without inequality kernels");
    const double lm = rho.log_moment();
    if (!std::isfinite(lm))
        throw std::invalid_argument("hls_gap: log-moment of the density diverges");
    const int n = manifold_->dim();
    const auto masses = rho.node_masses(grid_);
    const auto& w = manifold_->warp();

    HlsGapReport rep;
    rep.entropy_term = entropy(rho);
    rep.stretch_term =
        rho.integral_against([&w](double r) { return r > 0 ? w.log_stretch(r) : 0.0; });
    rep.log_pair_term = kernels_->quadratic_form_log(masses);
    const double log_chord_term = kernels_->quadratic_form_log_chord(masses);
    rep.gap = rep.entropy_term / n + (n - 1.0) / n * rep.stretch_term + rep.log_pair_term;
    rep.flat_gap = rep.entropy_term / n + (n - 1.0) / n * rep.stretch_term + log_chord_term;
    rep.distance_term = rep.log_pair_term - log_chord_term;
    return rep;
}

CriterionVerdict EnergyEvaluator::check_jensen(const RadialDensity& rho) const {
    if (!kernels_->has_stretch())
        throw state_error("EnergyEvaluator: built without inequality kernels");
    const auto masses = rho.node_masses(grid_);
    const auto& w = manifold_->warp();
    const double lhs = kernels_->quadratic_form_stretch(masses);
    const double rhs =
        rho.integral_against([&w](double r) { return r > 0 ? w.log_stretch(r) : 0.0; });

    CriterionVerdict out;
    out.condition_id = "jensen_stretch";
    out.probes.emplace_back(0.0, lhs);
    out.probes.emplace_back(1.0, rhs);
    out.trend = lhs - rhs;
    out.verdict = lhs >= rhs - 1e-8 * std::abs(rhs) ? Verdict::Satisfied : Verdict::Violated;
    char buf[96];
    std::snprintf(buf, sizeof buf, "iint H(d) = %.9g vs int H(theta) = %.9g", lhs, rhs);
    out.note = buf;
    return out;
}

CriterionVerdict check_coercivity(const std::vector<std::pair<double, double>>& w1_energy) {
    if (w1_energy.size() < 5)
        throw std::invalid_argument("check_coercivity: need at least 5 family members");
    auto pts = w1_energy;
    std::sort(pts.begin(), pts.end());

    // lower convex hull over (W1, E)
    std::vector<std::pair<double, double>> hull;
    for (const auto& p : pts) {
        while (hull.size() >= 2) {
            const auto& a = hull[hull.size() - 2];
            const auto& b = hull.back();
            const double cross = (b.first - a.first) * (p.second - a.second) -
                                 (b.second - a.second) * (p.first - a.first);
            if (cross <= 0) hull.pop_back();
            else break;
        }
        hull.push_back(p);
    }

    CriterionVerdict out;
    out.condition_id = "coercivity_w1";
    out.probes = pts;
    const double target = (2.0 - std::sqrt(2.0)) / 2.0 - 0.05;
    double slope;
    if (hull.size() >= 2) {
        const auto& a = hull[hull.size() - 2];
        const auto& b = hull.back();
        slope = (b.second - a.second) / (b.first - a.first);
    } else {
        slope = 0.0;
    }
    out.trend = slope;
    char buf[96];
    std::snprintf(buf, sizeof buf, "envelope tail slope %.4g vs target %.4g", slope, target);
    out.note = buf;
    if (slope >= target) out.verdict = Verdict::Satisfied;
    else if (slope < 0) out.verdict = Verdict::Violated;
    else out.verdict = Verdict::Inconclusive;
    return out;
}

CriterionVerdict check_coercivity(const EnergyEvaluator& ev,
                                  const std::vector<RadialDensity>& family) {
    std::vector<std::pair<double, double>> pts;
    pts.reserve(family.size());
    for (const auto& rho : family)
        pts.emplace_back(rho.w1_to_pole(), ev.free_energy(rho).total);
    return check_coercivity(pts);
}

} // namespace hadamard
