#include "hadamard/warp.hpp"
#include "hadamard/errors.hpp"
#include "hadamard/interp.hpp"
#include "hadamard/ode.hpp"
#include "hadamard/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace hadamard {

namespace {

struct Series {
    double a3, a4; // psi = theta (1 + a3 theta^2 + a4 theta^3)
    double poly(double t) const { return 1 + a3 * t * t + a4 * t * t * t; }
    double log_psi(double t) const { return std::log(t) + std::log1p(a3 * t * t + a4 * t * t * t); }
    double phi(double t) const { return 1.0 / t + (2 * a3 * t + 3 * a4 * t * t) / poly(t); }
    double stretch(double t) const { return std::log1p(a3 * t * t + a4 * t * t * t); }
};

Series make_series(double c0, double c1) { return Series{c0 / 6.0, c1 / 12.0}; }

} // namespace

WarpSolution::WarpSolution(CurvatureProfile profile, std::vector<double> theta,
                           std::vector<double> log_psi, std::vector<double> phi,
                           double theta_init, double c0, double c1)
    : profile_(std::move(profile)), theta_(std::move(theta)), logpsi_(std::move(log_psi)),
      phi_(std::move(phi)), theta_init_(theta_init), c0_(c0), c1_(c1) {
    if (theta_.size() < 2 || theta_.size() != logpsi_.size() || theta_.size() != phi_.size())
        throw std::invalid_argument("WarpSolution: inconsistent grid arrays");
}

void WarpSolution::require_in_range(double theta) const {
    if (!(theta > 0) || theta > theta_.back() * (1 + 1e-12))
        throw std::out_of_range("WarpSolution: theta outside solved range (0, theta_max]");
}

double WarpSolution::log_warp(double theta) const {
    require_in_range(theta);
    if (theta <= theta_init_) return make_series(c0_, c1_).log_psi(theta);
    theta = std::min(theta, theta_.back());
    const std::size_t i = locate_interval(theta_, theta);
    const double s0 = profile_(theta_[i]) - phi_[i] * phi_[i];
    const double s1 = profile_(theta_[i + 1]) - phi_[i + 1] * phi_[i + 1];
    return hermite_quintic(theta_[i], theta_[i + 1], logpsi_[i], logpsi_[i + 1],
                           phi_[i], phi_[i + 1], s0, s1, theta);
}

double WarpSolution::log_deriv(double theta) const {
    require_in_range(theta);
    if (theta <= theta_init_) return make_series(c0_, c1_).phi(theta);
    theta = std::min(theta, theta_.back());
    const std::size_t i = locate_interval(theta_, theta);
    const double s0 = profile_(theta_[i]) - phi_[i] * phi_[i];
    const double s1 = profile_(theta_[i + 1]) - phi_[i + 1] * phi_[i + 1];
    return hermite_cubic(theta_[i], theta_[i + 1], phi_[i], phi_[i + 1], s0, s1, theta);
}

double WarpSolution::log_stretch(double theta) const {
    if (theta == 0) return 0.0;
    require_in_range(theta);
    if (theta <= theta_init_) return make_series(c0_, c1_).stretch(theta);
    return log_warp(theta) - std::log(theta);
}

double WarpSolution::log_stretch_deriv(double theta) const {
    if (theta == 0) return 0.0;
    return log_deriv(theta) - 1.0 / theta;
}

double WarpSolution::growth_length(double theta) const {
    if (theta == 0) return 0.0;
    return 1.0 / log_deriv(theta);
}

WarpSolution solve_warp(const CurvatureProfile& profile, double theta_max,
                        const WarpOptions& opt) {
    if (!(opt.tol > 1e-14 && opt.tol < 1e-3))
        throw std::invalid_argument("solve_warp: tol must lie in (1e-14, 1e-3)");
    if (!(theta_max > opt.theta_init))
        throw std::invalid_argument("solve_warp: theta_max must exceed theta_init");
    if (theta_max > profile.max_theta())
        throw std::out_of_range("solve_warp: theta_max beyond profile range");

    const double c0 = profile(0.0);
    const double c1 = profile.derivative(0.0);
    const Series series = make_series(c0, c1);
    const double ti = opt.theta_init;

    RosenbrockSystem<2> sys;
    sys.rhs = [&profile](double t, const std::array<double, 2>& y, std::array<double, 2>& dy) {
        dy[0] = profile(t) - y[0] * y[0];
        dy[1] = y[0];
    };
    sys.jacobian = [&profile](double t, const std::array<double, 2>& y,
                              std::array<std::array<double, 2>, 2>& jac,
                              std::array<double, 2>& dfdt) {
        jac[0][0] = -2 * y[0];
        jac[0][1] = 0;
        jac[1][0] = 1;
        jac[1][1] = 0;
        dfdt[0] = profile.derivative(t);
        dfdt[1] = 0;
    };

    std::vector<double> theta{ti}, logpsi{series.log_psi(ti)}, phi{series.phi(ti)};
    const double log_psi_init = logpsi[0];

    OdeControl ctl;
    ctl.rel_tol = opt.tol;
    ctl.abs_tol = opt.tol * 1e-2;
    ctl.initial_step = ti * 1e-2;
    ctl.max_step = opt.max_step;
    ctl.step_scale_theta = opt.step_scale;

    std::array<double, 2> y{phi[0], 0.0};
    try {
        integrate_rosenbrock<2>(sys, ti, y, theta_max, ctl,
                                [&](double t, const std::array<double, 2>& yy,
                                    const std::array<double, 2>&) {
            if (!(yy[0] > 0) || !std::isfinite(yy[0]) || !std::isfinite(yy[1]))
                throw numerical_error("solve_warp: Phi left (0, inf) at theta=" + std::to_string(t));
            theta.push_back(t);
            phi.push_back(yy[0]);
            logpsi.push_back(log_psi_init + yy[1]);
        });
    } catch (const stiffness_error&) {
        throw;
    }
    return WarpSolution(profile, std::move(theta), std::move(logpsi), std::move(phi), ti, c0, c1);
}

CriterionVerdict check_exp_envelopes(const WarpSolution& w, double eps, double theta0) {
    if (!(eps > 0 && eps < 1)) throw std::invalid_argument("check_exp_envelopes: eps in (0,1)");
    if (!(theta0 >= w.theta_init()) || theta0 >= w.theta_max())
        throw std::invalid_argument("check_exp_envelopes: theta0 outside [theta_init, theta_max)");

    const auto& grid = w.grid();
    const auto& profile = w.profile();
    const auto sqrt_c = [&profile](double t) { return std::sqrt(profile(t)); };

    // Lower envelope requires the 3/2 growth condition.
    bool lower_ok = true;
    std::string lower_note;
    {
        const double lo = std::max(w.theta_init() * 10, w.theta_max() * 1e-3);
        auto probes = geometric_probes(lo, w.theta_max() * 0.999, 2.0);
        const auto c32 = check_c32(profile, probes);
        if (!c32.satisfied()) {
            lower_ok = false;
            lower_note = "lower envelope skipped (c32 " + std::string(to_string(c32.verdict)) + ")";
        }
    }

    CriterionVerdict out;
    out.condition_id = "exp_envelopes";
    const double base = w.log_warp(theta0);
    double integral = 0.0; // int_{theta0}^theta sqrt(c)
    double prev = theta0;
    double worst = 0.0;
    for (double t : grid) {
        if (t <= theta0) continue;
        integral += integrate(sqrt_c, prev, t, 1e-11);
        prev = t;
        const double lw = w.log_warp(t);
        const double slack = 1e-9 * std::max(1.0, std::abs(lw));
        const double upper_gap = base + (1 + eps) * integral + slack - lw;
        const double lower_gap = lower_ok ? lw - (base + (1 - eps) * integral - slack) : 0.0;
        const double gap = std::min(upper_gap, lower_gap);
        out.probes.emplace_back(t, gap);
        if (gap < worst) {
            worst = gap;
            if (gap < 0 && out.note.empty()) {
                char buf[96];
                std::snprintf(buf, sizeof buf, "first violation at theta=%.6g (gap %.3g)", t, gap);
                out.note = buf;
            }
        }
    }
    out.trend = worst;
    out.verdict = worst >= 0 ? Verdict::Satisfied : Verdict::Violated;
    if (worst >= 0) out.note = lower_ok ? "both envelopes hold" : lower_note;
    else if (!lower_ok) out.note += "; " + lower_note;
    return out;
}

double scan_envelope_theta0(const WarpSolution& w, double eps) {
    const auto& grid = w.grid();
    const std::size_t stride = std::max<std::size_t>(1, grid.size() / 64);
    for (std::size_t i = 0; i < grid.size() - 1; i += stride) {
        if (grid[i] < w.theta_init() * 10) continue;
        if (check_exp_envelopes(w, eps, grid[i]).satisfied()) return grid[i];
    }
    throw numerical_error("scan_envelope_theta0: no passing theta0 on this grid");
}

CriterionVerdict check_growth_length_limit(const WarpSolution& w) {
    CriterionVerdict out;
    out.condition_id = "sqrt_c_growth_length";
    const double lo = w.theta_max() / 10;
    double worst = 0.0;
    for (std::size_t i = 0; i < w.grid().size(); ++i) {
        const double t = w.grid()[i];
        if (t < lo) continue;
        const double dev = std::abs(std::sqrt(w.profile()(t)) / w.grid_phi()[i] - 1.0);
        out.probes.emplace_back(t, dev);
        worst = std::max(worst, dev);
    }
    out.trend = worst;
    out.verdict = worst < 0.05 ? Verdict::Satisfied : Verdict::Violated;
    char buf[64];
    std::snprintf(buf, sizeof buf, "max |sqrt(c)G - 1| = %.4g on last decade", worst);
    out.note = buf;
    return out;
}

CriterionVerdict check_linear_log_growth(const WarpSolution& w) {
    const double c0 = w.profile()(0.0);
    if (c0 > 0 && w.theta_max() < 20.0 / std::sqrt(c0))
        throw std::invalid_argument("check_linear_log_growth: theta_max < 20/sqrt(c(0))");
    CriterionVerdict out;
    out.condition_id = "linear_log_growth";
    const double target = std::sqrt(c0) * 0.98;
    const double lo = w.theta_max() / 10;
    double worst = std::numeric_limits<double>::infinity();
    for (double t : w.grid()) {
        if (t < lo) continue;
        const double ratio = w.log_stretch(t) / t;
        out.probes.emplace_back(t, ratio);
        worst = std::min(worst, ratio);
    }
    out.trend = worst;
    out.verdict = worst >= target ? Verdict::Satisfied : Verdict::Violated;
    char buf[96];
    std::snprintf(buf, sizeof buf, "min H/theta = %.6g vs 0.98*sqrt(c(0)) = %.6g", worst, target);
    out.note = buf;
    return out;
}

std::vector<std::pair<double, double>> solve_volume_riccati(
    const CurvatureProfile& profile, int n, double eps, double psi_eps,
    double theta_max, double tol) {
    if (n < 2) throw std::invalid_argument("solve_volume_riccati: n >= 2 required");
    if (!(psi_eps > 0)) throw std::invalid_argument("solve_volume_riccati: Psi(eps) must be > 0");
    if (!(eps > 0 && eps < theta_max))
        throw std::invalid_argument("solve_volume_riccati: need 0 < eps < theta_max");

    RosenbrockSystem<1> sys;
    const double nm1 = n - 1;
    sys.rhs = [&profile, nm1](double t, const std::array<double, 1>& y, std::array<double, 1>& dy) {
        dy[0] = nm1 * profile(t) - y[0] * y[0] / nm1;
    };
    sys.jacobian = [&profile, nm1](double t, const std::array<double, 1>& y,
                                   std::array<std::array<double, 1>, 1>& jac,
                                   std::array<double, 1>& dfdt) {
        jac[0][0] = -2 * y[0] / nm1;
        dfdt[0] = nm1 * profile.derivative(t);
    };

    OdeControl ctl;
    ctl.rel_tol = tol;
    ctl.abs_tol = tol;
    ctl.initial_step = std::min(1e-4, eps * 0.1);
    ctl.max_step = 0.05;

    std::vector<std::pair<double, double>> samples{{eps, psi_eps}};
    integrate_rosenbrock<1>(sys, eps, {psi_eps}, theta_max, ctl,
                            [&](double t, const std::array<double, 1>& y,
                                const std::array<double, 1>&) {
        if (!(y[0] > 0))
            throw numerical_error("solve_volume_riccati: non-positive sample at theta=" +
                                  std::to_string(t));
        samples.emplace_back(t, y[0]);
    });
    return samples;
}

CriterionVerdict check_detA_sandwich(const CurvatureProfile& c_M, const CurvatureProfile& c,
                                     const CurvatureProfile& c_m, int n, double theta_max,
                                     double slack) {
    if (n < 2) throw std::invalid_argument("check_detA_sandwich: n >= 2 required");
    // Pointwise precondition c_M <= c <= c_m.
    for (int i = 0; i <= 256; ++i) {
        const double t = theta_max * i / 256.0;
        const double tol = 1e-12 * std::max(1.0, c_m(t));
        if (c_M(t) > c(t) + tol || c(t) > c_m(t) + tol)
            throw std::invalid_argument("check_detA_sandwich: profiles not ordered c_M <= c <= c_m");
    }

    const WarpSolution wM = solve_warp(c_M, theta_max);
    const WarpSolution wc = solve_warp(c, theta_max);
    const WarpSolution wm = solve_warp(c_m, theta_max);

    CriterionVerdict out;
    out.condition_id = "detA_sandwich";
    const int kNodes = 512;
    const double lo = std::max({wM.theta_init(), wc.theta_init(), wm.theta_init()});
    double worst = std::numeric_limits<double>::infinity();
    for (int i = 1; i <= kNodes; ++i) {
        const double t = lo + (theta_max - lo) * i / kNodes;
        const double a = (n - 1) * wM.log_warp(t);
        const double b = (n - 1) * wc.log_warp(t);
        const double d = (n - 1) * wm.log_warp(t);
        const double gap = std::min(b - a, d - b);
        out.probes.emplace_back(t, gap);
        if (gap < worst) {
            worst = gap;
            if (gap < -slack) {
                char buf[96];
                std::snprintf(buf, sizeof buf, "violation %.3g at theta=%.6g", gap, t);
                out.note = buf;
            }
        }
    }
    out.trend = worst;
    out.verdict = worst >= -slack ? Verdict::Satisfied : Verdict::Violated;
    if (out.note.empty()) out.note = "log-domain sandwich holds at all grid nodes";
    return out;
}

} // namespace hadamard
