#include "hadamard/curvature.hpp"
#include "hadamard/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace hadamard {

std::vector<double> pchip_slopes(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    if (n != y.size() || n < 2) throw std::invalid_argument("pchip: need >= 2 matching nodes");
    std::vector<double> h(n - 1), delta(n - 1), d(n);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        h[i] = x[i + 1] - x[i];
        if (!(h[i] > 0)) throw std::invalid_argument("pchip: abscissae not strictly increasing");
        delta[i] = (y[i + 1] - y[i]) / h[i];
    }
    if (n == 2) {
        d[0] = d[1] = delta[0];
        return d;
    }
    for (std::size_t i = 1; i + 1 < n; ++i) {
        if (delta[i - 1] * delta[i] <= 0) {
            d[i] = 0.0; // local extremum in the data
        } else {
            const double w1 = 2 * h[i] + h[i - 1];
            const double w2 = h[i] + 2 * h[i - 1];
            d[i] = (w1 + w2) / (w1 / delta[i - 1] + w2 / delta[i]);
        }
    }
    // One-sided ends (Fritsch-Carlson), clipped to preserve monotonicity.
    auto end_slope = [](double h0, double h1, double d0, double d1) {
        double s = ((2 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
        if (s * d0 <= 0) s = 0.0;
        else if (d0 * d1 <= 0 && std::abs(s) > 3 * std::abs(d0)) s = 3 * d0;
        return s;
    };
    d[0] = end_slope(h[0], h[1], delta[0], delta[1]);
    d[n - 1] = end_slope(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
    return d;
}

CurvatureProfile CurvatureProfile::constant(double c0) {
    if (!(c0 > 0)) throw std::invalid_argument("CurvatureProfile: constant requires c0 > 0");
    return CurvatureProfile(Kind::Constant, c0, 0.0);
}

CurvatureProfile CurvatureProfile::power(double k, double scale) {
    if (!(k >= 1)) throw std::invalid_argument("CurvatureProfile: power requires k >= 1");
    if (!(scale > 0)) throw std::invalid_argument("CurvatureProfile: power requires scale > 0");
    return CurvatureProfile(Kind::Power, k, scale);
}

CurvatureProfile CurvatureProfile::exponential(double beta, double scale) {
    if (!(beta > 0) || !(scale > 0))
        throw std::invalid_argument("CurvatureProfile: exponential requires beta, scale > 0");
    return CurvatureProfile(Kind::Exponential, beta, scale);
}

CurvatureProfile CurvatureProfile::tabulated(std::vector<double> nodes, std::vector<double> values) {
    if (nodes.size() != values.size() || nodes.size() < 2)
        throw std::invalid_argument("CurvatureProfile: tabulated needs >= 2 matching nodes");
    if (!(nodes.front() >= 0))
        throw std::invalid_argument("CurvatureProfile: tabulated nodes must be non-negative");
    for (double v : values)
        if (!(v >= 0) || !std::isfinite(v))
            throw std::invalid_argument("CurvatureProfile: tabulated values must be >= 0 and finite");
    CurvatureProfile p(Kind::Tabulated, 0.0, 0.0);
    bool nondec = true;
    for (std::size_t i = 1; i < values.size(); ++i)
        if (values[i] < values[i - 1]) nondec = false;
    p.non_decreasing_ = nondec;
    auto slopes = pchip_slopes(nodes, values);
    p.table_ = std::make_shared<CubicHermiteSeries>(std::move(nodes), std::move(values),
                                                    std::move(slopes));
    return p;
}

CurvatureProfile CurvatureProfile::tabulate(const std::function<double(double)>& f,
                                            double theta_max, int n_nodes) {
    if (!(theta_max > 0) || n_nodes < 2)
        throw std::invalid_argument("CurvatureProfile: tabulate needs theta_max > 0, n_nodes >= 2");
    std::vector<double> nodes(n_nodes), values(n_nodes);
    for (int i = 0; i < n_nodes; ++i) {
        nodes[i] = theta_max * i / (n_nodes - 1);
        values[i] = f(nodes[i]);
    }
    return tabulated(std::move(nodes), std::move(values));
}

double CurvatureProfile::operator()(double theta) const {
    if (!(theta >= 0)) throw std::invalid_argument("CurvatureProfile: theta must be >= 0");
    switch (kind_) {
        case Kind::Constant:    return a_;
        case Kind::Power:       return b_ * std::pow(theta, a_);
        case Kind::Exponential: return b_ * std::exp(a_ * theta);
        case Kind::Tabulated: {
            const auto& x = table_->abscissae();
            if (theta > x.back() * (1 + 1e-12))
                throw std::out_of_range("CurvatureProfile: theta beyond tabulated range");
            const double v = (*table_)(std::min(theta, x.back()));
            return std::max(v, 0.0);
        }
    }
    return 0.0;
}

double CurvatureProfile::derivative(double theta) const {
    if (!(theta >= 0)) throw std::invalid_argument("CurvatureProfile: theta must be >= 0");
    switch (kind_) {
        case Kind::Constant:    return 0.0;
        case Kind::Power:       return theta > 0 ? b_ * a_ * std::pow(theta, a_ - 1) : (a_ == 1 ? b_ : 0.0);
        case Kind::Exponential: return b_ * a_ * std::exp(a_ * theta);
        case Kind::Tabulated: {
            const auto& x = table_->abscissae();
            if (theta > x.back() * (1 + 1e-12))
                throw std::out_of_range("CurvatureProfile: theta beyond tabulated range");
            return table_->derivative(std::min(theta, x.back()));
        }
    }
    return 0.0;
}

double CurvatureProfile::max_theta() const {
    if (kind_ == Kind::Tabulated) return table_->abscissae().back();
    return std::numeric_limits<double>::infinity();
}

const std::vector<double>& CurvatureProfile::table_nodes() const {
    if (!table_) throw state_error("CurvatureProfile: not tabulated");
    return table_->abscissae();
}

const std::vector<double>& CurvatureProfile::table_values() const {
    if (!table_) throw state_error("CurvatureProfile: not tabulated");
    return table_->values();
}

std::string CurvatureProfile::describe() const {
    char buf[96];
    switch (kind_) {
        case Kind::Constant:
            std::snprintf(buf, sizeof buf, "constant(c0=%g)", a_);
            break;
        case Kind::Power:
            std::snprintf(buf, sizeof buf, "power(k=%g, scale=%g)", a_, b_);
            break;
        case Kind::Exponential:
            std::snprintf(buf, sizeof buf, "exponential(beta=%g, scale=%g)", a_, b_);
            break;
        case Kind::Tabulated:
            std::snprintf(buf, sizeof buf, "tabulated(%zu nodes, up to %g)",
                          table_->abscissae().size(), table_->abscissae().back());
            break;
    }
    return buf;
}

CriterionVerdict check_c32(const CurvatureProfile& c, const std::vector<double>& theta_probe) {
    if (theta_probe.size() < 3)
        throw std::invalid_argument("check_c32: need at least 3 probe points");
    for (std::size_t i = 1; i < theta_probe.size(); ++i)
        if (!(theta_probe[i] > theta_probe[i - 1]))
            throw std::invalid_argument("check_c32: probe sequence must be increasing");
    if (!(theta_probe.back() >= 100 * theta_probe.front()))
        throw std::invalid_argument("check_c32: probe must span at least two decades");

    CriterionVerdict out;
    out.condition_id = "c32";
    double min_lower_dini = std::numeric_limits<double>::infinity();
    double min_lower_theta = 0.0;
    for (double theta : theta_probe) {
        const double h = std::max(1e-6, 1e-6 * theta);
        const double c0 = c(theta);
        const bool fwd_ok = theta + h <= c.max_theta();
        const bool bwd_ok = theta >= h;
        if (!fwd_ok && !bwd_ok)
            throw std::invalid_argument("check_c32: probe too close to profile range ends");
        const double bwd0 = bwd_ok ? (c0 - c(theta - h)) / h : 0.0;
        const double fwd = fwd_ok ? (c(theta + h) - c0) / h : bwd0;
        const double bwd = bwd_ok ? bwd0 : fwd;
        const double upper = std::max(fwd, bwd);
        const double lower = std::min(fwd, bwd);
        if (lower < min_lower_dini) {
            min_lower_dini = lower;
            min_lower_theta = theta;
        }
        out.probes.emplace_back(theta, upper / std::pow(c0, 1.5));
    }

    const double ratio_end = out.probes.back().second;
    out.trend = ratio_end;
    if (min_lower_dini <= 0) {
        out.verdict = Verdict::Violated;
        char buf[96];
        std::snprintf(buf, sizeof buf, "lower Dini derivative %.3g <= 0 at theta=%.3g",
                      min_lower_dini, min_lower_theta);
        out.note = buf;
        return out;
    }
    const bool decreasing = last_window_monotone_down(out.probes, 3);
    const bool settled = last_window_relative_change(out.probes, 3) < 1e-3;
    if (decreasing && ratio_end < 0.05) {
        out.verdict = Verdict::Satisfied;
        out.note = "ratio Dc/c^{3/2} decays along probe";
    } else if (settled && ratio_end >= 0.05) {
        out.verdict = Verdict::Violated;
        out.note = "ratio Dc/c^{3/2} settles at a positive value";
    } else {
        out.verdict = Verdict::Inconclusive;
        out.note = "ratio trend undecided on this probe";
    }
    return out;
}

CurvatureProfile running_max(const CurvatureProfile& c, double theta_max, int scan_nodes) {
    if (!(theta_max > 0)) throw std::invalid_argument("running_max: theta_max must be > 0");
    if (theta_max > c.max_theta())
        throw std::out_of_range("running_max: theta_max beyond profile range");
    if (c.non_decreasing() && c.kind() != CurvatureProfile::Kind::Tabulated) return c;

    std::vector<double> nodes, values;
    nodes.reserve(scan_nodes);
    values.reserve(scan_nodes);
    double best = c(0.0);
    for (int i = 0; i < scan_nodes; ++i) {
        const double t = theta_max * i / (scan_nodes - 1);
        best = std::max(best, c(t));
        nodes.push_back(t);
        values.push_back(best);
    }
    // Keep the original knots of a tabulated input so node-level values match
    // the running max of the data exactly.
    if (c.kind() == CurvatureProfile::Kind::Tabulated) {
        const auto& tx = c.table_nodes();
        std::vector<double> merged_x, merged_v;
        std::size_t i = 0, j = 0;
        double run = 0.0;
        bool first = true;
        auto push = [&](double t) {
            const double v = c(t);
            run = first ? v : std::max(run, v);
            first = false;
            if (!merged_x.empty() && t <= merged_x.back()) {
                merged_v.back() = std::max(merged_v.back(), run);
                return;
            }
            merged_x.push_back(t);
            merged_v.push_back(run);
        };
        while (i < nodes.size() || j < tx.size()) {
            if (j >= tx.size() || (i < nodes.size() && nodes[i] < tx[j])) push(nodes[i++]);
            else if (tx[j] <= theta_max) push(tx[j++]);
            else ++j;
        }
        // running max of sampled values, not of the raw scan
        for (std::size_t k = 1; k < merged_v.size(); ++k)
            merged_v[k] = std::max(merged_v[k], merged_v[k - 1]);
        return CurvatureProfile::tabulated(std::move(merged_x), std::move(merged_v));
    }
    return CurvatureProfile::tabulated(std::move(nodes), std::move(values));
}

} // namespace hadamard
