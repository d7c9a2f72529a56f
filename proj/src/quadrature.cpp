#include "hadamard/quadrature.hpp"
#include "hadamard/errors.hpp"
#include "hadamard/parallel.hpp"
#include "hadamard/verdict.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>

namespace hadamard {

GaussRule gauss_legendre(int n, double a, double b) {
    // Nodes via Newton iteration on P_n, Bonnet recurrence for values.
    GaussRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    const int m = (n + 1) / 2;
    for (int i = 0; i < m; ++i) {
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < n; ++j) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2 * j + 1) * x * p1 - j * p2) / (j + 1);
            }
            pp = n * (x * p0 - p1) / (x * x - 1.0);
            const double dx = p0 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        const double w = 2.0 / ((1.0 - x * x) * pp * pp);
        rule.nodes[i] = x;
        rule.nodes[n - 1 - i] = -x;
        rule.weights[i] = w;
        rule.weights[n - 1 - i] = w;
    }
    // map [-1,1] -> [a,b]; keep nodes ascending
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    for (int i = 0; i < n; ++i) rule.nodes[i] = mid - half * rule.nodes[i];
    std::reverse(rule.weights.begin(), rule.weights.end());
    for (auto& w : rule.weights) w *= half;
    if (rule.nodes.front() > rule.nodes.back()) {
        std::reverse(rule.nodes.begin(), rule.nodes.end());
        std::reverse(rule.weights.begin(), rule.weights.end());
    }
    return rule;
}

namespace {

// Gauss-Kronrod 7-15 nodes (positive half) and weights.
const double kGK15Nodes[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769, 0.741531185599394,
    0.586087235467691, 0.405845151377397, 0.207784955007898, 0.000000000000000};
const double kGK15Weights[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250, 0.140653259715525,
    0.169004726639267, 0.190350578064785, 0.204432940075298, 0.209482141084728};
const double kG7Weights[4] = {
    0.129484966168870, 0.279705391489277, 0.381830050505119, 0.417959183673469};

struct GKResult {
    double value;
    double error;
};

GKResult gk15(const std::function<double(double)>& f, double a, double b) {
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    double fv[15];
    for (int i = 0; i < 7; ++i) {
        fv[i] = f(mid - half * kGK15Nodes[i]);
        fv[14 - i] = f(mid + half * kGK15Nodes[i]);
    }
    fv[7] = f(mid);
    double resK = kGK15Weights[7] * fv[7];
    double resG = kG7Weights[3] * fv[7];
    for (int i = 0; i < 7; ++i) {
        resK += kGK15Weights[i] * (fv[i] + fv[14 - i]);
        if (i % 2 == 1) resG += kG7Weights[i / 2] * (fv[i] + fv[14 - i]);
    }
    return {resK * half, std::abs(resK - resG) * half};
}

double integrate_rec(const std::function<double(double)>& f, double a, double b,
                     double tol, int depth, int max_depth) {
    const GKResult r = gk15(f, a, b);
    if (r.error <= tol || depth >= max_depth) return r.value;
    const double mid = 0.5 * (a + b);
    return integrate_rec(f, a, mid, 0.5 * tol, depth + 1, max_depth) +
           integrate_rec(f, mid, b, 0.5 * tol, depth + 1, max_depth);
}

} // namespace

double integrate(const std::function<double(double)>& f, double a, double b,
                 double rel_tol, double abs_tol, int max_depth) {
    if (a == b) return 0.0;
    const GKResult first = gk15(f, a, b);
    double tol = std::max(abs_tol, rel_tol * std::abs(first.value));
    if (tol <= 0) tol = rel_tol;
    if (first.error <= tol) return first.value;
    const double mid = 0.5 * (a + b);
    return integrate_rec(f, a, mid, 0.5 * tol, 1, max_depth) +
           integrate_rec(f, mid, b, 0.5 * tol, 1, max_depth);
}

double log_integrate_exp(const std::function<double(double)>& g, double a, double b,
                         double rel_tol) {
    if (!(b > a)) return -std::numeric_limits<double>::infinity();
    // Reference level: maximum of g over a coarse scan (the integrand of the
    // rescaled problem is then <= ~1 and adaptivity resolves the peak).
    const int n_scan = 129;
    std::vector<double> gv(n_scan);
    double gmax = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < n_scan; ++i) {
        const double t = a + (b - a) * i / (n_scan - 1);
        gv[i] = g(t);
        gmax = std::max(gmax, gv[i]);
    }
    if (!std::isfinite(gmax)) throw numerical_error("log_integrate_exp: non-finite exponent");
    // Restrict to the window contributing above e^-45 of the peak; outside it
    // the integrand is below double-precision relevance, and keeping it would
    // force the adaptive rule to resolve an exponentially decaying tail.
    const double cut = gmax - 45.0;
    int lo = 0, hi = n_scan - 1;
    while (lo < n_scan - 1 && gv[lo] < cut && gv[lo + 1] < cut) ++lo;
    while (hi > 0 && gv[hi] < cut && gv[hi - 1] < cut) --hi;
    const double t_lo = a + (b - a) * lo / (n_scan - 1);
    const double t_hi = a + (b - a) * hi / (n_scan - 1);
    const auto scaled = [&](double t) { return std::exp(g(t) - gmax); };
    const double integral = integrate(scaled, t_lo, t_hi, rel_tol, 0.0, 60);
    if (!(integral > 0)) throw numerical_error("log_integrate_exp: vanishing integral");
    return gmax + std::log(integral);
}

double pairwise_sum(const double* v, std::size_t n) {
    if (n <= 8) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += v[i];
        return s;
    }
    const std::size_t half = n / 2;
    return pairwise_sum(v, half) + pairwise_sum(v + half, n - half);
}

// --- probe/trend helpers (verdict.hpp) ---

std::vector<double> geometric_probes(double theta0, double theta_max, double factor) {
    std::vector<double> probes;
    if (!(theta0 > 0) || !(theta_max > theta0) || !(factor > 1))
        throw std::invalid_argument("geometric_probes: need 0 < theta0 < theta_max, factor > 1");
    for (double t = theta0; t < theta_max; t *= factor) probes.push_back(t);
    probes.push_back(theta_max);
    return probes;
}

double last_window_relative_change(const std::vector<std::pair<double, double>>& probes,
                                   int window) {
    const int n = static_cast<int>(probes.size());
    if (n < 2) return std::numeric_limits<double>::infinity();
    const int w = std::min(window, n - 1);
    double lo = probes[n - 1].second, hi = lo;
    for (int i = n - 1 - w; i < n; ++i) {
        lo = std::min(lo, probes[i].second);
        hi = std::max(hi, probes[i].second);
    }
    const double scale = std::max({std::abs(lo), std::abs(hi), 1e-300});
    return (hi - lo) / scale;
}

double last_window_slope(const std::vector<std::pair<double, double>>& probes, int window) {
    const int n = static_cast<int>(probes.size());
    const int w = std::min(window, n);
    if (w < 2) return 0.0;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (int i = n - w; i < n; ++i) {
        sx += probes[i].first;
        sy += probes[i].second;
        sxx += probes[i].first * probes[i].first;
        sxy += probes[i].first * probes[i].second;
    }
    const double denom = w * sxx - sx * sx;
    return denom != 0 ? (w * sxy - sx * sy) / denom : 0.0;
}

// --- thread cap (parallel.hpp) ---

namespace {
std::atomic<int> g_max_threads{0};
}

void set_max_threads(int n) { g_max_threads.store(n < 0 ? 0 : n); }
int max_threads() { return g_max_threads.load(); }

bool last_window_monotone_down(const std::vector<std::pair<double, double>>& probes,
                               int window, double slack) {
    const int n = static_cast<int>(probes.size());
    const int w = std::min(window, n);
    for (int i = n - w + 1; i < n; ++i) {
        const double prev = probes[i - 1].second;
        if (probes[i].second > prev + slack * std::max(1.0, std::abs(prev))) return false;
    }
    return true;
}

} // namespace hadamard
