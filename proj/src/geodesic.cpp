#include "hadamard/geodesic.hpp"
#include "hadamard/errors.hpp"
#include "hadamard/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

namespace hadamard {

namespace {

struct Metric {
    const WarpSolution* warp;
    double r_cap;

    // mu = (psi/r)^2 = exp(2H), mu' = 2 H'(r) mu
    void eval(double r, double& mu, double& dmu) const {
        if (r < 1e-300) {
            mu = 1.0;
            dmu = 0.0;
            return;
        }
        const double rc = std::min(r, r_cap);
        const double H = warp->log_stretch(rc);
        mu = std::exp(2 * H);
        dmu = 2 * warp->log_stretch_deriv(rc) * mu;
    }
};

// Discrete energy sum_k g(mid_k)(delta_k, delta_k) over the polyline and its
// gradient with respect to the interior vertices.
class PolylineEnergy {
public:
    PolylineEnergy(const Metric& metric, double ax, double ay, double bx, double by, int segments)
        : metric_(metric), ax_(ax), ay_(ay), bx_(bx), by_(by), n_(segments) {}

    int segments() const { return n_; }

    double value_and_gradient(const std::vector<double>& v, std::vector<double>& grad) const {
        grad.assign(v.size(), 0.0);
        double energy = 0.0;
        for (int k = 0; k < n_; ++k) {
            double x0, y0, x1, y1;
            vertex(v, k, x0, y0);
            vertex(v, k + 1, x1, y1);
            const double dx = x1 - x0, dy = y1 - y0;
            const double mx = 0.5 * (x0 + x1), my = 0.5 * (y0 + y1);
            const double r = std::hypot(mx, my);
            double mu, dmu;
            metric_.eval(r, mu, dmu);

            double q, dQdx, dQdy, dQmx, dQmy;
            const double d2 = dx * dx + dy * dy;
            if (r < 1e-300) {
                q = d2;
                dQdx = 2 * dx;
                dQdy = 2 * dy;
                dQmx = dQmy = 0.0;
            } else {
                const double ux = mx / r, uy = my / r;
                const double s = dx * ux + dy * uy;
                q = (1 - mu) * s * s + mu * d2;
                dQdx = 2 * (1 - mu) * s * ux + 2 * mu * dx;
                dQdy = 2 * (1 - mu) * s * uy + 2 * mu * dy;
                const double tx = (dx - s * ux) / r, ty = (dy - s * uy) / r;
                dQmx = dmu * (d2 - s * s) * ux + 2 * (1 - mu) * s * tx;
                dQmy = dmu * (d2 - s * s) * uy + 2 * (1 - mu) * s * ty;
            }
            energy += q;
            // d/dx_k = -dQ/ddelta + dQ/dm * 1/2 ; d/dx_{k+1} = +dQ/ddelta + dQ/dm * 1/2
            add_grad(grad, k, -dQdx + 0.5 * dQmx, -dQdy + 0.5 * dQmy);
            add_grad(grad, k + 1, dQdx + 0.5 * dQmx, dQdy + 0.5 * dQmy);
        }
        return energy;
    }

    double length(const std::vector<double>& v) const {
        double len = 0.0;
        for (int k = 0; k < n_; ++k) {
            double x0, y0, x1, y1;
            vertex(v, k, x0, y0);
            vertex(v, k + 1, x1, y1);
            const double dx = x1 - x0, dy = y1 - y0;
            const double mx = 0.5 * (x0 + x1), my = 0.5 * (y0 + y1);
            const double r = std::hypot(mx, my);
            double mu, dmu;
            metric_.eval(r, mu, dmu);
            double q;
            if (r < 1e-300) {
                q = dx * dx + dy * dy;
            } else {
                const double s = (dx * mx + dy * my) / r;
                q = (1 - mu) * s * s + mu * (dx * dx + dy * dy);
            }
            len += std::sqrt(std::max(q, 0.0));
        }
        return len;
    }

private:
    void vertex(const std::vector<double>& v, int k, double& x, double& y) const {
        if (k == 0) {
            x = ax_;
            y = ay_;
        } else if (k == n_) {
            x = bx_;
            y = by_;
        } else {
            x = v[2 * (k - 1)];
            y = v[2 * (k - 1) + 1];
        }
    }
    void add_grad(std::vector<double>& grad, int k, double gx, double gy) const {
        if (k == 0 || k == n_) return;
        grad[2 * (k - 1)] += gx;
        grad[2 * (k - 1) + 1] += gy;
    }

    Metric metric_;
    double ax_, ay_, bx_, by_;
    int n_;
};

// Compact L-BFGS with Armijo backtracking.
void minimize_lbfgs(const PolylineEnergy& problem, std::vector<double>& v, double grad_tol,
                    int max_iter = 4000) {
    const std::size_t dim = v.size();
    if (dim == 0) return;
    const int history = 10;
    std::vector<std::vector<double>> s_hist, y_hist;
    std::vector<double> rho_hist;

    std::vector<double> grad(dim), grad_new(dim), dir(dim), v_new(dim);
    double f = problem.value_and_gradient(v, grad);
    double gscale = 0.0;
    for (double g : grad) gscale = std::max(gscale, std::abs(g));
    const double gtol = std::max(grad_tol * std::max(gscale, 1.0), 1e-18);

    int stagnation = 0;
    for (int iter = 0; iter < max_iter; ++iter) {
        double gmax = 0.0;
        for (double g : grad) gmax = std::max(gmax, std::abs(g));
        if (gmax <= gtol) break;

        // two-loop recursion
        dir = grad;
        const int m = static_cast<int>(s_hist.size());
        std::vector<double> alpha(m);
        for (int i = m - 1; i >= 0; --i) {
            double dot = 0.0;
            for (std::size_t d = 0; d < dim; ++d) dot += s_hist[i][d] * dir[d];
            alpha[i] = rho_hist[i] * dot;
            for (std::size_t d = 0; d < dim; ++d) dir[d] -= alpha[i] * y_hist[i][d];
        }
        if (m > 0) {
            double sy = 0.0, yy = 0.0;
            for (std::size_t d = 0; d < dim; ++d) {
                sy += s_hist[m - 1][d] * y_hist[m - 1][d];
                yy += y_hist[m - 1][d] * y_hist[m - 1][d];
            }
            const double h0 = sy > 0 && yy > 0 ? sy / yy : 1.0;
            for (auto& x : dir) x *= h0;
        } else {
            double norm = 0.0;
            for (double x : dir) norm = std::max(norm, std::abs(x));
            if (norm > 0)
                for (auto& x : dir) x /= norm;
        }
        for (int i = 0; i < m; ++i) {
            double dot = 0.0;
            for (std::size_t d = 0; d < dim; ++d) dot += y_hist[i][d] * dir[d];
            const double beta = rho_hist[i] * dot;
            for (std::size_t d = 0; d < dim; ++d) dir[d] += s_hist[i][d] * (alpha[i] - beta);
        }

        double g_dot_d = 0.0;
        for (std::size_t d = 0; d < dim; ++d) g_dot_d += grad[d] * dir[d];
        if (g_dot_d <= 0) { // not a descent direction; restart from steepest descent
            s_hist.clear();
            y_hist.clear();
            rho_hist.clear();
            dir = grad;
            g_dot_d = 0.0;
            for (double g : grad) g_dot_d += g * g;
        }

        double step = 1.0;
        double f_new = f;
        bool accepted = false;
        for (int ls = 0; ls < 40; ++ls) {
            for (std::size_t d = 0; d < dim; ++d) v_new[d] = v[d] - step * dir[d];
            f_new = problem.value_and_gradient(v_new, grad_new);
            if (std::isfinite(f_new) && f_new <= f - 1e-4 * step * g_dot_d) {
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) break;

        std::vector<double> s(dim), yv(dim);
        double sy = 0.0;
        for (std::size_t d = 0; d < dim; ++d) {
            s[d] = v_new[d] - v[d];
            yv[d] = grad_new[d] - grad[d];
            sy += s[d] * yv[d];
        }
        if (sy > 1e-30) {
            s_hist.push_back(std::move(s));
            y_hist.push_back(std::move(yv));
            rho_hist.push_back(1.0 / sy);
            if (static_cast<int>(s_hist.size()) > history) {
                s_hist.erase(s_hist.begin());
                y_hist.erase(y_hist.begin());
                rho_hist.erase(rho_hist.begin());
            }
        }
        const double decrease = f - f_new;
        v.swap(v_new);
        grad.swap(grad_new);
        f = f_new;
        stagnation = decrease <= 1e-16 * std::max(std::abs(f), 1e-300) ? stagnation + 1 : 0;
        if (stagnation >= 5) break;
    }
}

double relax_once(const Metric& metric, double ax, double ay, double bx, double by,
                  int segments, double grad_tol, std::vector<double>& vertices) {
    PolylineEnergy problem(metric, ax, ay, bx, by, segments);
    minimize_lbfgs(problem, vertices, grad_tol);
    return problem.length(vertices);
}

std::vector<double> refine_vertices(const std::vector<double>& v, double ax, double ay,
                                    double bx, double by, int segments) {
    // insert midpoints: n segments -> 2n segments
    std::vector<double> out;
    out.reserve(2 * v.size() + 2);
    auto vert = [&](int k, double& x, double& y) {
        if (k == 0) {
            x = ax;
            y = ay;
        } else if (k == segments) {
            x = bx;
            y = by;
        } else {
            x = v[2 * (k - 1)];
            y = v[2 * (k - 1) + 1];
        }
    };
    for (int k = 0; k < segments; ++k) {
        double x0, y0, x1, y1;
        vert(k, x0, y0);
        vert(k + 1, x1, y1);
        if (k > 0) {
            out.push_back(x0);
            out.push_back(y0);
        }
        out.push_back(0.5 * (x0 + x1));
        out.push_back(0.5 * (y0 + y1));
    }
    return out;
}

} // namespace

double geodesic_length_bvp(const ModelManifold& m, double r1, double r2, double alpha,
                           int segments, double grad_tol) {
    const double ax = r1, ay = 0.0;
    const double bx = r2 * std::cos(alpha), by = r2 * std::sin(alpha);
    Metric metric{&m.warp(), m.r_max()};

    // Coarse-to-fine warm start: the low modes of the chain relax at the
    // cheap levels, so the fine levels only polish.
    int level = segments;
    while (level > 16 && level % 2 == 0) level /= 2;
    std::vector<double> v(2 * (level - 1));
    for (int k = 1; k < level; ++k) {
        const double t = static_cast<double>(k) / level;
        v[2 * (k - 1)] = ax + t * (bx - ax);
        v[2 * (k - 1) + 1] = ay + t * (by - ay);
    }
    relax_once(metric, ax, ay, bx, by, level, grad_tol, v);
    while (level < segments) {
        v = refine_vertices(v, ax, ay, bx, by, level);
        level *= 2;
        relax_once(metric, ax, ay, bx, by, level, grad_tol, v);
    }
    PolylineEnergy fine(metric, ax, ay, bx, by, level);
    const double len1 = fine.length(v);

    std::vector<double> v2 = refine_vertices(v, ax, ay, bx, by, level);
    const double len2 = relax_once(metric, ax, ay, bx, by, 2 * level, grad_tol, v2);

    // midpoint-metric length converges at O(h^2); one Richardson step
    return len2 + (len2 - len1) / 3.0;
}

} // namespace hadamard
