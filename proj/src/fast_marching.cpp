#include "hadamard/fast_marching.hpp"
#include "hadamard/errors.hpp"
#include "hadamard/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <stdexcept>

namespace hadamard {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct HeapEntry {
    double t;
    int idx;
    bool operator>(const HeapEntry& o) const { return t > o.t; }
};

// capped psi so the angular metric weight underflows gracefully
inline double psi_capped(const WarpSolution& w, double r, double theta_init) {
    if (r <= 0) return 0.0;
    const double lp = r < theta_init ? std::log(r) : w.log_warp(r);
    return std::exp(std::min(lp, 300.0));
}

} // namespace

std::vector<double> fast_march(const ModelManifold& m, double source_r,
                               int nr, int nphi, double r_max) {
    if (nr < 8 || nphi < 8) throw std::invalid_argument("fast_march: grid too coarse");
    if (!(source_r >= 0) || source_r > r_max)
        throw std::invalid_argument("fast_march: source outside [0, r_max]");
    if (r_max > m.r_max() * (1 + 1e-12))
        throw std::out_of_range("fast_march: r_max beyond solved warp range");

    const double hr = r_max / (nr - 1);
    const double hphi = M_PI / (nphi - 1);
    const auto& w = m.warp();

    std::vector<double> psi(nr);
    for (int i = 0; i < nr; ++i) psi[i] = psi_capped(w, i * hr, w.theta_init());

    const int n_nodes = nr * nphi;
    std::vector<double> T(n_nodes, kInf);
    std::vector<char> known(n_nodes, 0);
    auto id = [nphi](int i, int j) { return i * nphi + j; };

    std::priority_queue<HeapEntry, std::vector<HeapEntry>, std::greater<HeapEntry>> heap;

    // Pole column: one logical point at distance source_r (radial geodesic).
    for (int j = 0; j < nphi; ++j) {
        T[id(0, j)] = source_r;
        heap.push({source_r, id(0, j)});
    }

    // Near-source seeding with the local metric distance
    // sqrt(dr^2 + psi(mid)^2 phi^2); second-order accurate at small
    // separation, which removes the point-source singularity error.
    const double seed_radius = 8.0 * hr;
    const int i_lo = std::max(0, static_cast<int>((source_r - seed_radius) / hr) - 1);
    const int i_hi = std::min(nr - 1, static_cast<int>((source_r + seed_radius) / hr) + 1);
    for (int i = i_lo; i <= i_hi; ++i) {
        const double r = i * hr;
        const double psi_mid = psi_capped(w, 0.5 * (r + source_r), w.theta_init());
        for (int j = 0; j < nphi; ++j) {
            const double phi = j * hphi;
            const double ang = psi_mid * phi;
            if (ang > 2 * seed_radius && j > 0) break;
            const double d = std::hypot(r - source_r, ang);
            if (d <= seed_radius) {
                const int k = id(i, j);
                if (d < T[k]) {
                    T[k] = d;
                    heap.push({d, k});
                }
            }
        }
    }

    // Upwind update solving (T-a)^2/hr^2 + (T-b)^2/(psi hphi)^2 = 1.
    auto solve_node = [&](int i, int j) -> double {
        double a = kInf; // best known radial neighbor
        if (i > 0 && known[id(i - 1, j)]) a = T[id(i - 1, j)];
        if (i < nr - 1 && known[id(i + 1, j)]) a = std::min(a, T[id(i + 1, j)]);
        double b = kInf; // best known angular neighbor (mirrored at both ends)
        const int jm = j > 0 ? j - 1 : 1;
        const int jp = j < nphi - 1 ? j + 1 : nphi - 2;
        if (known[id(i, jm)]) b = T[id(i, jm)];
        if (known[id(i, jp)]) b = std::min(b, T[id(i, jp)]);

        const double wr = 1.0 / hr;
        const double wz = psi[i] > 0 ? 1.0 / (psi[i] * hphi) : 0.0;
        double best = kInf;
        if (a < kInf) best = a + hr;
        if (b < kInf && wz > 0) best = std::min(best, b + 1.0 / wz);
        if (a < kInf && b < kInf && wz > 0) {
            // two-sided quadratic
            const double A = wr * wr + wz * wz;
            const double B = -2 * (a * wr * wr + b * wz * wz);
            const double C = a * a * wr * wr + b * b * wz * wz - 1.0;
            const double disc = B * B - 4 * A * C;
            if (disc >= 0) {
                const double t = (-B + std::sqrt(disc)) / (2 * A);
                if (t >= a && t >= b) best = std::min(best, t);
            }
        }
        return best;
    };

    while (!heap.empty()) {
        const auto [t, k] = heap.top();
        heap.pop();
        if (known[k] || t > T[k]) continue;
        known[k] = 1;
        const int i = k / nphi, j = k % nphi;
        if (i == 0) {
            // pole column is one logical point; mark all of it
            for (int jj = 0; jj < nphi; ++jj) known[id(0, jj)] = 1;
        }
        const int di[4] = {-1, 1, 0, 0};
        const int dj[4] = {0, 0, -1, 1};
        for (int q = 0; q < 4; ++q) {
            const int ii = i + di[q];
            int jj = j + dj[q];
            if (ii < 0 || ii >= nr) continue;
            if (jj < 0) jj = 1;
            if (jj >= nphi) jj = nphi - 2;
            const int kk = id(ii, jj);
            if (known[kk]) continue;
            const double cand = solve_node(ii, jj);
            if (cand < T[kk]) {
                T[kk] = cand;
                heap.push({cand, kk});
            }
        }
    }

    for (double v : T)
        if (!std::isfinite(v)) throw numerical_error("fast_march: unreached grid node");
    return T;
}

} // namespace hadamard
