#include "hadamard/pairwise.hpp"
#include "hadamard/errors.hpp"
#include "hadamard/fast_marching.hpp"
#include "hadamard/parallel.hpp"
#include "hadamard/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hadamard {

namespace {

// log-domain capped psi at the pair midpoint radius
double log_psi_mid(const WarpSolution& w, double r1, double r2) {
    const double mid = 0.5 * (r1 + r2);
    if (mid <= 0) return -std::numeric_limits<double>::infinity();
    return w.log_warp(std::min(mid, w.theta_max()));
}

// sqrt(delta^2 + (e^{lpsi} alpha)^2) without overflow
double hypot_log_safe(double delta, double lpsi, double alpha) {
    if (alpha <= 0) return std::abs(delta);
    const double la = lpsi + std::log(alpha);
    if (la > 300.0) return std::exp(300.0); // effectively saturated anyway
    return std::hypot(delta, std::exp(la));
}

// int_0^X log(sqrt(delta^2 + B^2 a^2)) da with B = e^lB, evaluated stably.
double log_ramp_integral(double delta, double lB, double X) {
    if (X <= 0) return 0.0;
    const double lBX = lB + std::log(X);
    double log_hyp; // log sqrt(delta^2 + (BX)^2)
    if (delta <= 0) log_hyp = lBX;
    else if (lBX > std::log(delta) + 350) log_hyp = lBX;
    else log_hyp = 0.5 * std::log(delta * delta + std::exp(2 * lBX));
    double atan_term = 0.0;
    if (delta > 0 && lB < 600) {
        const double B = std::exp(lB);
        atan_term = delta / B * std::atan2(B * X, delta);
    }
    return X * log_hyp - X + atan_term;
}

} // namespace

double RadialKernelSet::quadratic_form(const std::vector<double>& masses,
                                       const std::vector<double>& K) const {
    if (K.empty()) throw state_error("RadialKernelSet: requested kernel was not built");
    const std::size_t n = size();
    if (masses.size() != n)
        throw std::invalid_argument("RadialKernelSet: mass vector does not match grid");
    std::vector<double> row_dots(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<double> terms(n);
        for (std::size_t j = 0; j < n; ++j) terms[j] = K[i * n + j] * masses[j];
        row_dots[i] = masses[i] * pairwise_sum(terms);
    }
    return pairwise_sum(row_dots);
}

std::vector<double> RadialKernelSet::apply_potential(std::size_t p,
                                                     const std::vector<double>& masses) const {
    if (p >= k_potentials_.size())
        throw state_error("RadialKernelSet: potential kernel index out of range");
    const std::size_t n = size();
    const auto& K = k_potentials_[p];
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<double> terms(n);
        for (std::size_t j = 0; j < n; ++j) terms[j] = K[i * n + j] * masses[j];
        out[i] = pairwise_sum(terms);
    }
    return out;
}

RadialKernelSet::RadialKernelSet(const ModelManifold& m, std::vector<double> radial_grid,
                                 const PairwiseRequest& request, const PairwiseConfig& cfg)
    : grid_(std::move(radial_grid)) {
    const std::size_t ng = grid_.size();
    if (ng < 2) throw std::invalid_argument("RadialKernelSet: need >= 2 radial nodes");
    for (std::size_t i = 1; i < ng; ++i)
        if (!(grid_[i] > grid_[i - 1]))
            throw std::invalid_argument("RadialKernelSet: radial grid must be strictly increasing");
    if (!(grid_.front() >= 0)) throw std::invalid_argument("RadialKernelSet: negative radius");
    if (grid_.back() > m.r_max() * (1 + 1e-12))
        throw std::out_of_range("RadialKernelSet: grid extends beyond solved warp");
    if (request.stretch && m.r_max() < 2 * grid_.back() * (1 - 1e-12))
        throw state_error("RadialKernelSet: stretch kernel needs warp solved to 2*r_max "
                          "(H is evaluated at pair distances)");

    const int dim = m.dim();
    const auto& warp = m.warp();

    // angular rule: local cell [0, alpha_cut] + Gauss-Legendre on [alpha_cut, pi];
    // q_n(alpha) = sin^{n-2}(alpha) / Z with the exact normalizer.
    const double h_phi = M_PI / (cfg.fmm_nphi - 1);
    const double alpha_cut = std::max(0.05, 3 * h_phi);
    const double Z = std::sqrt(M_PI) * std::tgamma(0.5 * (dim - 1)) / std::tgamma(0.5 * dim);
    GaussRule main = gauss_legendre(cfg.alpha_nodes, alpha_cut, M_PI);
    std::vector<double> main_w(main.weights);
    for (int g = 0; g < cfg.alpha_nodes; ++g)
        main_w[g] *= std::pow(std::sin(main.nodes[g]), dim - 2) / Z;
    GaussRule local = gauss_legendre(16, 0.0, alpha_cut);
    std::vector<double> local_w(local.weights);
    for (int g = 0; g < 16; ++g)
        local_w[g] *= std::pow(std::sin(local.nodes[g]), dim - 2) / Z;

    const std::size_t nn = ng * ng;
    if (request.distance) k_distance_.assign(nn, 0.0);
    if (request.log_distance) k_log_.assign(nn, 0.0);
    if (request.log_chord) k_log_chord_.assign(nn, 0.0);
    if (request.stretch) k_stretch_.assign(nn, 0.0);
    k_potentials_.assign(request.potentials.size(), std::vector<double>(nn, 0.0));

    const double domain =
        std::min(m.r_max(), grid_.back() * (1.0 + 2.0 / (cfg.fmm_nr - 1)) + 1e-12);
    const double h_r_field = domain / (cfg.fmm_nr - 1);

    parallel_for(ng, [&](std::size_t i) {
        const double ri = grid_[i];
        std::vector<double> field;
        if (ri > 0) field = fast_march(m, ri, cfg.fmm_nr, cfg.fmm_nphi, domain);
        DistanceField f;
        if (ri > 0) {
            f.source_radius = ri;
            f.nr = cfg.fmm_nr;
            f.nphi = cfg.fmm_nphi;
            f.r_max = domain;
            f.values = std::move(field);
            f.method = DistanceMethod::FastMarch;
            f.error_estimate = 0;
        }

        // local radial cell width (for the log-kernel diagonal smearing)
        const double cell_lo = i > 0 ? grid_[i] - grid_[i - 1] : grid_[1] - grid_[0];
        const double cell_hi = i + 1 < ng ? grid_[i + 1] - grid_[i] : cell_lo;
        const double cell_width = 0.5 * (cell_lo + cell_hi);

        for (std::size_t j = 0; j < ng; ++j) {
            const double rj = grid_[j];
            const double delta = std::abs(ri - rj);
            const double cap = ri + rj;
            const double lpsi = log_psi_mid(warp, ri, rj);
            const double c_top = m.warp().profile()(std::min(std::max(ri, rj), m.r_max()));
            const double near_cut =
                3.0 * (h_r_field + std::exp(std::min(lpsi, 300.0)) * h_phi);

            auto eval_d = [&](double alpha) -> double {
                const double chord = chord_lower_bound(ri, rj, alpha);
                if (ri == 0 || rj == 0) return std::max(ri, rj);
                const double sep = hypot_log_safe(delta, lpsi, alpha);
                double d;
                if (sep <= near_cut && c_top * sep * sep < 0.1) d = sep;
                else d = f.interpolate(rj, alpha);
                return std::clamp(d, chord, cap);
            };

            const double d_cut = eval_d(alpha_cut);

            // model on [0, alpha_cut]: exact ramp saturating at the measured
            // d(alpha_cut); the ramp is the local metric separation.
            auto model_d = [&](double alpha) -> double {
                if (ri == 0 || rj == 0) return std::max(ri, rj);
                return std::min(hypot_log_safe(delta, lpsi, alpha), d_cut);
            };

            // main angular nodes
            double acc_d = 0, acc_log = 0, acc_logch = 0, acc_H = 0;
            std::vector<double> acc_pot(k_potentials_.size(), 0.0);
            for (int g = 0; g < cfg.alpha_nodes; ++g) {
                const double d = eval_d(main.nodes[g]);
                const double w = main_w[g];
                if (request.distance) acc_d += w * d;
                if (request.log_distance) acc_log += w * std::log(std::max(d, 1e-300));
                if (request.log_chord)
                    acc_logch += w * std::log(std::max(chord_lower_bound(ri, rj, main.nodes[g]), 1e-300));
                if (request.stretch) acc_H += w * warp.log_stretch(std::min(d, warp.theta_max()));
                for (std::size_t p = 0; p < k_potentials_.size(); ++p)
                    acc_pot[p] += w * request.potentials[p](d);
            }

            // local cell: smooth kernels by 16-node Gauss with the ramp model;
            // the diagonal of the log kernels is smeared over the cell width
            // (pair average E log|x-y| = log(width) - 3/2 for a uniform cell)
            const double delta_log = i == j ? cell_width * std::exp(-1.5) : delta;
            const double l_chord_slope = ri > 0 && rj > 0 ? 0.5 * std::log(ri * rj)
                                                          : -std::numeric_limits<double>::infinity();
            for (int g = 0; g < 16; ++g) {
                const double a = local.nodes[g];
                const double w = local_w[g];
                const double d = model_d(a);
                if (request.distance) acc_d += w * d;
                if (request.stretch) acc_H += w * warp.log_stretch(std::min(d, warp.theta_max()));
                for (std::size_t p = 0; p < k_potentials_.size(); ++p)
                    acc_pot[p] += w * request.potentials[p](d);
                if (dim >= 3) {
                    if (request.log_distance) {
                        const double dl = std::min(hypot_log_safe(delta_log, lpsi, a), d_cut);
                        acc_log += w * std::log(std::max(dl, 1e-300));
                    }
                    if (request.log_chord) {
                        const double ch = hypot_log_safe(delta_log, l_chord_slope, a);
                        acc_logch += w * std::log(std::max(ch, 1e-300));
                    }
                }
            }
            // n = 2: closed-form ramp integrals for the integrable log
            // singularity (angle density is exactly 1/pi there)
            if (dim == 2 && (request.log_distance || request.log_chord)) {
                if (ri == 0 || rj == 0) {
                    const double v = std::log(std::max(std::max(ri, rj), delta_log));
                    if (request.log_distance) acc_log += (alpha_cut / M_PI) * v;
                    if (request.log_chord) acc_logch += (alpha_cut / M_PI) * v;
                } else {
                    if (request.log_distance) {
                        double a_star = alpha_cut;
                        if (std::isfinite(lpsi)) {
                            const double gap2 = d_cut * d_cut - delta_log * delta_log;
                            if (gap2 <= 0) a_star = 0.0;
                            else {
                                const double la = 0.5 * std::log(gap2) - lpsi;
                                a_star = la > 2 ? alpha_cut : std::min(alpha_cut, std::exp(la));
                            }
                        }
                        acc_log += log_ramp_integral(delta_log, lpsi, a_star) / M_PI;
                        acc_log +=
                            (alpha_cut - a_star) / M_PI * std::log(std::max(d_cut, 1e-300));
                    }
                    if (request.log_chord)
                        acc_logch += log_ramp_integral(delta_log, l_chord_slope, alpha_cut) / M_PI;
                }
            }

            const std::size_t idx = i * ng + j;
            if (request.distance) k_distance_[idx] = acc_d;
            if (request.log_distance) k_log_[idx] = acc_log;
            if (request.log_chord) k_log_chord_[idx] = acc_logch;
            if (request.stretch) k_stretch_[idx] = acc_H;
            for (std::size_t p = 0; p < k_potentials_.size(); ++p)
                k_potentials_[p][idx] = acc_pot[p];
        }
    });

    // exact symmetry d(ri, rj, a) = d(rj, ri, a)
    auto symmetrize = [ng](std::vector<double>& K) {
        if (K.empty()) return;
        for (std::size_t i = 0; i < ng; ++i)
            for (std::size_t j = i + 1; j < ng; ++j) {
                const double v = 0.5 * (K[i * ng + j] + K[j * ng + i]);
                K[i * ng + j] = K[j * ng + i] = v;
            }
    };
    symmetrize(k_distance_);
    symmetrize(k_log_);
    symmetrize(k_log_chord_);
    symmetrize(k_stretch_);
    for (auto& K : k_potentials_) symmetrize(K);
}

} // namespace hadamard
