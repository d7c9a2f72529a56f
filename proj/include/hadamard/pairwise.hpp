#ifndef HADAMARD_PAIRWISE_HPP
#define HADAMARD_PAIRWISE_HPP

#include "hadamard/geometry.hpp"

#include <functional>
#include <vector>

namespace hadamard {

/// Which angular kernels to reduce out of the per-source distance fields.
struct PairwiseRequest {
    bool distance = false;        // int d q_n dalpha
    bool log_distance = false;    // int log d q_n dalpha (diagonal handled analytically)
    bool log_chord = false;       // int log |chord| q_n dalpha (flat comparison term)
    bool stretch = false;         // int H(d) q_n dalpha
    std::vector<std::function<double(double)>> potentials; // int h(d) q_n dalpha
};

struct PairwiseConfig {
    int alpha_nodes = 64;   // Gauss-Legendre nodes on the angular separation
    int fmm_nr = 257;       // eikonal field resolution per source
    int fmm_nphi = 129;
};

/// Radial kernel matrices K_f(r_i, r_j) = int_0^pi f(d(r_i, r_j, alpha))
/// q_n(alpha) dalpha on a fixed radial grid, where q_n is the density of the
/// angle between two independent uniform directions on S^{n-1}.
///
/// One fast-marching field per source radius is reduced on the fly; the
/// matrices are symmetrized afterwards.  Distances are projected into the
/// exact comparison brackets chord <= d <= r_i + r_j, and pairs closer than
/// a few grid cells use the local metric formula sqrt(dr^2 + psi^2 alpha^2)
/// instead of interpolated field values.
class RadialKernelSet {
public:
    RadialKernelSet(const ModelManifold& m, std::vector<double> radial_grid,
                    const PairwiseRequest& request, const PairwiseConfig& cfg = {});

    const std::vector<double>& grid() const { return grid_; }
    std::size_t size() const { return grid_.size(); }

    bool has_distance() const { return !k_distance_.empty(); }
    bool has_log_distance() const { return !k_log_.empty(); }
    bool has_log_chord() const { return !k_log_chord_.empty(); }
    bool has_stretch() const { return !k_stretch_.empty(); }
    std::size_t potential_count() const { return k_potentials_.size(); }

    double distance_kernel(std::size_t i, std::size_t j) const { return k_distance_[i * size() + j]; }
    double log_kernel(std::size_t i, std::size_t j) const { return k_log_[i * size() + j]; }
    double log_chord_kernel(std::size_t i, std::size_t j) const { return k_log_chord_[i * size() + j]; }
    double stretch_kernel(std::size_t i, std::size_t j) const { return k_stretch_[i * size() + j]; }
    double potential_kernel(std::size_t p, std::size_t i, std::size_t j) const {
        return k_potentials_[p][i * size() + j];
    }
    const std::vector<double>& potential_matrix(std::size_t p) const { return k_potentials_[p]; }

    /// Quadratic form m^T K m with fixed pairwise summation order.
    double quadratic_form(const std::vector<double>& masses, const std::vector<double>& K) const;
    double quadratic_form_distance(const std::vector<double>& m) const { return quadratic_form(m, k_distance_); }
    double quadratic_form_log(const std::vector<double>& m) const { return quadratic_form(m, k_log_); }
    double quadratic_form_log_chord(const std::vector<double>& m) const { return quadratic_form(m, k_log_chord_); }
    double quadratic_form_stretch(const std::vector<double>& m) const { return quadratic_form(m, k_stretch_); }
    double quadratic_form_potential(std::size_t p, const std::vector<double>& m) const {
        return quadratic_form(m, k_potentials_[p]);
    }

    /// (K m)_i for the p-th potential kernel (the radial convolution h * rho).
    std::vector<double> apply_potential(std::size_t p, const std::vector<double>& masses) const;

private:
    std::vector<double> grid_;
    std::vector<double> k_distance_, k_log_, k_log_chord_, k_stretch_;
    std::vector<std::vector<double>> k_potentials_;
};

} // namespace hadamard

#endif
