#ifndef HADAMARD_ENERGY_HPP
#define HADAMARD_ENERGY_HPP

#include "hadamard/density.hpp"
#include "hadamard/interp.hpp"
#include "hadamard/verdict.hpp"

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace hadamard {

/// Attractive interaction potential h(theta) >= 0, non-decreasing, h(0) = 0
/// for the built-in kinds.  Carries an optional convex minorant phi used by
/// the existence criteria; when h itself is convex it is its own minorant,
/// otherwise the largest convex minorant of the sampled graph (its lower
/// convex hull) is constructed on demand.
class InteractionPotential {
public:
    enum class Kind { Power, ExpGrowth, LogPlus, Tabulated, Zero };

    static InteractionPotential zero();
    static InteractionPotential power(double a, double p);          // a theta^p
    static InteractionPotential exp_growth(double a, double b);     // a (e^{b theta} - 1)
    static InteractionPotential log_plus(double a);                 // a log(1 + theta)
    static InteractionPotential tabulated(std::vector<double> nodes, std::vector<double> values);

    Kind kind() const { return kind_; }
    double operator()(double theta) const;
    std::string describe() const;
    double param_a() const { return a_; }
    double param_b() const { return b_; }

    /// Explicit convex minorant; must satisfy phi <= h pointwise and be
    /// convex (validated by sampling; std::invalid_argument otherwise).
    void attach_minorant(InteractionPotential phi, double check_theta_max = 100.0);

    /// True when h itself is convex (then phi == h).
    bool self_convex() const;
    /// Convex minorant evaluator on [0, theta_max]: the attached phi, h
    /// itself when convex, or the lower convex hull of the sampled graph.
    std::function<double(double)> convex_minorant(double theta_max) const;
    bool has_explicit_minorant() const { return static_cast<bool>(minorant_); }

private:
    InteractionPotential(Kind k, double a, double b) : kind_(k), a_(a), b_(b) {}
    Kind kind_;
    double a_ = 0, b_ = 0;
    std::shared_ptr<const CubicHermiteSeries> table_;
    std::shared_ptr<const InteractionPotential> minorant_;
};

struct EnergyBreakdown {
    double entropy = 0;
    double interaction = 0;
    double total = 0;
    double quadrature_error = 0;
};

struct HlsGapReport {
    double gap;            // (1/n) entropy + ((n-1)/n) int H rho + iint log d rho rho
    double flat_gap;       // same with the flat chord instead of d (pushforward step)
    double distance_term;  // iint (log d - log chord) rho rho >= 0 (Rauch)
    double entropy_term;
    double stretch_term;   // int H(theta_x) rho
    double log_pair_term;  // iint log d rho rho
};

/// Owns the radial pairwise kernels for one (manifold, grid, h) context and
/// evaluates every energy functional against them.  A half-resolution
/// companion kernel set provides the quadrature error estimates.
class EnergyEvaluator {
public:
    struct Config {
        PairwiseConfig pairwise;
        bool inequality_kernels = false; // also build d, log d, log chord, H(d)
        bool error_companion = true;     // half-resolution twin for error estimates
    };

    EnergyEvaluator(std::shared_ptr<const ModelManifold> m, std::vector<double> radial_grid,
                    InteractionPotential h, const Config& cfg);
    EnergyEvaluator(std::shared_ptr<const ModelManifold> m, std::vector<double> radial_grid,
                    InteractionPotential h);

    const ModelManifold& manifold() const { return *manifold_; }
    std::shared_ptr<const ModelManifold> manifold_ptr() const { return manifold_; }
    const std::vector<double>& grid() const { return grid_; }
    const InteractionPotential& potential() const { return h_; }

    /// int rho log rho dvol with 0 log 0 = 0; exact for uniform densities.
    double entropy(const RadialDensity& rho) const;
    /// (1/2) iint h(d) rho rho; state_error when kernels were not built.
    double interaction(const RadialDensity& rho) const;
    double interaction_error_estimate(const RadialDensity& rho) const;
    EnergyBreakdown free_energy(const RadialDensity& rho) const;

    /// h * rho at the grid nodes (the radial convolution).
    std::vector<double> convolve(const RadialDensity& rho) const;
    std::vector<double> convolve_masses(const std::vector<double>& masses) const;

    /// iint d rho rho (needs inequality kernels).
    double mean_pairwise_distance(const RadialDensity& rho) const;

    /// Logarithmic HLS gap without the dimensional constant; bounded below
    /// by -C0 across any admissible family.  Also reports the two
    /// intermediate steps (flat pushforward gap and the Rauch distance term).
    HlsGapReport hls_gap(const RadialDensity& rho) const;

    /// iint H(d) rho rho >= int H(theta) rho (convexity + Jensen).
    CriterionVerdict check_jensen(const RadialDensity& rho) const;

private:
    std::shared_ptr<const ModelManifold> manifold_;
    std::vector<double> grid_;
    InteractionPotential h_;
    std::unique_ptr<RadialKernelSet> kernels_;
    std::unique_ptr<RadialKernelSet> coarse_;
};

/// Coercivity probe: fits the lower convex envelope of (W1, E) points and
/// reads the slope of its final segment; Satisfied when it reaches
/// (2 - sqrt 2)/2 - 0.05, Violated when the energy decreases with W1.
CriterionVerdict check_coercivity(const std::vector<std::pair<double, double>>& w1_energy);
CriterionVerdict check_coercivity(const EnergyEvaluator& ev,
                                  const std::vector<RadialDensity>& family);

} // namespace hadamard

#endif
