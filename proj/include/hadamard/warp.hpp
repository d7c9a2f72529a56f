#ifndef HADAMARD_WARP_HPP
#define HADAMARD_WARP_HPP

#include "hadamard/curvature.hpp"
#include "hadamard/verdict.hpp"

#include <utility>
#include <vector>

namespace hadamard {

/// Log-domain solution of the comparison problem
///     psi'' = c(theta) psi,  psi(0) = 0,  psi'(0) = 1.
///
/// Stored as the pair (log psi, Phi = psi'/psi) on an adaptive grid;
/// psi itself overflows any fixed-width float once c grows fast, while
/// log psi and Phi stay tame.  Below theta_init a two-term series around the
/// regular singular point is used:
///     psi = theta (1 + c(0) theta^2/6 + c'(0) theta^3/12 + O(theta^4)).
class WarpSolution {
public:
    WarpSolution(CurvatureProfile profile, std::vector<double> theta,
                 std::vector<double> log_psi, std::vector<double> phi,
                 double theta_init, double c0, double c1);

    const CurvatureProfile& profile() const { return profile_; }
    double theta_init() const { return theta_init_; }
    double theta_max() const { return theta_.back(); }

    /// log psi(theta); quintic Hermite between nodes (second derivatives are
    /// free: d^2 log psi = c - Phi^2).
    double log_warp(double theta) const;
    /// Phi(theta) = psi'(theta)/psi(theta); cubic Hermite between nodes.
    double log_deriv(double theta) const;
    /// H(theta) = log(psi/theta) >= 0, the per-direction log of the
    /// exponential-map stretch factor.
    double log_stretch(double theta) const;
    /// H'(theta) = Phi - 1/theta >= 0.
    double log_stretch_deriv(double theta) const;
    /// G(theta) = psi/psi' = 1/Phi, the e-folding length of psi; 0 < G <= theta.
    double growth_length(double theta) const;

    const std::vector<double>& grid() const { return theta_; }
    const std::vector<double>& grid_log_psi() const { return logpsi_; }
    const std::vector<double>& grid_phi() const { return phi_; }

private:
    void require_in_range(double theta) const;
    CurvatureProfile profile_;
    std::vector<double> theta_, logpsi_, phi_;
    double theta_init_;
    double c0_, c1_; // c(0), c'(0) for the series
};

struct WarpOptions {
    double tol = 1e-10;          // local error target of the Riccati integration
    double theta_init = 1e-4;    // series handoff point
    double max_step = 0.05;      // grid density cap (keeps interpolation error ~ 10*tol)
    double step_scale = 0.004;   // extra cap h <= step_scale*theta near the singular point
};

/// Integrates Phi' = c - Phi^2 and log psi' = Phi from the series handoff to
/// theta_max with an L-stable embedded Rosenbrock pair.
/// Throws numerical_error if Phi leaves (0, inf), stiffness_error on step
/// underflow.
WarpSolution solve_warp(const CurvatureProfile& profile, double theta_max,
                        const WarpOptions& opt = {});
inline WarpSolution solve_warp(const CurvatureProfile& profile, double theta_max, double tol) {
    WarpOptions opt;
    opt.tol = tol;
    return solve_warp(profile, theta_max, opt);
}

/// Verifies psi(theta0) exp((1 -+ eps) int_{theta0}^theta sqrt(c)) brackets
/// psi at every grid node above theta0 (log-domain).  The lower envelope is
/// only claimed when the 3/2-growth condition holds, which is what the
/// comparison lemma requires; otherwise it is skipped with a note.
CriterionVerdict check_exp_envelopes(const WarpSolution& w, double eps, double theta0);

/// Smallest grid abscissa from which check_exp_envelopes passes; the
/// comparison lemma only asserts existence of such a point, so it has to be
/// found by scanning.
double scan_envelope_theta0(const WarpSolution& w, double eps);

/// Verifies sqrt(c)*G -> 1: satisfied when |sqrt(c)G - 1| < 0.05 over the
/// last decade of the grid.
CriterionVerdict check_growth_length_limit(const WarpSolution& w);

/// Verifies liminf H(theta)/theta >= sqrt(c(0)) on the last decade of the
/// grid (2% slack).
CriterionVerdict check_linear_log_growth(const WarpSolution& w);

/// Sampled solution of the volume-density Riccati equation
///     Psi' = (n-1) c - Psi^2/(n-1),  Psi(eps) = psi_eps > 0.
/// All samples must stay strictly positive; a non-positive sample indicates
/// a solver defect and raises numerical_error.
std::vector<std::pair<double, double>> solve_volume_riccati(
    const CurvatureProfile& profile, int n, double eps, double psi_eps,
    double theta_max, double tol = 1e-10);

/// det A sandwich for the model manifold: given bounds c_M <= c <= c_m
/// (pointwise), checks (n-1) log psi_M <= (n-1) log psi <= (n-1) log psi_m
/// at every node of a shared grid.
CriterionVerdict check_detA_sandwich(const CurvatureProfile& c_M, const CurvatureProfile& c,
                                     const CurvatureProfile& c_m, int n, double theta_max,
                                     double slack = 1e-8);

} // namespace hadamard

#endif
