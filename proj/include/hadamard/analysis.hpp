#ifndef HADAMARD_ANALYSIS_HPP
#define HADAMARD_ANALYSIS_HPP

#include "hadamard/energy.hpp"

#include <memory>
#include <vector>

namespace hadamard {

/// Nonexistence-by-spreading criterion: evaluates
///     g(theta) = h(theta) - A int_0^{theta - delta} sqrt(c_M(t/2)) dt
/// on the probe (0 < A < n-1, delta > 0).  Satisfied (spreading predicted)
/// when g decreases over the last window and is below -1e3 at the final
/// probe; Violated when it grows past +1e3; Inconclusive otherwise.
/// The 3/2-growth hypothesis on c_M is probed and reported in the note.
CriterionVerdict check_nonexistence(const InteractionPotential& h, const CurvatureProfile& c_M,
                                    int n, double A, double delta,
                                    const std::vector<double>& theta_probe);

/// Existence criterion: phi(theta) / (theta sqrt(c~_m(theta))) -> infinity,
/// where phi is the convex minorant of h and c~_m the running maximum of
/// c_m when c_m is not already non-decreasing.  Satisfied when the ratio
/// grows monotonically by >= 10x over the last two decades of the probe;
/// Violated when it stays flat or declines; Inconclusive in between.
CriterionVerdict check_existence(const InteractionPotential& h, const CurvatureProfile& c_m,
                                 int n, const std::vector<double>& theta_probe);

/// Weaker existence condition phi(theta)/H(theta) -> infinity, evaluated
/// against the solved warp of c_m; decision thresholds as in
/// check_existence.  Every (phi, c_m) passing check_existence passes this.
CriterionVerdict check_relaxed_existence(const InteractionPotential& h, const WarpSolution& warp_m,
                                         const std::vector<double>& theta_probe);

struct SpreadingRow {
    double R;
    EnergyBreakdown energy;   // exact free energy of the uniform ball
    double analytic_bound;    // -log|B_R| + h(2R)/2
};

struct SpreadingResult {
    std::vector<SpreadingRow> rows;
    CriterionVerdict verdict; // Satisfied = spreading regime (tail decreasing)
};

/// Uniform-ball family rho_R across the schedule: exact free energies next
/// to the analytic upper bound.  Spreading regime is declared when the exact
/// energies decrease strictly over the last half of the schedule.
/// Schedule radii must lie on the evaluator's radial grid so the ball jump
/// is a grid node.
SpreadingResult spreading_experiment(const EnergyEvaluator& ev,
                                     const std::vector<double>& R_schedule);

struct GroundStateReport {
    RadialDensity density;
    EnergyBreakdown energy;
    bool converged = false;
    int iterations = 0;
    double residual = 0;
    double support_radius = 0;  // smallest r with cumulative mass >= 1 - 1e-6
    double boundary_mass = 0;   // mass in the outer 5% of the grid
};

struct GroundStateOptions {
    double damping = 0.3;   // eta in (0, 1]
    int max_iter = 2000;
    double tol = 1e-8;      // sup-norm of the log fixed-point residual
};

/// Damped fixed-point iteration on the first-order condition
/// rho ~ exp(-h * rho):  log rho_{t+1} = (1-eta) log rho_t - eta (h*rho_t)
/// + normalization.  Non-convergence is reported, not thrown; mass escaping
/// to the grid boundary (spreading) keeps boundary_mass high and the report
/// unconverged.
GroundStateReport find_ground_state(const EnergyEvaluator& ev,
                                    const GroundStateOptions& opt = {});

} // namespace hadamard

#endif
