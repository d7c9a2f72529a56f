#ifndef HADAMARD_CURVATURE_HPP
#define HADAMARD_CURVATURE_HPP

#include "hadamard/interp.hpp"
#include "hadamard/verdict.hpp"

#include <functional>
#include <limits>
#include <memory>
#include <string>
#include <vector>

namespace hadamard {

/// Radial bound profile c(theta) for the magnitude of the (negative)
/// sectional curvature, in units of 1/length^2.  Immutable after
/// construction; evaluation is pure.
///
/// Closed forms: constant c0, power scale*theta^k (k >= 1), exponential
/// scale*exp(beta*theta).  Tabulated profiles interpolate with a monotone
/// piecewise cubic so positive data cannot be overshot into negative values.
class CurvatureProfile {
public:
    enum class Kind { Constant, Power, Exponential, Tabulated };

    static CurvatureProfile constant(double c0);
    static CurvatureProfile power(double k, double scale = 1.0);
    static CurvatureProfile exponential(double beta, double scale = 1.0);
    static CurvatureProfile tabulated(std::vector<double> nodes, std::vector<double> values);
    /// Dense tabulation of an arbitrary positive function on [0, theta_max].
    static CurvatureProfile tabulate(const std::function<double(double)>& f,
                                     double theta_max, int n_nodes = 1025);

    Kind kind() const { return kind_; }
    /// c(theta); throws std::out_of_range for tabulated profiles beyond the
    /// last node and std::invalid_argument for negative theta.
    double operator()(double theta) const;
    /// dc/dtheta, analytic per kind (piecewise-cubic slope for tables).
    double derivative(double theta) const;
    /// Largest evaluable abscissa (infinity for closed forms).
    double max_theta() const;
    /// True when the profile is non-decreasing by construction or by data.
    bool non_decreasing() const { return non_decreasing_; }

    std::string describe() const;

    // parameter access for serialization
    double param_a() const { return a_; }
    double param_b() const { return b_; }
    const std::vector<double>& table_nodes() const;
    const std::vector<double>& table_values() const;

private:
    CurvatureProfile(Kind kind, double a, double b) : kind_(kind), a_(a), b_(b) {}
    Kind kind_;
    double a_ = 0.0; // c0 / k / beta
    double b_ = 0.0; // scale
    bool non_decreasing_ = true;
    std::shared_ptr<const CubicHermiteSeries> table_;
};

/// Probes the growth condition lim D+c/c^(3/2) = 0 together with D-c > 0
/// along an increasing abscissa sequence spanning at least two decades.
/// Dini derivatives are estimated by one-sided finite differences at step
/// h = max(1e-6, 1e-6*theta); limits are decided by the trend over the last
/// three probes (relative-change threshold 1e-3).
CriterionVerdict check_c32(const CurvatureProfile& c, const std::vector<double>& theta_probe);

/// Running maximum max_{0<=t<=theta} c(t), returned as a non-decreasing
/// profile.  Non-decreasing inputs are returned unchanged; otherwise the
/// maximum is scanned on a dense grid over [0, theta_max].
CurvatureProfile running_max(const CurvatureProfile& c, double theta_max,
                             int scan_nodes = 8193);

} // namespace hadamard

#endif
