#ifndef HADAMARD_VERDICT_HPP
#define HADAMARD_VERDICT_HPP

#include <string>
#include <utility>
#include <vector>

namespace hadamard {

enum class Verdict { Satisfied, Violated, Inconclusive };

inline const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::Satisfied:    return "satisfied";
        case Verdict::Violated:     return "violated";
        default:                    return "inconclusive";
    }
}

/// Outcome of a numerically probed asymptotic condition.  `probes` holds the
/// sampled (abscissa, value) pairs the decision was based on, `trend` the
/// last-window statistic (fitted slope or terminal ratio) that drove it.
struct CriterionVerdict {
    std::string condition_id;
    std::vector<std::pair<double, double>> probes;
    double trend = 0.0;
    Verdict verdict = Verdict::Inconclusive;
    std::string note;

    bool satisfied() const { return verdict == Verdict::Satisfied; }
    bool violated() const { return verdict == Verdict::Violated; }
};

/// Geometric probe schedule theta0 * factor^j, capped at theta_max.
/// Guaranteed strictly increasing; spans [theta0, theta_max].
std::vector<double> geometric_probes(double theta0, double theta_max, double factor = 2.0);

/// Relative change of the last `window` values; small means "converged".
double last_window_relative_change(const std::vector<std::pair<double, double>>& probes,
                                   int window = 3);

/// Slope of a least-squares line through the last `window` probes.
double last_window_slope(const std::vector<std::pair<double, double>>& probes, int window = 3);

/// True if values over the last `window` probes never increase (resp. never
/// decrease) by more than `slack` relative.
bool last_window_monotone_down(const std::vector<std::pair<double, double>>& probes,
                               int window, double slack = 1e-12);

} // namespace hadamard

#endif
