#ifndef HADAMARD_INTERP_HPP
#define HADAMARD_INTERP_HPP

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstddef>
#include <vector>

namespace hadamard {

/// Index of the interval [x[i], x[i+1]] containing xq (clamped to the ends).
inline std::size_t locate_interval(const std::vector<double>& x, double xq) {
    assert(x.size() >= 2);
    if (xq <= x.front()) return 0;
    if (xq >= x.back()) return x.size() - 2;
    auto it = std::upper_bound(x.begin(), x.end(), xq);
    return static_cast<std::size_t>(it - x.begin()) - 1;
}

/// Cubic Hermite on [x0,x1] given values and first derivatives at the ends.
inline double hermite_cubic(double x0, double x1, double f0, double f1,
                            double d0, double d1, double xq) {
    const double h = x1 - x0;
    const double t = (xq - x0) / h;
    const double t2 = t * t, t3 = t2 * t;
    return f0 * (2 * t3 - 3 * t2 + 1) + f1 * (-2 * t3 + 3 * t2)
         + h * (d0 * (t3 - 2 * t2 + t) + d1 * (t3 - t2));
}

inline double hermite_cubic_deriv(double x0, double x1, double f0, double f1,
                                  double d0, double d1, double xq) {
    const double h = x1 - x0;
    const double t = (xq - x0) / h;
    const double t2 = t * t;
    return (f0 * (6 * t2 - 6 * t) + f1 * (-6 * t2 + 6 * t)) / h
         + d0 * (3 * t2 - 4 * t + 1) + d1 * (3 * t2 - 2 * t);
}

/// Quintic Hermite on [x0,x1] given values and first and second derivatives
/// at the ends.  Used where the second derivative comes for free from an ODE
/// right-hand side.
inline double hermite_quintic(double x0, double x1, double f0, double f1,
                              double d0, double d1, double s0, double s1,
                              double xq) {
    const double h = x1 - x0;
    const double t = (xq - x0) / h;
    const double t2 = t * t, t3 = t2 * t, t4 = t3 * t, t5 = t4 * t;
    const double h00 = 1 - 10 * t3 + 15 * t4 - 6 * t5;
    const double h10 = t - 6 * t3 + 8 * t4 - 3 * t5;
    const double h20 = 0.5 * (t2 - 3 * t3 + 3 * t4 - t5);
    const double h01 = 10 * t3 - 15 * t4 + 6 * t5;
    const double h11 = -4 * t3 + 7 * t4 - 3 * t5;
    const double h21 = 0.5 * (t3 - 2 * t4 + t5);
    return f0 * h00 + f1 * h01 + h * (d0 * h10 + d1 * h11)
         + h * h * (s0 * h20 + s1 * h21);
}

/// Monotone piecewise-cubic (Fritsch-Carlson) node slopes.  The resulting
/// Hermite interpolant does not overshoot the data, so positive monotone
/// samples stay positive.
std::vector<double> pchip_slopes(const std::vector<double>& x, const std::vector<double>& y);

/// Piecewise-cubic Hermite interpolant with fixed node slopes.
class CubicHermiteSeries {
public:
    CubicHermiteSeries() = default;
    CubicHermiteSeries(std::vector<double> x, std::vector<double> y, std::vector<double> slopes)
        : x_(std::move(x)), y_(std::move(y)), d_(std::move(slopes)) {}

    double operator()(double xq) const {
        const std::size_t i = locate_interval(x_, xq);
        return hermite_cubic(x_[i], x_[i + 1], y_[i], y_[i + 1], d_[i], d_[i + 1], xq);
    }
    double derivative(double xq) const {
        const std::size_t i = locate_interval(x_, xq);
        return hermite_cubic_deriv(x_[i], x_[i + 1], y_[i], y_[i + 1], d_[i], d_[i + 1], xq);
    }
    const std::vector<double>& abscissae() const { return x_; }
    const std::vector<double>& values() const { return y_; }

private:
    std::vector<double> x_, y_, d_;
};

} // namespace hadamard

#endif
