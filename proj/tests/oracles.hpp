#ifndef HADAMARD_TEST_ORACLES_HPP
#define HADAMARD_TEST_ORACLES_HPP

// Closed-form and brute-force reference values used by the test suites.
// Everything here is independent of the library's solution path: constant
// curvature admits hyperbolic closed forms, and the brute-force integrator
// below advances psi'' = c psi directly with fixed-step RK4.

#include <cmath>
#include <functional>
#include <stdexcept>

namespace oracle {

// psi for constant curvature c: sinh(sqrt(c) theta)/sqrt(c)
inline double psi_const(double c, double theta) {
    const double s = std::sqrt(c);
    return std::sinh(s * theta) / s;
}
inline double log_psi_const(double c, double theta) {
    // log(sinh(x)/s) without overflow: x + log1p(-e^{-2x}) - log 2 - log s
    const double s = std::sqrt(c);
    const double x = s * theta;
    return x + std::log1p(-std::exp(-2 * x)) - std::log(2.0) - std::log(s);
}
inline double phi_const(double c, double theta) {
    const double s = std::sqrt(c);
    return s / std::tanh(s * theta);
}

// hyperbolic law of cosines at curvature -c (c > 0)
inline double hyperbolic_distance(double c, double r1, double r2, double alpha) {
    const double s = std::sqrt(c);
    const double ch = std::cosh(s * r1) * std::cosh(s * r2) -
                      std::sinh(s * r1) * std::sinh(s * r2) * std::cos(alpha);
    return std::acosh(std::max(1.0, ch)) / s;
}

// area of the hyperbolic disk of radius R at curvature -1 (n = 2)
inline double hyperbolic_disk_area(double R) { return 2 * M_PI * (std::cosh(R) - 1.0); }

// fixed-step RK4 on (psi, psi'), psi'' = c psi; returns (psi, psi') at theta.
// Independent of the library's Riccati/log-domain path.
inline std::pair<double, double> integrate_psi_rk4(const std::function<double(double)>& c,
                                                   double theta, int steps = 200000) {
    double t = 0.0, y = 0.0, v = 1.0;
    const double h = theta / steps;
    for (int i = 0; i < steps; ++i) {
        const auto f = [&c](double tt, double yy, double vv) {
            return std::pair<double, double>{vv, c(tt) * yy};
        };
        auto [k1y, k1v] = f(t, y, v);
        auto [k2y, k2v] = f(t + h / 2, y + h / 2 * k1y, v + h / 2 * k1v);
        auto [k3y, k3v] = f(t + h / 2, y + h / 2 * k2y, v + h / 2 * k2v);
        auto [k4y, k4v] = f(t + h, y + h * k3y, v + h * k3v);
        y += h / 6 * (k1y + 2 * k2y + 2 * k3y + k4y);
        v += h / 6 * (k1v + 2 * k2v + 2 * k3v + k4v);
        t += h;
    }
    return {y, v};
}

// Simpson rule on a lambda; used as an independent quadrature oracle.
inline double simpson(const std::function<double(double)>& f, double a, double b, int n = 4096) {
    if (n % 2) ++n;
    const double h = (b - a) / n;
    double s = f(a) + f(b);
    for (int i = 1; i < n; ++i) s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
    return s * h / 3;
}

} // namespace oracle

#endif
