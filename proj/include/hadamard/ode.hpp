#ifndef HADAMARD_ODE_HPP
#define HADAMARD_ODE_HPP

#include "hadamard/errors.hpp"

#include <array>
#include <cmath>
#include <functional>
#include <string>

namespace hadamard {

/// Adaptive 4th-order Rosenbrock-Wanner integrator with embedded 3rd-order
/// error estimate (Kaps-Rentrop scheme, Shampine parameter set).  Chosen over
/// an explicit pair because the Riccati systems integrated here become
/// arbitrarily stiff when the curvature grows fast: the relaxation rate is
/// ~2*sqrt(c) while the solution itself varies on an O(1) scale, so an
/// explicit method is stability-limited to steps ~1/sqrt(c).
///
/// The system supplies the right-hand side, the Jacobian d f/d y and the
/// explicit time derivative d f/d t.
template <int N>
struct RosenbrockSystem {
    using State = std::array<double, N>;
    std::function<void(double, const State&, State&)> rhs;
    std::function<void(double, const State&, std::array<std::array<double, N>, N>&, State&)> jacobian;
};

struct OdeControl {
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    double initial_step = 1e-6;
    double max_step = 0.05;
    double min_step = 1e-14;
    /// Extra cap h <= step_scale_theta * t, useful near a coordinate
    /// singularity at t = 0 (0 disables).
    double step_scale_theta = 0.0;
    long max_steps = 50'000'000;
};

namespace rosenbrock_detail {
// Kaps-Rentrop coefficients, Shampine's parameter choice.
constexpr double GAM = 0.5;
constexpr double A21 = 2.0, A31 = 48.0 / 25.0, A32 = 6.0 / 25.0;
constexpr double C21 = -8.0, C31 = 372.0 / 25.0, C32 = 12.0 / 5.0;
constexpr double C41 = -112.0 / 125.0, C42 = -54.0 / 125.0, C43 = -2.0 / 5.0;
constexpr double B1 = 19.0 / 9.0, B2 = 0.5, B3 = 25.0 / 108.0, B4 = 125.0 / 108.0;
constexpr double E1 = 17.0 / 54.0, E2 = 7.0 / 36.0, E3 = 0.0, E4 = 125.0 / 108.0;
constexpr double C1X = 0.5, C2X = -1.5, C3X = 121.0 / 50.0, C4X = 29.0 / 250.0;
constexpr double A2X = 1.0, A3X = 3.0 / 5.0;

template <int N>
void lu_solve(std::array<std::array<double, N>, N> a, std::array<double, N>& b) {
    // Small dense solve with partial pivoting; N is 1..3 here.
    std::array<int, N> piv;
    for (int i = 0; i < N; ++i) piv[i] = i;
    for (int col = 0; col < N; ++col) {
        int p = col;
        for (int r = col + 1; r < N; ++r)
            if (std::abs(a[r][col]) > std::abs(a[p][col])) p = r;
        if (p != col) {
            std::swap(a[p], a[col]);
            std::swap(b[p], b[col]);
        }
        const double d = a[col][col];
        if (d == 0.0) throw numerical_error("rosenbrock: singular stage matrix");
        for (int r = col + 1; r < N; ++r) {
            const double m = a[r][col] / d;
            if (m == 0.0) continue;
            for (int c = col; c < N; ++c) a[r][c] -= m * a[col][c];
            b[r] -= m * b[col];
        }
    }
    for (int r = N - 1; r >= 0; --r) {
        double s = b[r];
        for (int c = r + 1; c < N; ++c) s -= a[r][c] * b[c];
        b[r] = s / a[r][r];
    }
}
} // namespace rosenbrock_detail

/// Integrate from (t, y) to t_end.  `on_accept(t_new, y_new, dy_new)` is
/// invoked after every accepted step (dy_new = rhs at the new point).
template <int N, typename Callback>
void integrate_rosenbrock(const RosenbrockSystem<N>& sys, double t, std::array<double, N> y,
                          double t_end, const OdeControl& ctl, Callback&& on_accept) {
    using namespace rosenbrock_detail;
    using State = std::array<double, N>;

    State dy;
    sys.rhs(t, y, dy);
    double h = ctl.initial_step;
    double err_prev = 1.0;
    long steps = 0;

    while (t < t_end) {
        double hmax = ctl.max_step;
        if (ctl.step_scale_theta > 0) hmax = std::min(hmax, ctl.step_scale_theta * std::max(t, 1e-300));
        h = std::min({h, hmax, t_end - t});
        if (++steps > ctl.max_steps)
            throw stiffness_error("rosenbrock: step budget exhausted at t=" + std::to_string(t));

        std::array<std::array<double, N>, N> jac;
        State dfdt;
        sys.jacobian(t, y, jac, dfdt);

        for (;;) {
            // Stage matrix (1/(gamma h)) I - J.
            std::array<std::array<double, N>, N> a = jac;
            const double diag = 1.0 / (GAM * h);
            for (int i = 0; i < N; ++i)
                for (int j = 0; j < N; ++j) a[i][j] = (i == j ? diag : 0.0) - jac[i][j];

            State g1, g2, g3, g4, yt, dyt;
            for (int i = 0; i < N; ++i) g1[i] = dy[i] + h * C1X * dfdt[i];
            lu_solve<N>(a, g1);
            for (int i = 0; i < N; ++i) yt[i] = y[i] + A21 * g1[i];
            sys.rhs(t + A2X * h, yt, dyt);
            for (int i = 0; i < N; ++i) g2[i] = dyt[i] + h * C2X * dfdt[i] + C21 * g1[i] / h;
            lu_solve<N>(a, g2);
            for (int i = 0; i < N; ++i) yt[i] = y[i] + A31 * g1[i] + A32 * g2[i];
            sys.rhs(t + A3X * h, yt, dyt);
            for (int i = 0; i < N; ++i)
                g3[i] = dyt[i] + h * C3X * dfdt[i] + (C31 * g1[i] + C32 * g2[i]) / h;
            lu_solve<N>(a, g3);
            for (int i = 0; i < N; ++i)
                g4[i] = dyt[i] + h * C4X * dfdt[i] + (C41 * g1[i] + C42 * g2[i] + C43 * g3[i]) / h;
            lu_solve<N>(a, g4);

            State ynew, errv;
            bool finite = true;
            double err = 0.0;
            for (int i = 0; i < N; ++i) {
                ynew[i] = y[i] + B1 * g1[i] + B2 * g2[i] + B3 * g3[i] + B4 * g4[i];
                errv[i] = E1 * g1[i] + E2 * g2[i] + E3 * g3[i] + E4 * g4[i];
                if (!std::isfinite(ynew[i])) finite = false;
                const double scale = ctl.abs_tol + ctl.rel_tol * std::max(std::abs(y[i]), std::abs(ynew[i]));
                err = std::max(err, std::abs(errv[i]) / scale);
            }

            if (finite && err <= 1.0) {
                t += h;
                y = ynew;
                sys.rhs(t, y, dy);
                on_accept(t, y, dy);
                // PI step controller.
                const double fac = 0.9 * std::pow(std::max(err, 1e-10), -0.175) *
                                   std::pow(err_prev, 0.08);
                err_prev = std::max(err, 1e-10);
                h *= std::clamp(fac, 0.2, 5.0);
                break;
            }
            h *= finite ? std::clamp(0.9 * std::pow(err, -1.0 / 3.0), 0.1, 0.5) : 0.1;
            if (h < ctl.min_step)
                throw stiffness_error("rosenbrock: step underflow at t=" + std::to_string(t));
        }
    }
}

} // namespace hadamard

#endif
