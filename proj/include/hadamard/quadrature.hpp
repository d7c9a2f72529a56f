#ifndef HADAMARD_QUADRATURE_HPP
#define HADAMARD_QUADRATURE_HPP

#include <functional>
#include <vector>

namespace hadamard {

/// Nodes and weights of the n-point Gauss-Legendre rule on [a, b].
struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

GaussRule gauss_legendre(int n, double a, double b);

/// Adaptive Gauss-Kronrod 7-15 integration of f on [a, b].
/// Stops when the local error estimate is below max(abs_tol, rel_tol*|I|).
double integrate(const std::function<double(double)>& f, double a, double b,
                 double rel_tol = 1e-10, double abs_tol = 0.0, int max_depth = 60);

/// log of the integral of exp(g) over [a, b], computed without overflow.
/// g may reach +-1e9; the integrand is rescaled by its running maximum.
double log_integrate_exp(const std::function<double(double)>& g, double a, double b,
                         double rel_tol = 1e-9);

/// Pairwise (cascade) summation; deterministic and more accurate than a
/// running sum for long arrays.
double pairwise_sum(const double* v, std::size_t n);
inline double pairwise_sum(const std::vector<double>& v) {
    return v.empty() ? 0.0 : pairwise_sum(v.data(), v.size());
}

} // namespace hadamard

#endif
