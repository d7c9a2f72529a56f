#ifndef HADAMARD_ERRORS_HPP
#define HADAMARD_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace hadamard {

/// Thrown when a computation fails numerically (overflow, step underflow,
/// loss of positivity in a quantity that must stay positive).
class numerical_error : public std::runtime_error {
public:
    explicit numerical_error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Thrown when an adaptive integrator cannot make progress.
class stiffness_error : public numerical_error {
public:
    explicit stiffness_error(const std::string& msg) : numerical_error(msg) {}
};

/// Thrown when an operation is invoked before its required inputs exist
/// (e.g. interaction quadrature without distance kernels).
class state_error : public std::logic_error {
public:
    explicit state_error(const std::string& msg) : std::logic_error(msg) {}
};

} // namespace hadamard

#endif
