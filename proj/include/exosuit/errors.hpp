#pragma once

#include <stdexcept>
#include <string>

namespace exosuit {

/// Physically invalid argument (pressure < 0, angle outside [0, pi), ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Malformed file, config, or command-line input.
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Numerical failure: unstable step size, bisection without convergence,
/// tolerance band never reached.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace exosuit
