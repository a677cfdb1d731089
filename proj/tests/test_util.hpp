#pragma once

#include <cmath>
#include <ostream>

// Absolute-tolerance comparator for doctest assertions:
//   CHECK(value == near(expected, tol));
struct AbsApprox {
    double expected;
    double tol;
    friend bool operator==(double lhs, const AbsApprox& rhs) {
        return std::isfinite(lhs) && std::fabs(lhs - rhs.expected) <= rhs.tol;
    }
    friend bool operator==(const AbsApprox& lhs, double rhs) { return rhs == lhs; }
    friend std::ostream& operator<<(std::ostream& os, const AbsApprox& a) {
        return os << a.expected << " +/- " << a.tol;
    }
};

inline AbsApprox near(double expected, double tol) { return {expected, tol}; }
