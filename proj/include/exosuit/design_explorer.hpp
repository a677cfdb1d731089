#pragma once

#include <vector>

#include "exosuit/units.hpp"

// Enumeration and ranking of (n, d) actuator layouts at a fixed design
// operating point. Candidates trade off assist torque against the radial
// profile the suit adds to the limb (= d) and the contact area pressing on
// it (modeled as n parallel strips of width d and a fixed contact length).

namespace exosuit {

struct DesignConstraints {
    double p_design = 100e3;                               // gauge [Pa]
    double theta_design = units::deg_to_rad(80.0);         // [rad]
    double torque_min = 0.0;                               // [N m]
    double profile_max = 0.060;                            // [m]
    int n_min = 1;
    int n_max = 10;
    double d_min = 0.010;                                  // [m]
    double d_max = 0.060;                                  // [m]
    double d_step = 0.001;                                 // [m]
    double contact_length = 0.01172;                       // [m], stress-area strip length
    double dz_length = 0.060;                              // [m], zone length available to a candidate
};

struct DesignCandidate {
    int n = 0;
    double d = 0.0;            // [m]
    double torque = 0.0;       // [N m] at (p_design, theta_design)
    double profile = 0.0;      // [m], equals d
    double stress_area = 0.0;  // [m^2]
    bool feasible = false;     // dz_length > l_dz_min at theta_design
    double l_dz_min = 0.0;     // [m]
};

void validate(const DesignConstraints& constraints);

/// Contact-strip stress area: n strips of width d over contact_length.
double stress_area(int n, double d, double contact_length);

/// One candidate per (n, d) grid point, ordered by ascending n then d.
std::vector<DesignCandidate> enumerate_designs(const DesignConstraints& constraints);

/// Serial reference for enumerate_designs; identical output, no threading.
std::vector<DesignCandidate> enumerate_designs_serial(const DesignConstraints& constraints);

/// Non-dominated candidates under (maximize torque, minimize profile,
/// maximize stress_area). Domination needs >= on every objective and > on at
/// least one; exact duplicates are all kept. Input order is preserved.
std::vector<DesignCandidate> pareto_front(const std::vector<DesignCandidate>& candidates);

/// Front membership flag per candidate, aligned with the input.
std::vector<bool> pareto_membership(const std::vector<DesignCandidate>& candidates);

/// a dominates b under the objective senses above.
bool dominates(const DesignCandidate& a, const DesignCandidate& b);

/// Candidates that are feasible and satisfy torque_min / profile_max.
std::vector<DesignCandidate> filter_feasible(const std::vector<DesignCandidate>& candidates,
                                             const DesignConstraints& constraints);

}  // namespace exosuit
