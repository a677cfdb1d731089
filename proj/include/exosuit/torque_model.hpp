#pragma once

#include <cstddef>
#include <vector>

// Closed-form static model of the zone-inflated exosuit.
//
// The suit wraps n cylindrical fabric actuators of diameter d around the
// joint. Only the joint-spanning inflation-deflation zone (length l_dz)
// changes volume when the joint bends by theta, so the assist torque is
//
//     T = pi * n * p * d^3 / (8 * cos^2(theta / 2))
//
// and the zone is long enough to keep the holding zones at constant volume
// exactly when  l_dz > 2 * d * tan(theta / 2)  (strict).

namespace exosuit {

struct ActuatorGeometry {
    int n = 4;            // number of cylindrical actuators
    double d = 0.032;     // actuator diameter [m]
    double l_dz = 0.060;  // inflation-deflation zone length [m]
    // Holding-zone lengths [m]; carried for documentation and chamber
    // bookkeeping, not used by the torque formula.
    double l_hold_upper = 0.0;
    double l_hold_lower = 0.0;
};

struct OperatingPoint {
    double p = 0.0;      // gauge pressure [Pa]
    double theta = 0.0;  // bending angle [rad], 0 = straight, must stay < pi
};

struct TorquePrediction {
    double torque = 0.0;  // [N m]
    ActuatorGeometry geometry;
    OperatingPoint operating_point;
};

struct MeasuredPoint {
    double theta = 0.0;            // [rad]
    double p = 0.0;                // gauge [Pa]
    double torque_measured = 0.0;  // [N m]
};

/// Throws DomainError if the value violates its invariants.
void validate(const ActuatorGeometry& geom);
void validate(const OperatingPoint& op);

/// Assist torque [N m] at the given operating point.
double predict_torque(const ActuatorGeometry& geom, const OperatingPoint& op);

TorquePrediction predict(const ActuatorGeometry& geom, const OperatingPoint& op);

/// Lower bound on the inflation-deflation zone length [m] for bending up to
/// theta_max. A usable zone must be strictly longer than this.
double min_dz_length(double d, double theta_max);

/// True iff geom.l_dz exceeds margin * min_dz_length(geom.d, theta_max).
/// Strict comparison; margin defaults to no safety factor.
bool is_feasible(const ActuatorGeometry& geom, double theta_max, double margin = 1.0);

/// Gauge pressure [Pa] that produces torque_target at bending angle theta.
double required_pressure(double torque_target, const ActuatorGeometry& geom, double theta);

/// |measured - predicted| / measured. Requires measured > 0.
double relative_model_error(double predicted, double measured);

/// Torque evaluated over a pressure x angle grid, row-major with pressure as
/// the slow index (value(i, j) pairs p_grid[i] with theta_grid[j]).
struct TorqueSurface {
    std::vector<double> p_grid;      // gauge [Pa]
    std::vector<double> theta_grid;  // [rad]
    std::vector<double> torque;      // [N m], p_grid.size() * theta_grid.size()

    double at(std::size_t i_p, std::size_t i_theta) const {
        return torque[i_p * theta_grid.size() + i_theta];
    }
};

TorqueSurface torque_surface(const ActuatorGeometry& geom,
                             const std::vector<double>& p_grid,
                             const std::vector<double>& theta_grid);

/// Serial reference for torque_surface; identical output, no threading.
TorqueSurface torque_surface_serial(const ActuatorGeometry& geom,
                                    const std::vector<double>& p_grid,
                                    const std::vector<double>& theta_grid);

}  // namespace exosuit
