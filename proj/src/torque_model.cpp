#include "exosuit/torque_model.hpp"

#include <cmath>
#include <string>

#include "exosuit/errors.hpp"
#include "exosuit/units.hpp"

namespace exosuit {

namespace {

void require(bool ok, const std::string& what) {
    if (!ok) throw DomainError(what);
}

}  // namespace

void validate(const ActuatorGeometry& geom) {
    require(geom.n >= 1, "actuator count n must be >= 1");
    require(std::isfinite(geom.d) && geom.d > 0.0, "actuator diameter d must be positive");
    require(std::isfinite(geom.l_dz) && geom.l_dz > 0.0,
            "inflation-deflation zone length l_dz must be positive");
    require(std::isfinite(geom.l_hold_upper) && geom.l_hold_upper >= 0.0,
            "holding-zone length l_hold_upper must be non-negative");
    require(std::isfinite(geom.l_hold_lower) && geom.l_hold_lower >= 0.0,
            "holding-zone length l_hold_lower must be non-negative");
}

void validate(const OperatingPoint& op) {
    require(std::isfinite(op.p) && op.p >= 0.0, "gauge pressure p must be non-negative");
    require(std::isfinite(op.theta) && op.theta >= 0.0 && op.theta < units::kPi,
            "bending angle theta must lie in [0, pi)");
}

double predict_torque(const ActuatorGeometry& geom, const OperatingPoint& op) {
    validate(geom);
    validate(op);
    const double c = std::cos(op.theta / 2.0);
    return units::kPi * geom.n * op.p * geom.d * geom.d * geom.d / (8.0 * c * c);
}

TorquePrediction predict(const ActuatorGeometry& geom, const OperatingPoint& op) {
    return TorquePrediction{predict_torque(geom, op), geom, op};
}

double min_dz_length(double d, double theta_max) {
    require(std::isfinite(d) && d > 0.0, "actuator diameter d must be positive");
    require(std::isfinite(theta_max) && theta_max >= 0.0 && theta_max < units::kPi,
            "bending angle theta must lie in [0, pi)");
    return 2.0 * d * std::tan(theta_max / 2.0);
}

bool is_feasible(const ActuatorGeometry& geom, double theta_max, double margin) {
    validate(geom);
    require(std::isfinite(margin) && margin > 0.0, "feasibility margin must be positive");
    return geom.l_dz > margin * min_dz_length(geom.d, theta_max);
}

double required_pressure(double torque_target, const ActuatorGeometry& geom, double theta) {
    require(std::isfinite(torque_target) && torque_target >= 0.0,
            "torque target must be non-negative");
    validate(geom);
    require(std::isfinite(theta) && theta >= 0.0 && theta < units::kPi,
            "bending angle theta must lie in [0, pi)");
    const double c = std::cos(theta / 2.0);
    return 8.0 * torque_target * c * c / (units::kPi * geom.n * geom.d * geom.d * geom.d);
}

double relative_model_error(double predicted, double measured) {
    require(std::isfinite(predicted), "predicted torque must be finite");
    require(std::isfinite(measured) && measured > 0.0, "measured torque must be positive");
    return std::abs(measured - predicted) / measured;
}

namespace {

TorqueSurface make_surface(const ActuatorGeometry& geom, const std::vector<double>& p_grid,
                           const std::vector<double>& theta_grid) {
    if (p_grid.empty() || theta_grid.empty())
        throw DomainError("torque surface grids must be non-empty");
    validate(geom);
    for (double p : p_grid) validate(OperatingPoint{p, 0.0});
    for (double theta : theta_grid) validate(OperatingPoint{0.0, theta});
    TorqueSurface s;
    s.p_grid = p_grid;
    s.theta_grid = theta_grid;
    s.torque.resize(p_grid.size() * theta_grid.size());
    return s;
}

}  // namespace

TorqueSurface torque_surface_serial(const ActuatorGeometry& geom,
                                    const std::vector<double>& p_grid,
                                    const std::vector<double>& theta_grid) {
    TorqueSurface s = make_surface(geom, p_grid, theta_grid);
    const std::size_t np = p_grid.size();
    const std::size_t nt = theta_grid.size();
    double* out = s.torque.data();
    const double* ps = s.p_grid.data();
    const double* ts = s.theta_grid.data();
    for (std::size_t i = 0; i < np; ++i) {
        for (std::size_t j = 0; j < nt; ++j) {
            const double c = std::cos(ts[j] / 2.0);
            out[i * nt + j] =
                units::kPi * geom.n * ps[i] * geom.d * geom.d * geom.d / (8.0 * c * c);
        }
    }
    return s;
}

TorqueSurface torque_surface(const ActuatorGeometry& geom, const std::vector<double>& p_grid,
                             const std::vector<double>& theta_grid) {
    TorqueSurface s = make_surface(geom, p_grid, theta_grid);
    // Inputs were validated up front, so each cell is a pure arithmetic
    // evaluation; cells are independent and written by index, which keeps the
    // result identical to the serial reference for any thread count.
    const long long np = static_cast<long long>(p_grid.size());
    const long long nt = static_cast<long long>(theta_grid.size());
    double* out = s.torque.data();
    const double* ps = s.p_grid.data();
    const double* ts = s.theta_grid.data();
#pragma omp parallel for collapse(2) schedule(static)
    for (long long i = 0; i < np; ++i) {
        for (long long j = 0; j < nt; ++j) {
            const double c = std::cos(ts[j] / 2.0);
            out[i * nt + j] =
                units::kPi * geom.n * ps[i] * geom.d * geom.d * geom.d / (8.0 * c * c);
        }
    }
    return s;
}

}  // namespace exosuit
