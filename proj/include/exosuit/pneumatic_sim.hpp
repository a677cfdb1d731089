#pragma once

#include <vector>

#include "exosuit/torque_model.hpp"

// Gauge-pressure dynamics of the inflation-deflation zone filling from (or
// venting to) a regulated constant-pressure source through a solenoid valve.
//
// The chamber is a fixed isothermal volume of ideal gas, so
//
//     dp/dt = (R T / V) * mdot
//
// with the valve mass flow given by the standard sonic-conductance orifice
// model: choked at low downstream/upstream pressure ratio, elliptic roll-off
// above the critical ratio. Explicit fixed-step integration; the sub-second
// fill of a fabric chamber has no use for anything fancier.

namespace exosuit {

// Absolute reference for gauge pressures throughout the toolkit.
inline constexpr double kAtmosphericPressure = 101325.0;  // [Pa]
// Specific gas constant of air.
inline constexpr double kAirGasConstant = 287.05;  // [J/(kg K)]
// ANR reference state the sonic conductance is quoted at.
inline constexpr double kReferenceDensity = 1.185;       // [kg/m^3]
inline constexpr double kReferenceTemperature = 293.15;  // [K]

struct Chamber {
    double volume = 0.0;            // [m^3]
    double temperature = 293.15;    // [K], isothermal
};

struct ValveModel {
    double sonic_conductance = 2e-9;  // [m^3/(s Pa)] at ANR
    double critical_ratio = 0.5;      // choked below this downstream/upstream ratio
};

struct PressureTrace {
    double dt = 0.0;              // [s], uniform sample period
    std::vector<double> samples;  // gauge [Pa], samples[k] at t = k * dt
};

struct FillScenario {
    double supply_pressure = 100e3;  // gauge [Pa]; the regulated far-side
                                     // pressure (source on fill, sink on vent)
    double initial_pressure = 0.0;   // gauge [Pa] in the chamber at t = 0
    double band = 0.10;              // response-time tolerance band, fraction of target
};

/// Inflation-deflation zone volume [m^3]: n cylinders of diameter d over l_dz.
double chamber_volume(const ActuatorGeometry& geom);

/// Orifice mass flow [kg/s] from upstream to downstream, absolute pressures.
/// Zero at equal pressures; throws DomainError if p_down > p_up.
double mass_flow(const ValveModel& valve, double p_up_abs, double p_down_abs,
                 double temperature);

/// Chamber fill from scenario.initial_pressure toward scenario.supply_pressure.
/// Monotone non-decreasing; a step that would cross the supply pressure lands
/// on it exactly (the square-root dynamics reach equilibrium in finite time).
/// Throws NumericalError if dt exceeds the stability bound.
PressureTrace simulate_fill(const FillScenario& scenario, const Chamber& chamber,
                            const ValveModel& valve, double dt = 1e-4, double t_max = 2.0);

/// Mirror of simulate_fill: chamber vents toward scenario.supply_pressure
/// (atmosphere or a vacuum-pump inlet). Monotone non-increasing.
PressureTrace simulate_vent(const FillScenario& scenario, const Chamber& chamber,
                            const ValveModel& valve, double dt = 1e-4, double t_max = 2.0);

/// First time from which every later sample stays within
/// [target*(1-band), target*(1+band)]. Throws NumericalError when the band is
/// never permanently entered.
double response_time(const PressureTrace& trace, double target, double band);

/// Bisect the sonic conductance until a fill to anchor_target has response
/// time anchor_time (within 1%). The template supplies critical ratio and the
/// initial bracket guess.
ValveModel calibrate_conductance(double anchor_target, double anchor_time,
                                 const Chamber& chamber, const ValveModel& valve_template);

}  // namespace exosuit
