#include "exosuit/pneumatic_sim.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "exosuit/errors.hpp"
#include "exosuit/units.hpp"

namespace exosuit {

namespace {

void validate_plant(const Chamber& chamber, const ValveModel& valve, double dt, double t_max) {
    if (!(chamber.volume > 0.0)) throw DomainError("chamber volume must be positive");
    if (!(chamber.temperature > 0.0)) throw DomainError("chamber temperature must be positive");
    if (!(valve.sonic_conductance > 0.0)) throw DomainError("sonic conductance must be positive");
    if (!(valve.critical_ratio > 0.0 && valve.critical_ratio < 1.0))
        throw DomainError("critical pressure ratio must lie in (0, 1)");
    if (!(dt > 0.0)) throw DomainError("integration step dt must be positive");
    if (!(t_max > 0.0)) throw DomainError("t_max must be positive");
}

std::size_t step_count(double dt, double t_max) {
    return static_cast<std::size_t>(std::ceil(t_max / dt - 1e-9));
}

}  // namespace

double chamber_volume(const ActuatorGeometry& geom) {
    validate(geom);
    const double r = geom.d / 2.0;
    return geom.n * units::kPi * r * r * geom.l_dz;
}

double mass_flow(const ValveModel& valve, double p_up_abs, double p_down_abs,
                 double temperature) {
    if (!(p_down_abs > 0.0) || !(p_up_abs > 0.0))
        throw DomainError("valve pressures must be positive absolute");
    if (p_down_abs > p_up_abs)
        throw DomainError("mass_flow requires p_up >= p_down; swap arguments for reverse flow");
    const double r = p_down_abs / p_up_abs;
    const double b = valve.critical_ratio;
    const double choked = valve.sonic_conductance * kReferenceDensity * p_up_abs *
                          std::sqrt(kReferenceTemperature / temperature);
    if (r <= b) return choked;
    const double u = (r - b) / (1.0 - b);
    return choked * std::sqrt(std::max(0.0, 1.0 - u * u));
}

namespace {

// Shared integrator. direction +1 fills toward the far-side pressure from
// below, -1 vents toward it from above.
PressureTrace integrate(const FillScenario& sc, const Chamber& chamber, const ValveModel& valve,
                        double dt, double t_max, int direction) {
    validate_plant(chamber, valve, dt, t_max);
    if (!(sc.band > 0.0 && sc.band < 1.0)) throw DomainError("band must lie in (0, 1)");
    const double far_abs = sc.supply_pressure + kAtmosphericPressure;
    double p_abs = sc.initial_pressure + kAtmosphericPressure;
    if (!(far_abs > 0.0) || !(p_abs > 0.0))
        throw DomainError("absolute pressures must stay positive");
    if (direction > 0 && sc.initial_pressure > sc.supply_pressure)
        throw DomainError("fill requires supply pressure >= initial pressure");
    if (direction < 0 && sc.initial_pressure < sc.supply_pressure)
        throw DomainError("vent requires initial pressure >= sink pressure");

    const double gain = kAirGasConstant * chamber.temperature / chamber.volume;
    const double gap = std::abs(far_abs - p_abs);
    if (gap > 0.0) {
        // Flow is largest at the start of the transient; a first step that
        // would cross the whole pressure gap cannot resolve the dynamics.
        const double mdot0 = direction > 0 ? mass_flow(valve, far_abs, p_abs, chamber.temperature)
                                           : mass_flow(valve, p_abs, far_abs, chamber.temperature);
        const double dt_bound = gap / (gain * mdot0);
        if (dt > dt_bound)
            throw NumericalError("integration step dt=" + std::to_string(dt) +
                                 " s exceeds the stability bound " + std::to_string(dt_bound) +
                                 " s for this plant");
    }

    const std::size_t n_steps = step_count(dt, t_max);
    PressureTrace trace;
    trace.dt = dt;
    trace.samples.reserve(n_steps + 1);
    trace.samples.push_back(p_abs - kAtmosphericPressure);
    for (std::size_t k = 0; k < n_steps; ++k) {
        if (direction > 0) {
            const double mdot = mass_flow(valve, far_abs, p_abs, chamber.temperature);
            p_abs += dt * gain * mdot;
            // Equilibrium is reached in finite time; land on it, never past.
            if (p_abs > far_abs) p_abs = far_abs;
        } else {
            const double mdot = mass_flow(valve, p_abs, far_abs, chamber.temperature);
            p_abs -= dt * gain * mdot;
            if (p_abs < far_abs) p_abs = far_abs;
        }
        trace.samples.push_back(p_abs - kAtmosphericPressure);
    }
    return trace;
}

}  // namespace

PressureTrace simulate_fill(const FillScenario& scenario, const Chamber& chamber,
                            const ValveModel& valve, double dt, double t_max) {
    return integrate(scenario, chamber, valve, dt, t_max, +1);
}

PressureTrace simulate_vent(const FillScenario& scenario, const Chamber& chamber,
                            const ValveModel& valve, double dt, double t_max) {
    return integrate(scenario, chamber, valve, dt, t_max, -1);
}

double response_time(const PressureTrace& trace, double target, double band) {
    if (trace.samples.empty()) throw DomainError("response_time of an empty trace");
    if (!(trace.dt > 0.0)) throw DomainError("trace dt must be positive");
    if (!(target > 0.0)) throw DomainError("target pressure must be positive");
    if (!(band > 0.0 && band < 1.0)) throw DomainError("band must lie in (0, 1)");
    const double lo = target * (1.0 - band);
    const double hi = target * (1.0 + band);
    // Last sample outside the band decides: everything after it stays inside.
    std::size_t first_in = trace.samples.size();
    for (std::size_t k = trace.samples.size(); k-- > 0;) {
        if (trace.samples[k] < lo || trace.samples[k] > hi) {
            first_in = k + 1;
            break;
        }
        first_in = k;
    }
    if (first_in >= trace.samples.size())
        throw NumericalError("pressure never settles inside the +/-" +
                             std::to_string(band * 100.0) + "% band of the target");
    return static_cast<double>(first_in) * trace.dt;
}

ValveModel calibrate_conductance(double anchor_target, double anchor_time,
                                 const Chamber& chamber, const ValveModel& valve_template) {
    if (!(anchor_target > 0.0)) throw DomainError("anchor target pressure must be positive");
    if (!(anchor_time > 0.0)) throw DomainError("anchor response time must be positive");
    validate_plant(chamber, valve_template, 1e-4, 1.0);

    const double dt = std::min(1e-4, anchor_time / 50.0);
    const double t_max = std::max(4.0 * anchor_time, 64.0 * dt);
    const FillScenario scenario{anchor_target, 0.0, 0.10};

    auto fill_time = [&](double conductance) -> double {
        ValveModel v = valve_template;
        v.sonic_conductance = conductance;
        PressureTrace trace;
        try {
            trace = simulate_fill(scenario, chamber, v, dt, t_max);
        } catch (const NumericalError&) {
            // dt over the stability bound: conductance far too large.
            return 0.0;
        }
        try {
            return response_time(trace, anchor_target, scenario.band);
        } catch (const NumericalError&) {
            // Band not reached within t_max: conductance far too small.
            return std::numeric_limits<double>::infinity();
        }
    };

    // Expand a geometric bracket around the template guess until it straddles
    // the anchor time (fill time decreases monotonically with conductance).
    double c_lo = valve_template.sonic_conductance;  // slow side: t >= anchor
    double c_hi = valve_template.sonic_conductance;  // fast side: t <= anchor
    const int max_expand = 200;
    int iter = 0;
    while (fill_time(c_lo) < anchor_time && iter++ < max_expand) c_lo /= 2.0;
    iter = 0;
    while (fill_time(c_hi) > anchor_time && iter++ < max_expand) c_hi *= 2.0;
    if (fill_time(c_lo) < anchor_time || fill_time(c_hi) > anchor_time)
        throw NumericalError("conductance bracket expansion failed to straddle the anchor time");

    const double tol = 0.01 * anchor_time;
    for (int i = 0; i < 200; ++i) {
        const double c_mid = 0.5 * (c_lo + c_hi);
        const double t_mid = fill_time(c_mid);
        if (std::abs(t_mid - anchor_time) <= tol) {
            ValveModel out = valve_template;
            out.sonic_conductance = c_mid;
            return out;
        }
        if (t_mid > anchor_time)
            c_lo = c_mid;
        else
            c_hi = c_mid;
    }
    throw NumericalError("conductance bisection did not converge to the anchor time");
}

}  // namespace exosuit
