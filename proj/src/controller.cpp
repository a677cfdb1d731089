#include "exosuit/controller.hpp"

#include <algorithm>
#include <cmath>

#include "exosuit/errors.hpp"

namespace exosuit {

const char* to_string(Phase phase) {
    switch (phase) {
        case Phase::Idle: return "Idle";
        case Phase::HoldPressurizing: return "HoldPressurizing";
        case Phase::Ready: return "Ready";
        case Phase::Assisting: return "Assisting";
        case Phase::Venting: return "Venting";
    }
    return "?";
}

const char* to_string(Event event) {
    switch (event) {
        case Event::Activate: return "activate";
        case Event::HoldAtPressure: return "hold_at_pressure";
        case Event::StandOnset: return "stand_onset";
        case Event::StandComplete: return "stand_complete";
        case Event::VentComplete: return "vent_complete";
        case Event::SessionEnd: return "session_end";
    }
    return "?";
}

void validate(const ControllerConfig& c) {
    if (!(c.assist_pressure >= 0.0)) throw DomainError("assist pressure must be non-negative");
    if (!(c.hold_pressure >= 0.0)) throw DomainError("hold pressure must be non-negative");
    if (!(c.stand_onset_angle < c.stand_complete_angle))
        throw DomainError("stand_onset_angle must be below stand_complete_angle");
    if (!(c.debounce >= 0.0)) throw DomainError("debounce must be non-negative");
    if (!(c.vent_time >= 0.0)) throw DomainError("vent_time must be non-negative");
}

namespace {

// Valves are a pure function of the phase: open only while actively moving
// air through the inflation-deflation zone.
ValveState valves_for(Phase phase) {
    switch (phase) {
        case Phase::Assisting: return {true, false};
        case Phase::Venting: return {false, true};
        default: return {false, false};
    }
}

double hold_command_for(Phase phase, const ControllerConfig& config) {
    return phase == Phase::Idle ? 0.0 : config.hold_pressure;
}

}  // namespace

StepResult step_phase(const ControllerState& state, Event event, const ControllerConfig& config) {
    validate(config);
    if (event == Event::SessionEnd)
        return {{Phase::Idle, valves_for(Phase::Idle), 0.0}, true};

    Phase next = state.phase;
    bool handled = false;
    switch (state.phase) {
        case Phase::Idle:
            if (event == Event::Activate) { next = Phase::HoldPressurizing; handled = true; }
            break;
        case Phase::HoldPressurizing:
            if (event == Event::HoldAtPressure) { next = Phase::Ready; handled = true; }
            break;
        case Phase::Ready:
            if (event == Event::StandOnset) { next = Phase::Assisting; handled = true; }
            break;
        case Phase::Assisting:
            if (event == Event::StandComplete) { next = Phase::Venting; handled = true; }
            break;
        case Phase::Venting:
            if (event == Event::VentComplete) { next = Phase::Ready; handled = true; }
            break;
    }
    if (!handled) return {state, false};
    return {{next, valves_for(next), hold_command_for(next, config)}, true};
}

std::vector<double> debounced_rising_crossings(const std::vector<PostureSample>& trace,
                                               double threshold, double debounce) {
    for (std::size_t i = 1; i < trace.size(); ++i)
        if (!(trace[i].t > trace[i - 1].t))
            throw InputError("posture trace timestamps must be strictly increasing (row " +
                             std::to_string(i + 1) + ")");
    std::vector<double> crossings;
    std::size_t i = 1;
    while (i < trace.size()) {
        if (!(trace[i - 1].thigh_angle < threshold && trace[i].thigh_angle >= threshold)) {
            ++i;
            continue;
        }
        const double t_cross = trace[i].t;
        // Qualified if the angle holds the threshold through the debounce
        // window; a trace that ends inside the window is inconclusive.
        bool held = true;
        bool window_covered = false;
        std::size_t j = i;
        for (; j < trace.size(); ++j) {
            if (trace[j].thigh_angle < threshold) {
                held = false;
                break;
            }
            if (trace[j].t >= t_cross + debounce) {
                window_covered = true;
                break;
            }
        }
        if (held && window_covered) crossings.push_back(t_cross);
        // Resume after the window (or after the drop that broke it).
        i = std::max(j, i) + 1;
    }
    return crossings;
}

std::optional<double> detect_stand_onset(const std::vector<PostureSample>& trace,
                                         const ControllerConfig& config) {
    validate(config);
    const std::vector<double> crossings =
        debounced_rising_crossings(trace, config.stand_onset_angle, config.debounce);
    if (crossings.empty()) return std::nullopt;
    return crossings.front();
}

SessionLog run_session(const std::vector<PostureSample>& trace, const ControllerConfig& config) {
    validate(config);
    SessionLog log;
    const double t_start = trace.empty() ? 0.0 : trace.front().t;
    const double t_end = trace.empty() ? 0.0 : trace.back().t;

    ControllerState state;
    auto emit = [&](double t) {
        log.entries.push_back({t, state.phase, state.valves, state.hold_command});
    };
    auto apply = [&](Event event, double t) {
        const StepResult r = step_phase(state, event, config);
        if (!r.handled) {
            log.diagnostics.push_back("t=" + std::to_string(t) + ": event " + to_string(event) +
                                      " ignored in phase " + to_string(state.phase));
            return;
        }
        state = r.state;
        emit(t);
    };

    emit(t_start);  // initial Idle row, for replay clarity
    apply(Event::Activate, t_start);
    // The holding zone's fill transient is not simulated here; it is reported
    // at pressure as soon as it is commanded.
    apply(Event::HoldAtPressure, t_start);

    struct TimedEvent {
        double t;
        Event event;
    };
    std::vector<TimedEvent> posture_events;
    for (double t : debounced_rising_crossings(trace, config.stand_onset_angle, config.debounce))
        posture_events.push_back({t, Event::StandOnset});
    for (double t :
         debounced_rising_crossings(trace, config.stand_complete_angle, config.debounce))
        posture_events.push_back({t, Event::StandComplete});
    std::stable_sort(posture_events.begin(), posture_events.end(),
                     [](const TimedEvent& a, const TimedEvent& b) { return a.t < b.t; });

    // Single pending timer: the machine can only be in one Venting interval
    // at a time. Timers fire before posture events at equal timestamps.
    std::optional<double> vent_done;
    for (const TimedEvent& ev : posture_events) {
        if (vent_done && *vent_done <= ev.t) {
            apply(Event::VentComplete, *vent_done);
            vent_done.reset();
        }
        const Phase before = state.phase;
        apply(ev.event, ev.t);
        if (before != Phase::Venting && state.phase == Phase::Venting)
            vent_done = ev.t + config.vent_time;
    }
    if (vent_done && *vent_done <= t_end) apply(Event::VentComplete, *vent_done);

    apply(Event::SessionEnd, t_end);
    return log;
}

}  // namespace exosuit
