#pragma once

#include <optional>
#include <string>
#include <vector>

#include "exosuit/units.hpp"

// Deterministic sit-to-stand assistance controller, replayable offline.
//
// Posture comes from a thigh-mounted IMU; the thigh angle is measured from
// horizontal, so sitting reads near 0 and standing near pi/2. Two solenoid
// valves drive the inflation-deflation zone (sv1 inflates, sv2 vents; never
// both). The inflation-holding zone is pressurized once on activation and
// commanded at a fixed pressure until the session ends.

namespace exosuit {

struct PostureSample {
    double t = 0.0;            // [s]
    double thigh_angle = 0.0;  // [rad] from horizontal
};

struct ControllerConfig {
    double assist_pressure = 100e3;                          // gauge [Pa]
    double hold_pressure = 120e3;                            // gauge [Pa]
    double stand_onset_angle = units::deg_to_rad(20.0);      // [rad]
    double stand_complete_angle = units::deg_to_rad(70.0);   // [rad]
    double debounce = 0.1;                                   // [s]
    double vent_time = 0.5;                                  // [s], Venting -> Ready delay
};

struct ValveState {
    bool sv1_open = false;  // inflate path
    bool sv2_open = false;  // vent path
};

enum class Phase { Idle, HoldPressurizing, Ready, Assisting, Venting };

enum class Event { Activate, HoldAtPressure, StandOnset, StandComplete, VentComplete, SessionEnd };

const char* to_string(Phase phase);
const char* to_string(Event event);

struct ControllerState {
    Phase phase = Phase::Idle;
    ValveState valves;
    double hold_command = 0.0;  // gauge [Pa] commanded to the holding zone
};

struct StepResult {
    ControllerState state;
    bool handled = false;  // false: event undefined in this phase, state unchanged
};

void validate(const ControllerConfig& config);

/// Total transition function. Undefined (phase, event) pairs return the input
/// state with handled = false; callers decide whether to log a diagnostic.
StepResult step_phase(const ControllerState& state, Event event, const ControllerConfig& config);

/// First time the thigh angle crosses stand_onset_angle upward and stays at
/// or above it for the debounce window. nullopt when no crossing qualifies.
std::optional<double> detect_stand_onset(const std::vector<PostureSample>& trace,
                                         const ControllerConfig& config);

/// All debounced upward crossings of an arbitrary threshold; detect_stand_onset
/// is the first entry for threshold = stand_onset_angle.
std::vector<double> debounced_rising_crossings(const std::vector<PostureSample>& trace,
                                               double threshold, double debounce);

struct CommandLogEntry {
    double t = 0.0;
    Phase phase = Phase::Idle;
    ValveState valves;
    double hold_command = 0.0;  // gauge [Pa]
};

struct SessionLog {
    std::vector<CommandLogEntry> entries;
    std::vector<std::string> diagnostics;  // unhandled events, for stderr
};

/// Replay a posture trace through the controller: activate, pressurize the
/// holding zone, assist each detected sit-to-stand, vent, and shut down at
/// the end of the trace. Identical traces produce identical logs.
SessionLog run_session(const std::vector<PostureSample>& trace, const ControllerConfig& config);

}  // namespace exosuit
