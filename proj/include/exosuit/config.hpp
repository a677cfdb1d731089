#pragma once

#include <string>

#include "exosuit/controller.hpp"
#include "exosuit/design_explorer.hpp"
#include "exosuit/emg_pipeline.hpp"
#include "exosuit/pneumatic_sim.hpp"
#include "exosuit/torque_model.hpp"

// JSON configuration for the whole toolkit. Files use the boundary units
// (kPa / mm / degrees); parsing converts to SI and rejects unknown keys.
// Every object additionally accepts an optional "note" string so shipped
// configs can flag assumed values.

namespace exosuit {

struct PlantConfig {
    double volume = -1.0;  // [m^3]; negative means "derive from the geometry"
    double temperature = 293.15;  // [K]
    ValveModel valve;
};

struct EmgConfig {
    FilterSpec filter;
    double default_fs = 2000.0;  // [Hz], used when a sidecar omits fs_hz
};

struct ToolkitConfig {
    ActuatorGeometry geometry;
    DesignConstraints design;
    PlantConfig plant;
    ControllerConfig controller;
    EmgConfig emg;
};

/// Parse a full config file. Every section and key is optional; defaults are
/// the values used throughout the paper-validation harness.
ToolkitConfig load_toolkit_config(const std::string& path);
ToolkitConfig parse_toolkit_config(const std::string& json_text, const std::string& origin);

/// Chamber built from the plant section, deriving the volume from the
/// geometry when the config does not pin it.
Chamber make_chamber(const ToolkitConfig& config);

ValveModel load_valve(const std::string& path);
void save_valve(const std::string& path, const ValveModel& valve);

/// EMG trace from a samples CSV (t_s,emg_mv) plus its sidecar JSON
/// ({fs_hz?, condition, cycles: [[start_s, end_s], ...]}). A missing fs_hz
/// falls back to default_fs with a notice on stderr.
EmgTrace load_emg_trace(const std::string& csv_path, const std::string& sidecar_path,
                        double default_fs);

std::vector<QuestScores> load_quest_scores(const std::string& path);

/// Default config rendered as JSON text (what the CLI ships and documents).
std::string default_config_json();

}  // namespace exosuit
