#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "exosuit/config.hpp"
#include "exosuit/controller.hpp"
#include "exosuit/csv.hpp"
#include "exosuit/design_explorer.hpp"
#include "exosuit/emg_pipeline.hpp"
#include "exosuit/errors.hpp"
#include "exosuit/pneumatic_sim.hpp"
#include "exosuit/torque_model.hpp"
#include "exosuit/units.hpp"
#include "exosuit/validation.hpp"

namespace {

using namespace exosuit;

constexpr int kExitOk = 0;
constexpr int kExitValidationFailure = 1;
constexpr int kExitInputError = 2;
constexpr int kExitNumericalError = 3;

std::string sig3(double v) {
    if (v == 0.0) return "0.00";
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.3g", v);
    return buf;
}

std::string sig4(double v) {
    if (v == 0.0) return "0.00";
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.4g", v);
    return buf;
}

// "start:stop:step" in boundary units -> inclusive grid.
std::vector<double> parse_grid(const std::string& text, const std::string& what) {
    std::vector<double> parts;
    std::string field;
    for (char c : text + ":") {
        if (c == ':') {
            try {
                parts.push_back(std::stod(field));
            } catch (const std::exception&) {
                throw InputError(what + ": cannot parse '" + field + "' in '" + text + "'");
            }
            field.clear();
        } else {
            field.push_back(c);
        }
    }
    if (parts.size() == 1) return {parts[0]};
    if (parts.size() != 3 || !(parts[2] > 0.0) || parts[1] < parts[0])
        throw InputError(what + ": expected 'value' or 'start:stop:step', got '" + text + "'");
    std::vector<double> grid;
    const std::size_t count =
        static_cast<std::size_t>(std::floor((parts[1] - parts[0]) / parts[2] + 1e-9)) + 1;
    for (std::size_t i = 0; i < count; ++i)
        grid.push_back(parts[0] + static_cast<double>(i) * parts[2]);
    return grid;
}

struct CliOptions {
    // torque
    std::optional<int> n;
    std::optional<double> d_mm, l_dz_mm, p_kpa, theta_deg;
    std::string surface_p, surface_theta, surface_out;
    std::string measured_path;
    // shared
    std::string config_path;
    std::string out_path, front_out_path;
    // sim
    std::string valve_path, valve_out;
    double target_kpa = 100.0, initial_kpa = 0.0, sink_kpa = 0.0, band = 0.10;
    double dt = 1e-4, t_max = 2.0, anchor_time = 0.5;
    bool report_response = false;
    // ctrl / emg
    std::string trace_path, manifest_path;
    // validate
    bool json_report = false;
    bool negative_control = false;
    bool dump_config = false;
};

ToolkitConfig load_config_or_default(const std::string& path) {
    if (path.empty()) return ToolkitConfig{};
    return load_toolkit_config(path);
}

ActuatorGeometry geometry_from(const CliOptions& opt, const ToolkitConfig& cfg) {
    ActuatorGeometry g = cfg.geometry;
    if (opt.n) g.n = *opt.n;
    if (opt.d_mm) g.d = units::mm_to_m(*opt.d_mm);
    if (opt.l_dz_mm) g.l_dz = units::mm_to_m(*opt.l_dz_mm);
    return g;
}

int cmd_torque(const CliOptions& opt) {
    const ToolkitConfig cfg = load_config_or_default(opt.config_path);
    const ActuatorGeometry geom = geometry_from(opt, cfg);
    const double p = units::kpa_to_pa(opt.p_kpa.value_or(100.0));
    const double theta = units::deg_to_rad(opt.theta_deg.value_or(80.0));
    std::cout << sig3(predict_torque(geom, {p, theta})) << " N·m\n";

    if (!opt.measured_path.empty()) {
        const auto rows =
            csv::read_numeric(opt.measured_path, {"theta_deg", "p_kpa", "torque_nm"});
        double worst = 0.0;
        std::cout << "theta_deg,p_kpa,measured_nm,predicted_nm,rel_err_pct\n";
        for (const std::vector<double>& row : rows) {
            const MeasuredPoint m{units::deg_to_rad(row[0]), units::kpa_to_pa(row[1]), row[2]};
            const double pred = predict_torque(geom, {m.p, m.theta});
            const double err = relative_model_error(pred, m.torque_measured);
            worst = std::max(worst, err);
            std::cout << csv::format_double(row[0]) << ',' << csv::format_double(row[1]) << ','
                      << csv::format_double(row[2]) << ',' << csv::format_double(pred) << ','
                      << csv::format_double(100.0 * err) << '\n';
        }
        std::cout << "max relative error: " << sig3(100.0 * worst) << " %\n";
    }

    if (!opt.surface_out.empty()) {
        if (opt.surface_p.empty() || opt.surface_theta.empty())
            throw InputError("--surface-out needs --p-grid-kpa and --theta-grid-deg");
        std::vector<double> p_grid, theta_grid;
        for (double v : parse_grid(opt.surface_p, "--p-grid-kpa"))
            p_grid.push_back(units::kpa_to_pa(v));
        for (double v : parse_grid(opt.surface_theta, "--theta-grid-deg"))
            theta_grid.push_back(units::deg_to_rad(v));
        const TorqueSurface surf = torque_surface(geom, p_grid, theta_grid);
        std::vector<std::vector<std::string>> rows;
        for (std::size_t i = 0; i < surf.p_grid.size(); ++i)
            for (std::size_t j = 0; j < surf.theta_grid.size(); ++j)
                rows.push_back({csv::format_double(units::pa_to_kpa(surf.p_grid[i])),
                                csv::format_double(units::rad_to_deg(surf.theta_grid[j])),
                                csv::format_double(surf.at(i, j))});
        csv::write_table(opt.surface_out, {"p_kpa", "theta_deg", "torque_nm"}, rows);
        std::cerr << "surface written to " << opt.surface_out << "\n";
    }
    return kExitOk;
}

std::vector<std::string> candidate_row(const DesignCandidate& c, bool on_front) {
    return {std::to_string(c.n),
            csv::format_double(units::m_to_mm(c.d)),
            csv::format_double(c.torque),
            csv::format_double(units::m_to_mm(c.profile)),
            csv::format_double(units::m2_to_mm2(c.stress_area)),
            c.feasible ? "1" : "0",
            on_front ? "1" : "0"};
}

int cmd_design(const CliOptions& opt) {
    const ToolkitConfig cfg = load_config_or_default(opt.config_path);
    const std::vector<DesignCandidate> cands = enumerate_designs(cfg.design);
    const std::vector<bool> on_front = pareto_membership(cands);

    const std::vector<std::string> header = {"n",          "d_mm",     "torque_nm", "profile_mm",
                                             "stress_area_mm2", "feasible", "on_front"};
    std::vector<std::vector<std::string>> rows, front_rows;
    for (std::size_t i = 0; i < cands.size(); ++i) {
        rows.push_back(candidate_row(cands[i], on_front[i]));
        if (on_front[i]) front_rows.push_back(candidate_row(cands[i], true));
    }
    if (opt.out_path.empty()) throw InputError("design: --out is required");
    csv::write_table(opt.out_path, header, rows);
    if (!opt.front_out_path.empty()) csv::write_table(opt.front_out_path, header, front_rows);

    const std::size_t n_pass = filter_feasible(cands, cfg.design).size();
    std::cout << cands.size() << " candidates, " << front_rows.size() << " on the front, "
              << n_pass << " feasible within constraints\n";
    return kExitOk;
}

int cmd_sim_fill(const CliOptions& opt, bool vent) {
    const ToolkitConfig cfg = load_config_or_default(opt.config_path);
    const Chamber chamber = make_chamber(cfg);
    const ValveModel valve =
        opt.valve_path.empty() ? cfg.plant.valve : load_valve(opt.valve_path);
    FillScenario sc;
    sc.band = opt.band;
    if (vent) {
        sc.supply_pressure = units::kpa_to_pa(opt.sink_kpa);
        sc.initial_pressure = units::kpa_to_pa(opt.initial_kpa);
    } else {
        sc.supply_pressure = units::kpa_to_pa(opt.target_kpa);
        sc.initial_pressure = units::kpa_to_pa(opt.initial_kpa);
    }
    const PressureTrace trace = vent ? simulate_vent(sc, chamber, valve, opt.dt, opt.t_max)
                                     : simulate_fill(sc, chamber, valve, opt.dt, opt.t_max);
    if (!opt.out_path.empty()) {
        std::vector<std::vector<std::string>> rows;
        for (std::size_t k = 0; k < trace.samples.size(); ++k)
            rows.push_back({csv::format_double(static_cast<double>(k) * trace.dt),
                            csv::format_double(units::pa_to_kpa(trace.samples[k]))});
        csv::write_table(opt.out_path, {"t_s", "p_kpa_gauge"}, rows);
    }
    if (opt.report_response) {
        const double target = vent ? units::kpa_to_pa(opt.sink_kpa)
                                   : units::kpa_to_pa(opt.target_kpa);
        std::cout << "response time: "
                  << sig3(response_time(trace, target, sc.band)) << " s\n";
    } else {
        std::cout << "final pressure: "
                  << sig3(units::pa_to_kpa(trace.samples.back())) << " kPa gauge\n";
    }
    return kExitOk;
}

int cmd_sim_calibrate(const CliOptions& opt) {
    const ToolkitConfig cfg = load_config_or_default(opt.config_path);
    const Chamber chamber = make_chamber(cfg);
    const ValveModel valve = calibrate_conductance(units::kpa_to_pa(opt.target_kpa),
                                                   opt.anchor_time, chamber, cfg.plant.valve);
    if (!opt.valve_out.empty()) save_valve(opt.valve_out, valve);
    std::cout << "sonic_conductance: " << csv::format_double(valve.sonic_conductance)
              << " m^3/(s*Pa)\n";
    return kExitOk;
}

int cmd_ctrl_run(const CliOptions& opt) {
    const ToolkitConfig cfg = load_config_or_default(opt.config_path);
    const auto rows = csv::read_numeric(opt.trace_path, {"t_s", "thigh_angle_deg"});
    std::vector<PostureSample> trace;
    trace.reserve(rows.size());
    for (const std::vector<double>& row : rows)
        trace.push_back({row[0], units::deg_to_rad(row[1])});

    const SessionLog log = run_session(trace, cfg.controller);
    for (const std::string& diag : log.diagnostics) std::cerr << "diagnostic: " << diag << "\n";

    std::vector<std::vector<std::string>> out_rows;
    for (const CommandLogEntry& e : log.entries)
        out_rows.push_back({csv::format_double(e.t), to_string(e.phase),
                            e.valves.sv1_open ? "1" : "0", e.valves.sv2_open ? "1" : "0",
                            csv::format_double(units::pa_to_kpa(e.hold_command))});
    if (opt.out_path.empty()) throw InputError("ctrl run: --out is required");
    csv::write_table(opt.out_path, {"t_s", "phase", "sv1", "sv2", "hold_cmd_kpa"}, out_rows);
    std::cout << log.entries.size() << " log entries written to " << opt.out_path << "\n";
    return kExitOk;
}

std::string sidecar_for(const std::filesystem::path& csv_path) {
    std::filesystem::path p = csv_path;
    p.replace_extension(".json");
    return p.string();
}

int cmd_emg_analyze(const CliOptions& opt) {
    namespace fs = std::filesystem;
    const ToolkitConfig cfg = load_config_or_default(opt.config_path);

    std::ifstream in(opt.manifest_path);
    if (!in) throw InputError("cannot open " + opt.manifest_path);
    std::stringstream ss;
    ss << in.rdbuf();
    nlohmann::json manifest;
    try {
        manifest = nlohmann::json::parse(ss.str());
    } catch (const nlohmann::json::parse_error& e) {
        throw InputError(opt.manifest_path + ": " + e.what());
    }
    const fs::path base = fs::path(opt.manifest_path).parent_path();
    auto resolve = [&](const std::string& rel) { return (base / rel).string(); };

    if (!manifest.contains("subjects") || !manifest["subjects"].is_array() ||
        manifest["subjects"].empty())
        throw InputError(opt.manifest_path + ": 'subjects' must be a non-empty array");

    std::vector<double> reductions;
    for (const nlohmann::json& subj : manifest["subjects"]) {
        const std::string with_csv = resolve(subj.at("with").get<std::string>());
        const std::string without_csv = resolve(subj.at("without").get<std::string>());
        const std::string with_side = subj.contains("with_sidecar")
                                          ? resolve(subj["with_sidecar"].get<std::string>())
                                          : sidecar_for(with_csv);
        const std::string without_side = subj.contains("without_sidecar")
                                             ? resolve(subj["without_sidecar"].get<std::string>())
                                             : sidecar_for(without_csv);
        const EmgTrace with_trace = load_emg_trace(with_csv, with_side, cfg.emg.default_fs);
        const EmgTrace without_trace =
            load_emg_trace(without_csv, without_side, cfg.emg.default_fs);
        if (with_trace.condition != EmgCondition::WithExosuit)
            throw InputError(with_side + ": expected condition 'with_exosuit'");
        if (without_trace.condition != EmgCondition::WithoutExosuit)
            throw InputError(without_side + ": expected condition 'without_exosuit'");
        reductions.push_back(subject_reduction(without_trace, with_trace, cfg.emg.filter));
    }

    nlohmann::json report;
    report["per_subject"] = nlohmann::json::array();
    for (double r : reductions) report["per_subject"].push_back({{"reduction_pct", r}});
    report["average_pct"] = average_reduction(reductions);
    if (manifest.contains("quest")) {
        const std::vector<QuestScores> scores =
            load_quest_scores(resolve(manifest["quest"].get<std::string>()));
        report["quest_total"] = quest_total(scores);
    } else {
        report["quest_total"] = nullptr;
    }

    if (!opt.out_path.empty()) {
        std::ofstream out(opt.out_path, std::ios::binary);
        if (!out) throw InputError("cannot write " + opt.out_path);
        out << report.dump(2) << '\n';
    }
    for (std::size_t i = 0; i < reductions.size(); ++i)
        std::cout << "subject " << i + 1 << ": " << sig4(reductions[i]) << " % reduction\n";
    std::cout << "average reduction: " << sig4(report["average_pct"].get<double>()) << " %\n";
    if (!report["quest_total"].is_null())
        std::cout << "QUEST total: " << sig3(report["quest_total"].get<double>()) << "\n";
    return kExitOk;
}

int cmd_validate_paper(const CliOptions& opt) {
    ValidationOptions vopt;
    if (opt.negative_control) vopt.torque_tamper = 1.02;
    const ValidationReport report = run_paper_validation(vopt);
    if (opt.json_report)
        std::cout << report_to_json(report);
    else
        std::cout << format_report(report);
    return report.all_passed() ? kExitOk : kExitValidationFailure;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Design, simulation, and analysis toolkit for zone-inflated fabric pneumatic exosuits"};
    app.require_subcommand(1);
    CliOptions opt;

    CLI::App* torque = app.add_subcommand("torque", "Predict assist torque from geometry and operating point");
    torque->add_option("--n", opt.n, "actuator count");
    torque->add_option("--d-mm", opt.d_mm, "actuator diameter [mm]");
    torque->add_option("--l-dz-mm", opt.l_dz_mm, "inflation-deflation zone length [mm]");
    torque->add_option("--p-kpa", opt.p_kpa, "gauge pressure [kPa]");
    torque->add_option("--theta-deg", opt.theta_deg, "bending angle [deg]");
    torque->add_option("--config", opt.config_path, "toolkit config JSON");
    torque->add_option("--measured", opt.measured_path, "measured CSV (theta_deg,p_kpa,torque_nm) to compare");
    torque->add_option("--p-grid-kpa", opt.surface_p, "surface pressure grid start:stop:step [kPa]");
    torque->add_option("--theta-grid-deg", opt.surface_theta, "surface angle grid start:stop:step [deg]");
    torque->add_option("--surface-out", opt.surface_out, "torque surface CSV output path");

    CLI::App* design = app.add_subcommand("design", "Enumerate and rank (n, d) design candidates");
    design->add_option("--config", opt.config_path, "toolkit config JSON");
    design->add_option("--out", opt.out_path, "candidates CSV output")->required();
    design->add_option("--front-out", opt.front_out_path, "Pareto front CSV output");

    CLI::App* sim = app.add_subcommand("sim", "Pneumatic fill/vent simulation and valve calibration");
    sim->require_subcommand(1);
    CLI::App* fill = sim->add_subcommand("fill", "Fill the chamber from the regulated supply");
    CLI::App* vent = sim->add_subcommand("vent", "Vent the chamber to a sink");
    CLI::App* calibrate = sim->add_subcommand("calibrate", "Fit the valve conductance to an anchor response time");
    for (CLI::App* sub : {fill, vent}) {
        sub->add_option("--config", opt.config_path, "toolkit config JSON");
        sub->add_option("--valve", opt.valve_path, "calibrated valve JSON (overrides config)");
        sub->add_option("--initial-kpa", opt.initial_kpa, "initial gauge pressure [kPa]");
        sub->add_option("--band", opt.band, "response band, fraction of target");
        sub->add_option("--dt", opt.dt, "integration step [s]");
        sub->add_option("--t-max", opt.t_max, "simulated duration [s]");
        sub->add_option("--out", opt.out_path, "trace CSV output");
        sub->add_flag("--report-response-time", opt.report_response, "print the band entry time");
    }
    fill->add_option("--target-kpa", opt.target_kpa, "supply/target gauge pressure [kPa]");
    vent->add_option("--sink-kpa", opt.sink_kpa, "sink gauge pressure [kPa] (0 = atmosphere)");
    calibrate->add_option("--config", opt.config_path, "toolkit config JSON");
    calibrate->add_option("--target-kpa", opt.target_kpa, "anchor target gauge pressure [kPa]");
    calibrate->add_option("--time-s", opt.anchor_time, "anchor response time [s]");
    calibrate->add_option("--out", opt.valve_out, "calibrated valve JSON output");

    CLI::App* ctrl = app.add_subcommand("ctrl", "Sit-to-stand controller replay");
    CLI::App* ctrl_run = ctrl->add_subcommand("run", "Replay an IMU trace through the controller");
    ctrl->require_subcommand(1);
    ctrl_run->add_option("--trace", opt.trace_path, "IMU CSV (t_s,thigh_angle_deg)")->required();
    ctrl_run->add_option("--config", opt.config_path, "toolkit config JSON");
    ctrl_run->add_option("--out", opt.out_path, "command log CSV output")->required();

    CLI::App* emg = app.add_subcommand("emg", "Surface EMG evidence processing");
    CLI::App* emg_analyze = emg->add_subcommand("analyze", "Per-subject reductions and QUEST aggregation");
    emg->require_subcommand(1);
    emg_analyze->add_option("--manifest", opt.manifest_path, "manifest JSON listing subject file pairs")->required();
    emg_analyze->add_option("--config", opt.config_path, "toolkit config JSON");
    emg_analyze->add_option("--out", opt.out_path, "report JSON output");

    CLI::App* validate = app.add_subcommand("validate", "Validation harnesses");
    CLI::App* validate_paper = validate->add_subcommand("paper", "Run every published-anchor check from bundled defaults");
    validate->require_subcommand(1);
    validate_paper->add_flag("--json", opt.json_report, "machine-readable report");
    validate_paper->add_flag("--negative-control", opt.negative_control,
                             "tamper the torque constant; the run must fail");

    CLI::App* config_cmd = app.add_subcommand("config", "Configuration helpers");
    CLI::App* config_dump = config_cmd->add_subcommand("dump", "Print the default config JSON");
    config_cmd->require_subcommand(1);
    (void)config_dump;

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitOk : kExitInputError;
    }

    try {
        if (torque->parsed()) return cmd_torque(opt);
        if (design->parsed()) return cmd_design(opt);
        if (sim->parsed()) {
            if (fill->parsed()) return cmd_sim_fill(opt, false);
            if (vent->parsed()) return cmd_sim_fill(opt, true);
            if (calibrate->parsed()) return cmd_sim_calibrate(opt);
        }
        if (ctrl->parsed()) return cmd_ctrl_run(opt);
        if (emg->parsed()) return cmd_emg_analyze(opt);
        if (validate->parsed()) return cmd_validate_paper(opt);
        if (config_cmd->parsed()) {
            std::cout << default_config_json();
            return kExitOk;
        }
    } catch (const InputError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kExitInputError;
    } catch (const DomainError& e) {
        std::cerr << "domain error: " << e.what() << "\n";
        return kExitInputError;
    } catch (const NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return kExitNumericalError;
    }
    return kExitInputError;
}
