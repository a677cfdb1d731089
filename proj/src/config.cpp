#include "exosuit/config.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "exosuit/csv.hpp"
#include "exosuit/errors.hpp"
#include "exosuit/units.hpp"

namespace exosuit {

namespace {

using nlohmann::json;

json parse_json(const std::string& text, const std::string& origin) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw InputError(origin + ": " + e.what());
    }
}

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_json(ss.str(), path);
}

// Objects accept exactly the listed keys plus a free-form "note".
void check_keys(const json& obj, const std::string& context,
                const std::set<std::string>& allowed) {
    if (!obj.is_object()) throw InputError(context + ": expected a JSON object");
    for (const auto& [key, value] : obj.items()) {
        (void)value;
        if (key != "note" && !allowed.count(key))
            throw InputError(context + ": unknown key '" + key + "'");
    }
}

double get_number(const json& obj, const std::string& context, const std::string& key,
                  double fallback) {
    if (!obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if (!v.is_number()) throw InputError(context + "." + key + ": expected a number");
    return v.get<double>();
}

int get_int(const json& obj, const std::string& context, const std::string& key, int fallback) {
    if (!obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if (!v.is_number_integer()) throw InputError(context + "." + key + ": expected an integer");
    return v.get<int>();
}

bool get_bool(const json& obj, const std::string& context, const std::string& key,
              bool fallback) {
    if (!obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if (!v.is_boolean()) throw InputError(context + "." + key + ": expected a boolean");
    return v.get<bool>();
}

ActuatorGeometry parse_geometry(const json& obj, const std::string& ctx) {
    check_keys(obj, ctx, {"n", "d_mm", "l_dz_mm", "l_hold_upper_mm", "l_hold_lower_mm"});
    ActuatorGeometry g;
    g.n = get_int(obj, ctx, "n", g.n);
    g.d = units::mm_to_m(get_number(obj, ctx, "d_mm", units::m_to_mm(g.d)));
    g.l_dz = units::mm_to_m(get_number(obj, ctx, "l_dz_mm", units::m_to_mm(g.l_dz)));
    g.l_hold_upper =
        units::mm_to_m(get_number(obj, ctx, "l_hold_upper_mm", units::m_to_mm(g.l_hold_upper)));
    g.l_hold_lower =
        units::mm_to_m(get_number(obj, ctx, "l_hold_lower_mm", units::m_to_mm(g.l_hold_lower)));
    validate(g);
    return g;
}

DesignConstraints parse_design(const json& obj, const std::string& ctx) {
    check_keys(obj, ctx,
               {"p_kpa", "theta_deg", "torque_min_nm", "profile_max_mm", "n_min", "n_max",
                "d_min_mm", "d_max_mm", "d_step_mm", "contact_length_mm", "dz_length_mm"});
    DesignConstraints c;
    c.p_design = units::kpa_to_pa(get_number(obj, ctx, "p_kpa", units::pa_to_kpa(c.p_design)));
    c.theta_design =
        units::deg_to_rad(get_number(obj, ctx, "theta_deg", units::rad_to_deg(c.theta_design)));
    c.torque_min = get_number(obj, ctx, "torque_min_nm", c.torque_min);
    c.profile_max =
        units::mm_to_m(get_number(obj, ctx, "profile_max_mm", units::m_to_mm(c.profile_max)));
    c.n_min = get_int(obj, ctx, "n_min", c.n_min);
    c.n_max = get_int(obj, ctx, "n_max", c.n_max);
    c.d_min = units::mm_to_m(get_number(obj, ctx, "d_min_mm", units::m_to_mm(c.d_min)));
    c.d_max = units::mm_to_m(get_number(obj, ctx, "d_max_mm", units::m_to_mm(c.d_max)));
    c.d_step = units::mm_to_m(get_number(obj, ctx, "d_step_mm", units::m_to_mm(c.d_step)));
    c.contact_length = units::mm_to_m(
        get_number(obj, ctx, "contact_length_mm", units::m_to_mm(c.contact_length)));
    c.dz_length =
        units::mm_to_m(get_number(obj, ctx, "dz_length_mm", units::m_to_mm(c.dz_length)));
    validate(c);
    return c;
}

ValveModel parse_valve(const json& obj, const std::string& ctx) {
    check_keys(obj, ctx, {"sonic_conductance", "critical_ratio"});
    ValveModel v;
    v.sonic_conductance = get_number(obj, ctx, "sonic_conductance", v.sonic_conductance);
    v.critical_ratio = get_number(obj, ctx, "critical_ratio", v.critical_ratio);
    if (!(v.sonic_conductance > 0.0))
        throw InputError(ctx + ".sonic_conductance must be positive");
    if (!(v.critical_ratio > 0.0 && v.critical_ratio < 1.0))
        throw InputError(ctx + ".critical_ratio must lie in (0, 1)");
    return v;
}

PlantConfig parse_plant(const json& obj, const std::string& ctx) {
    check_keys(obj, ctx, {"volume_m3", "temperature_k", "valve"});
    PlantConfig p;
    p.volume = get_number(obj, ctx, "volume_m3", p.volume);
    p.temperature = get_number(obj, ctx, "temperature_k", p.temperature);
    if (!(p.temperature > 0.0)) throw InputError(ctx + ".temperature_k must be positive");
    if (obj.contains("valve")) p.valve = parse_valve(obj.at("valve"), ctx + ".valve");
    return p;
}

ControllerConfig parse_controller(const json& obj, const std::string& ctx) {
    check_keys(obj, ctx,
               {"assist_kpa", "hold_kpa", "stand_onset_deg", "stand_complete_deg", "debounce_s",
                "vent_time_s"});
    ControllerConfig c;
    c.assist_pressure =
        units::kpa_to_pa(get_number(obj, ctx, "assist_kpa", units::pa_to_kpa(c.assist_pressure)));
    c.hold_pressure =
        units::kpa_to_pa(get_number(obj, ctx, "hold_kpa", units::pa_to_kpa(c.hold_pressure)));
    c.stand_onset_angle = units::deg_to_rad(
        get_number(obj, ctx, "stand_onset_deg", units::rad_to_deg(c.stand_onset_angle)));
    c.stand_complete_angle = units::deg_to_rad(
        get_number(obj, ctx, "stand_complete_deg", units::rad_to_deg(c.stand_complete_angle)));
    c.debounce = get_number(obj, ctx, "debounce_s", c.debounce);
    c.vent_time = get_number(obj, ctx, "vent_time_s", c.vent_time);
    validate(c);
    return c;
}

EmgConfig parse_emg(const json& obj, const std::string& ctx) {
    check_keys(obj, ctx, {"order", "low_cut_hz", "high_cut_hz", "zero_phase", "default_fs_hz"});
    EmgConfig e;
    e.filter.order = get_int(obj, ctx, "order", e.filter.order);
    e.filter.low_cut = get_number(obj, ctx, "low_cut_hz", e.filter.low_cut);
    e.filter.high_cut = get_number(obj, ctx, "high_cut_hz", e.filter.high_cut);
    e.filter.zero_phase = get_bool(obj, ctx, "zero_phase", e.filter.zero_phase);
    e.default_fs = get_number(obj, ctx, "default_fs_hz", e.default_fs);
    validate(e.filter, e.default_fs);
    return e;
}

}  // namespace

ToolkitConfig parse_toolkit_config(const std::string& json_text, const std::string& origin) {
    const json root = parse_json(json_text, origin);
    check_keys(root, origin, {"geometry", "design", "plant", "controller", "emg"});
    ToolkitConfig cfg;
    if (root.contains("geometry"))
        cfg.geometry = parse_geometry(root.at("geometry"), origin + ":geometry");
    if (root.contains("design")) cfg.design = parse_design(root.at("design"), origin + ":design");
    if (root.contains("plant")) cfg.plant = parse_plant(root.at("plant"), origin + ":plant");
    if (root.contains("controller"))
        cfg.controller = parse_controller(root.at("controller"), origin + ":controller");
    if (root.contains("emg")) cfg.emg = parse_emg(root.at("emg"), origin + ":emg");
    return cfg;
}

ToolkitConfig load_toolkit_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_toolkit_config(ss.str(), path);
}

Chamber make_chamber(const ToolkitConfig& config) {
    Chamber ch;
    ch.volume = config.plant.volume > 0.0 ? config.plant.volume : chamber_volume(config.geometry);
    ch.temperature = config.plant.temperature;
    return ch;
}

ValveModel load_valve(const std::string& path) {
    return parse_valve(read_json_file(path), path);
}

void save_valve(const std::string& path, const ValveModel& valve) {
    json j;
    j["sonic_conductance"] = valve.sonic_conductance;
    j["critical_ratio"] = valve.critical_ratio;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot write " + path);
    out << j.dump(2) << '\n';
}

EmgTrace load_emg_trace(const std::string& csv_path, const std::string& sidecar_path,
                        double default_fs) {
    const json side = read_json_file(sidecar_path);
    check_keys(side, sidecar_path, {"fs_hz", "condition", "cycles"});

    EmgTrace trace;
    if (side.contains("fs_hz")) {
        trace.fs = side.at("fs_hz").get<double>();
    } else {
        trace.fs = default_fs;
        std::cerr << "notice: " << sidecar_path << " omits fs_hz; assuming "
                  << default_fs << " Hz\n";
    }

    if (!side.contains("condition"))
        throw InputError(sidecar_path + ": missing 'condition'");
    const std::string cond = side.at("condition").get<std::string>();
    if (cond == "with_exosuit")
        trace.condition = EmgCondition::WithExosuit;
    else if (cond == "without_exosuit")
        trace.condition = EmgCondition::WithoutExosuit;
    else
        throw InputError(sidecar_path + ": condition must be 'with_exosuit' or 'without_exosuit'");

    const std::vector<std::vector<double>> rows =
        csv::read_numeric(csv_path, {"t_s", "emg_mv"});
    trace.samples.reserve(rows.size());
    for (const std::vector<double>& row : rows) trace.samples.push_back(row[1]);

    if (!side.contains("cycles")) throw InputError(sidecar_path + ": missing 'cycles'");
    for (const json& cyc : side.at("cycles")) {
        if (!cyc.is_array() || cyc.size() != 2)
            throw InputError(sidecar_path + ": each cycle must be [start_s, end_s]");
        const double t0 = cyc[0].get<double>();
        const double t1 = cyc[1].get<double>();
        CycleMark m;
        m.start = static_cast<std::size_t>(std::lround(t0 * trace.fs));
        m.end = static_cast<std::size_t>(std::lround(t1 * trace.fs));
        trace.cycle_marks.push_back(m);
    }
    validate(trace);
    return trace;
}

std::vector<QuestScores> load_quest_scores(const std::string& path) {
    const json root = read_json_file(path);
    check_keys(root, path, {"respondents"});
    if (!root.contains("respondents")) throw InputError(path + ": missing 'respondents'");
    std::vector<QuestScores> out;
    for (const json& r : root.at("respondents")) {
        check_keys(r, path + ":respondent",
                   {kQuestDimensions.begin(), kQuestDimensions.end()});
        QuestScores q;
        for (std::size_t i = 0; i < kQuestDimensions.size(); ++i) {
            if (!r.contains(kQuestDimensions[i]))
                throw InputError(path + ": respondent missing dimension '" +
                                 kQuestDimensions[i] + "'");
            q.scores[i] = r.at(kQuestDimensions[i]).get<int>();
        }
        out.push_back(q);
    }
    return out;
}

std::string default_config_json() {
    const ToolkitConfig d;
    // Snap boundary-unit values so the emitted file carries the intended
    // decimals, not conversion residue.
    auto snap = [](double v) { return std::round(v * 1e9) / 1e9; };
    json j;
    j["geometry"] = {
        {"note", "l_dz is an assumption; only the lower bound 2*d*tan(theta/2) is derivable"},
        {"n", d.geometry.n},
        {"d_mm", snap(units::m_to_mm(d.geometry.d))},
        {"l_dz_mm", snap(units::m_to_mm(d.geometry.l_dz))},
        {"l_hold_upper_mm", snap(units::m_to_mm(d.geometry.l_hold_upper))},
        {"l_hold_lower_mm", snap(units::m_to_mm(d.geometry.l_hold_lower))},
    };
    j["design"] = {
        {"p_kpa", snap(units::pa_to_kpa(d.design.p_design))},
        {"theta_deg", snap(units::rad_to_deg(d.design.theta_design))},
        {"torque_min_nm", d.design.torque_min},
        {"profile_max_mm", snap(units::m_to_mm(d.design.profile_max))},
        {"n_min", d.design.n_min},
        {"n_max", d.design.n_max},
        {"d_min_mm", snap(units::m_to_mm(d.design.d_min))},
        {"d_max_mm", snap(units::m_to_mm(d.design.d_max))},
        {"d_step_mm", snap(units::m_to_mm(d.design.d_step))},
        {"contact_length_mm", snap(units::m_to_mm(d.design.contact_length))},
        {"dz_length_mm", snap(units::m_to_mm(d.design.dz_length))},
    };
    j["plant"] = {
        {"note", "volume_m3 < 0 derives the chamber volume from the geometry"},
        {"volume_m3", d.plant.volume},
        {"temperature_k", d.plant.temperature},
        {"valve",
         {{"sonic_conductance", d.plant.valve.sonic_conductance},
          {"critical_ratio", d.plant.valve.critical_ratio}}},
    };
    j["controller"] = {
        {"assist_kpa", snap(units::pa_to_kpa(d.controller.assist_pressure))},
        {"hold_kpa", snap(units::pa_to_kpa(d.controller.hold_pressure))},
        {"stand_onset_deg", snap(units::rad_to_deg(d.controller.stand_onset_angle))},
        {"stand_complete_deg", snap(units::rad_to_deg(d.controller.stand_complete_angle))},
        {"debounce_s", d.controller.debounce},
        {"vent_time_s", d.controller.vent_time},
    };
    j["emg"] = {
        {"order", d.emg.filter.order},
        {"low_cut_hz", d.emg.filter.low_cut},
        {"high_cut_hz", d.emg.filter.high_cut},
        {"zero_phase", d.emg.filter.zero_phase},
        {"default_fs_hz", d.emg.default_fs},
    };
    return j.dump(2) + "\n";
}

}  // namespace exosuit
