#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "test_util.hpp"

#include <array>
#include <random>

#include "exosuit/controller.hpp"
#include "exosuit/errors.hpp"
#include "exosuit/units.hpp"

using namespace exosuit;
using doctest::Approx;

namespace {

// Linear ramp between waypoints, sampled at 100 Hz.
std::vector<PostureSample> ramp_trace(const std::vector<std::pair<double, double>>& waypoints_deg,
                                      double fs = 100.0) {
    std::vector<PostureSample> out;
    const double t0 = waypoints_deg.front().first;
    const double t1 = waypoints_deg.back().first;
    for (double t = t0; t <= t1 + 1e-9; t += 1.0 / fs) {
        double angle = waypoints_deg.back().second;
        for (std::size_t i = 1; i < waypoints_deg.size(); ++i) {
            if (t <= waypoints_deg[i].first) {
                const auto& [ta, aa] = waypoints_deg[i - 1];
                const auto& [tb, ab] = waypoints_deg[i];
                angle = aa + (ab - aa) * (t - ta) / (tb - ta);
                break;
            }
        }
        out.push_back({t, units::deg_to_rad(angle)});
    }
    return out;
}

int count_phase(const SessionLog& log, Phase phase) {
    int n = 0;
    for (const CommandLogEntry& e : log.entries)
        if (e.phase == phase) ++n;
    return n;
}

}  // namespace

TEST_CASE("valve truth table on the happy path") {
    const ControllerConfig cfg;
    ControllerState st;

    StepResult r = step_phase(st, Event::Activate, cfg);
    CHECK(r.handled);
    CHECK(r.state.phase == Phase::HoldPressurizing);
    CHECK(r.state.hold_command == cfg.hold_pressure);
    CHECK_FALSE(r.state.valves.sv1_open);
    CHECK_FALSE(r.state.valves.sv2_open);

    r = step_phase(r.state, Event::HoldAtPressure, cfg);
    CHECK(r.state.phase == Phase::Ready);

    r = step_phase(r.state, Event::StandOnset, cfg);
    CHECK(r.state.phase == Phase::Assisting);
    CHECK(r.state.valves.sv1_open);
    CHECK_FALSE(r.state.valves.sv2_open);

    r = step_phase(r.state, Event::StandComplete, cfg);
    CHECK(r.state.phase == Phase::Venting);
    CHECK_FALSE(r.state.valves.sv1_open);
    CHECK(r.state.valves.sv2_open);

    r = step_phase(r.state, Event::VentComplete, cfg);
    CHECK(r.state.phase == Phase::Ready);

    r = step_phase(r.state, Event::SessionEnd, cfg);
    CHECK(r.state.phase == Phase::Idle);
    CHECK(r.state.hold_command == 0.0);
}

TEST_CASE("undefined pairs leave the state unchanged") {
    const ControllerConfig cfg;
    const ControllerState idle;
    const StepResult r = step_phase(idle, Event::StandOnset, cfg);
    CHECK_FALSE(r.handled);
    CHECK(r.state.phase == Phase::Idle);
    CHECK_FALSE(r.state.valves.sv1_open);
    CHECK_FALSE(r.state.valves.sv2_open);
}

TEST_CASE("valves are never both open, exhaustively and under fuzz") {
    const ControllerConfig cfg;
    const std::array<Event, 6> events = {Event::Activate,     Event::HoldAtPressure,
                                         Event::StandOnset,   Event::StandComplete,
                                         Event::VentComplete, Event::SessionEnd};
    std::mt19937 rng(808u);
    std::uniform_int_distribution<int> pick(0, 5);
    for (int run = 0; run < 2000; ++run) {
        ControllerState st;
        for (int step = 0; step < 48; ++step) {
            st = step_phase(st, events[static_cast<std::size_t>(pick(rng))], cfg).state;
            REQUIRE_FALSE((st.valves.sv1_open && st.valves.sv2_open));
            if (st.valves.sv1_open) REQUIRE(st.phase == Phase::Assisting);
            const double want_hold = st.phase == Phase::Idle ? 0.0 : cfg.hold_pressure;
            REQUIRE(st.hold_command == want_hold);
        }
    }
}

TEST_CASE("stand onset detection") {
    const ControllerConfig cfg;  // onset 20 deg, debounce 0.1 s

    SUBCASE("constant seated angle yields nothing") {
        const std::vector<PostureSample> flat = ramp_trace({{0.0, 5.0}, {4.0, 5.0}});
        CHECK_FALSE(detect_stand_onset(flat, cfg).has_value());
    }
    SUBCASE("clean ramp crossing at t = 2 s") {
        // 0 deg at t=0 rising to 80 deg at t=8: crosses 20 deg at exactly 2.0.
        const std::vector<PostureSample> ramp = ramp_trace({{0.0, 0.0}, {8.0, 80.0}});
        const std::optional<double> onset = detect_stand_onset(ramp, cfg);
        REQUIRE(onset.has_value());
        CHECK(*onset == near(2.0, 0.011));
    }
    SUBCASE("a glitch shorter than the debounce postpones the onset") {
        // Crosses 20 deg at t=2.0, dips below at 2.03..2.07, re-crosses after.
        std::vector<PostureSample> ramp = ramp_trace({{0.0, 0.0}, {8.0, 80.0}});
        for (PostureSample& s : ramp)
            if (s.t >= 2.025 && s.t <= 2.075) s.thigh_angle = units::deg_to_rad(15.0);
        const std::optional<double> onset = detect_stand_onset(ramp, cfg);
        REQUIRE(onset.has_value());
        CHECK(*onset > 2.075);
        CHECK(*onset == near(2.08, 0.011));
    }
    SUBCASE("a trace ending inside the debounce window is inconclusive") {
        ControllerConfig slow = cfg;
        slow.debounce = 10.0;
        const std::vector<PostureSample> ramp = ramp_trace({{0.0, 0.0}, {8.0, 80.0}});
        CHECK_FALSE(detect_stand_onset(ramp, slow).has_value());
    }
    SUBCASE("non-increasing timestamps are rejected") {
        const std::vector<PostureSample> bad = {{0.0, 0.0}, {0.0, 0.1}};
        CHECK_THROWS_AS(detect_stand_onset(bad, cfg), InputError);
    }
}

TEST_CASE("session replay") {
    const ControllerConfig cfg;

    SUBCASE("empty trace logs only bookkeeping") {
        const SessionLog log = run_session({}, cfg);
        REQUIRE(log.entries.size() == 4);  // initial Idle, HoldPressurizing, Ready, Idle
        CHECK(log.entries.front().phase == Phase::Idle);
        CHECK(log.entries[1].phase == Phase::HoldPressurizing);
        CHECK(log.entries[2].phase == Phase::Ready);
        CHECK(log.entries.back().phase == Phase::Idle);
        CHECK(count_phase(log, Phase::Assisting) == 0);
    }
    SUBCASE("one clean sit-to-stand gives exactly one assist interval") {
        const std::vector<PostureSample> trace =
            ramp_trace({{0.0, 0.0}, {1.0, 0.0}, {3.0, 85.0}, {6.0, 85.0}});
        const SessionLog log = run_session(trace, cfg);
        CHECK(count_phase(log, Phase::Assisting) == 1);
        CHECK(count_phase(log, Phase::Venting) == 1);
        CHECK(log.entries.back().phase == Phase::Idle);
    }
    SUBCASE("two cycles give two disjoint assist intervals in order") {
        const std::vector<PostureSample> trace = ramp_trace({{0.0, 0.0},
                                                             {1.0, 0.0},
                                                             {3.0, 85.0},
                                                             {5.0, 85.0},
                                                             {7.0, 0.0},
                                                             {9.0, 0.0},
                                                             {11.0, 85.0},
                                                             {13.0, 85.0}});
        const SessionLog log = run_session(trace, cfg);
        CHECK(count_phase(log, Phase::Assisting) == 2);
        double last_t = -1.0;
        for (const CommandLogEntry& e : log.entries) {
            CHECK(e.t >= last_t);
            last_t = e.t;
        }
    }
    SUBCASE("hold command is constant from activation to session end") {
        const std::vector<PostureSample> trace =
            ramp_trace({{0.0, 0.0}, {1.0, 0.0}, {3.0, 85.0}, {6.0, 85.0}});
        const SessionLog log = run_session(trace, cfg);
        for (std::size_t i = 1; i + 1 < log.entries.size(); ++i)
            CHECK(log.entries[i].hold_command == cfg.hold_pressure);
        CHECK(log.entries.back().hold_command == 0.0);
    }
    SUBCASE("replay is deterministic") {
        const std::vector<PostureSample> trace =
            ramp_trace({{0.0, 0.0}, {1.0, 0.0}, {3.0, 85.0}, {6.0, 85.0}});
        const SessionLog a = run_session(trace, cfg);
        const SessionLog b = run_session(trace, cfg);
        REQUIRE(a.entries.size() == b.entries.size());
        for (std::size_t i = 0; i < a.entries.size(); ++i) {
            CHECK(a.entries[i].t == b.entries[i].t);
            CHECK(a.entries[i].phase == b.entries[i].phase);
            CHECK(a.entries[i].valves.sv1_open == b.entries[i].valves.sv1_open);
            CHECK(a.entries[i].valves.sv2_open == b.entries[i].valves.sv2_open);
        }
    }
}

TEST_CASE("config validation") {
    ControllerConfig bad;
    bad.stand_onset_angle = bad.stand_complete_angle;
    CHECK_THROWS_AS(validate(bad), DomainError);
    ControllerConfig neg;
    neg.debounce = -0.1;
    CHECK_THROWS_AS(validate(neg), DomainError);
}
