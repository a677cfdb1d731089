#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "test_util.hpp"

#include <cmath>

#include "exosuit/errors.hpp"
#include "exosuit/pneumatic_sim.hpp"
#include "exosuit/units.hpp"

using namespace exosuit;
using doctest::Approx;

namespace {
const ActuatorGeometry kStar{4, 0.032, 0.060, 0.0, 0.0};
const Chamber kChamber{0.00019301945263655687, 293.15};  // volume of the star geometry
}  // namespace

TEST_CASE("chamber volume of the inflation-deflation zone") {
    CHECK(chamber_volume(kStar) == Approx(1.9302e-4).epsilon(1e-4));
    CHECK(chamber_volume({1, 0.032, 0.060, 0, 0}) == Approx(chamber_volume(kStar) / 4.0).epsilon(1e-12));
    CHECK(chamber_volume({4, 0.032, 1e-9, 0, 0}) == near(0.0, 1e-10));
    CHECK_THROWS_AS(chamber_volume({4, 0.032, 0.0, 0, 0}), DomainError);
}

TEST_CASE("orifice mass flow regimes") {
    const ValveModel valve{2e-9, 0.5};
    const double p_up = 200e3;

    SUBCASE("zero flow at equal pressures") {
        CHECK(mass_flow(valve, p_up, p_up, 293.15) == 0.0);
    }
    SUBCASE("continuous at the critical ratio") {
        const double choked = mass_flow(valve, p_up, 0.3 * p_up, 293.15);
        CHECK(mass_flow(valve, p_up, 0.5 * p_up, 293.15) == Approx(choked).epsilon(1e-12));
        CHECK(mass_flow(valve, p_up, 0.1 * p_up, 293.15) == Approx(choked).epsilon(1e-12));
    }
    SUBCASE("elliptic roll-off at r = (1+b)/2") {
        const double choked = mass_flow(valve, p_up, 0.5 * p_up, 293.15);
        CHECK(mass_flow(valve, p_up, 0.75 * p_up, 293.15) ==
              Approx(choked * std::sqrt(0.75)).epsilon(1e-12));
    }
    SUBCASE("reverse pressure order is rejected") {
        CHECK_THROWS_AS(mass_flow(valve, 100e3, 150e3, 293.15), DomainError);
    }
    SUBCASE("choked flow is linear in upstream pressure") {
        const double f1 = mass_flow(valve, 100e3, 10e3, 293.15);
        const double f2 = mass_flow(valve, 200e3, 20e3, 293.15);
        CHECK(f2 == Approx(2.0 * f1).epsilon(1e-12));
    }
}

TEST_CASE("fill with supply equal to initial pressure stays flat") {
    const ValveModel valve{2e-9, 0.5};
    const PressureTrace t = simulate_fill({50e3, 50e3, 0.1}, kChamber, valve, 1e-4, 0.05);
    for (double p : t.samples) CHECK(p == 50e3);
}

TEST_CASE("fill is monotone and never overshoots the supply") {
    const ValveModel valve{2e-9, 0.5};
    const PressureTrace t = simulate_fill({100e3, 0.0, 0.1}, kChamber, valve, 1e-4, 2.0);
    for (std::size_t k = 1; k < t.samples.size(); ++k) {
        CHECK(t.samples[k] >= t.samples[k - 1]);
        CHECK(t.samples[k] <= 100e3);
    }
    CHECK(t.samples.front() == 0.0);
    CHECK(t.samples.back() == Approx(100e3).epsilon(1e-6));
}

TEST_CASE("per-step mass balance follows the valve model") {
    const ValveModel valve{2e-9, 0.5};
    const double dt = 1e-4;
    const PressureTrace t = simulate_fill({100e3, 0.0, 0.1}, kChamber, valve, dt, 2.0);
    const double supply_abs = 100e3 + kAtmosphericPressure;
    const double mass_per_pa = kChamber.volume / (kAirGasConstant * kChamber.temperature);
    const double first_flow = mass_flow(valve, supply_abs, kAtmosphericPressure, 293.15) * dt;
    for (std::size_t k = 0; k + 1 < t.samples.size(); ++k) {
        const double p0 = t.samples[k] + kAtmosphericPressure;
        const double p1 = t.samples[k + 1] + kAtmosphericPressure;
        const double dm = (p1 - p0) * mass_per_pa;
        const double fm = mass_flow(valve, supply_abs, p0, 293.15) * dt;
        if (p1 < supply_abs && fm >= 1e-5 * first_flow)
            CHECK(dm == Approx(fm).epsilon(1e-6));
        else
            CHECK(dm <= fm * (1.0 + 1e-6));  // arrival step can only under-deliver
    }
}

TEST_CASE("unstable step size is reported, not clamped") {
    const ValveModel valve{2e-9, 0.5};
    CHECK_THROWS_AS(simulate_fill({100e3, 0.0, 0.1}, kChamber, valve, 1.0, 2.0), NumericalError);
}

TEST_CASE("vent mirrors fill") {
    const ValveModel valve{2e-9, 0.5};
    SUBCASE("initial equal to sink stays flat") {
        const PressureTrace t = simulate_vent({0.0, 0.0, 0.1}, kChamber, valve, 1e-4, 0.05);
        for (double p : t.samples) CHECK(p == 0.0);
    }
    SUBCASE("vent to atmosphere decays monotonically to zero gauge") {
        const PressureTrace t = simulate_vent({0.0, 100e3, 0.1}, kChamber, valve, 1e-4, 3.0);
        for (std::size_t k = 1; k < t.samples.size(); ++k) {
            CHECK(t.samples[k] <= t.samples[k - 1]);
            CHECK(t.samples[k] >= 0.0);
        }
        CHECK(t.samples.back() == near(0.0, 200.0));
    }
    SUBCASE("a vacuum sink reaches 10 kPa gauge faster than atmosphere") {
        const PressureTrace atm = simulate_vent({0.0, 100e3, 0.1}, kChamber, valve, 1e-4, 3.0);
        const PressureTrace vac = simulate_vent({-50e3, 100e3, 0.1}, kChamber, valve, 1e-4, 3.0);
        auto first_below = [](const PressureTrace& t, double level) {
            for (std::size_t k = 0; k < t.samples.size(); ++k)
                if (t.samples[k] <= level) return static_cast<double>(k) * t.dt;
            return 1e30;
        };
        CHECK(first_below(vac, 10e3) < first_below(atm, 10e3));
    }
    SUBCASE("wrong direction is rejected") {
        CHECK_THROWS_AS(simulate_vent({50e3, 0.0, 0.1}, kChamber, valve, 1e-4, 1.0), DomainError);
    }
}

TEST_CASE("response time semantics") {
    SUBCASE("already inside the band means zero") {
        PressureTrace t;
        t.dt = 0.01;
        t.samples.assign(100, 100e3);
        CHECK(response_time(t, 100e3, 0.10) == 0.0);
    }
    SUBCASE("analytic exponential settles at tau ln 10") {
        const double tau = 0.2, dt = 1e-3, target = 100e3;
        PressureTrace t;
        t.dt = dt;
        for (int k = 0; k <= 3000; ++k)
            t.samples.push_back(target * (1.0 - std::exp(-k * dt / tau)));
        CHECK(response_time(t, target, 0.10) == near(tau * std::log(10.0), dt));
    }
    SUBCASE("band never reached throws") {
        PressureTrace t;
        t.dt = 0.01;
        t.samples.assign(100, 10e3);
        CHECK_THROWS_AS(response_time(t, 100e3, 0.10), NumericalError);
    }
    SUBCASE("a late excursion out of the band postpones the settle time") {
        PressureTrace t;
        t.dt = 0.1;
        t.samples = {0.0, 95e3, 96e3, 80e3, 97e3, 98e3};
        CHECK(response_time(t, 100e3, 0.10) == Approx(0.4));
    }
    SUBCASE("empty trace is rejected") {
        PressureTrace t;
        t.dt = 0.1;
        CHECK_THROWS_AS(response_time(t, 100e3, 0.10), DomainError);
    }
}

TEST_CASE("conductance calibration round-trips the anchor point") {
    const ValveModel valve = calibrate_conductance(100e3, 0.5, kChamber, ValveModel{});
    const PressureTrace t = simulate_fill({100e3, 0.0, 0.10}, kChamber, valve, 1e-4, 2.0);
    CHECK(response_time(t, 100e3, 0.10) == near(0.5, 0.005));
}

TEST_CASE("calibrated conductance scales linearly with chamber volume") {
    const ValveModel v1 = calibrate_conductance(100e3, 0.5, kChamber, ValveModel{});
    const Chamber doubled{2.0 * kChamber.volume, kChamber.temperature};
    const ValveModel v2 = calibrate_conductance(100e3, 0.5, doubled, ValveModel{});
    CHECK(v2.sonic_conductance == Approx(2.0 * v1.sonic_conductance).epsilon(0.03));
}

TEST_CASE("longer anchor times calibrate to smaller conductances") {
    const ValveModel fast = calibrate_conductance(100e3, 0.25, kChamber, ValveModel{});
    const ValveModel slow = calibrate_conductance(100e3, 1.0, kChamber, ValveModel{});
    CHECK(slow.sonic_conductance < fast.sonic_conductance);
}

TEST_CASE("halving dt changes the response time by less than 1%") {
    const ValveModel valve = calibrate_conductance(100e3, 0.5, kChamber, ValveModel{});
    const double t1 = response_time(simulate_fill({100e3, 0.0, 0.10}, kChamber, valve, 1e-4, 2.0),
                                    100e3, 0.10);
    const double t2 = response_time(simulate_fill({100e3, 0.0, 0.10}, kChamber, valve, 5e-5, 2.0),
                                    100e3, 0.10);
    CHECK(std::abs(t2 - t1) / t1 < 0.01);
}

TEST_CASE("held-out targets land near the published times, in order") {
    const ValveModel valve = calibrate_conductance(100e3, 0.5, kChamber, ValveModel{});
    auto settle = [&](double target) {
        return response_time(simulate_fill({target, 0.0, 0.10}, kChamber, valve, 1e-4, 2.0),
                             target, 0.10);
    };
    const double t100 = settle(100e3);
    const double t80 = settle(80e3);
    const double t60 = settle(60e3);
    const double t40 = settle(40e3);
    CHECK(t100 == near(0.50, 0.02));
    CHECK(t80 == near(0.34, 0.15));
    CHECK(t60 == near(0.32, 0.15));
    CHECK(t40 == near(0.30, 0.15));
    CHECK(t100 >= t80);
    CHECK(t80 >= t60);
    CHECK(t60 >= t40);
}
