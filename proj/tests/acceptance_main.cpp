// Acceptance suite: runs every published-anchor check and every committed
// numerical property from bundled defaults, printing one line per criterion.
// Exit 0 iff everything holds, including the negative control (a tampered
// torque constant must make the harness fail) and the runtime budget.

#include <chrono>
#include <cstdio>
#include <string>
#include <vector>

#include "exosuit/validation.hpp"

namespace {

int g_failures = 0;

void report(int criterion, const std::string& label, bool ok, const std::string& detail) {
    std::printf("[%s] criterion %2d: %-44s %s\n", ok ? "PASS" : "FAIL", criterion, label.c_str(),
                detail.c_str());
    if (!ok) ++g_failures;
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

const exosuit::CheckResult& find(const exosuit::ValidationReport& r, const std::string& name) {
    for (const exosuit::CheckResult& c : r.checks)
        if (c.name == name) return c;
    std::fprintf(stderr, "internal error: check '%s' missing from the harness\n", name.c_str());
    std::exit(1);
}

}  // namespace

int main() {
    using namespace exosuit;
    const auto t0 = std::chrono::steady_clock::now();
    const ValidationReport r = run_paper_validation();

    auto one = [&](int criterion, const std::string& label, const std::string& check) {
        const CheckResult& c = find(r, check);
        report(criterion, label, c.passed,
               "computed " + fmt(c.computed) + " vs " + fmt(c.expected) + " (tol " +
                   fmt(c.tolerance) + ")");
    };
    auto group = [&](int criterion, const std::string& label,
                     const std::vector<std::string>& names) {
        bool ok = true;
        std::string worst;
        for (const std::string& n : names) {
            const CheckResult& c = find(r, n);
            if (!c.passed && worst.empty()) worst = n + " computed " + fmt(c.computed);
            ok = ok && c.passed;
        }
        report(criterion, label, ok,
               ok ? std::to_string(names.size()) + " sub-checks" : worst);
    };

    one(1, "star-point torque 8.77 N m +/- 0.01", "star_point_torque");
    one(2, "model-vs-measurement error 3.6% +/- 0.1%", "static_model_error");
    group(3, "scaling laws over 1000 random inputs",
          {"torque_linearity_in_p", "torque_additivity_in_n", "torque_cubic_in_d",
           "torque_monotonic_in_theta"});
    one(4, "feasibility flips at l = 2 d tan(theta/2)", "feasibility_boundary_flip");
    group(5, "design diagram grid and Pareto front",
          {"design_star_candidate_torque", "pareto_front_vs_bruteforce"});
    group(6, "calibration round trip and held-out times",
          {"response_time_100kpa", "response_time_80kpa", "response_time_60kpa",
           "response_time_40kpa", "response_time_ordering"});
    group(7, "simulator physics properties",
          {"fill_mass_conservation", "fill_no_overshoot", "response_time_dt_convergence",
           "response_time_analytic_exponential"});
    group(8, "controller safety and hold-zone constancy",
          {"valve_mutual_exclusion", "hold_zone_command_constant"});
    group(9, "Butterworth band-pass correctness",
          {"filter_gain_10hz_db", "filter_gain_400hz_db",
           "filter_pole_radius_inside_unit_circle", "filter_sine_gain_match"});
    group(10, "reduction arithmetic and scale invariance",
          {"average_reduction_paper", "reduction_scale_invariance"});

    // Criterion 11: the harness itself must pass end to end, a deliberately
    // perturbed constant must fail it, and the whole run stays under budget.
    const bool harness_ok = r.all_passed();
    ValidationOptions tampered;
    tampered.torque_tamper = 1.02;
    const ValidationReport negative = run_paper_validation(tampered);
    const bool control_ok = !negative.all_passed() && !find(negative, "star_point_torque").passed;
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool budget_ok = elapsed < 30.0;
    report(11, "end-to-end harness + negative control",
           harness_ok && control_ok && budget_ok,
           std::string(control_ok ? "tamper caught" : "TAMPER NOT CAUGHT") + ", " + fmt(elapsed) +
               " s");

    if (g_failures == 0) {
        std::printf("ACCEPTANCE: PASS (11/11 criteria)\n");
        return 0;
    }
    std::printf("ACCEPTANCE: FAIL (%d criteria failed)\n", g_failures);
    return 1;
}
