#pragma once

#include <string>
#include <vector>

// The paper-validation harness: every published anchor value and every
// numerical property the toolkit commits to, runnable from bundled defaults
// with no input files. The CLI's `validate paper` prints this report; the
// acceptance suite asserts it.

namespace exosuit {

struct CheckResult {
    std::string name;
    double expected = 0.0;
    double computed = 0.0;
    double tolerance = 0.0;
    bool passed = false;
    std::string detail;  // units or comparison semantics, for display
};

struct ValidationReport {
    std::vector<CheckResult> checks;
    bool all_passed() const;
};

struct ValidationOptions {
    // Negative-control knob: scales the computed star-point torque so a
    // deliberately broken constant is caught by the harness. 1.0 = honest run.
    double torque_tamper = 1.0;
};

ValidationReport run_paper_validation(const ValidationOptions& options = {});

/// Render the report as an aligned text table, one line per check.
std::string format_report(const ValidationReport& report);

/// Render the report as JSON.
std::string report_to_json(const ValidationReport& report);

}  // namespace exosuit
