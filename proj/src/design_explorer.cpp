#include "exosuit/design_explorer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "exosuit/errors.hpp"
#include "exosuit/torque_model.hpp"

namespace exosuit {

void validate(const DesignConstraints& c) {
    validate(OperatingPoint{c.p_design, c.theta_design});
    if (!(c.torque_min >= 0.0)) throw DomainError("torque_min must be non-negative");
    if (!(c.profile_max > 0.0)) throw DomainError("profile_max must be positive");
    if (c.n_min < 1 || c.n_max < c.n_min) throw DomainError("empty actuator count range");
    if (!(c.d_min > 0.0) || !(c.d_max >= c.d_min) || !(c.d_step > 0.0))
        throw DomainError("empty or invalid diameter range");
    if (!(c.contact_length > 0.0)) throw DomainError("contact_length must be positive");
    if (!(c.dz_length > 0.0)) throw DomainError("dz_length must be positive");
}

double stress_area(int n, double d, double contact_length) {
    if (n < 1) throw DomainError("actuator count n must be >= 1");
    if (!(d > 0.0)) throw DomainError("actuator diameter d must be positive");
    if (!(contact_length >= 0.0)) throw DomainError("contact_length must be non-negative");
    return n * d * contact_length;
}

namespace {

// Diameter grid size; the last point lands on d_max when the range divides
// evenly (with a small tolerance against FP drift in the division).
std::size_t diameter_count(const DesignConstraints& c) {
    return static_cast<std::size_t>(std::floor((c.d_max - c.d_min) / c.d_step + 1e-9)) + 1;
}

DesignCandidate make_candidate(const DesignConstraints& c, int n, double d) {
    DesignCandidate cand;
    cand.n = n;
    cand.d = d;
    ActuatorGeometry geom{n, d, c.dz_length, 0.0, 0.0};
    cand.torque = predict_torque(geom, {c.p_design, c.theta_design});
    cand.profile = d;
    cand.stress_area = stress_area(n, d, c.contact_length);
    cand.l_dz_min = min_dz_length(d, c.theta_design);
    cand.feasible = is_feasible(geom, c.theta_design);
    return cand;
}

}  // namespace

std::vector<DesignCandidate> enumerate_designs_serial(const DesignConstraints& c) {
    validate(c);
    const std::size_t nd = diameter_count(c);
    const std::size_t nn = static_cast<std::size_t>(c.n_max - c.n_min + 1);
    std::vector<DesignCandidate> out(nn * nd);
    for (std::size_t i = 0; i < nn; ++i) {
        for (std::size_t j = 0; j < nd; ++j) {
            const int n = c.n_min + static_cast<int>(i);
            const double d = c.d_min + static_cast<double>(j) * c.d_step;
            out[i * nd + j] = make_candidate(c, n, d);
        }
    }
    return out;
}

std::vector<DesignCandidate> enumerate_designs(const DesignConstraints& c) {
    validate(c);
    const long long nd = static_cast<long long>(diameter_count(c));
    const long long nn = c.n_max - c.n_min + 1;
    std::vector<DesignCandidate> out(static_cast<std::size_t>(nn * nd));
    DesignCandidate* slots = out.data();
    // Grid points are independent; each thread fills its own slots, so the
    // merged order (ascending n, then d) matches the serial reference.
#pragma omp parallel for collapse(2) schedule(static)
    for (long long i = 0; i < nn; ++i) {
        for (long long j = 0; j < nd; ++j) {
            const int n = c.n_min + static_cast<int>(i);
            const double d = c.d_min + static_cast<double>(j) * c.d_step;
            slots[i * nd + j] = make_candidate(c, n, d);
        }
    }
    return out;
}

bool dominates(const DesignCandidate& a, const DesignCandidate& b) {
    const bool ge = a.torque >= b.torque && a.profile <= b.profile &&
                    a.stress_area >= b.stress_area;
    const bool gt = a.torque > b.torque || a.profile < b.profile ||
                    a.stress_area > b.stress_area;
    return ge && gt;
}

std::vector<bool> pareto_membership(const std::vector<DesignCandidate>& cands) {
    if (cands.empty()) throw DomainError("pareto front of an empty candidate list");
    // Candidates are visited in an order where every potential dominator of x
    // comes strictly before x (torque desc, then profile asc, then stress
    // desc); a candidate is on the front iff no already-accepted one
    // dominates it. Exact duplicates compare equal everywhere and survive.
    std::vector<std::size_t> order(cands.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
        const DesignCandidate& a = cands[i];
        const DesignCandidate& b = cands[j];
        if (a.torque != b.torque) return a.torque > b.torque;
        if (a.profile != b.profile) return a.profile < b.profile;
        return a.stress_area > b.stress_area;
    });
    std::vector<bool> on_front(cands.size(), false);
    std::vector<std::size_t> front;
    for (std::size_t idx : order) {
        bool dominated = false;
        for (std::size_t f : front) {
            if (dominates(cands[f], cands[idx])) {
                dominated = true;
                break;
            }
        }
        if (!dominated) {
            front.push_back(idx);
            on_front[idx] = true;
        }
    }
    return on_front;
}

std::vector<DesignCandidate> pareto_front(const std::vector<DesignCandidate>& cands) {
    const std::vector<bool> keep = pareto_membership(cands);
    std::vector<DesignCandidate> out;
    for (std::size_t i = 0; i < cands.size(); ++i)
        if (keep[i]) out.push_back(cands[i]);
    return out;
}

std::vector<DesignCandidate> filter_feasible(const std::vector<DesignCandidate>& cands,
                                             const DesignConstraints& c) {
    std::vector<DesignCandidate> out;
    for (const DesignCandidate& cand : cands)
        if (cand.feasible && cand.torque >= c.torque_min && cand.profile <= c.profile_max)
            out.push_back(cand);
    return out;
}

}  // namespace exosuit
