#include "exosuit/emg_pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "exosuit/errors.hpp"
#include "exosuit/units.hpp"

namespace exosuit {

void validate(const EmgTrace& trace) {
    if (!(trace.fs > 800.0))
        throw InputError("EMG sample rate must exceed 800 Hz (Nyquist margin for the 400 Hz edge)");
    for (double v : trace.samples)
        if (!std::isfinite(v)) throw InputError("EMG samples must be finite");
    std::size_t prev_end = 0;
    for (std::size_t i = 0; i < trace.cycle_marks.size(); ++i) {
        const CycleMark& m = trace.cycle_marks[i];
        if (m.start >= m.end)
            throw InputError("cycle " + std::to_string(i + 1) + " is empty or inverted");
        if (m.end > trace.samples.size())
            throw InputError("cycle " + std::to_string(i + 1) + " runs past the end of the trace");
        if (i > 0 && m.start < prev_end)
            throw InputError("cycle " + std::to_string(i + 1) + " overlaps the previous cycle");
        prev_end = m.end;
    }
}

void validate(const FilterSpec& spec, double fs) {
    if (!(fs > 0.0)) throw InputError("sample rate must be positive");
    if (spec.order < 2 || spec.order % 2 != 0)
        throw InputError("band-pass order must be a positive even integer");
    if (!(spec.low_cut > 0.0) || !(spec.low_cut < spec.high_cut))
        throw InputError("band edges must satisfy 0 < low_cut < high_cut");
    if (!(spec.high_cut < fs / 2.0))
        throw InputError("high_cut must stay below the Nyquist frequency fs/2");
}

std::complex<double> BandpassFilter::response_at(double f) const {
    const std::complex<double> z1 = std::polar(1.0, -2.0 * units::kPi * f / fs);
    const std::complex<double> z2 = z1 * z1;
    std::complex<double> h{1.0, 0.0};
    for (const Biquad& s : sections)
        h *= (s.b0 + s.b1 * z1 + s.b2 * z2) / (1.0 + s.a1 * z1 + s.a2 * z2);
    return h;
}

std::vector<double> BandpassFilter::apply(const std::vector<double>& x) const {
    std::vector<double> y = x;
    for (const Biquad& s : sections) {
        // Direct form II transposed, zero initial state.
        double s1 = 0.0, s2 = 0.0;
        for (double& v : y) {
            const double in = v;
            const double out = s.b0 * in + s1;
            s1 = s.b1 * in - s.a1 * out + s2;
            s2 = s.b2 * in - s.a2 * out;
            v = out;
        }
    }
    return y;
}

BandpassFilter design_bandpass(const FilterSpec& spec, double fs) {
    validate(spec, fs);
    using cd = std::complex<double>;
    const int n_proto = spec.order / 2;

    // Prewarped analog band edges and the low-pass -> band-pass mapping.
    const double w_low = 2.0 * fs * std::tan(units::kPi * spec.low_cut / fs);
    const double w_high = 2.0 * fs * std::tan(units::kPi * spec.high_cut / fs);
    const double bw = w_high - w_low;
    const double w0_sq = w_low * w_high;

    // Butterworth prototype poles on the left-half unit circle; each maps to
    // a pair of analog band-pass poles.
    std::vector<cd> analog_poles;
    analog_poles.reserve(spec.order);
    for (int k = 1; k <= n_proto; ++k) {
        const double phi = units::kPi * (2.0 * k + n_proto - 1.0) / (2.0 * n_proto);
        const cd p{std::cos(phi), std::sin(phi)};
        const cd disc = std::sqrt(p * p * bw * bw - 4.0 * w0_sq);
        analog_poles.push_back(0.5 * (p * bw + disc));
        analog_poles.push_back(0.5 * (p * bw - disc));
    }

    const double bilinear_k = 2.0 * fs;
    std::vector<cd> digital_poles;
    digital_poles.reserve(analog_poles.size());
    cd pole_prod{1.0, 0.0};
    for (const cd& s : analog_poles) {
        digital_poles.push_back((1.0 + s / bilinear_k) / (1.0 - s / bilinear_k));
        pole_prod *= bilinear_k - s;
    }
    // n_proto analog zeros at the origin map to z = +1; the remaining n_proto
    // zeros of the digital filter sit at z = -1.
    const double gain =
        (std::pow(bw, n_proto) * std::pow(bilinear_k, n_proto) / pole_prod).real();

    // Group the 2*n_proto digital poles into second-order sections. Poles
    // arrive as images of conjugate prototype pairs, so partners are exact
    // conjugates up to rounding; a real pair can appear for very wide bands.
    const double imag_tol = 1e-9;
    std::vector<cd> upper, reals;
    for (const cd& z : digital_poles) {
        if (z.imag() > imag_tol)
            upper.push_back(z);
        else if (z.imag() >= -imag_tol)
            reals.push_back(z);
    }
    struct PolePair {
        double a1, a2;
        double angle;  // |arg| of the representative pole
        cd leader;
    };
    std::vector<PolePair> pairs;
    for (const cd& z : upper)
        pairs.push_back({-2.0 * z.real(), std::norm(z), std::abs(std::arg(z)), z});
    std::sort(reals.begin(), reals.end(), [](const cd& a, const cd& b) { return a.real() < b.real(); });
    for (std::size_t i = 0; i + 1 < reals.size(); i += 2) {
        const double r1 = reals[i].real(), r2 = reals[i + 1].real();
        pairs.push_back({-(r1 + r2), r1 * r2, std::abs(std::arg(reals[i + 1])), reals[i + 1]});
    }
    std::sort(pairs.begin(), pairs.end(),
              [](const PolePair& a, const PolePair& b) { return a.angle < b.angle; });

    // Hand each section two zeros from the z=+1 / z=-1 pools, nearest first.
    int pool_pos = n_proto, pool_neg = n_proto;
    BandpassFilter filt;
    filt.fs = fs;
    filt.poles = digital_poles;
    for (const PolePair& pp : pairs) {
        const bool prefer_pos = std::abs(pp.leader - cd{1.0, 0.0}) <= std::abs(pp.leader + cd{1.0, 0.0});
        Biquad s;
        auto take = [&](bool positive) {
            if (positive)
                pool_pos -= 2;
            else
                pool_neg -= 2;
            s.b0 = 1.0;
            s.b1 = positive ? -2.0 : 2.0;
            s.b2 = 1.0;
        };
        if (prefer_pos && pool_pos >= 2)
            take(true);
        else if (!prefer_pos && pool_neg >= 2)
            take(false);
        else if (pool_pos >= 2)
            take(true);
        else if (pool_neg >= 2)
            take(false);
        else {
            pool_pos -= 1;
            pool_neg -= 1;
            s.b0 = 1.0;
            s.b1 = 0.0;
            s.b2 = -1.0;  // (1 - z^-1)(1 + z^-1)
        }
        s.a1 = pp.a1;
        s.a2 = pp.a2;
        filt.sections.push_back(s);
    }
    filt.sections.front().b0 *= gain;
    filt.sections.front().b1 *= gain;
    filt.sections.front().b2 *= gain;

    for (const cd& z : digital_poles)
        if (!(std::abs(z) < 1.0))
            throw NumericalError("designed filter is unstable (pole on or outside the unit circle)");
    return filt;
}

EmgTrace filter_trace(const EmgTrace& trace, const FilterSpec& spec) {
    validate(trace);
    const BandpassFilter filt = design_bandpass(spec, trace.fs);
    EmgTrace out = trace;
    out.samples = filt.apply(trace.samples);
    if (spec.zero_phase) {
        std::reverse(out.samples.begin(), out.samples.end());
        out.samples = filt.apply(out.samples);
        std::reverse(out.samples.begin(), out.samples.end());
    }
    return out;
}

EmgTrace rectify(const EmgTrace& trace) {
    EmgTrace out = trace;
    for (double& v : out.samples) v = std::abs(v);
    return out;
}

CycleMeans cycle_mean(const EmgTrace& trace) {
    validate(trace);
    if (trace.cycle_marks.empty()) throw InputError("cycle_mean requires at least one cycle mark");
    CycleMeans out;
    out.per_cycle.reserve(trace.cycle_marks.size());
    for (const CycleMark& m : trace.cycle_marks) {
        double sum = 0.0;
        for (std::size_t i = m.start; i < m.end; ++i) sum += trace.samples[i];
        out.per_cycle.push_back(sum / static_cast<double>(m.end - m.start));
    }
    double total = 0.0;
    for (double v : out.per_cycle) total += v;
    out.grand_mean = total / static_cast<double>(out.per_cycle.size());
    return out;
}

double percent_reduction(double mean_without, double mean_with) {
    if (!(mean_without > 0.0))
        throw DomainError("percent_reduction needs a positive without-exosuit baseline");
    return 100.0 * (mean_without - mean_with) / mean_without;
}

double average_reduction(const std::vector<double>& per_subject) {
    if (per_subject.empty()) throw DomainError("average_reduction of an empty list");
    double sum = 0.0;
    for (double v : per_subject) sum += v;
    return sum / static_cast<double>(per_subject.size());
}

double quest_total(const std::vector<QuestScores>& respondents) {
    if (respondents.empty()) throw DomainError("quest_total needs at least one respondent");
    long long sum = 0;
    for (const QuestScores& r : respondents) {
        for (int s : r.scores) {
            if (s < 1 || s > 5)
                throw DomainError("QUEST scores must be integers in 1..5, got " + std::to_string(s));
            sum += s;
        }
    }
    return static_cast<double>(sum) / static_cast<double>(8 * respondents.size());
}

double subject_reduction(const EmgTrace& without_suit, const EmgTrace& with_suit,
                         const FilterSpec& spec) {
    const CycleMeans base = cycle_mean(rectify(filter_trace(without_suit, spec)));
    const CycleMeans assisted = cycle_mean(rectify(filter_trace(with_suit, spec)));
    return percent_reduction(base.grand_mean, assisted.grand_mean);
}

}  // namespace exosuit
