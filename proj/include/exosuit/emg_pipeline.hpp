#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <vector>

// Offline surface-EMG evaluation: band-pass filter, rectify, average per
// movement cycle, and compare muscle activity with and without the suit.

namespace exosuit {

enum class EmgCondition { WithExosuit, WithoutExosuit };

struct CycleMark {
    std::size_t start = 0;  // first sample of the cycle
    std::size_t end = 0;    // one past the last sample
};

struct EmgTrace {
    double fs = 2000.0;           // [Hz]
    std::vector<double> samples;  // [mV]
    EmgCondition condition = EmgCondition::WithoutExosuit;
    std::vector<CycleMark> cycle_marks;
};

struct FilterSpec {
    int order = 4;           // band-pass order (pole count); must be even
    double low_cut = 10.0;   // [Hz]
    double high_cut = 400.0; // [Hz]
    bool zero_phase = false; // forward-backward pass; doubles the effective order
};

struct Biquad {
    double b0 = 1.0, b1 = 0.0, b2 = 0.0;  // numerator
    double a1 = 0.0, a2 = 0.0;            // denominator, a0 = 1
};

/// Digital Butterworth band-pass as cascaded second-order sections. The
/// overall gain is folded into the first section.
struct BandpassFilter {
    std::vector<Biquad> sections;
    std::vector<std::complex<double>> poles;  // digital poles, for inspection
    double fs = 0.0;

    /// Frequency response at f [Hz]; direct evaluation of the section
    /// polynomials, independent of the time-domain filtering path.
    std::complex<double> response_at(double f) const;

    /// Single causal pass over x with zero initial state.
    std::vector<double> apply(const std::vector<double>& x) const;
};

void validate(const EmgTrace& trace);
void validate(const FilterSpec& spec, double fs);

/// Analog Butterworth prototype, band-pass transformation with prewarped
/// edges, bilinear transform. -3 dB at low_cut and high_cut by construction.
BandpassFilter design_bandpass(const FilterSpec& spec, double fs);

/// Band-pass the trace (causal single pass, or forward-backward when
/// spec.zero_phase). Output length equals input length.
EmgTrace filter_trace(const EmgTrace& trace, const FilterSpec& spec);

/// Elementwise absolute value.
EmgTrace rectify(const EmgTrace& trace);

struct CycleMeans {
    std::vector<double> per_cycle;  // [mV]
    double grand_mean = 0.0;        // mean of the per-cycle means [mV]
};

/// Mean amplitude inside each marked cycle. The trace is expected to be
/// filtered and rectified already.
CycleMeans cycle_mean(const EmgTrace& trace);

/// 100 * (without - with) / without.
double percent_reduction(double mean_without, double mean_with);

/// Arithmetic mean of per-subject reductions [%].
double average_reduction(const std::vector<double>& per_subject);

/// One QUEST respondent: eight satisfaction dimensions scored 1-5.
struct QuestScores {
    std::array<int, 8> scores{};  // dimensions, weight, adjustments, safety,
                                  // durability, simplicity, comfort, effectiveness
};

inline constexpr std::array<const char*, 8> kQuestDimensions = {
    "dimensions", "weight",     "adjustments", "safety",
    "durability", "simplicity", "comfort",     "effectiveness"};

/// Mean over all dimensions and respondents, in [1, 5].
double quest_total(const std::vector<QuestScores>& respondents);

/// Full per-subject pipeline: filter, rectify, per-cycle means for both
/// conditions, then the percent reduction of the grand means.
double subject_reduction(const EmgTrace& without_suit, const EmgTrace& with_suit,
                         const FilterSpec& spec);

}  // namespace exosuit
