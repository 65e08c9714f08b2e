#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "uagan/datasets.hpp"
#include "uagan/network.hpp"

namespace uagan {

enum class Phase : std::uint8_t { baseline, divergence, explosion, collapse };

std::string_view to_string(Phase p) noexcept;
// Throws FormatError(malformed) for unknown labels.
Phase parse_phase(std::string_view label);

struct MetricsRecord {
    std::uint64_t iteration = 0;
    double g_loss = 0.0;
    double mean_fake_prob = 0.0;
    double grad_norm_g = 0.0;
    double diversity = 0.0;
    Phase phase = Phase::baseline;
};

struct PhaseThresholds {
    double divergence_drop = 0.1;
    double explosion_factor = 10.0;
    std::size_t explosion_window = 50;
    double collapse_ratio = 0.1;
};

void validate(const PhaseThresholds& th);

struct PhaseReport {
    std::optional<std::uint64_t> divergence_onset;
    std::optional<std::uint64_t> explosion_onset;
    std::optional<std::uint64_t> collapse_onset;
    double initial_mean_fake_prob = 0.0;
    double initial_diversity = 0.0;
    double median_early_grad_norm = 0.0;

    bool operator==(const PhaseReport&) const = default;
};

// Mean Euclidean distance over all n(n-1)/2 pairs; throws UsageError for n < 2.
double diversity(const Matrix& samples);
inline double diversity(const SampleBatch& batch) { return diversity(batch.data); }

// L2 norm over every gradient entry of the network.
double grad_norm(const Network& net);

// Onsets are the first record meeting each threshold; see PhaseThresholds.
// Non-finite gradient norms count as exploded. Throws UsageError when the
// history is empty, lacks iteration 0, or is shorter than the window.
PhaseReport classify_phases(std::span<const MetricsRecord> history, const PhaseThresholds& th);

// Most severe onset at or before `iteration`.
Phase phase_at(const PhaseReport& report, std::uint64_t iteration) noexcept;

// classify_phases, then stamp each record's phase label.
PhaseReport label_phases(std::vector<MetricsRecord>& history, const PhaseThresholds& th);

// Flat "key = value" block; absent onsets print as "none".
std::string render_phase_report(const PhaseReport& report);

// Number of ring modes with at least `min_count` samples inside
// `radius_sigmas` * sigma of the mode center.
std::size_t mode_coverage(const Matrix& samples, const RingConfig& cfg, std::size_t min_count = 10,
                          double radius_sigmas = 3.0);

}  // namespace uagan
