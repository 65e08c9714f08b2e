#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "uagan/metrics.hpp"

namespace uagan {

inline constexpr std::string_view kMetricsHeader = "iteration,g_loss,mean_fake_prob,grad_norm_g,diversity,phase";

// Header, one row per record (reals at 17 significant digits), then an
// optional footer of '#'-prefixed phase-report lines. Throws UsageError if
// iterations are not strictly increasing.
std::string render_metrics_csv(std::span<const MetricsRecord> records,
                               const std::optional<PhaseReport>& footer = std::nullopt);
void write_metrics_csv(std::span<const MetricsRecord> records, const std::filesystem::path& path,
                       const std::optional<PhaseReport>& footer = std::nullopt);

// Errors are FormatError(malformed) naming the offending line.
std::vector<MetricsRecord> parse_metrics_csv(std::string_view text);
std::vector<MetricsRecord> read_metrics_csv(const std::filesystem::path& path);

}  // namespace uagan
