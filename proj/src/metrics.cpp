#include "uagan/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "uagan/errors.hpp"
#include "uagan/simd/kernels.hpp"

namespace uagan {

std::string_view to_string(Phase p) noexcept {
    switch (p) {
        case Phase::baseline: return "baseline";
        case Phase::divergence: return "divergence";
        case Phase::explosion: return "explosion";
        case Phase::collapse: return "collapse";
    }
    return "unknown";
}

Phase parse_phase(std::string_view label) {
    for (Phase p : {Phase::baseline, Phase::divergence, Phase::explosion, Phase::collapse}) {
        if (label == to_string(p)) return p;
    }
    throw FormatError(FormatErrorCode::malformed, "unknown phase label '" + std::string(label) + "'");
}

void validate(const PhaseThresholds& th) {
    if (!(th.divergence_drop > 0.0) || !(th.explosion_factor > 0.0) || th.explosion_window == 0 ||
        !(th.collapse_ratio > 0.0)) {
        throw ConfigError("phase thresholds must be positive");
    }
    if (!(th.collapse_ratio < 1.0)) throw ConfigError("collapse_ratio must be below 1");
}

double diversity(const Matrix& samples) {
    const std::size_t n = samples.rows;
    if (n < 2) throw UsageError("diversity needs at least 2 samples");
    const auto& k = simd::active();
    const std::size_t d = samples.cols;
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double* a = samples.data.data() + i * d;
        double row_sum = 0.0;
        for (std::size_t j = i + 1; j < n; ++j) {
            row_sum += std::sqrt(k.squared_distance(a, samples.data.data() + j * d, d));
        }
        total += row_sum;
    }
    const double pairs = static_cast<double>(n) * static_cast<double>(n - 1) / 2.0;
    return total / pairs;
}

double grad_norm(const Network& net) {
    const auto& k = simd::active();
    double sq = 0.0;
    for (const auto* p : net.parameters()) sq += k.dot(p->grad.data(), p->grad.data(), p->size());
    return std::sqrt(sq);
}

namespace {

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t m = v.size() / 2;
    return v.size() % 2 == 1 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

}  // namespace

PhaseReport classify_phases(std::span<const MetricsRecord> history, const PhaseThresholds& th) {
    validate(th);
    if (history.empty()) throw UsageError("classify_phases: empty history");
    if (history.front().iteration != 0) throw UsageError("classify_phases: history must start at iteration 0");
    if (th.explosion_window > history.size()) {
        throw UsageError("classify_phases: explosion window " + std::to_string(th.explosion_window) +
                         " exceeds history length " + std::to_string(history.size()));
    }

    PhaseReport r;
    r.initial_mean_fake_prob = history.front().mean_fake_prob;
    r.initial_diversity = history.front().diversity;
    std::vector<double> early;
    for (std::size_t i = 0; i < th.explosion_window; ++i) early.push_back(history[i].grad_norm_g);
    r.median_early_grad_norm = median(std::move(early));

    const double divergence_level = r.initial_mean_fake_prob - th.divergence_drop;
    const double explosion_level = th.explosion_factor * r.median_early_grad_norm;
    const double collapse_level = th.collapse_ratio * r.initial_diversity;
    for (const auto& rec : history) {
        if (!r.divergence_onset && rec.mean_fake_prob <= divergence_level) r.divergence_onset = rec.iteration;
        if (!r.explosion_onset && (!std::isfinite(rec.grad_norm_g) || rec.grad_norm_g >= explosion_level)) {
            r.explosion_onset = rec.iteration;
        }
        if (!r.collapse_onset && rec.diversity <= collapse_level) r.collapse_onset = rec.iteration;
    }
    return r;
}

Phase phase_at(const PhaseReport& report, std::uint64_t iteration) noexcept {
    auto passed = [&](const std::optional<std::uint64_t>& onset) { return onset && *onset <= iteration; };
    if (passed(report.collapse_onset)) return Phase::collapse;
    if (passed(report.explosion_onset)) return Phase::explosion;
    if (passed(report.divergence_onset)) return Phase::divergence;
    return Phase::baseline;
}

PhaseReport label_phases(std::vector<MetricsRecord>& history, const PhaseThresholds& th) {
    PhaseReport report = classify_phases(history, th);
    for (auto& rec : history) rec.phase = phase_at(report, rec.iteration);
    return report;
}

std::string render_phase_report(const PhaseReport& report) {
    auto onset = [](const std::optional<std::uint64_t>& o) { return o ? std::to_string(*o) : std::string("none"); };
    std::ostringstream out;
    out.precision(17);
    out << "divergence_onset = " << onset(report.divergence_onset) << '\n'
        << "explosion_onset = " << onset(report.explosion_onset) << '\n'
        << "collapse_onset = " << onset(report.collapse_onset) << '\n'
        << "initial_mean_fake_prob = " << report.initial_mean_fake_prob << '\n'
        << "initial_diversity = " << report.initial_diversity << '\n'
        << "median_early_grad_norm = " << report.median_early_grad_norm << '\n';
    return out.str();
}

std::size_t mode_coverage(const Matrix& samples, const RingConfig& cfg, std::size_t min_count,
                          double radius_sigmas) {
    validate(cfg);
    if (samples.cols != 2) throw UsageError("mode_coverage expects 2D samples");
    const double r2 = (radius_sigmas * cfg.sigma) * (radius_sigmas * cfg.sigma);
    std::vector<std::size_t> counts(cfg.n_modes, 0);
    for (std::size_t i = 0; i < samples.rows; ++i) {
        for (std::size_t k = 0; k < cfg.n_modes; ++k) {
            const auto [cx, cy] = ring_center(cfg, k);
            const double dx = samples(i, 0) - cx;
            const double dy = samples(i, 1) - cy;
            if (dx * dx + dy * dy <= r2) ++counts[k];
        }
    }
    return static_cast<std::size_t>(
        std::count_if(counts.begin(), counts.end(), [&](std::size_t c) { return c >= min_count; }));
}

}  // namespace uagan
