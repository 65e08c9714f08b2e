#include "uagan/datasets.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "uagan/errors.hpp"
#include "uagan/rng.hpp"

namespace uagan {

const char* to_string(Domain d) noexcept {
    switch (d) {
        case Domain::ring2d: return "ring2d";
        case Domain::sprites: return "sprites";
        case Domain::generated: return "generated";
    }
    return "unknown";
}

void validate(const RingConfig& cfg) {
    if (cfg.n_modes < 2) throw ConfigError("ring needs at least 2 modes");
    if (!(cfg.sigma > 0.0)) throw ConfigError("ring sigma must be positive");
}

std::pair<double, double> ring_center(const RingConfig& cfg, std::size_t k) {
    const double angle = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(cfg.n_modes);
    return {cfg.radius * std::cos(angle), cfg.radius * std::sin(angle)};
}

SampleBatch ring2d_sample(const RingConfig& cfg, std::uint64_t seed, std::size_t n) {
    validate(cfg);
    if (n == 0) throw UsageError("ring2d_sample: n must be at least 1");
    Rng rng(seed);
    SampleBatch batch{Matrix(n, 2), Domain::ring2d};
    for (std::size_t i = 0; i < n; ++i) {
        const auto [cx, cy] = ring_center(cfg, rng.below(cfg.n_modes));
        batch.data(i, 0) = cx + cfg.sigma * rng.normal();
        batch.data(i, 1) = cy + cfg.sigma * rng.normal();
    }
    return batch;
}

namespace {

constexpr double kBackground = 0.1;
constexpr double kHead = 0.9;
constexpr double kFeature = 0.1;
constexpr double kCenter = 7.5;
constexpr int kEyeRow = 5;
constexpr int kMouthRow = 11;

void render_sprite(std::span<double> px, double head_radius, double eye_offset, double mouth_curve) {
    constexpr int side = static_cast<int>(kSpriteSide);
    auto at = [&](int x, int y) -> double& { return px[static_cast<std::size_t>(y * side + x)]; };
    for (int y = 0; y < side; ++y) {
        for (int x = 0; x < side; ++x) {
            const double dx = x - kCenter;
            const double dy = y - kCenter;
            at(x, y) = dx * dx + dy * dy <= head_radius * head_radius ? kHead : kBackground;
        }
    }
    const int left = static_cast<int>(std::floor(kCenter - eye_offset));
    at(left, kEyeRow) = kFeature;
    at(side - 1 - left, kEyeRow) = kFeature;
    // Five mouth pixels around the center; the ends lift by the curvature
    // (positive curves up into a smile).
    for (int d = -2; d <= 2; ++d) {
        const int lift = static_cast<int>(std::lround(mouth_curve * d * d / 4.0));
        const int y = std::clamp(kMouthRow - lift, 0, side - 1);
        at(7 + d, y) = kFeature;
    }
}

}  // namespace

SampleBatch sprites_sample(const SpriteConfig& cfg, std::uint64_t seed, std::size_t n) {
    if (n == 0) throw UsageError("sprites_sample: n must be at least 1");
    if (cfg.head_radius_min > cfg.head_radius_max || cfg.eye_offset_min > cfg.eye_offset_max ||
        cfg.mouth_curve_min > cfg.mouth_curve_max || cfg.noise_std < 0.0) {
        throw ConfigError("sprite jitter ranges must satisfy min <= max and noise >= 0");
    }
    Rng rng(seed);
    SampleBatch batch{Matrix(n, kSpritePixels), Domain::sprites};
    for (std::size_t i = 0; i < n; ++i) {
        auto px = batch.data.row(i);
        const double head = rng.uniform(cfg.head_radius_min, cfg.head_radius_max);
        const double eyes = rng.uniform(cfg.eye_offset_min, cfg.eye_offset_max);
        const double mouth = rng.uniform(cfg.mouth_curve_min, cfg.mouth_curve_max);
        render_sprite(px, head, eyes, mouth);
        for (double& v : px) {
            if (cfg.noise_std > 0.0) v += cfg.noise_std * rng.normal();
            v = 2.0 * std::clamp(v, 0.0, 1.0) - 1.0;
        }
    }
    return batch;
}

SampleBatch latent_sample(std::size_t dim, std::uint64_t seed, std::size_t n) {
    if (dim == 0) throw UsageError("latent_sample: dim must be at least 1");
    Rng rng(seed);
    SampleBatch batch{Matrix(n, dim), Domain::generated};
    for (double& v : batch.data.data) v = rng.normal();
    return batch;
}

}  // namespace uagan
