#pragma once

#include <cstddef>
#include <cstdint>
#include <utility>

#include "uagan/matrix.hpp"

namespace uagan {

enum class Domain { ring2d, sprites, generated };

const char* to_string(Domain d) noexcept;

struct SampleBatch {
    Matrix data;
    Domain domain = Domain::generated;

    [[nodiscard]] std::size_t size() const noexcept { return data.rows; }
    [[nodiscard]] std::size_t dim() const noexcept { return data.cols; }
};

struct RingConfig {
    std::size_t n_modes = 8;
    double radius = 2.0;
    double sigma = 0.05;
};

void validate(const RingConfig& cfg);
std::pair<double, double> ring_center(const RingConfig& cfg, std::size_t k);

// Points center_k + N(0, sigma^2 I) with k uniform over the modes.
SampleBatch ring2d_sample(const RingConfig& cfg, std::uint64_t seed, std::size_t n);

inline constexpr std::size_t kSpriteSide = 16;
inline constexpr std::size_t kSpritePixels = kSpriteSide * kSpriteSide;

// Face-like 16x16 sprite. Each parameter is drawn uniformly from its
// [min, max] range; equal bounds remove that jitter.
struct SpriteConfig {
    double head_radius_min = 5.0;
    double head_radius_max = 7.0;
    double eye_offset_min = 2.0;
    double eye_offset_max = 4.0;
    double mouth_curve_min = -2.0;
    double mouth_curve_max = 2.0;
    double noise_std = 0.02;
};

// Values in [-1, 1] (the [0, 1] render rescaled by 2v - 1).
SampleBatch sprites_sample(const SpriteConfig& cfg, std::uint64_t seed, std::size_t n);

// n i.i.d. standard-normal vectors of length dim.
SampleBatch latent_sample(std::size_t dim, std::uint64_t seed, std::size_t n);

}  // namespace uagan
