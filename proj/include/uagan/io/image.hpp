#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "uagan/datasets.hpp"

namespace uagan {

struct GridSpec {
    std::size_t rows = 8;
    std::size_t cols = 8;
};

// Binary PGM ("P5", maxval 255). Each sample is reshaped into a square cell,
// value v in [-1, 1] maps to floor((v + 1) / 2 * 255 + 0.5), and cells are
// tiled row-major with 1-pixel separators of value 0.
std::vector<std::uint8_t> render_grid(const SampleBatch& batch, const GridSpec& spec);

struct ScatterBounds {
    double x_min = -3.0;
    double x_max = 3.0;
    double y_min = -3.0;
    double y_max = 3.0;
};

// side x side histogram of 2D points (y grows upward), log-scaled so the
// busiest bin is 255: round(255 * log(1 + c) / log(1 + c_max)).
std::vector<std::uint8_t> render_scatter(const SampleBatch& batch, const ScatterBounds& bounds, std::size_t side);

// Parsed P5 image, for tests and tooling.
struct GrayImage {
    std::size_t width = 0;
    std::size_t height = 0;
    std::vector<std::uint8_t> pixels;
};
GrayImage parse_pgm(const std::vector<std::uint8_t>& bytes);

// Plain-text sample files: "# samples <rows> <cols>" then one comma-separated
// row per sample at 17 significant digits.
void write_samples(const SampleBatch& batch, const std::filesystem::path& path);
SampleBatch read_samples(const std::filesystem::path& path);

}  // namespace uagan
