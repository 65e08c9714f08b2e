#include "uagan/io/image.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <string>

#include "uagan/errors.hpp"
#include "uagan/io/checkpoint.hpp"
#include "uagan/io/run_config.hpp"

namespace uagan {

namespace {

std::vector<std::uint8_t> pgm(std::size_t w, std::size_t h, const std::vector<std::uint8_t>& px) {
    const std::string header = "P5\n" + std::to_string(w) + " " + std::to_string(h) + "\n255\n";
    std::vector<std::uint8_t> out(header.begin(), header.end());
    out.insert(out.end(), px.begin(), px.end());
    return out;
}

std::uint8_t quantize(double v) {
    if (std::isnan(v)) throw UsageError("cannot render NaN sample values");
    const double level = std::floor((std::clamp(v, -1.0, 1.0) + 1.0) / 2.0 * 255.0 + 0.5);
    return static_cast<std::uint8_t>(level);
}

}  // namespace

std::vector<std::uint8_t> render_grid(const SampleBatch& batch, const GridSpec& spec) {
    if (spec.rows == 0 || spec.cols == 0) throw UsageError("grid needs at least one row and column");
    if (spec.rows * spec.cols > batch.size()) {
        throw UsageError("grid of " + std::to_string(spec.rows * spec.cols) + " cells needs more than " +
                         std::to_string(batch.size()) + " samples");
    }
    const auto side = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(batch.dim()))));
    if (side == 0 || side * side != batch.dim()) {
        throw UsageError("sample length " + std::to_string(batch.dim()) + " is not a square");
    }
    const std::size_t w = spec.cols * side + (spec.cols - 1);
    const std::size_t h = spec.rows * side + (spec.rows - 1);
    std::vector<std::uint8_t> px(w * h, 0);
    for (std::size_t r = 0; r < spec.rows; ++r) {
        for (std::size_t c = 0; c < spec.cols; ++c) {
            const auto cell = batch.data.row(r * spec.cols + c);
            const std::size_t x0 = c * (side + 1);
            const std::size_t y0 = r * (side + 1);
            for (std::size_t y = 0; y < side; ++y) {
                for (std::size_t x = 0; x < side; ++x) px[(y0 + y) * w + x0 + x] = quantize(cell[y * side + x]);
            }
        }
    }
    return pgm(w, h, px);
}

std::vector<std::uint8_t> render_scatter(const SampleBatch& batch, const ScatterBounds& b, std::size_t side) {
    if (batch.size() > 0 && batch.dim() != 2) throw UsageError("scatter needs 2D samples");
    if (side == 0) throw UsageError("scatter side must be positive");
    if (!(b.x_max > b.x_min) || !(b.y_max > b.y_min) || !std::isfinite(b.x_max - b.x_min) ||
        !std::isfinite(b.y_max - b.y_min)) {
        throw UsageError("degenerate scatter bounds");
    }
    std::vector<std::uint64_t> counts(side * side, 0);
    const double s = static_cast<double>(side);
    for (std::size_t i = 0; i < batch.size(); ++i) {
        const double x = batch.data(i, 0);
        const double y = batch.data(i, 1);
        if (!(x >= b.x_min && x <= b.x_max && y >= b.y_min && y <= b.y_max)) continue;
        auto bx = static_cast<std::size_t>((x - b.x_min) / (b.x_max - b.x_min) * s);
        auto by = static_cast<std::size_t>((y - b.y_min) / (b.y_max - b.y_min) * s);
        bx = std::min(bx, side - 1);
        by = std::min(by, side - 1);
        ++counts[(side - 1 - by) * side + bx];
    }
    const std::uint64_t peak = *std::max_element(counts.begin(), counts.end());
    std::vector<std::uint8_t> px(side * side, 0);
    if (peak > 0) {
        const double denom = std::log1p(static_cast<double>(peak));
        for (std::size_t i = 0; i < px.size(); ++i) {
            if (counts[i] == 0) continue;
            const double level = std::floor(255.0 * std::log1p(static_cast<double>(counts[i])) / denom + 0.5);
            px[i] = static_cast<std::uint8_t>(std::max(1.0, level));
        }
    }
    return pgm(side, side, px);
}

GrayImage parse_pgm(const std::vector<std::uint8_t>& bytes) {
    std::size_t pos = 0;
    auto token = [&]() {
        while (pos < bytes.size() && std::isspace(bytes[pos])) ++pos;
        const std::size_t start = pos;
        while (pos < bytes.size() && !std::isspace(bytes[pos])) ++pos;
        return std::string(bytes.begin() + static_cast<std::ptrdiff_t>(start),
                           bytes.begin() + static_cast<std::ptrdiff_t>(pos));
    };
    if (token() != "P5") throw FormatError(FormatErrorCode::bad_magic, "not a binary PGM");
    GrayImage img;
    try {
        img.width = std::stoul(token());
        img.height = std::stoul(token());
        if (token() != "255") throw FormatError(FormatErrorCode::malformed, "maxval must be 255");
    } catch (const std::logic_error&) {
        throw FormatError(FormatErrorCode::malformed, "bad PGM header");
    }
    ++pos;
    if (bytes.size() - pos != img.width * img.height) throw FormatError(FormatErrorCode::truncated, "PGM size");
    img.pixels.assign(bytes.begin() + static_cast<std::ptrdiff_t>(pos), bytes.end());
    return img;
}

void write_samples(const SampleBatch& batch, const std::filesystem::path& path) {
    std::string out = "# samples " + std::to_string(batch.size()) + " " + std::to_string(batch.dim()) + "\n";
    for (std::size_t i = 0; i < batch.size(); ++i) {
        const auto row = batch.data.row(i);
        for (std::size_t j = 0; j < row.size(); ++j) {
            if (j) out += ',';
            out += format_real(row[j]);
        }
        out += '\n';
    }
    write_text(path, out);
}

SampleBatch read_samples(const std::filesystem::path& path) {
    const auto bytes = read_file(path);
    const std::string_view text(reinterpret_cast<const char*>(bytes.data()), bytes.size());
    const auto first_nl = text.find('\n');
    const std::string_view header = text.substr(0, first_nl);
    std::size_t rows = 0;
    std::size_t cols = 0;
    constexpr std::string_view prefix = "# samples ";
    if (header.substr(0, prefix.size()) != prefix) {
        throw FormatError(FormatErrorCode::bad_magic, "sample file must start with '# samples'");
    }
    {
        const std::string_view dims = header.substr(prefix.size());
        const auto sp = dims.find(' ');
        const auto a = std::from_chars(dims.data(), dims.data() + sp, rows);
        const auto b = std::from_chars(dims.data() + sp + 1, dims.data() + dims.size(), cols);
        if (sp == std::string_view::npos || a.ec != std::errc() || b.ec != std::errc()) {
            throw FormatError(FormatErrorCode::malformed, "bad sample header");
        }
    }
    SampleBatch batch{Matrix(rows, cols), Domain::generated};
    if (cols == kSpritePixels) batch.domain = Domain::sprites;
    std::size_t pos = first_nl == std::string_view::npos ? text.size() : first_nl + 1;
    for (std::size_t i = 0; i < rows; ++i) {
        if (pos >= text.size()) throw FormatError(FormatErrorCode::truncated, "fewer rows than declared");
        auto nl = text.find('\n', pos);
        if (nl == std::string_view::npos) nl = text.size();
        std::string_view line = text.substr(pos, nl - pos);
        pos = nl + 1;
        for (std::size_t j = 0; j < cols; ++j) {
            const auto comma = line.find(',');
            if ((comma == std::string_view::npos) != (j + 1 == cols)) {
                throw FormatError(FormatErrorCode::malformed, "row " + std::to_string(i + 1) + " has wrong width");
            }
            batch.data(i, j) = parse_real(line.substr(0, comma));
            if (comma != std::string_view::npos) line = line.substr(comma + 1);
        }
    }
    return batch;
}

}  // namespace uagan
