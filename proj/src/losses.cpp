#include "uagan/losses.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "uagan/errors.hpp"

namespace uagan {

namespace {

void check_batch(std::span<const double> p, const char* what) {
    if (p.empty()) throw UsageError(std::string(what) + ": empty batch");
    for (double v : p) {
        if (std::isnan(v) || v < 0.0 || v > 1.0) {
            throw UsageError(std::string(what) + ": value outside [0, 1]");
        }
    }
}

double mean_log(std::span<const double> p) {
    double s = 0.0;
    for (double v : p) s += std::log(clamp_probability(v));
    return s / static_cast<double>(p.size());
}

double mean_log_complement(std::span<const double> p) {
    double s = 0.0;
    for (double v : p) s += std::log(1.0 - clamp_probability(v));
    return s / static_cast<double>(p.size());
}

}  // namespace

double clamp_probability(double p) noexcept { return std::clamp(p, kProbMin, kProbMax); }

double d_loss(std::span<const double> d_real, std::span<const double> d_fake) {
    check_batch(d_real, "d_loss");
    check_batch(d_fake, "d_loss");
    return -mean_log(d_real) - mean_log_complement(d_fake);
}

double g_loss_standard(std::span<const double> d_fake) {
    check_batch(d_fake, "g_loss_standard");
    return -mean_log(d_fake);
}

std::string_view to_string(InvertedVariant v) noexcept {
    return v == InvertedVariant::amplifying ? "amplifying" : "saturating";
}

InvertedVariant parse_variant(std::string_view name) {
    if (name == "amplifying") return InvertedVariant::amplifying;
    if (name == "saturating") return InvertedVariant::saturating;
    throw ConfigError("unknown loss variant '" + std::string(name) + "'");
}

double inverted_g_loss(std::span<const double> d_fake, InvertedVariant variant) {
    check_batch(d_fake, "inverted_g_loss");
    switch (variant) {
        case InvertedVariant::amplifying: return mean_log(d_fake);
        case InvertedVariant::saturating: return -mean_log_complement(d_fake);
    }
    throw ConfigError("unknown loss variant");
}

void d_loss_grad(std::span<const double> d_real, std::span<const double> d_fake, std::span<double> g_real,
                 std::span<double> g_fake) {
    check_batch(d_real, "d_loss_grad");
    check_batch(d_fake, "d_loss_grad");
    const double nr = static_cast<double>(d_real.size());
    const double nf = static_cast<double>(d_fake.size());
    for (std::size_t i = 0; i < d_real.size(); ++i) g_real[i] = -1.0 / (nr * clamp_probability(d_real[i]));
    for (std::size_t i = 0; i < d_fake.size(); ++i) {
        g_fake[i] = 1.0 / (nf * (1.0 - clamp_probability(d_fake[i])));
    }
}

std::vector<double> g_loss_standard_grad(std::span<const double> d_fake) {
    check_batch(d_fake, "g_loss_standard_grad");
    const double n = static_cast<double>(d_fake.size());
    std::vector<double> g(d_fake.size());
    for (std::size_t i = 0; i < g.size(); ++i) g[i] = -1.0 / (n * clamp_probability(d_fake[i]));
    return g;
}

std::vector<double> inverted_g_loss_grad(std::span<const double> d_fake, InvertedVariant variant) {
    check_batch(d_fake, "inverted_g_loss_grad");
    const double n = static_cast<double>(d_fake.size());
    std::vector<double> g(d_fake.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double p = clamp_probability(d_fake[i]);
        g[i] = variant == InvertedVariant::amplifying ? 1.0 / (n * p) : 1.0 / (n * (1.0 - p));
    }
    return g;
}

}  // namespace uagan
