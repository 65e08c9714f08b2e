#pragma once

#include <span>
#include <string_view>
#include <vector>

namespace uagan {

// Every probability fed to log is clamped into [kProbMin, kProbMax].
inline constexpr double kProbMin = 1e-7;
inline constexpr double kProbMax = 1.0 - 1e-7;

double clamp_probability(double p) noexcept;

// Discriminator binary cross-entropy: -mean(log D(x)) - mean(log(1 - D(G(z)))).
double d_loss(std::span<const double> d_real, std::span<const double> d_fake);
// Non-saturating generator loss: -mean(log D(G(z))).
double g_loss_standard(std::span<const double> d_fake);

enum class InvertedVariant {
    // minimize mean(log D(G(z))); gradient magnitude 1/D grows as D -> 0
    amplifying,
    // minimize -mean(log(1 - D(G(z)))); same target, bounded gradient
    saturating,
};

std::string_view to_string(InvertedVariant v) noexcept;
// Throws ConfigError for anything but "amplifying" / "saturating".
InvertedVariant parse_variant(std::string_view name);

double inverted_g_loss(std::span<const double> d_fake, InvertedVariant variant);

// Derivatives with respect to each probability. The clamp passes gradients
// straight through, evaluated at the clamped value.
void d_loss_grad(std::span<const double> d_real, std::span<const double> d_fake, std::span<double> g_real,
                 std::span<double> g_fake);
std::vector<double> g_loss_standard_grad(std::span<const double> d_fake);
std::vector<double> inverted_g_loss_grad(std::span<const double> d_fake, InvertedVariant variant);

}  // namespace uagan
