#pragma once

// UAGC checkpoint format, version 1. All integers and reals little-endian.
//
//   "UAGC"                      4 bytes magic
//   version                     u32 (= 1)
//   role                        u8  (0 generator, 1 discriminator, 2 pair)
//   per network (G before D):   u32 layer count, then per layer
//                               u32 in, u32 out, u8 activation code
//   seed                        u64
//   iteration                   u64
//   optimizer-state flag        u8  (0 or 1)
//   parameters, per network:    per layer W (out x in, row-major) then b, f64
//   if flag, per network:       u64 step, f64 lr, beta1, beta2, eps,
//                               then m and v in parameter order
//   checksum                    u32 CRC-32 of every preceding byte

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "uagan/adam.hpp"
#include "uagan/network.hpp"

namespace uagan {

inline constexpr std::uint32_t kCheckpointVersion = 1;

enum class Role : std::uint8_t { generator = 0, discriminator = 1, pair = 2 };

struct Checkpoint {
    std::optional<Network> generator;
    std::optional<Network> discriminator;
    std::optional<AdamState> adam_generator;
    std::optional<AdamState> adam_discriminator;
    std::uint64_t seed = 0;
    std::uint64_t iteration = 0;

    // Throws ConfigError if neither network is present.
    [[nodiscard]] Role role() const;
};

std::vector<std::uint8_t> serialize(const Checkpoint& ckpt);
// Errors: FormatError with bad_magic, version_mismatch, truncated,
// checksum_mismatch or malformed.
Checkpoint deserialize(std::span<const std::uint8_t> bytes);

void save_checkpoint(const Checkpoint& ckpt, const std::filesystem::path& path);
Checkpoint load_checkpoint(const std::filesystem::path& path);

// Parameter bytes of a single network in checkpoint layout (no optimizer state).
std::vector<std::uint8_t> network_bytes(const Network& net);

std::string sha256_hex(std::span<const std::uint8_t> bytes);
std::string sha256_hex(std::string_view text);

std::vector<std::uint8_t> read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);
void write_text(const std::filesystem::path& path, std::string_view text);

}  // namespace uagan
