#pragma once

// Line-oriented "key = value" run configuration. Blank lines and lines
// starting with '#' are ignored; unknown or repeated keys are rejected.
// Missing keys keep their defaults. Lists are comma separated.
//
// Training keys:   dataset latent_dim g_layers d_layers lr_g lr_d batch_size
//                  iterations checkpoint_every seed
// Fine-tune keys:  base_checkpoint loss_variant lr_g batch_size iterations
//                  snapshot_schedule grad_clip seed
//
// snapshot_schedule is "every N" or an explicit list "0, 150, 300";
// grad_clip and lr_g accept "off" / "base" respectively for their defaults.

#include <filesystem>
#include <string>
#include <string_view>

#include "uagan/gan_train.hpp"
#include "uagan/unlikelihood.hpp"

namespace uagan {

TrainConfig parse_train_config(std::string_view text);
std::string render_train_config(const TrainConfig& cfg);
TrainConfig load_train_config(const std::filesystem::path& path);

FinetuneConfig parse_finetune_config(std::string_view text);
std::string render_finetune_config(const FinetuneConfig& cfg);
FinetuneConfig load_finetune_config(const std::filesystem::path& path);

// Shortest-exact rendering: 17 significant digits, locale independent.
std::string format_real(double v);
// Throws FormatError(malformed) if the whole string is not one real.
double parse_real(std::string_view s);

}  // namespace uagan
