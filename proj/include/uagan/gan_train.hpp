#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "uagan/adam.hpp"
#include "uagan/datasets.hpp"
#include "uagan/io/checkpoint.hpp"
#include "uagan/metrics.hpp"
#include "uagan/network.hpp"

namespace uagan {

// Fixed latent batch used for every diversity measurement.
inline constexpr std::uint64_t kProbeSeed = 0x5eed'0bad'cafe'f00dULL;
inline constexpr std::size_t kProbeCount = 256;

// One iteration is one discriminator step followed by one generator step,
// each on its own minibatch.
struct TrainConfig {
    Domain dataset = Domain::ring2d;
    std::size_t latent_dim = 16;
    std::vector<std::size_t> g_layers{128, 128};  // hidden widths
    std::vector<std::size_t> d_layers{128, 128};  // hidden widths
    double lr_g = 1e-3;
    double lr_d = 1e-3;
    std::size_t batch_size = 64;
    std::uint64_t iterations = 5000;
    std::uint64_t checkpoint_every = 1000;
    std::uint64_t seed = 7;

    bool operator==(const TrainConfig&) const = default;
};

// Defaults for a dataset: 16-d latent for the ring, 32-d for sprites.
TrainConfig default_train_config(Domain dataset);
void validate(const TrainConfig& cfg);

std::size_t data_dim(Domain dataset);
// G has tanh hidden layers and ends in linear (ring) or tanh (sprites).
// D has leaky ReLU hidden layers and ends in sigmoid.
NetSpec generator_spec(const TrainConfig& cfg);
NetSpec discriminator_spec(const TrainConfig& cfg);

struct GanPair {
    Network g;
    Network d;
    AdamState adam_g;
    AdamState adam_d;
    std::uint64_t iteration = 0;
    std::uint64_t seed = 0;
};

GanPair make_pair(const TrainConfig& cfg);
Checkpoint to_checkpoint(const GanPair& pair);

struct TrainResult {
    Checkpoint final_checkpoint;
    std::vector<Checkpoint> checkpoints;
    std::vector<MetricsRecord> metrics;
};

// Called after each iteration with the record just produced.
using TrainObserver = std::function<void(const MetricsRecord&)>;

// Fully deterministic given cfg. Throws NumericError naming the iteration if a
// loss turns NaN.
TrainResult train(const TrainConfig& cfg, const TrainObserver& observer = {});

// Draws n latents from `seed` and runs them through the checkpoint's generator.
SampleBatch sample_generator(const Checkpoint& ckpt, std::size_t n, std::uint64_t seed);
Matrix generate(const Network& g, const Matrix& latents);

// Mean sigmoid output of `d` on `x`.
double mean_probability(const Network& d, const Matrix& x);

}  // namespace uagan

#include <string>
#include <utility>

#include "uagan/gradcheck.hpp"

namespace uagan {

inline constexpr double kGradCheckTolerance = 1e-4;

// Finite-difference check of both networks of a freshly initialized pair:
// D on the discriminator loss over a real+fake batch, G on the standard and
// on the amplifying inverted loss, each back-propagated through D.
std::vector<std::pair<std::string, GradCheckResult>> gan_gradient_check(const TrainConfig& cfg, std::size_t n_probes,
                                                                        double h, std::uint64_t seed);

}  // namespace uagan
