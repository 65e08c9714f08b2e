#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "uagan/network.hpp"

namespace uagan {

struct AdamHyper {
    double lr = 2e-4;
    double beta1 = 0.5;
    double beta2 = 0.999;
    double eps = 1e-8;

    bool operator==(const AdamHyper&) const = default;
};

// First and second moments per parameter tensor, in Network::parameters() order.
struct AdamState {
    AdamHyper hyper;
    std::uint64_t t = 0;
    std::vector<std::vector<double>> m;
    std::vector<std::vector<double>> v;

    bool operator==(const AdamState&) const = default;
};

AdamState make_adam_state(const Network& net, AdamHyper hyper = {});

// One bias-corrected Adam step over `params`, reading each tensor's grad.
// Throws NumericError (before touching anything) if any gradient is NaN,
// ConfigError if the state does not match the parameter shapes.
void adam_step(std::span<ParamTensor* const> params, AdamState& state);

// As above; throws InvariantViolation if the network is frozen.
void adam_step(Network& net, AdamState& state);

}  // namespace uagan
