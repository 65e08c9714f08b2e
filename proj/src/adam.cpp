#include "uagan/adam.hpp"

#include <cmath>
#include <string>

#include "uagan/errors.hpp"
#include "uagan/simd/kernels.hpp"

namespace uagan {

AdamState make_adam_state(const Network& net, AdamHyper hyper) {
    AdamState s;
    s.hyper = hyper;
    for (const auto* p : net.parameters()) {
        s.m.emplace_back(p->size(), 0.0);
        s.v.emplace_back(p->size(), 0.0);
    }
    return s;
}

void adam_step(std::span<ParamTensor* const> params, AdamState& state) {
    if (state.m.size() != params.size() || state.v.size() != params.size()) {
        throw ConfigError("optimizer state has " + std::to_string(state.m.size()) + " tensors, expected " +
                          std::to_string(params.size()));
    }
    for (std::size_t k = 0; k < params.size(); ++k) {
        const ParamTensor& p = *params[k];
        if (p.grad.size() != p.values.size() || state.m[k].size() != p.size() || state.v[k].size() != p.size()) {
            throw ConfigError("optimizer state shape mismatch for '" + p.name + "'");
        }
        for (double g : p.grad) {
            if (std::isnan(g)) throw NumericError("NaN gradient in '" + p.name + "'");
        }
    }

    state.t += 1;
    const auto t = static_cast<double>(state.t);
    const simd::AdamCoeffs c{
        state.hyper.lr,
        state.hyper.beta1,
        state.hyper.beta2,
        state.hyper.eps,
        1.0 - std::pow(state.hyper.beta1, t),
        1.0 - std::pow(state.hyper.beta2, t),
    };
    const auto& kernels = simd::active();
    for (std::size_t k = 0; k < params.size(); ++k) {
        ParamTensor& p = *params[k];
        kernels.adam_update(p.values.data(), p.grad.data(), state.m[k].data(), state.v[k].data(), p.size(), c);
    }
}

void adam_step(Network& net, AdamState& state) {
    if (net.frozen) throw InvariantViolation("optimizer step on a frozen network");
    const auto params = net.parameters();
    adam_step(std::span<ParamTensor* const>(params), state);
}

}  // namespace uagan
