#pragma once

#include <cstdint>
#include <functional>

#include "uagan/network.hpp"

namespace uagan {

// Evaluates the loss at the network's current parameters and leaves the
// analytic gradient in every ParamTensor::grad.
using LossAndGrad = std::function<double(Network&)>;

struct GradCheckResult {
    double max_relative_error = 0.0;
    std::size_t probes = 0;
};

// Compares analytic gradients against central differences
// (L(theta + h) - L(theta - h)) / 2h at `n_probes` parameters drawn uniformly
// over all scalars of `net`. Relative error is |a - f| / max(|a|, |f|, 1e-12).
// Parameters are restored exactly afterwards.
GradCheckResult gradient_check(Network& net, const LossAndGrad& loss_fn, std::size_t n_probes, double h,
                               std::uint64_t seed);

}  // namespace uagan
