#include "uagan/gradcheck.hpp"

#include <algorithm>
#include <cmath>

#include "uagan/errors.hpp"
#include "uagan/rng.hpp"

namespace uagan {

namespace {

double finite_loss(Network& net, const LossAndGrad& loss_fn) {
    const double l = loss_fn(net);
    if (!std::isfinite(l)) throw NumericError("gradient check: loss is not finite");
    return l;
}

}  // namespace

GradCheckResult gradient_check(Network& net, const LossAndGrad& loss_fn, std::size_t n_probes, double h,
                               std::uint64_t seed) {
    if (n_probes == 0) throw UsageError("gradient check needs at least one probe");
    if (!(h > 0.0)) throw UsageError("gradient check step must be positive");

    finite_loss(net, loss_fn);
    auto params = net.parameters();
    std::vector<std::vector<double>> analytic;
    for (const auto* p : params) analytic.push_back(p->grad);

    const std::size_t total = net.parameter_count();
    Rng rng(seed);
    GradCheckResult result;
    for (std::size_t probe = 0; probe < n_probes; ++probe) {
        std::size_t flat = rng.below(total);
        std::size_t t = 0;
        while (flat >= params[t]->size()) flat -= params[t++]->size();

        double& theta = params[t]->values[flat];
        const double saved = theta;
        theta = saved + h;
        const double plus = finite_loss(net, loss_fn);
        theta = saved - h;
        const double minus = finite_loss(net, loss_fn);
        theta = saved;

        const double numeric = (plus - minus) / (2.0 * h);
        const double a = analytic[t][flat];
        const double denom = std::max({std::abs(a), std::abs(numeric), 1e-12});
        result.max_relative_error = std::max(result.max_relative_error, std::abs(a - numeric) / denom);
        ++result.probes;
    }
    // Leave the analytic gradient in place as the caller saw it.
    for (std::size_t t = 0; t < params.size(); ++t) params[t]->grad = analytic[t];
    return result;
}

}  // namespace uagan
