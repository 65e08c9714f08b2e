#pragma once

// Randomized cases shared by the round-trip tests and the acceptance run.

#include <bit>
#include <cmath>
#include <limits>
#include <string>

#include "uagan/io/checkpoint.hpp"
#include "uagan/io/metrics_csv.hpp"
#include "uagan/io/run_config.hpp"
#include "uagan/rng.hpp"
#include "uagan/unlikelihood.hpp"

namespace uagan::testing {

// Finite doubles spread over the whole exponent range, with the awkward
// corners (subnormals, signed zero) mixed in.
inline double any_finite(Rng& rng) {
    switch (rng.below(8)) {
        case 0: return 0.0;
        case 1: return -0.0;
        case 2: return std::numeric_limits<double>::denorm_min() * double(rng.below(1000) + 1);
        case 3: return rng.normal();
        default: {
            double v;
            do {
                v = std::bit_cast<double>(rng.next_u64());
            } while (!std::isfinite(v));
            return v;
        }
    }
}

inline double positive_real(Rng& rng) {
    double v;
    do {
        v = std::abs(any_finite(rng));
    } while (!(v > 0.0));
    return v;
}

inline bool same_bits(double a, double b) { return std::bit_cast<std::uint64_t>(a) == std::bit_cast<std::uint64_t>(b); }

inline Network random_network(Rng& rng, std::size_t in) {
    NetSpec spec;
    const std::size_t n_layers = 1 + rng.below(3);
    for (std::size_t l = 0; l < n_layers; ++l) {
        const std::size_t out = 1 + rng.below(6);
        spec.push_back({in, out, static_cast<Activation>(rng.below(4))});
        in = out;
    }
    Network net(spec);
    for (ParamTensor* p : net.parameters()) {
        for (double& v : p->values) v = any_finite(rng);
    }
    return net;
}

inline AdamState random_adam(Rng& rng, const Network& net) {
    AdamState s = make_adam_state(net, AdamHyper{positive_real(rng), rng.uniform01(), rng.uniform01(),
                                                 positive_real(rng)});
    s.t = rng.next_u64();
    for (auto& m : s.m) {
        for (double& v : m) v = any_finite(rng);
    }
    for (auto& m : s.v) {
        for (double& v : m) v = positive_real(rng);
    }
    return s;
}

inline std::vector<std::size_t> random_widths(Rng& rng) {
    std::vector<std::size_t> w(1 + rng.below(4));
    for (auto& x : w) x = 1 + rng.below(512);
    return w;
}

// Each returns an empty string on success, otherwise what went wrong.
inline std::string checkpoint_case(Rng& rng) {
    Checkpoint c;
    const std::size_t role = rng.below(3);
    const std::size_t dim = 1 + rng.below(5);
    if (role != 1) c.generator = random_network(rng, 1 + rng.below(5));
    if (role != 0) c.discriminator = random_network(rng, c.generator ? c.generator->out_dim() : dim);
    if (rng.below(2) == 1) {
        if (c.generator) c.adam_generator = random_adam(rng, *c.generator);
        if (c.discriminator) c.adam_discriminator = random_adam(rng, *c.discriminator);
    }
    c.seed = rng.next_u64();
    c.iteration = rng.next_u64();

    const auto bytes = serialize(c);
    const Checkpoint back = deserialize(bytes);
    if (serialize(back) != bytes) return "re-serialized bytes differ";
    if (back.role() != c.role() || back.seed != c.seed || back.iteration != c.iteration) return "header differs";
    for (const auto& [a_net, b_net] : {std::pair{&c.generator, &back.generator}, {&c.discriminator, &back.discriminator}}) {
        if (!*a_net) continue;
        if ((*a_net)->spec() != (*b_net)->spec()) return "architecture differs";
        const auto a = std::as_const(**a_net).parameters();
        const auto b = std::as_const(**b_net).parameters();
        for (std::size_t k = 0; k < a.size(); ++k) {
            for (std::size_t j = 0; j < a[k]->size(); ++j) {
                if (!same_bits(a[k]->values[j], b[k]->values[j])) return "parameter bits differ";
            }
        }
    }
    if (c.adam_generator && !(*back.adam_generator == *c.adam_generator)) return "generator optimizer differs";
    if (c.adam_discriminator && !(*back.adam_discriminator == *c.adam_discriminator)) {
        return "discriminator optimizer differs";
    }
    return {};
}

inline std::string config_case(Rng& rng) {
    TrainConfig t;
    t.dataset = rng.below(2) == 0 ? Domain::ring2d : Domain::sprites;
    t.latent_dim = 1 + rng.below(256);
    t.g_layers = random_widths(rng);
    t.d_layers = random_widths(rng);
    t.lr_g = positive_real(rng);
    t.lr_d = positive_real(rng);
    t.batch_size = 1 + rng.below(4096);
    t.iterations = rng.below(1'000'000);
    t.checkpoint_every = 1 + rng.below(10'000);
    t.seed = rng.next_u64();
    const std::string text = render_train_config(t);
    const TrainConfig t2 = parse_train_config(text);
    if (!(t2 == t) || !same_bits(t2.lr_g, t.lr_g) || !same_bits(t2.lr_d, t.lr_d)) return "train config differs";
    if (render_train_config(t2) != text) return "train config text differs";

    FinetuneConfig f;
    f.base_checkpoint = "runs/base_" + std::to_string(rng.next_u64()) + ".uagc";
    f.loss_variant = rng.below(2) == 0 ? InvertedVariant::amplifying : InvertedVariant::saturating;
    if (rng.below(2) == 1) f.lr_g = positive_real(rng);
    f.batch_size = 1 + rng.below(4096);
    f.iterations = 1 + rng.below(100'000);
    if (rng.below(2) == 1) {
        f.snapshot_schedule.stride = 1 + rng.below(5000);
    } else {
        f.snapshot_schedule.stride.reset();
        std::uint64_t it = 0;
        while (rng.below(4) != 0) {
            it += 1 + rng.below(f.iterations);
            if (it > f.iterations) break;
            f.snapshot_schedule.iterations.push_back(it);
        }
    }
    if (rng.below(2) == 1) f.grad_clip = positive_real(rng);
    f.seed = rng.next_u64();
    const std::string ftext = render_finetune_config(f);
    const FinetuneConfig f2 = parse_finetune_config(ftext);
    if (!(f2 == f)) return "fine-tune config differs";
    if (render_finetune_config(f2) != ftext) return "fine-tune config text differs";
    return {};
}

inline std::string metrics_case(Rng& rng) {
    std::vector<MetricsRecord> recs(rng.below(20));
    std::uint64_t it = rng.below(10);
    for (auto& r : recs) {
        r.iteration = it;
        it += 1 + rng.below(1000);
        r.g_loss = any_finite(rng);
        r.mean_fake_prob = rng.uniform01();
        r.grad_norm_g = rng.below(10) == 0 ? (rng.below(2) ? INFINITY : NAN) : std::abs(any_finite(rng));
        r.diversity = std::abs(any_finite(rng));
        r.phase = static_cast<Phase>(rng.below(4));
    }
    std::optional<PhaseReport> footer;
    if (rng.below(2) == 1) {
        footer = PhaseReport{};
        if (rng.below(2)) footer->divergence_onset = rng.below(5000);
        footer->median_early_grad_norm = positive_real(rng);
    }
    const std::string text = render_metrics_csv(recs, footer);
    const auto back = parse_metrics_csv(text);
    if (back.size() != recs.size()) return "record count differs";
    for (std::size_t k = 0; k < recs.size(); ++k) {
        const bool nan_ok = std::isnan(recs[k].grad_norm_g) && std::isnan(back[k].grad_norm_g);
        if (back[k].iteration != recs[k].iteration || !same_bits(back[k].g_loss, recs[k].g_loss) ||
            !same_bits(back[k].mean_fake_prob, recs[k].mean_fake_prob) ||
            !(nan_ok || same_bits(back[k].grad_norm_g, recs[k].grad_norm_g)) ||
            !same_bits(back[k].diversity, recs[k].diversity) || back[k].phase != recs[k].phase) {
            return "record " + std::to_string(k) + " differs";
        }
    }
    if (render_metrics_csv(back, footer) != text) return "csv text differs";
    return {};
}

}  // namespace uagan::testing
