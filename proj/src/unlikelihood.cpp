#include "uagan/unlikelihood.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <iomanip>
#include <numeric>
#include <sstream>

#include "uagan/errors.hpp"
#include "uagan/io/run_config.hpp"
#include "uagan/rng.hpp"

namespace uagan {

namespace {

constexpr std::uint64_t kFinetuneStream = 17;

Matrix column(std::span<const double> v) {
    Matrix m(v.size(), 1);
    std::copy(v.begin(), v.end(), m.data.begin());
    return m;
}

bool all_finite(const Network& net) {
    for (const auto* p : net.parameters()) {
        for (double v : p->values) {
            if (!std::isfinite(v)) return false;
        }
    }
    return true;
}

}  // namespace

void validate(const FinetuneConfig& cfg) {
    if (cfg.iterations == 0) throw ConfigError("iterations must be at least 1");
    if (cfg.batch_size == 0) throw ConfigError("batch_size must be at least 1");
    if (cfg.lr_g && !(*cfg.lr_g >= 0.0)) throw ConfigError("lr_g must be non-negative");
    if (cfg.grad_clip && !(*cfg.grad_clip > 0.0)) throw ConfigError("grad_clip must be positive");
    resolve_schedule(cfg.snapshot_schedule, cfg.iterations);
}

std::vector<std::uint64_t> resolve_schedule(const SnapshotSchedule& s, std::uint64_t iterations) {
    std::vector<std::uint64_t> out;
    if (s.stride) {
        if (*s.stride == 0) throw ConfigError("snapshot stride must be positive");
        for (std::uint64_t k = 0; k <= iterations; k += *s.stride) out.push_back(k);
    } else {
        for (std::size_t i = 0; i < s.iterations.size(); ++i) {
            if (i > 0 && s.iterations[i] <= s.iterations[i - 1]) {
                throw ConfigError("snapshot list must be strictly ascending");
            }
            if (s.iterations[i] > iterations) {
                throw ConfigError("snapshot " + std::to_string(s.iterations[i]) + " is past the last iteration");
            }
        }
        out = s.iterations;
        if (out.empty() || out.front() != 0) out.insert(out.begin(), 0);
    }
    if (out.back() != iterations) out.push_back(iterations);
    return out;
}

FinetuneState::FinetuneState(const Checkpoint& base, const FinetuneConfig& cfg) : cfg_(cfg) {
    if (!base.generator || !base.discriminator) {
        throw ConfigError("fine-tuning needs a checkpoint holding both generator and discriminator");
    }
    g_ = *base.generator;
    d_ = *base.discriminator;
    g_.frozen = false;
    d_.frozen = true;
    if (d_.out_dim() != 1 || d_.layers.back().activation != Activation::sigmoid) {
        throw ConfigError("discriminator must end in a single sigmoid unit");
    }
    if (g_.out_dim() != d_.in_dim()) throw ConfigError("generator output does not match discriminator input");
    AdamHyper hyper;
    if (base.adam_generator) hyper = base.adam_generator->hyper;
    if (cfg.lr_g) hyper.lr = *cfg.lr_g;
    adam_g_ = make_adam_state(g_, hyper);
    adam_d_ = base.adam_discriminator;
    d_reference_ = network_bytes(d_);
    probe_ = latent_sample(g_.in_dim(), kProbeSeed, kProbeCount).data;
    seed_ = cfg.seed;
}

Checkpoint FinetuneState::checkpoint() const {
    Checkpoint c;
    c.generator = g_;
    c.generator->frozen = false;
    c.discriminator = d_;
    c.discriminator->frozen = false;
    c.adam_generator = adam_g_;
    c.adam_discriminator = adam_d_;
    if (!c.adam_discriminator) c.adam_discriminator = make_adam_state(d_, AdamHyper{});
    c.seed = seed_;
    c.iteration = iteration_;
    return c;
}

MetricsRecord FinetuneState::measure(const Matrix& latents, bool update) {
    if (latents.cols != g_.in_dim()) {
        throw ConfigError("latents have " + std::to_string(latents.cols) + " columns, generator expects " +
                          std::to_string(g_.in_dim()));
    }
    MetricsRecord rec;
    rec.iteration = iteration_;

    Tape g_tape;
    Tape d_tape;
    const Matrix x = forward(g_, latents, &g_tape);
    const Matrix p = forward(d_, x, &d_tape);
    rec.g_loss = inverted_g_loss(p.data, cfg_.loss_variant);
    rec.mean_fake_prob = std::accumulate(p.data.begin(), p.data.end(), 0.0) / static_cast<double>(p.rows);
    const Matrix dx = input_gradient(d_, d_tape, column(inverted_g_loss_grad(p.data, cfg_.loss_variant)));
    backward(g_, g_tape, dx);
    rec.grad_norm_g = grad_norm(g_);
    rec.diversity = diversity(forward(g_, probe_));

    if (!update) return rec;

    // Exploding gradients are recorded, not fatal; a non-finite gradient
    // simply skips this update.
    bool finite = std::isfinite(rec.grad_norm_g);
    if (finite && cfg_.grad_clip && rec.grad_norm_g > *cfg_.grad_clip) {
        const double scale = *cfg_.grad_clip / rec.grad_norm_g;
        for (auto* t : g_.parameters()) {
            for (double& v : t->grad) v *= scale;
        }
    }
    if (finite) adam_step(g_, adam_g_);
    if (!all_finite(g_)) {
        throw NumericError("generator parameters became non-finite at iteration " + std::to_string(iteration_));
    }
    const auto d_now = network_bytes(d_);
    if (d_now != d_reference_) {
        throw InvariantViolation("discriminator parameters changed at iteration " + std::to_string(iteration_));
    }
    ++iteration_;
    return rec;
}

MetricsRecord FinetuneState::step(const Matrix& latents) { return measure(latents, true); }
MetricsRecord FinetuneState::evaluate(const Matrix& latents) { return measure(latents, false); }

MetricsRecord finetune_step(FinetuneState& state, const Matrix& latents) { return state.step(latents); }

Matrix finetune_latents(const FinetuneConfig& cfg, std::size_t latent_dim, std::uint64_t iteration) {
    return latent_sample(latent_dim, mix_seed(mix_seed(cfg.seed, kFinetuneStream), iteration), cfg.batch_size).data;
}

FinetuneResult finetune_run(const Checkpoint& base, const FinetuneConfig& cfg, const PhaseThresholds& thresholds) {
    validate(cfg);
    const auto schedule = resolve_schedule(cfg.snapshot_schedule, cfg.iterations);
    FinetuneState state(base, cfg);
    const std::size_t latent_dim = state.generator().in_dim();

    FinetuneResult result;
    result.d_hash_before = sha256_hex(network_bytes(state.discriminator()));
    result.snapshots.base_hash = sha256_hex(serialize(base));
    // The base enters through its content hash, so the run id does not depend on where it is stored.
    FinetuneConfig identity = cfg;
    identity.base_checkpoint.clear();
    result.snapshots.config_hash = sha256_hex(render_finetune_config(identity));
    result.snapshots.run_id = sha256_hex(result.snapshots.base_hash + result.snapshots.config_hash).substr(0, 16);

    auto next_snapshot = schedule.begin();
    for (std::uint64_t k = 0; k <= cfg.iterations; ++k) {
        if (next_snapshot != schedule.end() && *next_snapshot == k) {
            Snapshot snap;
            snap.iteration = k;
            snap.checkpoint = state.checkpoint();
            snap.preview = sample_generator(snap.checkpoint, kPreviewCount, kPreviewSeed);
            result.snapshots.snapshots.push_back(std::move(snap));
            ++next_snapshot;
        }
        const Matrix z = finetune_latents(cfg, latent_dim, k);
        result.metrics.push_back(k < cfg.iterations ? finetune_step(state, z) : state.evaluate(z));
    }

    result.d_hash_after = sha256_hex(network_bytes(state.discriminator()));
    if (result.d_hash_after != result.d_hash_before) {
        throw InvariantViolation("discriminator hash changed over the run");
    }
    PhaseThresholds th = thresholds;
    th.explosion_window = std::min<std::size_t>(th.explosion_window, result.metrics.size());
    result.phases = label_phases(result.metrics, th);
    return result;
}

FinetuneResult finetune_run(const FinetuneConfig& cfg, const PhaseThresholds& thresholds) {
    if (cfg.base_checkpoint.empty()) throw UsageError("fine-tuning needs a base checkpoint path");
    return finetune_run(load_checkpoint(cfg.base_checkpoint), cfg, thresholds);
}

CompareReport compare_runs(const std::vector<NamedBase>& bases, const FinetuneConfig& cfg,
                           const PhaseThresholds& thresholds) {
    if (bases.empty()) throw UsageError("compare needs base checkpoints");
    if (bases.size() < 2) throw UsageError("compare needs at least two base checkpoints");
    for (const auto& b : bases) {
        if (!b.checkpoint.generator || !b.checkpoint.discriminator) {
            throw ConfigError("base '" + b.label + "' does not hold a generator/discriminator pair");
        }
    }
    const NetSpec g_spec = bases.front().checkpoint.generator->spec();
    const NetSpec d_spec = bases.front().checkpoint.discriminator->spec();
    for (const auto& b : bases) {
        if (b.checkpoint.generator->spec() != g_spec || b.checkpoint.discriminator->spec() != d_spec) {
            throw ConfigError("base '" + b.label + "' has a different architecture");
        }
    }
    CompareReport report;
    for (const auto& b : bases) {
        report.runs.push_back({b.label, b.checkpoint.iteration, finetune_run(b.checkpoint, cfg, thresholds)});
    }
    return report;
}

std::string render_compare_report(const CompareReport& report) {
    std::ostringstream out;
    auto onset = [](const std::optional<std::uint64_t>& o) { return o ? std::to_string(*o) : std::string("none"); };
    out << "# phase onsets\n";
    out << std::left << std::setw(24) << "run" << std::setw(16) << "base_iteration" << std::setw(12)
        << "divergence" << std::setw(12) << "explosion" << std::setw(12) << "collapse" << '\n';
    for (const auto& r : report.runs) {
        out << std::left << std::setw(24) << r.label << std::setw(16) << r.base_iteration << std::setw(12)
            << onset(r.result.phases.divergence_onset) << std::setw(12) << onset(r.result.phases.explosion_onset)
            << std::setw(12) << onset(r.result.phases.collapse_onset) << '\n';
    }

    out << "\n# metrics at snapshot iterations (mean_fake_prob / grad_norm_g / diversity)\n";
    out << std::left << std::setw(10) << "iteration";
    for (const auto& r : report.runs) out << std::setw(42) << r.label;
    out << '\n';
    if (report.runs.empty()) return out.str();
    out << std::setprecision(6);
    for (const auto& snap : report.runs.front().result.snapshots.snapshots) {
        out << std::left << std::setw(10) << snap.iteration;
        for (const auto& r : report.runs) {
            std::ostringstream cell;
            cell << std::setprecision(6);
            if (snap.iteration < r.result.metrics.size()) {
                const auto& m = r.result.metrics[snap.iteration];
                cell << m.mean_fake_prob << " / " << m.grad_norm_g << " / " << m.diversity;
            }
            out << std::setw(42) << cell.str();
        }
        out << '\n';
    }
    return out.str();
}

}  // namespace uagan
