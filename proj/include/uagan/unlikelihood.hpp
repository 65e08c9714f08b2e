#pragma once

// Fine-tuning a trained generator against a frozen discriminator with an
// inverted objective: the generator is pushed toward samples the
// discriminator scores as fake.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "uagan/gan_train.hpp"
#include "uagan/io/checkpoint.hpp"
#include "uagan/losses.hpp"
#include "uagan/metrics.hpp"

namespace uagan {

// Either every `stride` iterations, or an explicit ascending list. Iteration 0
// and the final iteration are always part of the resolved schedule.
struct SnapshotSchedule {
    std::optional<std::uint64_t> stride = 250;
    std::vector<std::uint64_t> iterations;

    bool operator==(const SnapshotSchedule&) const = default;
};

struct FinetuneConfig {
    std::string base_checkpoint;
    InvertedVariant loss_variant = InvertedVariant::amplifying;
    // Defaults to the learning rate stored with the base generator's optimizer.
    std::optional<double> lr_g;
    std::size_t batch_size = 64;
    std::uint64_t iterations = 2000;
    SnapshotSchedule snapshot_schedule;
    // Rescales the generator gradient to this L2 norm when exceeded; off by default.
    std::optional<double> grad_clip;
    std::uint64_t seed = 11;

    bool operator==(const FinetuneConfig&) const = default;
};

void validate(const FinetuneConfig& cfg);
// Throws ConfigError for unsorted lists or entries past cfg.iterations.
std::vector<std::uint64_t> resolve_schedule(const SnapshotSchedule& s, std::uint64_t iterations);

inline constexpr std::size_t kPreviewCount = 64;
inline constexpr std::uint64_t kPreviewSeed = 0x9e11'e5ULL;

struct Snapshot {
    std::uint64_t iteration = 0;
    Checkpoint checkpoint;
    // sample_generator(checkpoint, kPreviewCount, kPreviewSeed) at capture time.
    SampleBatch preview;
};

struct SnapshotSet {
    std::string run_id;
    std::string base_hash;
    std::string config_hash;
    std::vector<Snapshot> snapshots;
};

// Generator under fine-tuning plus the discriminator it is scored against.
// The discriminator is frozen on construction and its parameter bytes are
// compared against `d_reference` after every step.
class FinetuneState {
public:
    // Throws ConfigError if the checkpoint lacks a generator or discriminator.
    FinetuneState(const Checkpoint& base, const FinetuneConfig& cfg);

    [[nodiscard]] const Network& generator() const { return g_; }
    [[nodiscard]] const Network& discriminator() const { return d_; }
    [[nodiscard]] const AdamState& optimizer() const { return adam_g_; }
    [[nodiscard]] std::uint64_t iteration() const { return iteration_; }
    [[nodiscard]] const Matrix& probe() const { return probe_; }

    // Pair checkpoint of the current state (generator optimizer included).
    [[nodiscard]] Checkpoint checkpoint() const;

    // Metrics for the current parameters on `latents`, then one optimizer step
    // on the generator. The record carries the pre-step iteration number.
    MetricsRecord step(const Matrix& latents);
    // Metrics only; no update.
    MetricsRecord evaluate(const Matrix& latents);

private:
    MetricsRecord measure(const Matrix& latents, bool update);

    FinetuneConfig cfg_;
    Network g_;
    Network d_;
    AdamState adam_g_;
    std::optional<AdamState> adam_d_;
    std::vector<std::uint8_t> d_reference_;
    Matrix probe_;
    std::uint64_t seed_ = 0;
    std::uint64_t iteration_ = 0;
};

// One fine-tuning step on `pair`: the generator takes one Adam step on the
// inverted loss while the discriminator stays byte-identical.
MetricsRecord finetune_step(FinetuneState& state, const Matrix& latents);

// Latent batch consumed by the step at `iteration`.
Matrix finetune_latents(const FinetuneConfig& cfg, std::size_t latent_dim, std::uint64_t iteration);

struct FinetuneResult {
    SnapshotSet snapshots;
    std::vector<MetricsRecord> metrics;  // iterations 0..cfg.iterations
    PhaseReport phases;
    std::string d_hash_before;
    std::string d_hash_after;
};

// Runs cfg.iterations steps from `base`. Records describe the model after k
// steps, so there are iterations + 1 of them. Throws NumericError naming the
// iteration if generator parameters become non-finite.
FinetuneResult finetune_run(const Checkpoint& base, const FinetuneConfig& cfg,
                            const PhaseThresholds& thresholds = {});
// Loads cfg.base_checkpoint first.
FinetuneResult finetune_run(const FinetuneConfig& cfg, const PhaseThresholds& thresholds = {});

struct NamedBase {
    std::string label;
    Checkpoint checkpoint;
};

struct CompareEntry {
    std::string label;
    std::uint64_t base_iteration = 0;
    FinetuneResult result;
};

struct CompareReport {
    std::vector<CompareEntry> runs;
};

// Requires at least two bases of identical architecture (ConfigError
// otherwise); an empty list is a UsageError.
CompareReport compare_runs(const std::vector<NamedBase>& bases, const FinetuneConfig& cfg,
                           const PhaseThresholds& thresholds = {});

// Phase table per run, then a snapshot-aligned metrics table.
std::string render_compare_report(const CompareReport& report);

}  // namespace uagan
