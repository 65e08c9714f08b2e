#include "uagan/cli.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <sstream>

#include "uagan/errors.hpp"
#include "uagan/gan_train.hpp"
#include "uagan/gradcheck.hpp"
#include "uagan/io/checkpoint.hpp"
#include "uagan/io/image.hpp"
#include "uagan/io/metrics_csv.hpp"
#include "uagan/io/run_config.hpp"
#include "uagan/metrics.hpp"
#include "uagan/simd/kernels.hpp"
#include "uagan/unlikelihood.hpp"

namespace uagan {

namespace fs = std::filesystem;

namespace {

int exit_code_for(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::usage:
        case ErrorKind::configuration: return kExitUsage;
        case ErrorKind::format: return kExitFormat;
        case ErrorKind::numeric:
        case ErrorKind::state:
        case ErrorKind::invariant: return kExitNumeric;
    }
    return kExitNumeric;
}

std::string iteration_name(std::uint64_t it, std::string_view ext) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "iter_%06llu", static_cast<unsigned long long>(it));
    return std::string(buf) + std::string(ext);
}

// Sprite-shaped outputs become an 8x8 grid, 2D outputs a scatter plot.
std::vector<std::uint8_t> preview_image(const SampleBatch& batch) {
    if (batch.dim() == 2) return render_scatter(batch, ScatterBounds{}, 128);
    return render_grid(batch, GridSpec{8, 8});
}

SampleBatch samples_from(const std::string& samples_path, const std::string& ckpt_path, std::size_t n,
                         std::uint64_t seed) {
    if (!samples_path.empty() == !ckpt_path.empty()) throw UsageError("give exactly one of --samples or --ckpt");
    if (!samples_path.empty()) return read_samples(samples_path);
    return sample_generator(load_checkpoint(ckpt_path), n, seed);
}

void write_finetune_outputs(const FinetuneResult& r, const FinetuneConfig& cfg, const fs::path& out) {
    write_metrics_csv(r.metrics, out / "metrics.csv", r.phases);
    std::ostringstream manifest;
    manifest << "run_id = " << r.snapshots.run_id << '\n'
             << "base_hash = " << r.snapshots.base_hash << '\n'
             << "config_hash = " << r.snapshots.config_hash << '\n'
             << "discriminator_hash = " << r.d_hash_after << '\n';
    for (const auto& s : r.snapshots.snapshots) {
        const auto bytes = serialize(s.checkpoint);
        write_file(out / "snapshots" / iteration_name(s.iteration, ".uagc"), bytes);
        write_file(out / "previews" / iteration_name(s.iteration, ".pgm"), preview_image(s.preview));
        manifest << "snapshot " << s.iteration << " = " << sha256_hex(bytes) << '\n';
    }
    write_text(out / "manifest.txt", manifest.str());
    write_text(out / "config.txt", render_finetune_config(cfg));
    std::ostringstream report;
    report << "run_id = " << r.snapshots.run_id << '\n'
           << "base_hash = " << r.snapshots.base_hash << '\n'
           << "config_hash = " << r.snapshots.config_hash << '\n'
           << "discriminator_hash_before = " << r.d_hash_before << '\n'
           << "discriminator_hash_after = " << r.d_hash_after << '\n'
           << render_phase_report(r.phases);
    write_text(out / "report.txt", report.str());
}

}  // namespace

int cli_dispatch(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Adversarial training lab: baseline GAN training, inverted-objective fine-tuning against a "
                 "frozen discriminator, and phase instrumentation"};
    app.require_subcommand(1);

    std::string config_path, base_path, out_dir, ckpt_path, samples_path, metrics_path;
    std::vector<std::string> bases;
    std::size_t n = 1024;
    std::uint64_t seed = 1;
    std::size_t rows = 8, cols = 8, side = 256, probes = 100;
    std::vector<double> bounds{-3.0, 3.0, -3.0, 3.0};
    double h = 1e-5;
    PhaseThresholds th;

    auto* train_cmd = app.add_subcommand("train", "Standard adversarial training with periodic checkpoints");
    train_cmd->add_option("--config", config_path, "Training config file")->required();
    train_cmd->add_option("--out", out_dir, "Output directory")->default_val("train_out");

    auto* finetune_cmd = app.add_subcommand("finetune", "Inverted-objective fine-tuning with a frozen discriminator");
    finetune_cmd->add_option("--config", config_path, "Fine-tune config file")->required();
    finetune_cmd->add_option("--base", base_path, "Base pair checkpoint")->required();
    finetune_cmd->add_option("--out", out_dir, "Output directory")->default_val("finetune_out");

    auto* sample_cmd = app.add_subcommand("sample", "Draw generator samples to a text file");
    sample_cmd->add_option("--ckpt", ckpt_path, "Checkpoint")->required();
    sample_cmd->add_option("--n", n, "Sample count")->required();
    sample_cmd->add_option("--seed", seed, "Latent seed")->required();
    sample_cmd->add_option("--out", out_dir, "Output sample file")->required();

    auto* grid_cmd = app.add_subcommand("grid", "Render samples as a PGM grid");
    grid_cmd->add_option("--samples", samples_path, "Sample file");
    grid_cmd->add_option("--ckpt", ckpt_path, "Checkpoint to sample from");
    grid_cmd->add_option("--out", out_dir, "Output PGM")->required();
    grid_cmd->add_option("--rows", rows, "Grid rows")->default_val(8);
    grid_cmd->add_option("--cols", cols, "Grid columns")->default_val(8);
    grid_cmd->add_option("--seed", seed, "Latent seed with --ckpt")->default_val(kPreviewSeed);

    auto* scatter_cmd = app.add_subcommand("scatter", "Render 2D samples as a PGM density plot");
    scatter_cmd->add_option("--samples", samples_path, "Sample file");
    scatter_cmd->add_option("--ckpt", ckpt_path, "Checkpoint to sample from");
    scatter_cmd->add_option("--out", out_dir, "Output PGM")->required();
    scatter_cmd->add_option("--side", side, "Image side in pixels")->default_val(256);
    scatter_cmd->add_option("--bounds", bounds, "x_min x_max y_min y_max")->expected(4);
    scatter_cmd->add_option("--n", n, "Sample count with --ckpt")->default_val(4096);
    scatter_cmd->add_option("--seed", seed, "Latent seed with --ckpt")->default_val(1);

    auto* phases_cmd = app.add_subcommand("phases", "Detect divergence/explosion/collapse onsets in a metrics CSV");
    phases_cmd->add_option("--metrics", metrics_path, "Metrics CSV")->required();
    phases_cmd->add_option("--divergence-drop", th.divergence_drop)->default_val(th.divergence_drop);
    phases_cmd->add_option("--explosion-factor", th.explosion_factor)->default_val(th.explosion_factor);
    phases_cmd->add_option("--explosion-window", th.explosion_window)->default_val(th.explosion_window);
    phases_cmd->add_option("--collapse-ratio", th.collapse_ratio)->default_val(th.collapse_ratio);

    auto* compare_cmd = app.add_subcommand("compare", "Fine-tune several base checkpoints with one config");
    compare_cmd->add_option("--config", config_path, "Fine-tune config file")->required();
    compare_cmd->add_option("--base", bases, "Base pair checkpoint (repeat)")->required();
    compare_cmd->add_option("--out", out_dir, "Output directory")->default_val("compare_out");

    auto* gradcheck_cmd = app.add_subcommand("gradcheck", "Finite-difference check of generator and discriminator gradients");
    gradcheck_cmd->add_option("--probes", probes, "Parameters probed per network")->default_val(100);
    gradcheck_cmd->add_option("--step", h, "Central-difference step")->default_val(1e-5);
    gradcheck_cmd->add_option("--seed", seed, "Probe seed")->default_val(1);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::Success&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n\n";
        auto subs = app.get_subcommands();
        err << (subs.empty() ? app.help() : subs.front()->help());
        return kExitUsage;
    }

    try {
        if (train_cmd->parsed()) {
            const TrainConfig cfg = load_train_config(config_path);
            const fs::path dir(out_dir);
            const TrainResult r = train(cfg);
            for (const auto& c : r.checkpoints) {
                save_checkpoint(c, dir / "checkpoints" / iteration_name(c.iteration, ".uagc"));
            }
            save_checkpoint(r.final_checkpoint, dir / "final.uagc");
            write_metrics_csv(r.metrics, dir / "metrics.csv");
            write_text(dir / "config.txt", render_train_config(cfg));
            out << "iterations = " << cfg.iterations << '\n';
            if (!r.metrics.empty()) {
                out << "final_mean_fake_prob = " << format_real(r.metrics.back().mean_fake_prob) << '\n';
                out << "final_diversity = " << format_real(r.metrics.back().diversity) << '\n';
            }
            if (cfg.dataset == Domain::ring2d) {
                const auto s = sample_generator(r.final_checkpoint, 1024, kPreviewSeed);
                out << "mode_coverage = " << mode_coverage(s.data, RingConfig{}) << "/" << RingConfig{}.n_modes << '\n';
            }
        } else if (finetune_cmd->parsed()) {
            FinetuneConfig cfg = load_finetune_config(config_path);
            cfg.base_checkpoint = base_path;
            const FinetuneResult r = finetune_run(cfg);
            write_finetune_outputs(r, cfg, out_dir);
            out << "run_id = " << r.snapshots.run_id << '\n' << render_phase_report(r.phases);
        } else if (sample_cmd->parsed()) {
            write_samples(sample_generator(load_checkpoint(ckpt_path), n, seed), out_dir);
        } else if (grid_cmd->parsed()) {
            const SampleBatch batch = samples_from(samples_path, ckpt_path, rows * cols, seed);
            write_file(out_dir, render_grid(batch, GridSpec{rows, cols}));
        } else if (scatter_cmd->parsed()) {
            const SampleBatch batch = samples_from(samples_path, ckpt_path, n, seed);
            write_file(out_dir, render_scatter(batch, ScatterBounds{bounds[0], bounds[1], bounds[2], bounds[3]}, side));
        } else if (phases_cmd->parsed()) {
            const auto records = read_metrics_csv(metrics_path);
            out << render_phase_report(classify_phases(records, th));
        } else if (compare_cmd->parsed()) {
            const FinetuneConfig cfg = load_finetune_config(config_path);
            std::vector<NamedBase> named;
            for (const auto& b : bases) named.push_back({b, load_checkpoint(b)});
            const CompareReport report = compare_runs(named, cfg);
            const fs::path dir(out_dir);
            for (std::size_t i = 0; i < report.runs.size(); ++i) {
                write_finetune_outputs(report.runs[i].result, cfg, dir / ("run_" + std::to_string(i)));
            }
            const std::string text = render_compare_report(report);
            write_text(dir / "report.txt", text);
            out << text;
        } else if (gradcheck_cmd->parsed()) {
            const auto results = gan_gradient_check(default_train_config(Domain::ring2d), probes, h, seed);
            double worst = 0.0;
            for (const auto& [name, res] : results) {
                out << name << "_max_relative_error = " << format_real(res.max_relative_error) << " (" << res.probes
                    << " probes)\n";
                worst = std::max(worst, res.max_relative_error);
            }
            out << "max_relative_error = " << format_real(worst) << '\n';
            out << "kernels = " << simd::name(simd::active_backend()) << '\n';
            if (!(worst < kGradCheckTolerance)) {
                err << "gradient check failed: " << format_real(worst) << " >= " << format_real(kGradCheckTolerance)
                    << '\n';
                return kExitNumeric;
            }
        }
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return exit_code_for(e.kind());
    } catch (const fs::filesystem_error& e) {
        err << "error: " << e.what() << '\n';
        return kExitFormat;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitNumeric;
    }
    return kExitOk;
}

}  // namespace uagan
