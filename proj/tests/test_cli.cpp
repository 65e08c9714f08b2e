#include <doctest.h>

#include <filesystem>
#include <sstream>

#include "uagan/cli.hpp"
#include "uagan/io/checkpoint.hpp"
#include "uagan/io/image.hpp"
#include "uagan/io/metrics_csv.hpp"
#include "uagan/metrics.hpp"

using namespace uagan;
namespace fs = std::filesystem;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run(std::vector<std::string> args) {
    std::ostringstream out, err;
    args.insert(args.begin(), "uagan");
    const int code = cli_dispatch(std::span<const std::string>(args).subspan(1), out, err);
    return {code, out.str(), err.str()};
}

fs::path scratch_dir() {
    const fs::path dir = fs::temp_directory_path() / "uagan_cli_test";
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

}  // namespace

TEST_CASE("usage errors exit 1") {
    const Run none = run({});
    CHECK(none.code == kExitUsage);
    const Run bogus = run({"frobnicate"});
    CHECK(bogus.code == kExitUsage);
    CHECK_FALSE(bogus.err.empty());
    const Run flag = run({"phases", "--metrics", "m.csv", "--bogus"});
    CHECK(flag.code == kExitUsage);
    const Run no_base = run({"finetune", "--config", "ft.cfg"});
    CHECK(no_base.code == kExitUsage);
    CHECK(no_base.err.find("--base") != std::string::npos);
    CHECK(run({"--help"}).code == kExitOk);
}

TEST_CASE("gradcheck on default nets") {
    const Run r = run({"gradcheck"});
    CHECK(r.code == kExitOk);
    const auto pos = r.out.find("\nmax_relative_error = ");
    REQUIRE(pos != std::string::npos);
    CHECK(std::stod(r.out.substr(pos + 22)) < 1e-4);
}

TEST_CASE("phases on a constant history") {
    const fs::path dir = scratch_dir();
    std::vector<MetricsRecord> h(60);
    for (std::size_t i = 0; i < h.size(); ++i) h[i] = {i, 0.7, 0.5, 1.0, 2.0, Phase::baseline};
    write_metrics_csv(h, dir / "m.csv");
    const Run r = run({"phases", "--metrics", (dir / "m.csv").string()});
    CHECK(r.code == kExitOk);
    CHECK(r.out.find("divergence_onset = none") != std::string::npos);
    CHECK(r.out.find("explosion_onset = none") != std::string::npos);
    CHECK(r.out.find("collapse_onset = none") != std::string::npos);

    write_text(dir / "bad.csv", "nonsense\n");
    CHECK(run({"phases", "--metrics", (dir / "bad.csv").string()}).code == kExitFormat);
    CHECK(run({"phases", "--metrics", (dir / "missing.csv").string()}).code == kExitFormat);
    CHECK(run({"phases", "--metrics", (dir / "m.csv").string(), "--explosion-window", "100"}).code == kExitUsage);
}

TEST_CASE("train, finetune, sample and render end to end") {
    const fs::path dir = scratch_dir();
    write_text(dir / "train.cfg",
               "dataset = ring2d\nlatent_dim = 4\ng_layers = 16\nd_layers = 16\nbatch_size = 16\n"
               "iterations = 20\ncheckpoint_every = 10\nseed = 3\n");
    Run r = run({"train", "--config", (dir / "train.cfg").string(), "--out", (dir / "base").string()});
    REQUIRE(r.code == kExitOk);
    CHECK(fs::exists(dir / "base" / "checkpoints" / "iter_000010.uagc"));
    CHECK(read_metrics_csv(dir / "base" / "metrics.csv").size() == 20);
    const fs::path base = dir / "base" / "final.uagc";

    write_text(dir / "ft.cfg", "batch_size = 16\niterations = 60\nsnapshot_schedule = every 30\n");
    r = run({"finetune", "--config", (dir / "ft.cfg").string(), "--base", base.string(), "--out",
             (dir / "ft").string()});
    REQUIRE(r.code == kExitOk);
    CHECK(r.out.find("run_id = ") != std::string::npos);
    for (const char* f : {"metrics.csv", "manifest.txt", "report.txt", "config.txt", "snapshots/iter_000000.uagc",
                          "snapshots/iter_000060.uagc", "previews/iter_000030.pgm"}) {
        CHECK_MESSAGE(fs::exists(dir / "ft" / f), f);
    }
    CHECK(read_metrics_csv(dir / "ft" / "metrics.csv").size() == 61);

    r = run({"sample", "--ckpt", base.string(), "--n", "100", "--seed", "5", "--out", (dir / "s.txt").string()});
    REQUIRE(r.code == kExitOk);
    CHECK(read_samples(dir / "s.txt").size() == 100);
    r = run({"scatter", "--samples", (dir / "s.txt").string(), "--out", (dir / "s.pgm").string(), "--side", "64"});
    CHECK(r.code == kExitOk);
    CHECK(parse_pgm(read_file(dir / "s.pgm")).width == 64);
    r = run({"scatter", "--ckpt", base.string(), "--samples", (dir / "s.txt").string(), "--out",
             (dir / "x.pgm").string()});
    CHECK(r.code == kExitUsage);
    r = run({"grid", "--samples", (dir / "s.txt").string(), "--out", (dir / "g.pgm").string()});
    CHECK(r.code == kExitUsage);

    r = run({"compare", "--config", (dir / "ft.cfg").string(), "--base", base.string(), "--base", base.string(),
             "--out", (dir / "cmp").string()});
    CHECK(r.code == kExitOk);
    CHECK(fs::exists(dir / "cmp" / "report.txt"));
    r = run({"compare", "--config", (dir / "ft.cfg").string(), "--base", base.string()});
    CHECK(r.code == kExitUsage);

    auto bytes = read_file(base);
    bytes[bytes.size() / 2] ^= 1;
    write_file(dir / "corrupt.uagc", bytes);
    r = run({"sample", "--ckpt", (dir / "corrupt.uagc").string(), "--n", "4", "--seed", "1", "--out",
             (dir / "c.txt").string()});
    CHECK(r.code == kExitFormat);
    CHECK(r.err.find("checksum") != std::string::npos);
    fs::remove_all(dir);
}
