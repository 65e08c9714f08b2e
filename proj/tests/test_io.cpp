#include <doctest.h>

#include <filesystem>

#include "uagan/errors.hpp"
#include "uagan/gan_train.hpp"
#include "uagan/io/checkpoint.hpp"
#include "uagan/io/image.hpp"
#include "uagan/io/metrics_csv.hpp"
#include "uagan/io/run_config.hpp"
#include "uagan/unlikelihood.hpp"

using namespace uagan;

namespace {

Checkpoint small_pair(bool with_adam) {
    TrainConfig cfg;
    cfg.latent_dim = 3;
    cfg.g_layers = {4};
    cfg.d_layers = {5};
    GanPair pair = make_pair(cfg);
    pair.iteration = 17;
    Checkpoint c = to_checkpoint(pair);
    if (!with_adam) {
        c.adam_generator.reset();
        c.adam_discriminator.reset();
    }
    return c;
}

FormatErrorCode load_error(std::span<const std::uint8_t> bytes) {
    try {
        deserialize(bytes);
    } catch (const FormatError& e) {
        return e.code();
    }
    FAIL("expected a format error");
    return FormatErrorCode::io;
}

}  // namespace

TEST_CASE("checkpoint round trip and roles") {
    for (bool adam : {false, true}) {
        const Checkpoint c = small_pair(adam);
        const auto bytes = serialize(c);
        const Checkpoint back = deserialize(bytes);
        CHECK(serialize(back) == bytes);
        CHECK(back.role() == Role::pair);
        CHECK(back.iteration == 17);
        CHECK(back.adam_generator.has_value() == adam);
    }
    Checkpoint g_only;
    g_only.generator = small_pair(false).generator;
    CHECK(deserialize(serialize(g_only)).role() == Role::generator);
}

TEST_CASE("checkpoint corruption is named") {
    const auto good = serialize(small_pair(true));

    auto magic = good;
    std::copy_n("XXXX", 4, magic.begin());
    CHECK(load_error(magic) == FormatErrorCode::bad_magic);

    auto version = good;
    version[4] = 2;
    CHECK(load_error(version) == FormatErrorCode::version_mismatch);

    for (std::size_t pos : {good.size() / 3, good.size() / 2, good.size() - 5}) {
        auto flipped = good;
        flipped[pos] ^= 0x10;
        CHECK(load_error(flipped) == FormatErrorCode::checksum_mismatch);
    }

    const std::span<const std::uint8_t> all(good);
    CHECK(load_error(all.first(good.size() - 1)) == FormatErrorCode::truncated);
    CHECK(load_error(all.first(10)) == FormatErrorCode::truncated);
    auto longer = good;
    longer.push_back(0);
    CHECK(load_error(longer) == FormatErrorCode::malformed);
}

TEST_CASE("checkpoint files") {
    const auto dir = std::filesystem::temp_directory_path() / "uagan_io_test";
    std::filesystem::remove_all(dir);
    const Checkpoint c = small_pair(true);
    save_checkpoint(c, dir / "nested" / "pair.uagc");
    CHECK(serialize(load_checkpoint(dir / "nested" / "pair.uagc")) == serialize(c));
    try {
        load_checkpoint(dir / "missing.uagc");
        FAIL("expected an error");
    } catch (const FormatError& e) {
        CHECK(e.code() == FormatErrorCode::io);
    }
    std::filesystem::remove_all(dir);
}

TEST_CASE("sha256") {
    CHECK(sha256_hex(std::string_view("abc")) ==
          "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("metrics csv") {
    CHECK(render_metrics_csv({}) == std::string(kMetricsHeader) + "\n");
    CHECK(parse_metrics_csv(render_metrics_csv({})).empty());

    const MetricsRecord r{3, -0.1234567890123, 0.25, 1e-300, 3.5, Phase::explosion};
    const auto back = parse_metrics_csv(render_metrics_csv(std::vector{r}));
    REQUIRE(back.size() == 1);
    CHECK(back[0].iteration == 3);
    CHECK(back[0].g_loss == r.g_loss);
    CHECK(back[0].grad_norm_g == r.grad_norm_g);
    CHECK(back[0].phase == Phase::explosion);

    const std::string header(kMetricsHeader);
    CHECK_THROWS_AS(parse_metrics_csv(header + "\n5,0,0.5,1,1,baseline\n4,0,0.5,1,1,baseline\n"), FormatError);
    CHECK_THROWS_AS(parse_metrics_csv(header + "\n1,0,0.5,1\n"), FormatError);
    CHECK_THROWS_AS(parse_metrics_csv("iteration,loss\n"), FormatError);
    try {
        parse_metrics_csv(header + "\n0,0,0.5,1,1,baseline\n1,x,0.5,1,1,baseline\n");
        FAIL("expected an error");
    } catch (const FormatError& e) {
        CHECK(std::string(e.what()).find("line 3") != std::string::npos);
    }
    const std::vector<MetricsRecord> bad{{2, 0, 0.5, 1, 1, Phase::baseline}, {2, 0, 0.5, 1, 1, Phase::baseline}};
    CHECK_THROWS_AS(render_metrics_csv(bad), UsageError);

    PhaseReport rep;
    rep.divergence_onset = 7;
    const std::vector<MetricsRecord> one{{0, 0, 0.5, 1, 1, Phase::baseline}};
    const std::string with_footer = render_metrics_csv(one, rep);
    CHECK(with_footer.find("# divergence_onset = 7") != std::string::npos);
    CHECK(parse_metrics_csv(with_footer).size() == 1);
}

TEST_CASE("configs") {
    const TrainConfig t = parse_train_config(
        "# baseline\ndataset = sprites\nlatent_dim = 8\ng_layers = 32, 16\nlr_g = 5e-4\niterations = 10\n");
    CHECK(t.dataset == Domain::sprites);
    CHECK(t.g_layers == std::vector<std::size_t>{32, 16});
    CHECK(t.lr_g == 5e-4);
    CHECK(parse_train_config(render_train_config(t)) == t);

    CHECK_THROWS_AS(parse_train_config("latent_dims = 3\n"), ConfigError);
    CHECK_THROWS_AS(parse_train_config("seed = 1\nseed = 2\n"), ConfigError);
    CHECK_THROWS_AS(parse_train_config("dataset = mnist\n"), ConfigError);
    CHECK_THROWS_AS(parse_train_config("batch_size = 0\n"), ConfigError);

    const FinetuneConfig f = parse_finetune_config(
        "loss_variant = saturating\nlr_g = base\nsnapshot_schedule = 0, 10, 20\ngrad_clip = 5\niterations = 20\n");
    CHECK(f.loss_variant == InvertedVariant::saturating);
    CHECK_FALSE(f.lr_g);
    CHECK_FALSE(f.snapshot_schedule.stride);
    CHECK(f.snapshot_schedule.iterations == std::vector<std::uint64_t>{0, 10, 20});
    CHECK(f.grad_clip == 5.0);
    CHECK(parse_finetune_config(render_finetune_config(f)) == f);
    CHECK(parse_finetune_config("snapshot_schedule = every 100\n").snapshot_schedule.stride == 100u);
    CHECK_THROWS_AS(parse_finetune_config("loss_variant = hinge\n"), ConfigError);
}

TEST_CASE("snapshot schedules") {
    SnapshotSchedule s;
    CHECK(resolve_schedule(s, 2000) == std::vector<std::uint64_t>{0, 250, 500, 750, 1000, 1250, 1500, 1750, 2000});
    CHECK(resolve_schedule(s, 600) == std::vector<std::uint64_t>{0, 250, 500, 600});
    s.stride.reset();
    s.iterations = {100, 50};
    CHECK_THROWS_AS(resolve_schedule(s, 200), ConfigError);
    s.iterations = {50, 300};
    CHECK_THROWS_AS(resolve_schedule(s, 200), ConfigError);
    s.iterations = {50};
    CHECK(resolve_schedule(s, 200) == std::vector<std::uint64_t>{0, 50, 200});
}

TEST_CASE("grid rendering") {
    SampleBatch dark{Matrix(1, 256, -1.0), Domain::sprites};
    const GrayImage one = parse_pgm(render_grid(dark, GridSpec{1, 1}));
    CHECK(one.width == 16);
    CHECK(one.height == 16);
    for (auto px : one.pixels) CHECK(px == 0);

    SampleBatch mid{Matrix(1, 4, 0.0), Domain::generated};
    CHECK(parse_pgm(render_grid(mid, GridSpec{1, 1})).pixels[0] == 128);

    SampleBatch four{Matrix(4, 256, 1.0), Domain::sprites};
    const GrayImage grid = parse_pgm(render_grid(four, GridSpec{2, 2}));
    CHECK(grid.width == 33);
    CHECK(grid.height == 33);
    CHECK(grid.pixels[16] == 0);
    CHECK(grid.pixels[0] == 255);

    CHECK_THROWS_AS(render_grid(SampleBatch{Matrix(1, 5), Domain::generated}, GridSpec{1, 1}), UsageError);
    CHECK_THROWS_AS(render_grid(four, GridSpec{3, 3}), UsageError);
}

namespace {

// Connected bright regions of at least `min_size` pixels (8-connectivity).
std::size_t bright_components(const GrayImage& img, std::uint8_t threshold, std::size_t min_size) {
    std::vector<char> seen(img.pixels.size(), 0);
    std::size_t count = 0;
    for (std::size_t start = 0; start < img.pixels.size(); ++start) {
        if (seen[start] || img.pixels[start] <= threshold) continue;
        std::size_t size = 0;
        std::vector<std::size_t> stack{start};
        seen[start] = 1;
        while (!stack.empty()) {
            const std::size_t p = stack.back();
            stack.pop_back();
            ++size;
            const long x = long(p % img.width), y = long(p / img.width);
            for (long dy = -1; dy <= 1; ++dy) {
                for (long dx = -1; dx <= 1; ++dx) {
                    const long nx = x + dx, ny = y + dy;
                    if (nx < 0 || ny < 0 || nx >= long(img.width) || ny >= long(img.height)) continue;
                    const std::size_t q = std::size_t(ny) * img.width + std::size_t(nx);
                    if (!seen[q] && img.pixels[q] > threshold) {
                        seen[q] = 1;
                        stack.push_back(q);
                    }
                }
            }
        }
        if (size >= min_size) ++count;
    }
    return count;
}

}  // namespace

TEST_CASE("scatter rendering") {
    const ScatterBounds bounds;
    const GrayImage empty = parse_pgm(render_scatter(SampleBatch{Matrix(0, 2), Domain::generated}, bounds, 64));
    for (auto px : empty.pixels) CHECK(px == 0);

    SampleBatch center{Matrix(1, 2, 0.0), Domain::generated};
    const GrayImage dot = parse_pgm(render_scatter(center, bounds, 64));
    CHECK(std::count_if(dot.pixels.begin(), dot.pixels.end(), [](auto v) { return v != 0; }) == 1);

    const GrayImage ring = parse_pgm(render_scatter(ring2d_sample(RingConfig{}, 1, 10000), bounds, 256));
    CHECK(bright_components(ring, 0, 4) == 8);

    CHECK_THROWS_AS(render_scatter(center, ScatterBounds{1, 1, -1, 1}, 64), UsageError);
    CHECK_THROWS_AS(render_scatter(SampleBatch{Matrix(2, 3), Domain::generated}, bounds, 64), UsageError);
}

TEST_CASE("sample files") {
    const auto path = std::filesystem::temp_directory_path() / "uagan_samples_test.txt";
    const SampleBatch b = sprites_sample(SpriteConfig{}, 2, 3);
    write_samples(b, path);
    const SampleBatch back = read_samples(path);
    CHECK(back.data == b.data);
    CHECK(back.domain == Domain::sprites);
    std::filesystem::remove(path);
}
