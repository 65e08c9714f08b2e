#include "uagan/gan_train.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "uagan/errors.hpp"
#include "uagan/losses.hpp"
#include "uagan/rng.hpp"

namespace uagan {

namespace {

enum Stream : std::uint64_t {
    kInitG = 1,
    kInitD = 2,
    kRealBatch = 3,
    kLatentD = 4,
    kLatentG = 5,
};

std::uint64_t stream_seed(std::uint64_t seed, Stream s, std::uint64_t iteration) {
    return mix_seed(mix_seed(seed, s), iteration);
}

SampleBatch real_batch(Domain dataset, std::uint64_t seed, std::size_t n) {
    switch (dataset) {
        case Domain::ring2d: return ring2d_sample(RingConfig{}, seed, n);
        case Domain::sprites: return sprites_sample(SpriteConfig{}, seed, n);
        case Domain::generated: break;
    }
    throw ConfigError("training dataset must be ring2d or sprites");
}

Matrix stack(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows + b.rows, a.cols);
    std::copy(a.data.begin(), a.data.end(), out.data.begin());
    std::copy(b.data.begin(), b.data.end(), out.data.begin() + static_cast<std::ptrdiff_t>(a.data.size()));
    return out;
}

Matrix column(std::span<const double> v) {
    Matrix m(v.size(), 1);
    std::copy(v.begin(), v.end(), m.data.begin());
    return m;
}

}  // namespace

std::size_t data_dim(Domain dataset) {
    switch (dataset) {
        case Domain::ring2d: return 2;
        case Domain::sprites: return kSpritePixels;
        case Domain::generated: break;
    }
    throw ConfigError("dataset must be ring2d or sprites");
}

TrainConfig default_train_config(Domain dataset) {
    TrainConfig cfg;
    cfg.dataset = dataset;
    if (dataset == Domain::sprites) cfg.latent_dim = 32;
    return cfg;
}

void validate(const TrainConfig& cfg) {
    data_dim(cfg.dataset);
    if (cfg.latent_dim == 0) throw ConfigError("latent_dim must be at least 1");
    if (cfg.batch_size == 0) throw ConfigError("batch_size must be at least 1");
    if (cfg.checkpoint_every == 0) throw ConfigError("checkpoint_every must be at least 1");
    if (!(cfg.lr_g >= 0.0) || !(cfg.lr_d >= 0.0)) throw ConfigError("learning rates must be non-negative");
    for (std::size_t w : cfg.g_layers) {
        if (w == 0) throw ConfigError("g_layers entries must be positive");
    }
    for (std::size_t w : cfg.d_layers) {
        if (w == 0) throw ConfigError("d_layers entries must be positive");
    }
}

NetSpec generator_spec(const TrainConfig& cfg) {
    const Activation out = cfg.dataset == Domain::sprites ? Activation::tanh : Activation::linear;
    return mlp_spec(cfg.latent_dim, cfg.g_layers, data_dim(cfg.dataset), Activation::tanh, out);
}

NetSpec discriminator_spec(const TrainConfig& cfg) {
    return mlp_spec(data_dim(cfg.dataset), cfg.d_layers, 1, Activation::leaky_relu, Activation::sigmoid);
}

GanPair make_pair(const TrainConfig& cfg) {
    validate(cfg);
    GanPair p;
    p.g = init_params(generator_spec(cfg), mix_seed(cfg.seed, kInitG));
    p.d = init_params(discriminator_spec(cfg), mix_seed(cfg.seed, kInitD));
    p.adam_g = make_adam_state(p.g, AdamHyper{.lr = cfg.lr_g});
    p.adam_d = make_adam_state(p.d, AdamHyper{.lr = cfg.lr_d});
    p.seed = cfg.seed;
    return p;
}

Checkpoint to_checkpoint(const GanPair& pair) {
    Checkpoint c;
    c.generator = pair.g;
    c.discriminator = pair.d;
    c.adam_generator = pair.adam_g;
    c.adam_discriminator = pair.adam_d;
    c.seed = pair.seed;
    c.iteration = pair.iteration;
    return c;
}

Matrix generate(const Network& g, const Matrix& latents) { return forward(g, latents); }

double mean_probability(const Network& d, const Matrix& x) {
    const Matrix p = forward(d, x);
    return std::accumulate(p.data.begin(), p.data.end(), 0.0) / static_cast<double>(p.rows);
}

TrainResult train(const TrainConfig& cfg, const TrainObserver& observer) {
    GanPair pair = make_pair(cfg);
    TrainResult result;
    const std::size_t n = cfg.batch_size;
    const Matrix probe = latent_sample(cfg.latent_dim, kProbeSeed, kProbeCount).data;

    for (std::uint64_t it = 1; it <= cfg.iterations; ++it) {
        // Discriminator step: real rows first, then fakes, in one pass.
        const Matrix real = real_batch(cfg.dataset, stream_seed(cfg.seed, kRealBatch, it), n).data;
        const Matrix z_d = latent_sample(cfg.latent_dim, stream_seed(cfg.seed, kLatentD, it), n).data;
        const Matrix fake = forward(pair.g, z_d);
        Tape d_tape;
        const Matrix p_d = forward(pair.d, stack(real, fake), &d_tape);
        const std::span<const double> p_real(p_d.data.data(), n);
        const std::span<const double> p_fake(p_d.data.data() + n, n);
        const double dl = d_loss(p_real, p_fake);
        if (std::isnan(dl)) throw NumericError("discriminator loss is NaN at iteration " + std::to_string(it));
        Matrix d_up(2 * n, 1);
        d_loss_grad(p_real, p_fake, std::span(d_up.data).first(n), std::span(d_up.data).subspan(n));
        backward(pair.d, d_tape, d_up);
        adam_step(pair.d, pair.adam_d);

        // Generator step through a discriminator that only yields input gradients.
        const Matrix z_g = latent_sample(cfg.latent_dim, stream_seed(cfg.seed, kLatentG, it), n).data;
        Tape g_tape;
        Tape dg_tape;
        const Matrix x = forward(pair.g, z_g, &g_tape);
        const Matrix p_g = forward(pair.d, x, &dg_tape);
        const double gl = g_loss_standard(p_g.data);
        if (std::isnan(gl)) throw NumericError("generator loss is NaN at iteration " + std::to_string(it));
        const Matrix dx = input_gradient(pair.d, dg_tape, column(g_loss_standard_grad(p_g.data)));
        backward(pair.g, g_tape, dx);
        const double gn = grad_norm(pair.g);
        adam_step(pair.g, pair.adam_g);
        pair.iteration = it;

        MetricsRecord rec;
        rec.iteration = it;
        rec.g_loss = gl;
        rec.mean_fake_prob = std::accumulate(p_g.data.begin(), p_g.data.end(), 0.0) / static_cast<double>(n);
        rec.grad_norm_g = gn;
        rec.diversity = diversity(forward(pair.g, probe));
        result.metrics.push_back(rec);
        if (observer) observer(rec);

        if (it % cfg.checkpoint_every == 0 || it == cfg.iterations) result.checkpoints.push_back(to_checkpoint(pair));
    }
    result.final_checkpoint = to_checkpoint(pair);
    return result;
}

SampleBatch sample_generator(const Checkpoint& ckpt, std::size_t n, std::uint64_t seed) {
    if (!ckpt.generator) throw FormatError(FormatErrorCode::malformed, "checkpoint has no generator");
    const Network& g = *ckpt.generator;
    SampleBatch out;
    out.domain = Domain::generated;
    out.data = forward(g, latent_sample(g.in_dim(), seed, n).data);
    return out;
}

}  // namespace uagan
