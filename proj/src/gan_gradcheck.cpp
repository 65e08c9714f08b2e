#include <numeric>

#include "uagan/gan_train.hpp"
#include "uagan/losses.hpp"
#include "uagan/rng.hpp"

namespace uagan {

namespace {

Matrix column(std::span<const double> v) {
    Matrix m(v.size(), 1);
    std::copy(v.begin(), v.end(), m.data.begin());
    return m;
}

// Loss of G's samples under D, back-propagated into G only.
LossAndGrad generator_objective(const Network& d, const Matrix& z, bool inverted) {
    return [&d, z, inverted](Network& g) {
        Tape g_tape;
        Tape d_tape;
        const Matrix x = forward(g, z, &g_tape);
        const Matrix p = forward(d, x, &d_tape);
        const double loss = inverted ? inverted_g_loss(p.data, InvertedVariant::amplifying) : g_loss_standard(p.data);
        const auto up = inverted ? inverted_g_loss_grad(p.data, InvertedVariant::amplifying)
                                 : g_loss_standard_grad(p.data);
        backward(g, g_tape, input_gradient(d, d_tape, column(up)));
        return loss;
    };
}

}  // namespace

std::vector<std::pair<std::string, GradCheckResult>> gan_gradient_check(const TrainConfig& cfg, std::size_t n_probes,
                                                                        double h, std::uint64_t seed) {
    GanPair pair = make_pair(cfg);
    const std::size_t n = 16;
    const Matrix z = latent_sample(cfg.latent_dim, mix_seed(seed, 1), n).data;
    Matrix batch(2 * n, data_dim(cfg.dataset));
    {
        const Matrix real = cfg.dataset == Domain::sprites ? sprites_sample(SpriteConfig{}, mix_seed(seed, 2), n).data
                                                           : ring2d_sample(RingConfig{}, mix_seed(seed, 2), n).data;
        const Matrix fake = forward(pair.g, z);
        std::copy(real.data.begin(), real.data.end(), batch.data.begin());
        std::copy(fake.data.begin(), fake.data.end(), batch.data.begin() + static_cast<std::ptrdiff_t>(real.data.size()));
    }

    const LossAndGrad d_objective = [&batch, n](Network& d) {
        Tape tape;
        const Matrix p = forward(d, batch, &tape);
        const std::span<const double> real(p.data.data(), n);
        const std::span<const double> fake(p.data.data() + n, n);
        Matrix up(2 * n, 1);
        d_loss_grad(real, fake, std::span(up.data).first(n), std::span(up.data).subspan(n));
        backward(d, tape, up);
        return d_loss(real, fake);
    };

    std::vector<std::pair<std::string, GradCheckResult>> out;
    out.emplace_back("discriminator", gradient_check(pair.d, d_objective, n_probes, h, mix_seed(seed, 3)));
    out.emplace_back("generator", gradient_check(pair.g, generator_objective(pair.d, z, false), n_probes, h,
                                                 mix_seed(seed, 4)));
    out.emplace_back("generator_inverted", gradient_check(pair.g, generator_objective(pair.d, z, true), n_probes, h,
                                                          mix_seed(seed, 5)));
    return out;
}

}  // namespace uagan
