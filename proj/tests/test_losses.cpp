#include <doctest.h>

#include <cmath>
#include <vector>

#include "uagan/errors.hpp"
#include "uagan/losses.hpp"

using namespace uagan;

TEST_CASE("loss anchors") {
    const std::vector<double> half(5, 0.5);
    CHECK(std::abs(d_loss(half, half) - 2 * std::log(2.0)) <= 1e-12);
    CHECK(std::abs(g_loss_standard(half) - std::log(2.0)) <= 1e-12);
    CHECK(std::abs(inverted_g_loss(half, InvertedVariant::amplifying) + std::log(2.0)) <= 1e-12);
    CHECK(std::abs(inverted_g_loss(half, InvertedVariant::saturating) - std::log(2.0)) <= 1e-12);

    const std::vector<double> r{0.75}, f{0.25};
    CHECK(d_loss(r, f) == doctest::Approx(-2 * std::log(0.75)));
    CHECK(d_loss(r, f) == doctest::Approx(0.5754).epsilon(1e-4));
    const std::vector<double> pair{0.25, 0.75};
    CHECK(g_loss_standard(pair) == doctest::Approx(0.8370).epsilon(1e-4));

    const std::vector<double> one{1.0}, zero{0.0};
    CHECK(d_loss(one, zero) == doctest::Approx(2e-7).epsilon(1e-6));
    CHECK(g_loss_standard(one) == doctest::Approx(1e-7).epsilon(1e-6));
    CHECK(inverted_g_loss(zero, InvertedVariant::amplifying) == doctest::Approx(std::log(1e-7)));
    CHECK(inverted_g_loss(zero, InvertedVariant::amplifying) == doctest::Approx(-16.118).epsilon(1e-4));
    CHECK(inverted_g_loss(zero, InvertedVariant::saturating) == doctest::Approx(1e-7).epsilon(1e-6));
}

TEST_CASE("loss errors") {
    const std::vector<double> empty;
    const std::vector<double> half{0.5};
    CHECK_THROWS_AS(d_loss(empty, half), UsageError);
    CHECK_THROWS_AS(g_loss_standard(empty), UsageError);
    CHECK_THROWS_AS(inverted_g_loss(empty, InvertedVariant::amplifying), UsageError);
    CHECK_THROWS_AS(g_loss_standard(std::vector<double>{1.5}), UsageError);
    CHECK_THROWS_AS(parse_variant("hinge"), ConfigError);
    CHECK(parse_variant("saturating") == InvertedVariant::saturating);
    CHECK(to_string(InvertedVariant::amplifying) == "amplifying");
}

TEST_CASE("loss gradients match finite differences") {
    const std::vector<double> p{0.2, 0.45, 0.9};
    const double h = 1e-6;
    for (auto variant : {InvertedVariant::amplifying, InvertedVariant::saturating}) {
        const auto g = inverted_g_loss_grad(p, variant);
        for (std::size_t i = 0; i < p.size(); ++i) {
            auto up = p, dn = p;
            up[i] += h;
            dn[i] -= h;
            const double fd = (inverted_g_loss(up, variant) - inverted_g_loss(dn, variant)) / (2 * h);
            CHECK(g[i] == doctest::Approx(fd).epsilon(1e-6));
        }
    }
    const auto gs = g_loss_standard_grad(p);
    std::vector<double> gr(3), gf(3);
    d_loss_grad(p, p, gr, gf);
    for (std::size_t i = 0; i < p.size(); ++i) {
        CHECK(gs[i] == doctest::Approx(-1.0 / (3 * p[i])));
        CHECK(gr[i] == doctest::Approx(-1.0 / (3 * p[i])));
        CHECK(gf[i] == doctest::Approx(1.0 / (3 * (1 - p[i]))));
    }
}

TEST_CASE("amplifying gradient dominates saturating below one half") {
    std::vector<double> p;
    for (int i = 1; i < 50; ++i) p.push_back(i / 100.0);
    p.push_back(1e-9);
    const auto a = inverted_g_loss_grad(p, InvertedVariant::amplifying);
    const auto s = inverted_g_loss_grad(p, InvertedVariant::saturating);
    for (std::size_t i = 0; i < p.size(); ++i) CHECK(std::abs(a[i]) >= std::abs(s[i]));
}
