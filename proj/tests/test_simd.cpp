#include <doctest.h>

#include <bit>
#include <cmath>
#include <cstdlib>

#include "uagan/errors.hpp"
#include "uagan/rng.hpp"
#include "uagan/simd/kernels.hpp"

using namespace uagan;
using namespace uagan::simd;

namespace {

std::vector<double> random_vec(std::size_t n, Rng& rng) {
    std::vector<double> v(n);
    for (auto& x : v) x = rng.normal() * std::exp(rng.uniform(-3, 3));
    return v;
}

bool same_bits(double a, double b) { return std::bit_cast<std::uint64_t>(a) == std::bit_cast<std::uint64_t>(b); }

bool same_bits(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (!same_bits(a[i], b[i])) return false;
    }
    return true;
}

const KernelTable& table(Backend b) {
    switch (b) {
#if defined(__x86_64__) || defined(_M_X64)
        case Backend::avx2: return avx2_kernels();
#endif
#if defined(__aarch64__)
        case Backend::neon: return neon_kernels();
#endif
        default: return scalar_kernels();
    }
}

}  // namespace

TEST_CASE("scalar kernels match naive references") {
    const KernelTable& k = scalar_kernels();
    const double a[] = {1, 2, 3, 4, 5};
    const double b[] = {5, 4, 3, 2, 1};
    CHECK(k.dot(a, b, 5) == 35.0);
    CHECK(k.squared_distance(a, b, 5) == 40.0);
    double y[] = {1, 1, 1, 1, 1};
    k.axpy(2.0, a, y, 5);
    CHECK(y[4] == 11.0);
    CHECK(k.dot(a, b, 0) == 0.0);
}

TEST_CASE("every available backend is bit-identical to scalar") {
    Rng rng(2024);
    const KernelTable& ref = scalar_kernels();
    for (Backend be : available_backends()) {
        CAPTURE(name(be));
        const KernelTable& k = table(be);
        CHECK(k.backend == be);
        for (std::size_t n : {0, 1, 3, 4, 5, 7, 8, 15, 16, 17, 63, 64, 65, 255, 256, 1000}) {
            CAPTURE(n);
            const auto a = random_vec(n, rng);
            const auto b = random_vec(n, rng);
            CHECK(same_bits(ref.dot(a.data(), b.data(), n), k.dot(a.data(), b.data(), n)));
            CHECK(same_bits(ref.squared_distance(a.data(), b.data(), n), k.squared_distance(a.data(), b.data(), n)));

            auto y1 = b;
            auto y2 = b;
            ref.axpy(-0.37, a.data(), y1.data(), n);
            k.axpy(-0.37, a.data(), y2.data(), n);
            CHECK(same_bits(y1, y2));

            const AdamCoeffs c{1e-3, 0.5, 0.999, 1e-8, 1 - 0.25, 1 - 0.999 * 0.999};
            auto p1 = a, p2 = a;
            auto m1 = b, m2 = b;
            std::vector<double> v1(n), v2(n);
            for (std::size_t i = 0; i < n; ++i) v1[i] = v2[i] = std::abs(b[i]);
            ref.adam_update(p1.data(), b.data(), m1.data(), v1.data(), n, c);
            k.adam_update(p2.data(), b.data(), m2.data(), v2.data(), n, c);
            CHECK(same_bits(p1, p2));
            CHECK(same_bits(m1, m2));
            CHECK(same_bits(v1, v2));
        }
    }
}

TEST_CASE("backend selection") {
    const Backend original = active_backend();
    CHECK(is_available(Backend::scalar));
    set_backend(Backend::scalar);
    CHECK(active_backend() == Backend::scalar);
    CHECK(active().backend == Backend::scalar);
    for (Backend be : {Backend::avx2, Backend::neon}) {
        if (!is_available(be)) CHECK_THROWS_AS(set_backend(be), ConfigError);
    }
    set_backend(original);
    CHECK(active_backend() == original);
}
