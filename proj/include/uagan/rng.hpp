#pragma once

#include <cstdint>
#include <random>

namespace uagan {

// Portable random stream.
//
// Bits come from std::mt19937_64, whose output sequence is fixed by the C++
// standard. The conversions below are spelled out here (instead of using
// std::uniform_real_distribution / std::normal_distribution, whose
// algorithms are implementation-defined) so another implementation can
// reproduce every stream:
//
//   uniform01()  = (next_u64() >> 11) * 2^-53            in [0, 1)
//   uniform(a,b) = a + (b - a) * uniform01()
//   normal()     = Marsaglia polar method on u,v = 2*uniform01()-1,
//                  rejecting s = u^2+v^2 outside (0,1); returns
//                  u*sqrt(-2 ln s / s) and caches v*sqrt(-2 ln s / s)
//   below(k)     = uniform01() * k truncated (k small, bias irrelevant)
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }
    double uniform01();
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }
    double normal();
    std::uint64_t below(std::uint64_t k);

private:
    std::mt19937_64 engine_;
    double cached_normal_ = 0.0;
    bool has_cached_ = false;
};

// SplitMix64 finalizer; derives independent stream seeds from one run seed.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) noexcept;

}  // namespace uagan
