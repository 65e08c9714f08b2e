#pragma once

// Inner-loop kernels shared by the dense layers, the optimizer and the
// diversity metric.
//
// Every backend computes bit-identical results. Reductions use four lane
// accumulators (lane l sums elements i with i % 4 == l over the full blocks
// of four), folded as (s0 + s2) + (s1 + s3), followed by a sequential tail.
// No backend fuses multiply-add. The scalar backend is the reference; the
// vector backends must match it exactly, which is what keeps checkpoints and
// metrics byte-reproducible across machines with different instruction sets.

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace uagan::simd {

enum class Backend { scalar, avx2, neon };

struct AdamCoeffs {
    double lr;
    double beta1;
    double beta2;
    double eps;
    double bias_correction1;  // 1 - beta1^t
    double bias_correction2;  // 1 - beta2^t
};

struct KernelTable {
    Backend backend;
    double (*dot)(const double* a, const double* b, std::size_t n);
    double (*squared_distance)(const double* a, const double* b, std::size_t n);
    void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
    void (*adam_update)(double* param, const double* grad, double* m, double* v, std::size_t n,
                        const AdamCoeffs& c);
};

const KernelTable& scalar_kernels() noexcept;
#if defined(__x86_64__) || defined(_M_X64)
const KernelTable& avx2_kernels() noexcept;
#endif
#if defined(__aarch64__)
const KernelTable& neon_kernels() noexcept;
#endif

std::string_view name(Backend b) noexcept;

// Backends the running CPU supports, scalar first.
std::vector<Backend> available_backends();
bool is_available(Backend b);

// The table used by the library. Defaults to the widest available backend;
// the UAGAN_KERNELS environment variable (scalar|avx2|neon) overrides it.
const KernelTable& active() noexcept;
Backend active_backend() noexcept;
// Throws ConfigError when the backend is not available on this CPU.
void set_backend(Backend b);

inline double dot(std::span<const double> a, std::span<const double> b) {
    return active().dot(a.data(), b.data(), a.size());
}
inline double squared_distance(std::span<const double> a, std::span<const double> b) {
    return active().squared_distance(a.data(), b.data(), a.size());
}
inline void axpy(double alpha, std::span<const double> x, std::span<double> y) {
    active().axpy(alpha, x.data(), y.data(), x.size());
}

}  // namespace uagan::simd
