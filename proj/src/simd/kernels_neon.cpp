#if defined(__aarch64__)
#include <arm_neon.h>

#include <cmath>

#include "uagan/simd/kernels.hpp"

namespace uagan::simd {
namespace {

// Lanes {s0,s1} and {s2,s3} live in two registers; adding them gives
// {s0+s2, s1+s3}, the same fold as the scalar reference.
inline double fold(float64x2_t acc01, float64x2_t acc23) {
    const float64x2_t pair = vaddq_f64(acc01, acc23);
    return vgetq_lane_f64(pair, 0) + vgetq_lane_f64(pair, 1);
}

double dot_neon(const double* a, const double* b, std::size_t n) {
    float64x2_t acc01 = vdupq_n_f64(0.0);
    float64x2_t acc23 = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        acc01 = vaddq_f64(acc01, vmulq_f64(vld1q_f64(a + i), vld1q_f64(b + i)));
        acc23 = vaddq_f64(acc23, vmulq_f64(vld1q_f64(a + i + 2), vld1q_f64(b + i + 2)));
    }
    double r = fold(acc01, acc23);
    for (; i < n; ++i) r += a[i] * b[i];
    return r;
}

double squared_distance_neon(const double* a, const double* b, std::size_t n) {
    float64x2_t acc01 = vdupq_n_f64(0.0);
    float64x2_t acc23 = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const float64x2_t d01 = vsubq_f64(vld1q_f64(a + i), vld1q_f64(b + i));
        const float64x2_t d23 = vsubq_f64(vld1q_f64(a + i + 2), vld1q_f64(b + i + 2));
        acc01 = vaddq_f64(acc01, vmulq_f64(d01, d01));
        acc23 = vaddq_f64(acc23, vmulq_f64(d23, d23));
    }
    double r = fold(acc01, acc23);
    for (; i < n; ++i) {
        const double d = a[i] - b[i];
        r += d * d;
    }
    return r;
}

void axpy_neon(double alpha, const double* x, double* y, std::size_t n) {
    const float64x2_t va = vdupq_n_f64(alpha);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        vst1q_f64(y + i, vaddq_f64(vld1q_f64(y + i), vmulq_f64(va, vld1q_f64(x + i))));
    }
    for (; i < n; ++i) y[i] += alpha * x[i];
}

void adam_update_neon(double* param, const double* grad, double* m, double* v, std::size_t n,
                      const AdamCoeffs& c) {
    const double one_minus_b1 = 1.0 - c.beta1;
    const double one_minus_b2 = 1.0 - c.beta2;
    const float64x2_t b1 = vdupq_n_f64(c.beta1);
    const float64x2_t b2 = vdupq_n_f64(c.beta2);
    const float64x2_t omb1 = vdupq_n_f64(one_minus_b1);
    const float64x2_t omb2 = vdupq_n_f64(one_minus_b2);
    const float64x2_t bc1 = vdupq_n_f64(c.bias_correction1);
    const float64x2_t bc2 = vdupq_n_f64(c.bias_correction2);
    const float64x2_t lr = vdupq_n_f64(c.lr);
    const float64x2_t eps = vdupq_n_f64(c.eps);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const float64x2_t g = vld1q_f64(grad + i);
        const float64x2_t vm = vaddq_f64(vmulq_f64(b1, vld1q_f64(m + i)), vmulq_f64(omb1, g));
        const float64x2_t vv = vaddq_f64(vmulq_f64(b2, vld1q_f64(v + i)), vmulq_f64(omb2, vmulq_f64(g, g)));
        vst1q_f64(m + i, vm);
        vst1q_f64(v + i, vv);
        const float64x2_t m_hat = vdivq_f64(vm, bc1);
        const float64x2_t v_hat = vdivq_f64(vv, bc2);
        const float64x2_t step = vdivq_f64(vmulq_f64(lr, m_hat), vaddq_f64(vsqrtq_f64(v_hat), eps));
        vst1q_f64(param + i, vsubq_f64(vld1q_f64(param + i), step));
    }
    for (; i < n; ++i) {
        const double g = grad[i];
        m[i] = c.beta1 * m[i] + one_minus_b1 * g;
        v[i] = c.beta2 * v[i] + one_minus_b2 * (g * g);
        const double m_hat = m[i] / c.bias_correction1;
        const double v_hat = v[i] / c.bias_correction2;
        param[i] -= c.lr * m_hat / (std::sqrt(v_hat) + c.eps);
    }
}

constexpr KernelTable kNeon{
    Backend::neon, dot_neon, squared_distance_neon, axpy_neon, adam_update_neon,
};

}  // namespace

const KernelTable& neon_kernels() noexcept { return kNeon; }

}  // namespace uagan::simd
#endif
