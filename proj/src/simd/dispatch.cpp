#include <atomic>
#include <cstdlib>
#include <string>

#include "uagan/errors.hpp"
#include "uagan/simd/kernels.hpp"

namespace uagan::simd {
namespace {

const KernelTable* table_for(Backend b) noexcept {
    switch (b) {
        case Backend::scalar: return &scalar_kernels();
#if defined(__x86_64__) || defined(_M_X64)
        case Backend::avx2: return &avx2_kernels();
#endif
#if defined(__aarch64__)
        case Backend::neon: return &neon_kernels();
#endif
        default: return nullptr;
    }
}

bool cpu_supports(Backend b) noexcept {
    switch (b) {
        case Backend::scalar: return true;
        case Backend::avx2:
#if (defined(__x86_64__) || defined(_M_X64)) && (defined(__GNUC__) || defined(__clang__))
            return __builtin_cpu_supports("avx2");
#else
            return false;
#endif
        case Backend::neon:
#if defined(__aarch64__)
            return true;
#else
            return false;
#endif
    }
    return false;
}

const KernelTable* initial_table() noexcept {
    if (const char* env = std::getenv("UAGAN_KERNELS")) {
        const std::string want(env);
        for (Backend b : {Backend::scalar, Backend::avx2, Backend::neon}) {
            if (want == name(b) && cpu_supports(b)) return table_for(b);
        }
    }
    for (Backend b : {Backend::avx2, Backend::neon}) {
        if (cpu_supports(b)) return table_for(b);
    }
    return &scalar_kernels();
}

std::atomic<const KernelTable*>& slot() noexcept {
    static std::atomic<const KernelTable*> current{initial_table()};
    return current;
}

}  // namespace

std::string_view name(Backend b) noexcept {
    switch (b) {
        case Backend::scalar: return "scalar";
        case Backend::avx2: return "avx2";
        case Backend::neon: return "neon";
    }
    return "unknown";
}

bool is_available(Backend b) { return cpu_supports(b) && table_for(b) != nullptr; }

std::vector<Backend> available_backends() {
    std::vector<Backend> out;
    for (Backend b : {Backend::scalar, Backend::avx2, Backend::neon}) {
        if (is_available(b)) out.push_back(b);
    }
    return out;
}

const KernelTable& active() noexcept { return *slot().load(std::memory_order_relaxed); }

Backend active_backend() noexcept { return active().backend; }

void set_backend(Backend b) {
    if (!is_available(b)) {
        throw ConfigError("kernel backend '" + std::string(name(b)) + "' is not available on this CPU");
    }
    slot().store(table_for(b), std::memory_order_relaxed);
}

}  // namespace uagan::simd
