#include <cstdlib>
#include <stdexcept>
#include <string>

#include "kernels_impl.hpp"

namespace earac::kernels {

namespace {

constexpr KernelTable kScalar{Backend::Scalar, scalar::dot3, scalar::conditioned_bits, scalar::xor_into,
                              scalar::count_equal};

#if EARAC_X86
constexpr KernelTable kAvx2{Backend::Avx2, avx2::dot3, avx2::conditioned_bits, avx2::xor_into, avx2::count_equal};
#endif

#if EARAC_NEON
constexpr KernelTable kNeon{Backend::Neon, neon::dot3, neon::conditioned_bits, neon::xor_into, neon::count_equal};
#endif

bool supported(Backend backend) {
    switch (backend) {
        case Backend::Scalar: return true;
        case Backend::Avx2:
#if EARAC_X86 && (defined(__GNUC__) || defined(__clang__))
            return __builtin_cpu_supports("avx2");
#else
            return false;
#endif
        case Backend::Neon: return EARAC_NEON != 0;
    }
    return false;
}

}  // namespace

std::string_view backend_name(Backend backend) {
    switch (backend) {
        case Backend::Scalar: return "scalar";
        case Backend::Avx2: return "avx2";
        case Backend::Neon: return "neon";
    }
    return "unknown";
}

const KernelTable& scalar_kernels() { return kScalar; }

std::vector<Backend> available_backends() {
    std::vector<Backend> out;
    for (Backend b : {Backend::Scalar, Backend::Avx2, Backend::Neon}) {
        if (supported(b)) out.push_back(b);
    }
    return out;
}

const KernelTable& kernels_for(Backend backend) {
    if (!supported(backend)) {
        throw std::invalid_argument("kernel backend '" + std::string(backend_name(backend)) + "' is not available");
    }
    switch (backend) {
#if EARAC_X86
        case Backend::Avx2: return kAvx2;
#endif
#if EARAC_NEON
        case Backend::Neon: return kNeon;
#endif
        default: return kScalar;
    }
}

const KernelTable& best_kernels() {
    static const KernelTable& chosen = [&]() -> const KernelTable& {
        if (const char* env = std::getenv("EARAC_KERNELS")) {
            const std::string want(env);
            for (Backend b : available_backends()) {
                if (backend_name(b) == want) return kernels_for(b);
            }
        }
        return kernels_for(available_backends().back());
    }();
    return chosen;
}

}  // namespace earac::kernels
