#pragma once

// Batch kernels for the Monte Carlo inner loop.
//
// Each kernel has a scalar reference implementation and, where the build and
// CPU allow it, an AVX2 (x86-64) or NEON (aarch64) variant. Every variant
// must produce bit-identical output to the scalar one: the floating-point
// expressions are evaluated in the same order, with no fused multiply-add
// (the whole project is built with -ffp-contract=off).

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace earac::kernels {

enum class Backend { Scalar, Avx2, Neon };

std::string_view backend_name(Backend backend);

struct KernelTable {
    Backend backend;

    // out[i] = clamp(ax[i] * b[0] + ay[i] * b[1] + az[i] * b[2], -1, 1)
    void (*dot3)(std::span<const double> ax, std::span<const double> ay, std::span<const double> az,
                 const double (&b)[3], std::span<double> out);

    // Second outcome of a singlet pair given the first:
    // out[i] = first[i] xor (u[i] < (1 + cosine[i]) / 2 ? 0 : 1)
    void (*conditioned_bits)(std::span<const std::uint8_t> first, std::span<const double> u,
                             std::span<const double> cosine, std::span<std::uint8_t> out);

    // acc[i] ^= src[i]
    void (*xor_into)(std::span<std::uint8_t> acc, std::span<const std::uint8_t> src);

    // number of i with a[i] == b[i]
    std::size_t (*count_equal)(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b);
};

const KernelTable& scalar_kernels();

// Backends compiled in and supported by the running CPU, scalar first.
std::vector<Backend> available_backends();

// Throws std::invalid_argument if the backend is unavailable here.
const KernelTable& kernels_for(Backend backend);

// Widest available backend. EARAC_KERNELS=scalar|avx2|neon overrides.
const KernelTable& best_kernels();

}  // namespace earac::kernels
