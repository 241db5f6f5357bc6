#pragma once

#include "earac/kernels.hpp"

#if defined(__x86_64__) || defined(_M_X64)
#define EARAC_X86 1
#else
#define EARAC_X86 0
#endif

#if defined(__aarch64__) || defined(_M_ARM64)
#define EARAC_NEON 1
#else
#define EARAC_NEON 0
#endif

namespace earac::kernels {

namespace scalar {
void dot3(std::span<const double> ax, std::span<const double> ay, std::span<const double> az, const double (&b)[3],
          std::span<double> out);
void conditioned_bits(std::span<const std::uint8_t> first, std::span<const double> u, std::span<const double> cosine,
                      std::span<std::uint8_t> out);
void xor_into(std::span<std::uint8_t> acc, std::span<const std::uint8_t> src);
std::size_t count_equal(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b);
}  // namespace scalar

#if EARAC_X86
namespace avx2 {
void dot3(std::span<const double> ax, std::span<const double> ay, std::span<const double> az, const double (&b)[3],
          std::span<double> out);
void conditioned_bits(std::span<const std::uint8_t> first, std::span<const double> u, std::span<const double> cosine,
                      std::span<std::uint8_t> out);
void xor_into(std::span<std::uint8_t> acc, std::span<const std::uint8_t> src);
std::size_t count_equal(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b);
}  // namespace avx2
#endif

#if EARAC_NEON
namespace neon {
void dot3(std::span<const double> ax, std::span<const double> ay, std::span<const double> az, const double (&b)[3],
          std::span<double> out);
void conditioned_bits(std::span<const std::uint8_t> first, std::span<const double> u, std::span<const double> cosine,
                      std::span<std::uint8_t> out);
void xor_into(std::span<std::uint8_t> acc, std::span<const std::uint8_t> src);
std::size_t count_equal(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b);
}  // namespace neon
#endif

}  // namespace earac::kernels
