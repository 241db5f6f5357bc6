#include "kernels_impl.hpp"

namespace earac::kernels::scalar {

void dot3(std::span<const double> ax, std::span<const double> ay, std::span<const double> az, const double (&b)[3],
          std::span<double> out) {
    for (std::size_t i = 0; i < out.size(); ++i) {
        const double raw = ax[i] * b[0] + ay[i] * b[1] + az[i] * b[2];
        out[i] = raw > 1.0 ? 1.0 : (raw < -1.0 ? -1.0 : raw);
    }
}

void conditioned_bits(std::span<const std::uint8_t> first, std::span<const double> u, std::span<const double> cosine,
                      std::span<std::uint8_t> out) {
    for (std::size_t i = 0; i < out.size(); ++i) {
        const bool agree = u[i] < 0.5 * (1.0 + cosine[i]);
        out[i] = static_cast<std::uint8_t>(first[i] ^ (agree ? 0 : 1));
    }
}

void xor_into(std::span<std::uint8_t> acc, std::span<const std::uint8_t> src) {
    for (std::size_t i = 0; i < acc.size(); ++i) acc[i] ^= src[i];
}

std::size_t count_equal(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b) {
    std::size_t n = 0;
    for (std::size_t i = 0; i < a.size(); ++i) n += a[i] == b[i];
    return n;
}

}  // namespace earac::kernels::scalar
