#include "kernels_impl.hpp"

#if EARAC_NEON

#include <arm_neon.h>

namespace earac::kernels::neon {

void dot3(std::span<const double> ax, std::span<const double> ay, std::span<const double> az, const double (&b)[3],
          std::span<double> out) {
    const std::size_t n = out.size();
    const float64x2_t bx = vdupq_n_f64(b[0]);
    const float64x2_t by = vdupq_n_f64(b[1]);
    const float64x2_t bz = vdupq_n_f64(b[2]);
    const float64x2_t hi = vdupq_n_f64(1.0);
    const float64x2_t lo = vdupq_n_f64(-1.0);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        // Separate multiply and add; vfmaq would round differently.
        const float64x2_t xx = vmulq_f64(vld1q_f64(ax.data() + i), bx);
        const float64x2_t yy = vmulq_f64(vld1q_f64(ay.data() + i), by);
        const float64x2_t zz = vmulq_f64(vld1q_f64(az.data() + i), bz);
        float64x2_t raw = vaddq_f64(vaddq_f64(xx, yy), zz);
        raw = vminq_f64(vmaxq_f64(raw, lo), hi);
        vst1q_f64(out.data() + i, raw);
    }
    for (; i < n; ++i) {
        const double raw = ax[i] * b[0] + ay[i] * b[1] + az[i] * b[2];
        out[i] = raw > 1.0 ? 1.0 : (raw < -1.0 ? -1.0 : raw);
    }
}

void conditioned_bits(std::span<const std::uint8_t> first, std::span<const double> u, std::span<const double> cosine,
                      std::span<std::uint8_t> out) {
    const std::size_t n = out.size();
    const float64x2_t half = vdupq_n_f64(0.5);
    const float64x2_t one = vdupq_n_f64(1.0);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const float64x2_t p = vmulq_f64(half, vaddq_f64(one, vld1q_f64(cosine.data() + i)));
        const uint64x2_t agree = vcltq_f64(vld1q_f64(u.data() + i), p);
        out[i] = static_cast<std::uint8_t>(first[i] ^ (vgetq_lane_u64(agree, 0) ? 0 : 1));
        out[i + 1] = static_cast<std::uint8_t>(first[i + 1] ^ (vgetq_lane_u64(agree, 1) ? 0 : 1));
    }
    for (; i < n; ++i) {
        const bool agree = u[i] < 0.5 * (1.0 + cosine[i]);
        out[i] = static_cast<std::uint8_t>(first[i] ^ (agree ? 0 : 1));
    }
}

void xor_into(std::span<std::uint8_t> acc, std::span<const std::uint8_t> src) {
    const std::size_t n = acc.size();
    std::size_t i = 0;
    for (; i + 16 <= n; i += 16) {
        vst1q_u8(acc.data() + i, veorq_u8(vld1q_u8(acc.data() + i), vld1q_u8(src.data() + i)));
    }
    for (; i < n; ++i) acc[i] ^= src[i];
}

std::size_t count_equal(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b) {
    const std::size_t n = a.size();
    std::size_t total = 0;
    std::size_t i = 0;
    for (; i + 16 <= n; i += 16) {
        const uint8x16_t eq = vceqq_u8(vld1q_u8(a.data() + i), vld1q_u8(b.data() + i));
        // 0xFF per equal lane -> 1 per lane
        total += vaddvq_u8(vshrq_n_u8(eq, 7));
    }
    for (; i < n; ++i) total += a[i] == b[i];
    return total;
}

}  // namespace earac::kernels::neon

#endif
