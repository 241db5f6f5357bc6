// Compiled with -mavx2 (and without -mfma); only called after a runtime CPU
// check.

#include "kernels_impl.hpp"

#if EARAC_X86

#include <immintrin.h>

namespace earac::kernels::avx2 {

void dot3(std::span<const double> ax, std::span<const double> ay, std::span<const double> az, const double (&b)[3],
          std::span<double> out) {
    const std::size_t n = out.size();
    const __m256d bx = _mm256_set1_pd(b[0]);
    const __m256d by = _mm256_set1_pd(b[1]);
    const __m256d bz = _mm256_set1_pd(b[2]);
    const __m256d hi = _mm256_set1_pd(1.0);
    const __m256d lo = _mm256_set1_pd(-1.0);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d xx = _mm256_mul_pd(_mm256_loadu_pd(ax.data() + i), bx);
        const __m256d yy = _mm256_mul_pd(_mm256_loadu_pd(ay.data() + i), by);
        const __m256d zz = _mm256_mul_pd(_mm256_loadu_pd(az.data() + i), bz);
        __m256d raw = _mm256_add_pd(_mm256_add_pd(xx, yy), zz);
        raw = _mm256_min_pd(_mm256_max_pd(raw, lo), hi);
        _mm256_storeu_pd(out.data() + i, raw);
    }
    for (; i < n; ++i) {
        const double raw = ax[i] * b[0] + ay[i] * b[1] + az[i] * b[2];
        out[i] = raw > 1.0 ? 1.0 : (raw < -1.0 ? -1.0 : raw);
    }
}

void conditioned_bits(std::span<const std::uint8_t> first, std::span<const double> u, std::span<const double> cosine,
                      std::span<std::uint8_t> out) {
    const std::size_t n = out.size();
    const __m256d half = _mm256_set1_pd(0.5);
    const __m256d one = _mm256_set1_pd(1.0);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d p = _mm256_mul_pd(half, _mm256_add_pd(one, _mm256_loadu_pd(cosine.data() + i)));
        const __m256d agree = _mm256_cmp_pd(_mm256_loadu_pd(u.data() + i), p, _CMP_LT_OQ);
        const int mask = _mm256_movemask_pd(agree);
        for (int lane = 0; lane < 4; ++lane) {
            out[i + lane] = static_cast<std::uint8_t>(first[i + lane] ^ (((mask >> lane) & 1) ^ 1));
        }
    }
    for (; i < n; ++i) {
        const bool agree = u[i] < 0.5 * (1.0 + cosine[i]);
        out[i] = static_cast<std::uint8_t>(first[i] ^ (agree ? 0 : 1));
    }
}

void xor_into(std::span<std::uint8_t> acc, std::span<const std::uint8_t> src) {
    const std::size_t n = acc.size();
    std::size_t i = 0;
    for (; i + 32 <= n; i += 32) {
        auto* dst = reinterpret_cast<__m256i*>(acc.data() + i);
        const __m256i a = _mm256_loadu_si256(dst);
        const __m256i s = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(src.data() + i));
        _mm256_storeu_si256(dst, _mm256_xor_si256(a, s));
    }
    for (; i < n; ++i) acc[i] ^= src[i];
}

std::size_t count_equal(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b) {
    const std::size_t n = a.size();
    std::size_t total = 0;
    std::size_t i = 0;
    for (; i + 32 <= n; i += 32) {
        const __m256i va = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(a.data() + i));
        const __m256i vb = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(b.data() + i));
        const auto mask = static_cast<unsigned>(_mm256_movemask_epi8(_mm256_cmpeq_epi8(va, vb)));
        total += static_cast<std::size_t>(__builtin_popcount(mask));
    }
    for (; i < n; ++i) total += a[i] == b[i];
    return total;
}

}  // namespace earac::kernels::avx2

#endif
