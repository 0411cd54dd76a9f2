#if defined(__x86_64__) || defined(_M_X64)

#include "mdl/kernels.hpp"

#include <bit>
#include <immintrin.h>

// Compiled with -mavx2; only reached after a cpuid check.

namespace mdl::kern {
namespace {

inline __m256i popcount_epi64(__m256i v) {
    // nibble lookup + sad
    const __m256i lookup = _mm256_setr_epi8(
        0, 1, 1, 2, 1, 2, 2, 3, 1, 2, 2, 3, 2, 3, 3, 4,
        0, 1, 1, 2, 1, 2, 2, 3, 1, 2, 2, 3, 2, 3, 3, 4);
    const __m256i low_mask = _mm256_set1_epi8(0x0f);
    __m256i lo = _mm256_and_si256(v, low_mask);
    __m256i hi = _mm256_and_si256(_mm256_srli_epi32(v, 4), low_mask);
    __m256i cnt = _mm256_add_epi8(_mm256_shuffle_epi8(lookup, lo),
                                  _mm256_shuffle_epi8(lookup, hi));
    return _mm256_sad_epu8(cnt, _mm256_setzero_si256());
}

inline std::uint64_t horizontal_sum(__m256i v) {
    __m128i lo = _mm256_castsi256_si128(v);
    __m128i hi = _mm256_extracti128_si256(v, 1);
    __m128i s = _mm_add_epi64(lo, hi);
    return static_cast<std::uint64_t>(_mm_cvtsi128_si64(s)) +
           static_cast<std::uint64_t>(_mm_extract_epi64(s, 1));
}

template <class WordOp, class VecOp>
std::uint64_t popcount_combine(const std::uint64_t* a, const std::uint64_t* b,
                               std::size_t n, WordOp word_op, VecOp vec_op) {
    std::size_t i = 0;
    __m256i acc = _mm256_setzero_si256();
    for (; i + 4 <= n; i += 4) {
        __m256i va = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(a + i));
        __m256i vb = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(b + i));
        acc = _mm256_add_epi64(acc, popcount_epi64(vec_op(va, vb)));
    }
    std::uint64_t c = horizontal_sum(acc);
    for (; i < n; ++i) c += std::popcount(word_op(a[i], b[i]));
    return c;
}

std::uint64_t popcount_avx2(const std::uint64_t* a, std::size_t n) {
    std::size_t i = 0;
    __m256i acc = _mm256_setzero_si256();
    for (; i + 4 <= n; i += 4) {
        __m256i v = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(a + i));
        acc = _mm256_add_epi64(acc, popcount_epi64(v));
    }
    std::uint64_t c = horizontal_sum(acc);
    for (; i < n; ++i) c += std::popcount(a[i]);
    return c;
}

std::uint64_t popcount_and_avx2(const std::uint64_t* a, const std::uint64_t* b, std::size_t n) {
    return popcount_combine(a, b, n,
                            [](std::uint64_t x, std::uint64_t y) { return x & y; },
                            [](__m256i x, __m256i y) { return _mm256_and_si256(x, y); });
}

std::uint64_t popcount_andnot_avx2(const std::uint64_t* a, const std::uint64_t* b, std::size_t n) {
    // _mm256_andnot_si256(y, x) = ~y & x
    return popcount_combine(a, b, n,
                            [](std::uint64_t x, std::uint64_t y) { return x & ~y; },
                            [](__m256i x, __m256i y) { return _mm256_andnot_si256(y, x); });
}

std::uint64_t popcount_xor_avx2(const std::uint64_t* a, const std::uint64_t* b, std::size_t n) {
    return popcount_combine(a, b, n,
                            [](std::uint64_t x, std::uint64_t y) { return x ^ y; },
                            [](__m256i x, __m256i y) { return _mm256_xor_si256(x, y); });
}

void and_inplace_avx2(std::uint64_t* dst, const std::uint64_t* src, std::size_t n) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256i d = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(dst + i));
        __m256i s = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(src + i));
        _mm256_storeu_si256(reinterpret_cast<__m256i*>(dst + i), _mm256_and_si256(d, s));
    }
    for (; i < n; ++i) dst[i] &= src[i];
}

void andnot_inplace_avx2(std::uint64_t* dst, const std::uint64_t* src, std::size_t n) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256i d = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(dst + i));
        __m256i s = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(src + i));
        _mm256_storeu_si256(reinterpret_cast<__m256i*>(dst + i), _mm256_andnot_si256(s, d));
    }
    for (; i < n; ++i) dst[i] &= ~src[i];
}

void or_inplace_avx2(std::uint64_t* dst, const std::uint64_t* src, std::size_t n) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256i d = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(dst + i));
        __m256i s = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(src + i));
        _mm256_storeu_si256(reinterpret_cast<__m256i*>(dst + i), _mm256_or_si256(d, s));
    }
    for (; i < n; ++i) dst[i] |= src[i];
}

bool disjoint_avx2(const std::uint64_t* a, const std::uint64_t* b, std::size_t n) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256i va = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(a + i));
        __m256i vb = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(b + i));
        if (!_mm256_testz_si256(va, vb)) return false;
    }
    for (; i < n; ++i)
        if (a[i] & b[i]) return false;
    return true;
}

} // namespace

const Kernels& avx2_kernels() {
    static const Kernels k = {
        "avx2",
        popcount_avx2,
        popcount_and_avx2,
        popcount_andnot_avx2,
        popcount_xor_avx2,
        and_inplace_avx2,
        andnot_inplace_avx2,
        or_inplace_avx2,
        disjoint_avx2,
    };
    return k;
}

} // namespace mdl::kern

#endif // x86-64
