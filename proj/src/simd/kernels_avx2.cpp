#include <immintrin.h>

#include <cstring>

#include "kernel_table.hpp"

namespace awgsim::simd::detail {
namespace {

void fir_avx2(const double* xext, const double* taps, std::size_t ntaps, double* y,
              std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d acc = _mm256_setzero_pd();
    const double* x = xext + i + ntaps - 1;
    for (std::size_t k = 0; k < ntaps; ++k) {
      const __m256d h = _mm256_set1_pd(taps[k]);
      const __m256d v = _mm256_loadu_pd(x - k);
      acc = _mm256_add_pd(acc, _mm256_mul_pd(h, v));
    }
    _mm256_storeu_pd(y + i, acc);
  }
  for (; i < n; ++i) {
    double acc = 0.0;
    const double* x = xext + i + ntaps - 1;
    for (std::size_t k = 0; k < ntaps; ++k) acc += taps[k] * x[-static_cast<std::ptrdiff_t>(k)];
    y[i] = acc;
  }
}

void quantize_avx2(const double* s, std::uint8_t* codes, std::size_t n) {
  const __m256d scale = _mm256_set1_pd(127.5);
  const __m256d half = _mm256_set1_pd(0.5);
  const __m256d neg_half = _mm256_set1_pd(-0.5);
  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d lo = _mm256_setzero_pd();
  const __m256d hi = _mm256_set1_pd(255.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d v = _mm256_mul_pd(_mm256_loadu_pd(s + i), scale);
    v = _mm256_add_pd(v, scale);
    __m256d t = _mm256_round_pd(v, _MM_FROUND_TO_ZERO | _MM_FROUND_NO_EXC);
    const __m256d frac = _mm256_sub_pd(v, t);
    t = _mm256_add_pd(t, _mm256_and_pd(_mm256_cmp_pd(frac, half, _CMP_GE_OQ), one));
    t = _mm256_sub_pd(t, _mm256_and_pd(_mm256_cmp_pd(frac, neg_half, _CMP_LE_OQ), one));
    t = _mm256_min_pd(_mm256_max_pd(t, lo), hi);
    const __m128i i32 = _mm256_cvttpd_epi32(t);
    const __m128i u8 = _mm_packus_epi16(_mm_packus_epi32(i32, i32), _mm_setzero_si128());
    const int packed = _mm_cvtsi128_si32(u8);
    std::memcpy(codes + i, &packed, 4);
  }
  for (; i < n; ++i) codes[i] = quantize_one(s[i]);
}

inline __m256i ge_u8(__m256i c, std::uint8_t threshold) {
  const __m256i t = _mm256_set1_epi8(static_cast<char>(threshold));
  return _mm256_cmpeq_epi8(_mm256_max_epu8(c, t), c);
}

void encode_avx2(const std::uint8_t* codes, const PlanePtrs& planes, std::size_t n) {
  const __m256i one = _mm256_set1_epi8(1);
  std::size_t i = 0;
  for (; i + 32 <= n; i += 32) {
    const __m256i c = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(codes + i));
    _mm256_storeu_si256(reinterpret_cast<__m256i*>(planes[0] + i), _mm256_and_si256(ge_u8(c, 64), one));
    _mm256_storeu_si256(reinterpret_cast<__m256i*>(planes[1] + i), _mm256_and_si256(ge_u8(c, 128), one));
    _mm256_storeu_si256(reinterpret_cast<__m256i*>(planes[2] + i), _mm256_and_si256(ge_u8(c, 192), one));
    for (int b = 0; b < 6; ++b) {
      const __m256i mask = _mm256_set1_epi8(static_cast<char>(1u << (5 - b)));
      const __m256i bit = _mm256_cmpeq_epi8(_mm256_and_si256(c, mask), mask);
      _mm256_storeu_si256(reinterpret_cast<__m256i*>(planes[3 + b] + i), _mm256_and_si256(bit, one));
    }
  }
  for (; i < n; ++i) encode_one(codes[i], planes, i);
}

inline __m256i load_plane(const std::uint8_t* p, std::size_t i) {
  return _mm256_loadu_si256(reinterpret_cast<const __m256i*>(p + i));
}

void decode_avx2(const ConstPlanePtrs& planes, std::uint8_t* codes, std::size_t n) {
  std::size_t i = 0;
  for (; i + 32 <= n; i += 32) {
    // Per-byte values stay below 4 before shifting, so 16-bit shifts never carry across bytes.
    __m256i therm = _mm256_add_epi8(load_plane(planes[0], i),
                                    _mm256_add_epi8(load_plane(planes[1], i), load_plane(planes[2], i)));
    __m256i code = _mm256_slli_epi16(therm, 6);
    for (int b = 0; b < 6; ++b) {
      const __m128i count = _mm_cvtsi32_si128(5 - b);
      code = _mm256_or_si256(code, _mm256_sll_epi16(load_plane(planes[3 + b], i), count));
    }
    _mm256_storeu_si256(reinterpret_cast<__m256i*>(codes + i), code);
  }
  for (; i < n; ++i) codes[i] = decode_one(planes, i);
}

void weighted_sum_avx2(const ConstPlanePtrs& planes, const double* weights, double* out,
                       std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d acc = _mm256_setzero_pd();
    for (std::size_t s = 0; s < kSegmentCount; ++s) {
      int raw;
      std::memcpy(&raw, planes[s] + i, 4);
      const __m256d bits = _mm256_cvtepi32_pd(_mm_cvtepu8_epi32(_mm_cvtsi32_si128(raw)));
      acc = _mm256_add_pd(acc, _mm256_mul_pd(_mm256_set1_pd(weights[s]), bits));
    }
    _mm256_storeu_pd(out + i, acc);
  }
  for (; i < n; ++i) {
    double acc = 0.0;
    for (std::size_t s = 0; s < kSegmentCount; ++s)
      acc += weights[s] * static_cast<double>(planes[s][i]);
    out[i] = acc;
  }
}

}  // namespace

const KernelTable& avx2_kernels() noexcept {
  static constexpr KernelTable table{fir_avx2, quantize_avx2, encode_avx2, decode_avx2,
                                     weighted_sum_avx2};
  return table;
}

}  // namespace awgsim::simd::detail
