#pragma once

#include <cstddef>
#include <cstdint>

#include "awgsim/simd/kernels.hpp"

namespace awgsim::simd::detail {

struct KernelTable {
  void (*fir)(const double* xext, const double* taps, std::size_t ntaps, double* y, std::size_t n);
  void (*quantize)(const double* s, std::uint8_t* codes, std::size_t n);
  void (*encode_planes)(const std::uint8_t* codes, const PlanePtrs& planes, std::size_t n);
  void (*decode_planes)(const ConstPlanePtrs& planes, std::uint8_t* codes, std::size_t n);
  void (*plane_weighted_sum)(const ConstPlanePtrs& planes, const double* weights, double* out,
                             std::size_t n);
};

const KernelTable& scalar_kernels() noexcept;
#if defined(AWGSIM_HAVE_AVX2)
const KernelTable& avx2_kernels() noexcept;
#endif

// Shared by the scalar kernel and the vector tails.
inline std::uint8_t quantize_one(double s) noexcept {
  double v = s * 127.5;
  v = v + 127.5;
  double t = __builtin_trunc(v);
  const double frac = v - t;
  if (frac >= 0.5) t += 1.0;
  else if (frac <= -0.5) t -= 1.0;
  if (t < 0.0) t = 0.0;
  if (t > 255.0) t = 255.0;
  return static_cast<std::uint8_t>(t);
}

inline void encode_one(std::uint8_t code, const PlanePtrs& planes, std::size_t i) noexcept {
  planes[0][i] = code >= 64 ? 1 : 0;
  planes[1][i] = code >= 128 ? 1 : 0;
  planes[2][i] = code >= 192 ? 1 : 0;
  for (int b = 0; b < 6; ++b) planes[3 + b][i] = (code >> (5 - b)) & 1u;
}

inline std::uint8_t decode_one(const ConstPlanePtrs& planes, std::size_t i) noexcept {
  unsigned code = 64u * (planes[0][i] + planes[1][i] + planes[2][i]);
  for (int b = 0; b < 6; ++b) code += static_cast<unsigned>(planes[3 + b][i]) << (5 - b);
  return static_cast<std::uint8_t>(code);
}

}  // namespace awgsim::simd::detail
