#include "kernel_table.hpp"

namespace awgsim::simd::detail {
namespace {

void fir_scalar(const double* xext, const double* taps, std::size_t ntaps, double* y,
                std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    double acc = 0.0;
    const double* x = xext + i + ntaps - 1;
    for (std::size_t k = 0; k < ntaps; ++k) acc += taps[k] * x[-static_cast<std::ptrdiff_t>(k)];
    y[i] = acc;
  }
}

void quantize_scalar(const double* s, std::uint8_t* codes, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) codes[i] = quantize_one(s[i]);
}

void encode_scalar(const std::uint8_t* codes, const PlanePtrs& planes, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) encode_one(codes[i], planes, i);
}

void decode_scalar(const ConstPlanePtrs& planes, std::uint8_t* codes, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) codes[i] = decode_one(planes, i);
}

void weighted_sum_scalar(const ConstPlanePtrs& planes, const double* weights, double* out,
                         std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    double acc = 0.0;
    for (std::size_t s = 0; s < kSegmentCount; ++s)
      acc += weights[s] * static_cast<double>(planes[s][i]);
    out[i] = acc;
  }
}

}  // namespace

const KernelTable& scalar_kernels() noexcept {
  static constexpr KernelTable table{fir_scalar, quantize_scalar, encode_scalar, decode_scalar,
                                     weighted_sum_scalar};
  return table;
}

}  // namespace awgsim::simd::detail
