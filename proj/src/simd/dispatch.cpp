#include <cstdlib>
#include <cstring>

#include "awgsim/error.hpp"
#include "kernel_table.hpp"

namespace awgsim::simd {
namespace {

const detail::KernelTable& table_for(Isa isa) {
#if defined(AWGSIM_HAVE_AVX2)
  if (isa == Isa::avx2) {
    if (!isa_supported(Isa::avx2)) raise(Errc::invalid_argument, "AVX2 kernels requested on a CPU without AVX2");
    return detail::avx2_kernels();
  }
#else
  if (isa == Isa::avx2) raise(Errc::invalid_argument, "binary built without AVX2 kernels");
#endif
  return detail::scalar_kernels();
}

Isa detect() noexcept {
  if (const char* forced = std::getenv("AWGSIM_SIMD"); forced && std::strcmp(forced, "scalar") == 0)
    return Isa::scalar;
  return isa_supported(Isa::avx2) ? Isa::avx2 : Isa::scalar;
}

void check_size(bool ok, const char* what) {
  if (!ok) raise(Errc::invalid_argument, what);
}

}  // namespace

std::string_view isa_name(Isa isa) noexcept { return isa == Isa::avx2 ? "avx2" : "scalar"; }

bool isa_supported(Isa isa) noexcept {
  if (isa == Isa::scalar) return true;
#if defined(AWGSIM_HAVE_AVX2)
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

Isa active_isa() noexcept {
  static const Isa isa = detect();
  return isa;
}

void fir(std::span<const double> xext, std::span<const double> taps, std::span<double> y, Isa isa) {
  check_size(!taps.empty(), "fir: empty tap vector");
  check_size(xext.size() == y.size() + taps.size() - 1, "fir: extended input has wrong length");
  if (y.empty()) return;
  table_for(isa).fir(xext.data(), taps.data(), taps.size(), y.data(), y.size());
}

void quantize(std::span<const double> s, std::span<std::uint8_t> codes, Isa isa) {
  check_size(s.size() == codes.size(), "quantize: size mismatch");
  table_for(isa).quantize(s.data(), codes.data(), s.size());
}

void encode_planes(std::span<const std::uint8_t> codes, const PlanePtrs& planes, Isa isa) {
  table_for(isa).encode_planes(codes.data(), planes, codes.size());
}

void decode_planes(const ConstPlanePtrs& planes, std::span<std::uint8_t> codes, Isa isa) {
  table_for(isa).decode_planes(planes, codes.data(), codes.size());
}

void plane_weighted_sum(const ConstPlanePtrs& planes, std::span<const double, kSegmentCount> weights,
                        std::span<double> out, Isa isa) {
  table_for(isa).plane_weighted_sum(planes, weights.data(), out.data(), out.size());
}

}  // namespace awgsim::simd
