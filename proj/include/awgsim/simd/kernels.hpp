#pragma once

// Data-parallel inner loops of the signal chain. Each kernel has a scalar
// reference implementation and, where the target supports it, an AVX2 variant.
// All variants produce bit-identical results; the scalar path is the oracle in
// the equivalence tests.

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>

#include "awgsim/segments.hpp"

namespace awgsim::simd {

enum class Isa { scalar, avx2 };

std::string_view isa_name(Isa isa) noexcept;
bool isa_supported(Isa isa) noexcept;

/// Best supported ISA, unless the AWGSIM_SIMD environment variable names a
/// narrower one ("scalar").
Isa active_isa() noexcept;

using PlanePtrs = std::array<std::uint8_t*, kSegmentCount>;
using ConstPlanePtrs = std::array<const std::uint8_t*, kSegmentCount>;

/// y[n] = sum_k taps[k] * xext[n + K - 1 - k], k ascending, for n in [0, y.size()).
/// xext must hold y.size() + taps.size() - 1 values.
void fir(std::span<const double> xext, std::span<const double> taps, std::span<double> y,
         Isa isa = active_isa());

/// code = clamp(round_half_away(127.5 + 127.5 * s), 0, 255). Inputs must be finite.
void quantize(std::span<const double> s, std::span<std::uint8_t> codes, Isa isa = active_isa());

/// Splits codes into nine 0/1 segment-enable planes (thermometer MSBs, binary LSBs).
void encode_planes(std::span<const std::uint8_t> codes, const PlanePtrs& planes,
                   Isa isa = active_isa());

/// Inverse of encode_planes: code = 64 * (T2 + T1 + T0) + sum_i B_i << i.
void decode_planes(const ConstPlanePtrs& planes, std::span<std::uint8_t> codes,
                   Isa isa = active_isa());

/// out[n] = sum_i weights[i] * planes[i][n], i ascending from 0.0.
void plane_weighted_sum(const ConstPlanePtrs& planes, std::span<const double, kSegmentCount> weights,
                        std::span<double> out, Isa isa = active_isa());

}  // namespace awgsim::simd
