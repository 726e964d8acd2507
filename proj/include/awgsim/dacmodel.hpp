#pragma once

// Segmented SST DAC: code -> weighted segment sum -> output level, and a
// behavioral output stage (zero-order hold into a single pole) rendered on
// possibly jittered clock edges.

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "awgsim/clocktree.hpp"
#include "awgsim/patgen.hpp"
#include "awgsim/segments.hpp"

namespace awgsim::dac {

struct DacConfig {
  double full_scale_voltage = 1.0;
  /// Relative weight error per segment, order T2, T1, T0, B5 .. B0.
  std::array<double, kSegmentCount> weight_mismatch{};
  /// 10-90 rise time of the output pole, seconds; 0 renders an ideal hold.
  double output_rise_time = 10e-12;

  /// Throws InvalidConfig.
  void validate() const;
  /// Actual weight of each segment in LSB units.
  std::array<double, kSegmentCount> actual_weights() const noexcept;
};

using SegmentBits = std::array<bool, kSegmentCount>;

/// Top two bits t enable the first t thermometer weights, the low six bits
/// enable the binary weights directly.
SegmentBits thermometer_encode(std::uint8_t code) noexcept;

double level_of(std::uint8_t code, const DacConfig& cfg);

struct LevelTable {
  std::array<double, 256> volts{};
};

LevelTable build_level_table(const DacConfig& cfg);

struct AnalogTrace {
  std::vector<double> samples;
  double sample_period = 0.0;
  double start_time = 0.0;

  std::size_t size() const noexcept { return samples.size(); }
  double time_at(std::size_t i) const noexcept { return start_time + static_cast<double>(i) * sample_period; }
};

/// Renders per-edge output levels: ZOH switching at each edge, filtered by a
/// single pole with time constant rise_time / 2.2, sampled on the grid
/// t_j = j * nominal_period / oversample for j in [0, n * oversample).
/// The output before the first edge rests at the first level.
AnalogTrace render_levels(std::span<const double> levels, const clock::EdgeSchedule& edges,
                          double rise_time, int oversample);

/// render_levels over level_of(code).
AnalogTrace render(std::span<const std::uint8_t> codes, const clock::EdgeSchedule& edges,
                   const DacConfig& cfg, int oversample);

/// Output level per full-rate sample computed from the segment streams, as the
/// SST output stage sums them. Equals level_of(decoded code) bit for bit.
std::vector<double> segment_levels(const patgen::BitPlaneStreams& streams, const DacConfig& cfg);

}  // namespace awgsim::dac
