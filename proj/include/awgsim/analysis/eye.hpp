#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "awgsim/dacmodel.hpp"

namespace awgsim::analysis {

/// Trace folded modulo 2 UI into a time x voltage hit map. Consecutive samples
/// are joined, so a cell counts every sample whose segment passes through it.
struct EyeDiagram {
  std::size_t time_bins = 0;
  std::size_t volt_bins = 0;
  double unit_interval = 0.0;
  double v_min = 0.0;
  double v_max = 0.0;
  std::vector<std::uint32_t> counts;  // row-major [time][volt]

  std::uint32_t at(std::size_t t, std::size_t v) const noexcept { return counts[t * volt_bins + v]; }
  double time_bin_width() const noexcept { return 2.0 * unit_interval / static_cast<double>(time_bins); }
  double volt_bin_height() const noexcept { return (v_max - v_min) / static_cast<double>(volt_bins); }
  std::size_t volt_bin(double v) const noexcept;
};

/// Voltage range defaults to the trace's min/max when v_min >= v_max.
/// Throws InsufficientSamples when the trace spans fewer than 100 UI.
EyeDiagram eye_diagram(const dac::AnalogTrace& trace, double unit_interval, std::size_t time_bins,
                       std::size_t volt_bins, double time_origin = 0.0, double v_min = 0.0, double v_max = 0.0);

struct EyeOpening {
  double height = 0.0;  // volts: widest empty voltage run through the threshold, best column
  double width = 0.0;   // seconds: longest empty run of the threshold row (circular)
};

EyeOpening eye_opening(const EyeDiagram& eye, double threshold);

}  // namespace awgsim::analysis
