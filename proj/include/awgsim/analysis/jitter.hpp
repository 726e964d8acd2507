#pragma once

// Edge timing: threshold crossings, time-interval error and the dual-Dirac
// TJ/RJ/DJ decomposition.

#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include "awgsim/dacmodel.hpp"

namespace awgsim::analysis {

/// Q-scale multiplier for TJ at BER 1e-12.
inline constexpr double kDualDiracQ = 14.069;
inline constexpr std::size_t kMinJitterCrossings = 10'000;

struct JitterReport {
  double total = 0.0;          // seconds pk-pk at BER 1e-12
  double random_sigma = 0.0;   // seconds
  double deterministic = 0.0;  // seconds pk-pk
  std::size_t crossings = 0;
};

struct TieSeries {
  std::vector<double> tie;           // seconds
  std::vector<long long> ui_index;   // nominal edge each crossing belongs to
};

/// TIE against k * T, with the grid phase taken from the first crossing.
TieSeries time_interval_error(std::span<const double> crossings, double nominal_period);

/// DJ = pk-pk of the per-phase (k mod 4) mean TIE, RJ = std of the residual,
/// TJ = DJ + 14.069 RJ. Needs at least 10^4 crossings.
JitterReport jitter_decompose(std::span<const double> crossings, double nominal_period);

/// Peak-to-peak TIE over all crossings; with no random jitter this is the
/// data-dependent jitter seen on an eye diagram.
double tie_peak_to_peak(std::span<const double> crossings, double nominal_period);

/// Linear-interpolated threshold crossings (both directions) at or after t_begin.
std::vector<double> find_crossings(const dac::AnalogTrace& trace, double threshold,
                                   double t_begin = -std::numeric_limits<double>::infinity());

}  // namespace awgsim::analysis
