#pragma once

// Full-rate sample edges from the half-rate input clock: DCC, DIV2 quadrature
// generation and the divided sub-rate clocks. Residual duty-cycle and
// quadrature errors appear as period-2 and period-4 edge displacement.

#include <cstddef>
#include <cstdint>
#include <vector>

namespace awgsim::clock {

struct ClockConfig {
  double sample_rate = 20e9;      // Hz, twice the reference clock
  double duty_cycle_error = 0.0;  // fraction of UI, period-2 displacement
  double quadrature_error = 0.0;  // fraction of UI, period-4 displacement
  double rj_sigma = 0.0;          // seconds
  std::uint64_t rng_seed = 1;

  double unit_interval() const noexcept { return 1.0 / sample_rate; }
  /// Throws InvalidConfig.
  void validate() const;
};

struct EdgeSchedule {
  std::vector<double> edge_times;  // strictly increasing, seconds
  double nominal_period = 0.0;

  std::size_t size() const noexcept { return edge_times.size(); }
};

/// Zero-mean period-4 quadrature pattern (+1, +1, -1, -1) / 2.
constexpr double quadrature_pattern(std::size_t k) noexcept { return (k % 4) < 2 ? 0.5 : -0.5; }

/// Deterministic displacement of edge k, seconds.
double deterministic_displacement(std::size_t k, const ClockConfig& cfg) noexcept;

/// Peak-to-peak of the injected deterministic pattern, seconds.
double injected_dj_pkpk(const ClockConfig& cfg) noexcept;

/// edge_k = k*T + dj(k) + N(0, rj_sigma). Deterministic for a fixed seed.
EdgeSchedule derive_edges(std::size_t n, const ClockConfig& cfg);

/// Uniform edges k/sample_rate.
EdgeSchedule ideal_edges(std::size_t n, double sample_rate);

/// Full-rate edge indices on which the clock divided by `divisor`
/// (2, 4, 8, 16 or 32) toggles: every divisor/2-th edge starting at 0.
std::vector<std::size_t> subrate_indices(int divisor, std::size_t n);

}  // namespace awgsim::clock
