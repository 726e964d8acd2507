#include "awgsim/clocktree.hpp"

#include <cmath>
#include <random>
#include <string>

#include "awgsim/error.hpp"

namespace awgsim::clock {

void ClockConfig::validate() const {
  if (!(sample_rate > 0.0) || !std::isfinite(sample_rate))
    raise(Errc::invalid_config, "sample_rate must be positive");
  if (!(std::abs(duty_cycle_error) < 0.5)) raise(Errc::invalid_config, "|duty_cycle_error| must be < 0.5 UI");
  if (!(std::abs(quadrature_error) < 0.5)) raise(Errc::invalid_config, "|quadrature_error| must be < 0.5 UI");
  if (std::abs(duty_cycle_error) + std::abs(quadrature_error) >= 0.5)
    raise(Errc::invalid_config, "combined duty and quadrature error of 0.5 UI or more can reorder edges");
  if (!(rj_sigma >= 0.0) || !std::isfinite(rj_sigma)) raise(Errc::invalid_config, "rj_sigma must be >= 0");
}

double deterministic_displacement(std::size_t k, const ClockConfig& cfg) noexcept {
  const double t = cfg.unit_interval();
  const double sign = (k % 2 == 0) ? 1.0 : -1.0;
  return cfg.duty_cycle_error * t * sign + cfg.quadrature_error * t * quadrature_pattern(k);
}

double injected_dj_pkpk(const ClockConfig& cfg) noexcept {
  double lo = deterministic_displacement(0, cfg), hi = lo;
  for (std::size_t k = 1; k < 4; ++k) {
    const double d = deterministic_displacement(k, cfg);
    lo = std::min(lo, d);
    hi = std::max(hi, d);
  }
  return hi - lo;
}

EdgeSchedule derive_edges(std::size_t n, const ClockConfig& cfg) {
  if (n == 0) raise(Errc::invalid_argument, "edge count must be at least 1");
  cfg.validate();
  const double t = cfg.unit_interval();

  EdgeSchedule out;
  out.nominal_period = t;
  out.edge_times.resize(n);
  std::mt19937_64 rng(cfg.rng_seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (std::size_t k = 0; k < n; ++k) {
    double e = static_cast<double>(k) / cfg.sample_rate + deterministic_displacement(k, cfg);
    if (cfg.rj_sigma > 0.0) e += cfg.rj_sigma * gauss(rng);
    out.edge_times[k] = e;
    if (k > 0 && !(e > out.edge_times[k - 1]))
      raise(Errc::invalid_config, "random jitter reordered edges " + std::to_string(k - 1) + " and " +
                                      std::to_string(k) + "; rj_sigma is too large for this rate");
  }
  return out;
}

EdgeSchedule ideal_edges(std::size_t n, double sample_rate) {
  ClockConfig cfg;
  cfg.sample_rate = sample_rate;
  return derive_edges(n, cfg);
}

std::vector<std::size_t> subrate_indices(int divisor, std::size_t n) {
  switch (divisor) {
    case 2: case 4: case 8: case 16: case 32: break;
    default: raise(Errc::invalid_divisor, "divisor " + std::to_string(divisor) + " not in {2,4,8,16,32}");
  }
  const std::size_t stride = static_cast<std::size_t>(divisor) / 2;
  std::vector<std::size_t> out;
  out.reserve(n / stride + 1);
  for (std::size_t k = 0; k < n; k += stride) out.push_back(k);
  return out;
}

}  // namespace awgsim::clock
