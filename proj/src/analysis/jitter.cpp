#include "awgsim/analysis/jitter.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "awgsim/error.hpp"

namespace awgsim::analysis {

TieSeries time_interval_error(std::span<const double> crossings, double nominal_period) {
  if (!(nominal_period > 0.0)) raise(Errc::invalid_argument, "nominal period must be positive");
  TieSeries s;
  if (crossings.empty()) return s;
  const double t0 = crossings.front();
  const double offset = t0 - std::round(t0 / nominal_period) * nominal_period;
  s.tie.reserve(crossings.size());
  s.ui_index.reserve(crossings.size());
  for (double t : crossings) {
    const auto k = static_cast<long long>(std::llround((t - offset) / nominal_period));
    s.ui_index.push_back(k);
    s.tie.push_back(t - static_cast<double>(k) * nominal_period);
  }
  return s;
}

JitterReport jitter_decompose(std::span<const double> crossings, double nominal_period) {
  if (crossings.size() < kMinJitterCrossings)
    raise(Errc::insufficient_samples, "jitter decomposition needs at least " + std::to_string(kMinJitterCrossings) +
                                          " crossings, got " + std::to_string(crossings.size()));
  const TieSeries s = time_interval_error(crossings, nominal_period);

  std::array<double, 4> sum{};
  std::array<std::size_t, 4> count{};
  auto phase = [](long long k) { return static_cast<std::size_t>(((k % 4) + 4) % 4); };
  for (std::size_t i = 0; i < s.tie.size(); ++i) {
    sum[phase(s.ui_index[i])] += s.tie[i];
    ++count[phase(s.ui_index[i])];
  }
  std::array<double, 4> mean{};
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (std::size_t p = 0; p < 4; ++p) {
    if (count[p] == 0) continue;
    mean[p] = sum[p] / static_cast<double>(count[p]);
    lo = std::min(lo, mean[p]);
    hi = std::max(hi, mean[p]);
  }

  double ss = 0.0;
  for (std::size_t i = 0; i < s.tie.size(); ++i) {
    const double r = s.tie[i] - mean[phase(s.ui_index[i])];
    ss += r * r;
  }

  JitterReport rep;
  rep.crossings = crossings.size();
  rep.deterministic = hi - lo;
  rep.random_sigma = std::sqrt(ss / static_cast<double>(s.tie.size()));
  rep.total = rep.deterministic + kDualDiracQ * rep.random_sigma;
  return rep;
}

double tie_peak_to_peak(std::span<const double> crossings, double nominal_period) {
  if (crossings.size() < 2) raise(Errc::insufficient_samples, "need at least two crossings");
  const TieSeries s = time_interval_error(crossings, nominal_period);
  const auto [lo, hi] = std::minmax_element(s.tie.begin(), s.tie.end());
  return *hi - *lo;
}

std::vector<double> find_crossings(const dac::AnalogTrace& trace, double threshold, double t_begin) {
  std::vector<double> out;
  const auto& x = trace.samples;
  for (std::size_t j = 1; j < x.size(); ++j) {
    const double a = x[j - 1] - threshold;
    const double b = x[j] - threshold;
    if ((a < 0.0) == (b < 0.0)) continue;
    const double t = trace.time_at(j - 1) + trace.sample_period * (a / (a - b));
    if (t >= t_begin) out.push_back(t);
  }
  return out;
}

}  // namespace awgsim::analysis
