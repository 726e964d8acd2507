#include "awgsim/analysis/eye.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "awgsim/error.hpp"

namespace awgsim::analysis {

std::size_t EyeDiagram::volt_bin(double v) const noexcept {
  const double x = (v - v_min) / (v_max - v_min) * static_cast<double>(volt_bins);
  if (x <= 0.0) return 0;
  return std::min(volt_bins - 1, static_cast<std::size_t>(x));
}

EyeDiagram eye_diagram(const dac::AnalogTrace& trace, double unit_interval, std::size_t time_bins,
                       std::size_t volt_bins, double time_origin, double v_min, double v_max) {
  if (!(unit_interval > 0.0) || time_bins == 0 || volt_bins == 0)
    raise(Errc::invalid_argument, "eye diagram needs a positive UI and non-zero bin counts");
  const double span = static_cast<double>(trace.size()) * trace.sample_period;
  if (span < 100.0 * unit_interval)
    raise(Errc::insufficient_samples, "trace spans " + std::to_string(span / unit_interval) + " UI, need 100");

  EyeDiagram eye;
  eye.time_bins = time_bins;
  eye.volt_bins = volt_bins;
  eye.unit_interval = unit_interval;
  if (v_min < v_max) {
    eye.v_min = v_min;
    eye.v_max = v_max;
  } else {
    const auto [lo, hi] = std::minmax_element(trace.samples.begin(), trace.samples.end());
    const double pad = std::max(1e-12, 1e-6 * (*hi - *lo));
    eye.v_min = *lo - pad;
    eye.v_max = *hi + pad;
  }
  eye.counts.assign(time_bins * volt_bins, 0);

  const double period = 2.0 * unit_interval;
  auto column = [&](std::size_t j) {
    double phase = std::fmod(trace.time_at(j) - time_origin, period);
    if (phase < 0.0) phase += period;
    return std::min(time_bins - 1, static_cast<std::size_t>(phase / period * static_cast<double>(time_bins)));
  };
  // Vector mode: each sample also covers the voltage bins up to the midpoint
  // towards its neighbours, so fast edges leave a continuous trace.
  const auto& x = trace.samples;
  for (std::size_t j = 0; j < x.size(); ++j) {
    const std::size_t tb = column(j), vb = eye.volt_bin(x[j]);
    std::size_t lo = vb, hi = vb;
    if (j > 0) {
      const std::size_t m = eye.volt_bin(0.5 * (x[j - 1] + x[j]));
      lo = std::min(lo, m);
      hi = std::max(hi, m);
    }
    if (j + 1 < x.size()) {
      const std::size_t m = eye.volt_bin(0.5 * (x[j] + x[j + 1]));
      lo = std::min(lo, m);
      hi = std::max(hi, m);
    }
    for (std::size_t v = lo; v <= hi; ++v) ++eye.counts[tb * volt_bins + v];
  }
  return eye;
}

EyeOpening eye_opening(const EyeDiagram& eye, double threshold) {
  const std::size_t vb = eye.volt_bin(threshold);
  EyeOpening out;

  // Width: longest circular run of time columns whose threshold bin is empty.
  std::size_t best = 0, run = 0;
  bool any_hit = false;
  for (std::size_t i = 0; i < 2 * eye.time_bins; ++i) {
    const std::size_t t = i % eye.time_bins;
    if (eye.at(t, vb) == 0) best = std::max(best, std::min(++run, eye.time_bins));
    else {
      run = 0;
      any_hit = true;
    }
  }
  if (!any_hit) best = eye.time_bins;
  out.width = static_cast<double>(best) * eye.time_bin_width();

  // Height: per column, the empty voltage run that contains the threshold bin.
  std::size_t tallest = 0;
  for (std::size_t t = 0; t < eye.time_bins; ++t) {
    if (eye.at(t, vb) != 0) continue;
    std::size_t lo = vb, hi = vb;
    while (lo > 0 && eye.at(t, lo - 1) == 0) --lo;
    while (hi + 1 < eye.volt_bins && eye.at(t, hi + 1) == 0) ++hi;
    tallest = std::max(tallest, hi - lo + 1);
  }
  out.height = static_cast<double>(tallest) * eye.volt_bin_height();
  return out;
}

}  // namespace awgsim::analysis
