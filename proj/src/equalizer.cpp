#include "awgsim/equalizer.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "awgsim/error.hpp"
#include "awgsim/simd/kernels.hpp"

namespace awgsim::eq {

void ChannelModel::validate() const {
  if (taps.empty()) raise(Errc::invalid_config, "channel needs at least one tap");
  if (taps[0] == 0.0) raise(Errc::invalid_config, "channel main cursor taps[0] must be non-zero");
  for (double t : taps)
    if (!std::isfinite(t)) raise(Errc::invalid_config, "channel taps must be finite");
  if (!(pole_hz >= 0.0) || !std::isfinite(pole_hz)) raise(Errc::invalid_config, "pole frequency must be >= 0");
}

double ChannelModel::dc_gain() const noexcept {
  double s = 0.0;
  for (double t : taps) s += t;
  return s;
}

ChannelModel reference_channel(double sample_rate) { return {{1.0, 0.35}, 0.45 * sample_rate}; }

std::vector<std::uint8_t> prbs7(unsigned seed, std::size_t n) {
  if (seed == 0) raise(Errc::zero_seed, "PRBS7 seed must be non-zero");
  if (seed > 0x7f) raise(Errc::invalid_argument, "PRBS7 seed must fit in 7 bits");
  std::vector<std::uint8_t> out(n);
  unsigned state = seed;
  for (auto& bit : out) {
    const unsigned fb = ((state >> 6) ^ (state >> 5)) & 1u;
    state = ((state << 1) | fb) & 0x7fu;
    bit = static_cast<std::uint8_t>(fb);
  }
  return out;
}

std::vector<double> apply_channel(std::span<const double> samples, const ChannelModel& ch) {
  ch.validate();
  if (samples.empty()) raise(Errc::invalid_argument, "empty input sequence");
  std::vector<double> xext(ch.taps.size() - 1, 0.0);
  xext.insert(xext.end(), samples.begin(), samples.end());
  std::vector<double> y(samples.size());
  simd::fir(xext, ch.taps, y);
  return y;
}

dac::AnalogTrace apply_channel(const dac::AnalogTrace& trace, const ChannelModel& ch, double unit_interval) {
  ch.validate();
  if (trace.samples.empty()) raise(Errc::invalid_argument, "empty trace");
  const double ratio = unit_interval / trace.sample_period;
  const auto stride = static_cast<std::size_t>(std::llround(ratio));
  if (stride == 0 || std::abs(ratio - static_cast<double>(stride)) > 1e-6 * ratio)
    raise(Errc::invalid_argument, "unit interval must be a whole number of trace samples");

  std::vector<double> taps((ch.taps.size() - 1) * stride + 1, 0.0);
  for (std::size_t i = 0; i < ch.taps.size(); ++i) taps[i * stride] = ch.taps[i];

  std::vector<double> xext(taps.size() - 1, trace.samples.front());
  xext.insert(xext.end(), trace.samples.begin(), trace.samples.end());

  dac::AnalogTrace out = trace;
  simd::fir(xext, taps, out.samples);

  if (ch.pole_hz > 0.0) {
    const double a = std::exp(-2.0 * std::numbers::pi * ch.pole_hz * trace.sample_period);
    double y = out.samples.front();
    for (double& v : out.samples) {
      y = a * y + (1.0 - a) * v;
      v = y;
    }
  }
  return out;
}

void FfeTaps::validate() const {
  if (taps.empty()) raise(Errc::invalid_config, "FFE needs at least one tap");
  if (main_tap_index >= taps.size()) raise(Errc::invalid_config, "main_tap_index outside the tap vector");
  for (double t : taps)
    if (!std::isfinite(t)) raise(Errc::invalid_config, "FFE taps must be finite");
}

namespace {

std::vector<double> convolve(std::span<const double> a, std::span<const double> b) {
  std::vector<double> out(a.size() + b.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  return out;
}

}  // namespace

FfeTaps solve_ffe(const ChannelModel& ch, std::size_t n_taps, std::size_t main_tap_index) {
  ch.validate();
  if (n_taps < 1 || n_taps > 32) raise(Errc::invalid_argument, "n_taps must be in 1..32");
  if (main_tap_index >= n_taps) raise(Errc::invalid_argument, "main_tap_index must be < n_taps");

  const std::size_t m = ch.taps.size();
  const std::size_t rows = n_taps + m - 1;
  Eigen::MatrixXd conv = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(n_taps));
  for (std::size_t j = 0; j < n_taps; ++j)
    for (std::size_t i = 0; i < m; ++i) conv(static_cast<Eigen::Index>(i + j), static_cast<Eigen::Index>(j)) = ch.taps[i];
  Eigen::VectorXd target = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(rows));
  target(static_cast<Eigen::Index>(main_tap_index)) = 1.0;

  const Eigen::MatrixXd normal = conv.transpose() * conv;
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> rank_check(normal);
  rank_check.setThreshold(1e-12);
  if (rank_check.rank() < static_cast<Eigen::Index>(n_taps))
    raise(Errc::singular_system, "normal equations are rank deficient (rank " +
                                     std::to_string(rank_check.rank()) + " of " + std::to_string(n_taps) + ")");

  const Eigen::VectorXd w = conv.colPivHouseholderQr().solve(target);
  const double sum = w.sum();
  if (!std::isfinite(sum) || std::abs(sum) < 1e-12)
    raise(Errc::singular_system, "least-squares taps have no DC gain to normalise");

  FfeTaps out;
  out.main_tap_index = main_tap_index;
  out.dc_scale = 1.0 / sum;
  out.taps.resize(n_taps);
  for (std::size_t j = 0; j < n_taps; ++j) out.taps[j] = w(static_cast<Eigen::Index>(j)) * out.dc_scale;
  return out;
}

double ls_residual(const ChannelModel& ch, std::span<const double> taps, std::size_t main_tap_index) {
  const auto r = convolve(taps, ch.taps);
  double err = 0.0;
  for (std::size_t k = 0; k < r.size(); ++k) {
    const double d = r[k] - (k == main_tap_index ? 1.0 : 0.0);
    err += d * d;
  }
  return err;
}

std::vector<double> combined_response(const ChannelModel& ch, const FfeTaps& ffe) {
  return convolve(ffe.taps, ch.taps);
}

IsiReport isi_report(std::span<const double> response, std::size_t main_index) {
  if (main_index >= response.size() || response[main_index] == 0.0)
    raise(Errc::invalid_argument, "main cursor missing from response");
  IsiReport r;
  r.main_cursor = response[main_index];
  const double scale = std::abs(r.main_cursor);
  for (std::size_t k = 0; k < response.size(); ++k) {
    if (k == main_index) continue;
    const double v = std::abs(response[k]) / scale;
    r.residual_isi += v;
    r.peak_isi = std::max(r.peak_isi, v);
  }
  return r;
}

FfeOutput apply_ffe(std::span<const double> samples, const FfeTaps& ffe, Boundary boundary) {
  ffe.validate();
  FfeOutput out;
  if (samples.empty()) return out;

  const std::size_t k = ffe.taps.size();
  const std::size_t left = k - 1 - ffe.main_tap_index;
  const std::size_t right = ffe.main_tap_index;
  const std::size_t n = samples.size();
  std::vector<double> xext;
  xext.reserve(n + k - 1);
  auto wrap = [&](long long i) { return samples[static_cast<std::size_t>(((i % static_cast<long long>(n)) + static_cast<long long>(n)) % static_cast<long long>(n))]; };
  for (std::size_t i = 0; i < left; ++i)
    xext.push_back(boundary == Boundary::periodic ? wrap(static_cast<long long>(i) - static_cast<long long>(left)) : samples.front());
  xext.insert(xext.end(), samples.begin(), samples.end());
  for (std::size_t i = 0; i < right; ++i)
    xext.push_back(boundary == Boundary::periodic ? wrap(static_cast<long long>(n + i)) : samples.back());

  out.samples.resize(n);
  simd::fir(xext, ffe.taps, out.samples);
  for (double& v : out.samples) {
    if (v > 1.0) { v = 1.0; ++out.clip_count; }
    else if (v < -1.0) { v = -1.0; ++out.clip_count; }
  }
  return out;
}

}  // namespace awgsim::eq
