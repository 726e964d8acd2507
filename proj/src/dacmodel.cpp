#include "awgsim/dacmodel.hpp"

#include <cmath>
#include <string>

#include "awgsim/error.hpp"
#include "awgsim/simd/kernels.hpp"

namespace awgsim::dac {

void DacConfig::validate() const {
  if (!(full_scale_voltage > 0.0) || !std::isfinite(full_scale_voltage))
    raise(Errc::invalid_config, "full_scale_voltage must be positive");
  for (std::size_t i = 0; i < kSegmentCount; ++i)
    if (!(std::abs(weight_mismatch[i]) < 0.5))
      raise(Errc::invalid_config, "weight_mismatch[" + std::to_string(i) + "] must satisfy |m| < 0.5");
  if (!(output_rise_time >= 0.0) || !std::isfinite(output_rise_time))
    raise(Errc::invalid_config, "output_rise_time must be >= 0");
}

std::array<double, kSegmentCount> DacConfig::actual_weights() const noexcept {
  std::array<double, kSegmentCount> w;
  for (std::size_t i = 0; i < kSegmentCount; ++i) w[i] = kNominalWeights[i] * (1.0 + weight_mismatch[i]);
  return w;
}

SegmentBits thermometer_encode(std::uint8_t code) noexcept {
  SegmentBits bits{};
  const unsigned therm = code >> 6;
  for (unsigned i = 0; i < kThermometerSegments; ++i) bits[i] = i < therm;
  for (unsigned b = 0; b < 6; ++b) bits[kThermometerSegments + b] = (code >> (5 - b)) & 1u;
  return bits;
}

namespace {

double level_from_weights(std::uint8_t code, const std::array<double, kSegmentCount>& w, double fs) {
  const SegmentBits bits = thermometer_encode(code);
  double acc = 0.0;
  for (std::size_t i = 0; i < kSegmentCount; ++i) acc += w[i] * (bits[i] ? 1.0 : 0.0);
  return fs * acc / kFullScaleCode;
}

}  // namespace

double level_of(std::uint8_t code, const DacConfig& cfg) {
  cfg.validate();
  return level_from_weights(code, cfg.actual_weights(), cfg.full_scale_voltage);
}

LevelTable build_level_table(const DacConfig& cfg) {
  cfg.validate();
  const auto w = cfg.actual_weights();
  LevelTable t;
  for (int c = 0; c < 256; ++c)
    t.volts[c] = level_from_weights(static_cast<std::uint8_t>(c), w, cfg.full_scale_voltage);
  return t;
}

AnalogTrace render_levels(std::span<const double> levels, const clock::EdgeSchedule& edges,
                          double rise_time, int oversample) {
  if (oversample < 8) raise(Errc::invalid_argument, "oversample must be at least 8");
  if (levels.empty()) raise(Errc::invalid_argument, "nothing to render");
  if (edges.size() != levels.size())
    raise(Errc::invalid_argument, "need one edge per sample (" + std::to_string(edges.size()) + " edges, " +
                                      std::to_string(levels.size()) + " samples)");
  if (!(edges.nominal_period > 0.0)) raise(Errc::invalid_argument, "nominal period must be positive");
  for (std::size_t k = 1; k < edges.size(); ++k)
    if (!(edges.edge_times[k] > edges.edge_times[k - 1]))
      raise(Errc::non_monotonic_edges, "edge " + std::to_string(k) + " does not follow edge " + std::to_string(k - 1));
  if (!(rise_time >= 0.0)) raise(Errc::invalid_argument, "rise time must be >= 0");

  AnalogTrace trace;
  trace.sample_period = edges.nominal_period / oversample;
  trace.samples.resize(levels.size() * static_cast<std::size_t>(oversample));

  const double tau = rise_time / 2.2;
  const auto& et = edges.edge_times;
  // State: output y at time t_state, heading toward target.
  double target = levels[0];
  double y = target;
  double t_state = 0.0;
  std::size_t next = 0;
  auto relax = [&](double t) {
    if (tau > 0.0) y = target + (y - target) * std::exp(-(t - t_state) / tau);
    else y = target;
    t_state = t;
  };

  for (std::size_t j = 0; j < trace.samples.size(); ++j) {
    const double t = trace.time_at(j);
    while (next < et.size() && et[next] <= t) {
      if (et[next] > t_state) relax(et[next]);
      target = levels[next++];
    }
    if (t > t_state) relax(t);
    else if (tau == 0.0) y = target;
    trace.samples[j] = y;
  }
  return trace;
}

AnalogTrace render(std::span<const std::uint8_t> codes, const clock::EdgeSchedule& edges,
                   const DacConfig& cfg, int oversample) {
  const LevelTable table = build_level_table(cfg);
  std::vector<double> levels(codes.size());
  for (std::size_t i = 0; i < codes.size(); ++i) levels[i] = table.volts[codes[i]];
  return render_levels(levels, edges, cfg.output_rise_time, oversample);
}

std::vector<double> segment_levels(const patgen::BitPlaneStreams& streams, const DacConfig& cfg) {
  cfg.validate();
  const auto w = cfg.actual_weights();
  simd::ConstPlanePtrs planes;
  for (std::size_t s = 0; s < kSegmentCount; ++s) {
    if (streams.planes[s].size() != streams.size())
      raise(Errc::invalid_argument, "segment streams differ in length");
    planes[s] = streams.planes[s].data();
  }
  std::vector<double> out(streams.size());
  simd::plane_weighted_sum(planes, w, out);
  for (double& v : out) v = cfg.full_scale_voltage * v / kFullScaleCode;
  return out;
}

}  // namespace awgsim::dac
