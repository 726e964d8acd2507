#include "awgsim/wavec.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "awgsim/error.hpp"
#include "awgsim/simd/kernels.hpp"

namespace awgsim::wavec {

std::size_t segment_samples(const PulseSegment& seg, double sample_rate_hz) {
  const double n = std::round(seg.duration_s * sample_rate_hz);
  return n > 0.0 ? static_cast<std::size_t>(n) : 0;
}

void validate(const PulseProgram& program) {
  const double fs = program.sample_rate_hz;
  if (!(fs > 0.0) || !std::isfinite(fs)) raise(Errc::invalid_program, "sample_rate must be positive");
  if (program.segments.empty()) raise(Errc::invalid_program, "program has no segments");

  std::size_t total = 0;
  for (std::size_t i = 0; i < program.segments.size(); ++i) {
    const auto& s = program.segments[i];
    const std::string where = "segment " + std::to_string(i) + ": ";
    if (!(s.duration_s > 0.0) || !std::isfinite(s.duration_s)) raise(Errc::invalid_program, where + "duration must be > 0");
    if (!(std::abs(s.amplitude) <= 1.0)) raise(Errc::invalid_program, where + "|amplitude| must be <= 1");
    if (!std::isfinite(s.phase_rad)) raise(Errc::invalid_program, where + "phase must be finite");
    if (s.envelope == Envelope::gaussian && !(s.sigma_s > 0.0))
      raise(Errc::invalid_program, where + "gaussian envelope needs sigma > 0");
    if (!(s.carrier_hz >= 0.0)) raise(Errc::invalid_program, where + "carrier must be >= 0");
    if (s.carrier_hz >= fs / 2) raise(Errc::aliased_carrier, where + "carrier at or above Nyquist");
    double tone_sum = 0.0;
    for (const auto& t : s.tones) {
      if (!(t.frequency_hz >= 0.0)) raise(Errc::invalid_program, where + "tone frequency must be >= 0");
      if (t.frequency_hz >= fs / 2) raise(Errc::aliased_carrier, where + "tone at or above Nyquist");
      tone_sum += std::abs(t.amplitude);
    }
    if (tone_sum > 1.0) raise(Errc::invalid_program, where + "tone amplitudes sum above 1");

    const std::size_t n = segment_samples(s, fs);
    if (n == 0) raise(Errc::invalid_program, where + "duration shorter than half a sample");
    total += n;
    if (total > patgen::kCapacity)
      raise(Errc::program_too_long, "program needs more than " + std::to_string(patgen::kCapacity) + " samples");
  }
}

std::vector<double> envelope(const PulseSegment& seg, std::size_t n, double fs) {
  std::vector<double> env(n, 0.0);
  switch (seg.envelope) {
    case Envelope::flat_gap:
      break;
    case Envelope::square:
      std::fill(env.begin(), env.end(), 1.0);
      break;
    case Envelope::raised_cosine:
      // Full-width Hann over the segment, symmetric in sample index.
      if (n == 1) env[0] = 1.0;
      else
        for (std::size_t i = 0; i < n; ++i)
          env[i] = 0.5 * (1.0 - std::cos(2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(n - 1)));
      break;
    case Envelope::gaussian: {
      // Truncated at +-3 sigma (or the segment edge), then normalised to peak 1.
      // Offsets from the centre are half-integers, exact in double, so the
      // envelope and its truncation are mirror-symmetric bit for bit.
      const double center = 0.5 * static_cast<double>(n - 1);
      double peak = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const double dt = (static_cast<double>(i) - center) / fs;
        if (std::abs(dt) <= 3.0 * seg.sigma_s) env[i] = std::exp(-dt * dt / (2.0 * seg.sigma_s * seg.sigma_s));
        peak = std::max(peak, env[i]);
      }
      if (peak > 0.0)
        for (double& v : env) v /= peak;
      break;
    }
  }
  return env;
}

std::vector<double> synth(const PulseProgram& program) {
  validate(program);
  const double fs = program.sample_rate_hz;
  constexpr double two_pi = 2.0 * std::numbers::pi;
  std::vector<double> out;
  for (const auto& seg : program.segments) {
    const std::size_t n = segment_samples(seg, fs);
    const auto env = envelope(seg, n, fs);
    for (std::size_t i = 0; i < n; ++i) {
      if (seg.envelope == Envelope::flat_gap) {
        out.push_back(0.0);
        continue;
      }
      const double t = static_cast<double>(i) / fs;
      double carrier = 0.0;
      if (seg.tones.empty()) carrier = std::cos(two_pi * seg.carrier_hz * t + seg.phase_rad);
      else
        for (const auto& tone : seg.tones) carrier += tone.amplitude * std::cos(two_pi * tone.frequency_hz * t + tone.phase_rad);
      out.push_back(seg.amplitude * (env[i] * carrier));
    }
  }
  return out;
}

std::vector<std::uint8_t> quantize(std::span<const double> samples) {
  for (double s : samples)
    if (!std::isfinite(s)) raise(Errc::invalid_argument, "cannot quantize a non-finite sample");
  std::vector<std::uint8_t> codes(samples.size());
  simd::quantize(samples, codes);
  return codes;
}

Compiled compile_program(const PulseProgram& program, const std::optional<eq::FfeTaps>& ffe) {
  auto samples = synth(program);
  std::size_t clips = 0;
  if (ffe) {
    auto eq_out = eq::apply_ffe(samples, *ffe, eq::Boundary::hold);
    samples = std::move(eq_out.samples);
    clips = eq_out.clip_count;
  }
  auto codes = quantize(samples);
  auto image = patgen::pack_image(codes);
  return {std::move(codes), std::move(image), clips};
}

}  // namespace awgsim::wavec
