#pragma once

// Pulse compiler: PulseProgram -> real samples -> 8-bit codes -> SRAM image,
// with optional FFE pre-distortion on the real-valued samples.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "awgsim/equalizer.hpp"
#include "awgsim/patgen.hpp"

namespace awgsim::wavec {

enum class Envelope { gaussian, raised_cosine, square, flat_gap };

struct Tone {
  double amplitude = 0.0;
  double frequency_hz = 0.0;
  double phase_rad = 0.0;
};

struct PulseSegment {
  Envelope envelope = Envelope::square;
  double amplitude = 1.0;  // fraction of full scale
  double duration_s = 0.0;
  double carrier_hz = 0.0;
  double phase_rad = 0.0;  // relative to segment start
  double sigma_s = 0.0;    // gaussian only
  /// FDMA: when non-empty, replaces the single carrier with a sum of tones
  /// under the shared envelope.
  std::vector<Tone> tones;
};

struct PulseProgram {
  double sample_rate_hz = 0.0;
  std::vector<PulseSegment> segments;
};

/// round_half_away(duration * sample_rate).
std::size_t segment_samples(const PulseSegment& seg, double sample_rate_hz);

/// Throws InvalidProgram, AliasedCarrier or ProgramTooLong.
void validate(const PulseProgram& program);

/// Envelope over n samples at t_i = i / fs, peak-normalised where applicable.
std::vector<double> envelope(const PulseSegment& seg, std::size_t n, double sample_rate_hz);

/// Real-valued samples in [-1, 1].
std::vector<double> synth(const PulseProgram& program);

/// code = clamp(round_half_away(127.5 + 127.5 * s), 0, 255).
std::vector<std::uint8_t> quantize(std::span<const double> samples);

constexpr double dequantize(std::uint8_t code) noexcept { return (code - 127.5) / 127.5; }

struct Compiled {
  std::vector<std::uint8_t> codes;  // before frame padding
  patgen::SramImage image;
  std::size_t ffe_clip_count = 0;
};

/// synth -> optional apply_ffe -> quantize -> pack_image.
Compiled compile_program(const PulseProgram& program, const std::optional<eq::FfeTaps>& ffe = std::nullopt);

inline patgen::SramImage compile(const PulseProgram& program, const std::optional<eq::FfeTaps>& ffe = std::nullopt) {
  return compile_program(program, ffe).image;
}

// JSON program files use ns, GHz and radians:
// {"sample_rate_ghz": 20.48,
//  "segments": [{"envelope": "raised_cosine", "amplitude": 1.0, "duration_ns": 200,
//                "tones": [{"amplitude": 0.45, "frequency_ghz": 5.1, "phase_rad": 0}]}]}
// Validation failures raise FormatError naming the offending field.
PulseProgram parse_program(const std::string& json_text);
PulseProgram load_program(const std::filesystem::path& path);

}  // namespace awgsim::wavec
