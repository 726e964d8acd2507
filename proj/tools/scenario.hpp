#pragma once

// Scenario files: which pattern to play, through which chip/cable models, and
// which measurements to report.
//
// {
//   "name": "two_tone",
//   "source": {"program": "two_tone.json"}        | {"pattern": "ramp", "hold_samples": 128}
//           | {"pattern": "prbs7", "amplitude": 0.45, "seed": 127, "periods": 32}
//           | {"pattern": "square", "period_samples": 2, "amplitude": 1.0, "samples": 32768}
//           | {"image": "memory.bin"},
//   "ffe": "taps.json", "dac": {...}, "clock": {...}, "channel": [...],
//   "oversample": 8,
//   "sequencer": {"start_frame": 0, "frame_count": 128, "loop_count": 1, "byte_rotation": 0},
//   "analyses": ["sfdr", "im3", "thd", "linearity", "jitter", "eye", "power"],
//   "params": {"tones_ghz": [5.1, 5.3], "f0_ghz": 1.0, "harmonics": 5, "record": 32768,
//              "supply_v": 0.8, "eye_bins": [64, 64], "skip_ui": 16, "threshold_v": 0.5,
//              "guard_bins": 2, "band_ghz": 10.24},
//   "seed": 1
// }
// Config entries (program, dac, clock, channel, ffe) are inline objects or
// paths relative to the scenario file.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "awgsim/pipeline.hpp"
#include "config_files.hpp"

namespace awgsim::cli {

inline constexpr std::string_view kToolName = "awgsim";
inline constexpr std::string_view kToolVersion = "1.0.0";

enum class AnalysisKind { sfdr, im3, thd, linearity, jitter, eye, power };

std::optional<AnalysisKind> analysis_from_name(std::string_view name);
std::string_view analysis_name(AnalysisKind kind);
/// Parses a list of names; throws FormatError on unknown names.
std::vector<AnalysisKind> parse_analyses(const std::vector<std::string>& names);

struct AnalysisParams {
  std::vector<double> tones_hz;
  std::optional<double> f0_hz;
  int harmonics = 5;
  std::size_t guard_bins = 0;
  double band_hz = 0.0;  // sfdr/sndr search band; 0 means the DAC Nyquist zone, or all bins without a sample rate  // bins either side of each tone counted as signal (windowed pulses)
  std::size_t record = 0;  // 0: largest power of two that fits the trace
  double full_scale_amplitude = 0.5;
  double unit_interval = 0.0;
  double sample_rate_hz = 0.0;  // full-rate clock, for the power model
  double supply_v = 0.8;
  std::size_t eye_time_bins = 64;
  std::size_t eye_volt_bins = 64;
  std::size_t skip_ui = 16;
  std::optional<double> threshold_v;
  std::size_t ramp_hold = 0;
  int oversample = 8;
};

/// Checks that the parameters support the selected analyses. Throws FormatError.
void check_params(const std::vector<AnalysisKind>& analyses, const AnalysisParams& params);

/// Runs the selected analyses on a trace; plot CSVs land in out_dir.
/// Returns the "analyses" object of a report, one block per selection.
json analyze_trace(const dac::AnalogTrace& trace, const std::vector<AnalysisKind>& analyses,
                   const AnalysisParams& params, const std::filesystem::path& out_dir);

struct Scenario {
  std::string name;
  std::vector<AnalysisKind> analyses;
  AnalysisParams params;
  pipeline::SignalChain chain;
  patgen::SramImage image;
  patgen::SequencerConfig sequencer;
  std::uint64_t seed = 1;
  std::string config_hash;
  std::size_t ffe_clip_count = 0;
};

/// Loads and validates everything a run needs; throws on configuration errors.
Scenario load_scenario(const std::filesystem::path& file, std::optional<std::uint64_t> seed_override);

/// Plays the scenario and writes trace.csv, report.json and any plot CSVs.
json run_scenario(const Scenario& scenario, const std::filesystem::path& out_dir);

/// Report header shared by every command that writes a report.
json report_header(std::string_view scenario, std::uint64_t seed, const std::string& config_hash);

void write_json(const std::filesystem::path& path, const json& doc);

}  // namespace awgsim::cli
