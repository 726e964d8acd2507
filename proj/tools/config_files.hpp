#pragma once

// JSON config files for the DAC, clock, channel and FFE taps. Units: ns, GHz, V.

#include <filesystem>

#include "awgsim/clocktree.hpp"
#include "awgsim/dacmodel.hpp"
#include "awgsim/equalizer.hpp"
#include "awgsim/json_util.hpp"

namespace awgsim::cli {

using nlohmann::json;

// {"full_scale_v": 1.0, "weight_mismatch": [9 values], "rise_time_ns": 0.01}
dac::DacConfig dac_from_json(const json& j, const std::string& where);
// {"sample_rate_ghz": 20, "duty_cycle_error_ui": 0, "quadrature_error_ui": 0, "rj_sigma_ns": 0, "seed": 1}
clock::ClockConfig clock_from_json(const json& j, const std::string& where);
// [1.0, 0.35] or {"taps": [1.0, 0.35], "pole_ghz": 9.0}
eq::ChannelModel channel_from_json(const json& j, const std::string& where);
// [..] or {"taps": [..], "main_tap_index": 0}
eq::FfeTaps taps_from_json(const json& j, const std::string& where);
json taps_to_json(const eq::FfeTaps& taps);

/// A config entry is either an inline object or a path relative to base_dir.
json resolve(const json& entry, const std::filesystem::path& base_dir, const std::string& where);

/// FNV-1a 64-bit, hex encoded.
std::string fnv1a_hex(const std::string& bytes);

}  // namespace awgsim::cli
