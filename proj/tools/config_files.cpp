#include "config_files.hpp"

#include <cstdio>

#include "awgsim/error.hpp"

namespace awgsim::cli {
namespace {

std::vector<double> number_array(const json& j, const std::string& where) {
  jsonutil::array(j, where);
  std::vector<double> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) raise(Errc::format_error, where + "/" + std::to_string(i) + ": expected a number");
    out.push_back(j[i].get<double>());
  }
  return out;
}

}  // namespace

dac::DacConfig dac_from_json(const json& j, const std::string& where) {
  jsonutil::object(j, where);
  dac::DacConfig cfg;
  cfg.full_scale_voltage = jsonutil::number_or(j, "full_scale_v", cfg.full_scale_voltage, where);
  cfg.output_rise_time = jsonutil::number_or(j, "rise_time_ns", cfg.output_rise_time * 1e9, where) * 1e-9;
  if (j.contains("weight_mismatch")) {
    const auto m = number_array(j["weight_mismatch"], where + "/weight_mismatch");
    if (m.size() != kSegmentCount) raise(Errc::format_error, where + "/weight_mismatch: expected 9 values");
    std::copy(m.begin(), m.end(), cfg.weight_mismatch.begin());
  }
  cfg.validate();
  return cfg;
}

clock::ClockConfig clock_from_json(const json& j, const std::string& where) {
  jsonutil::object(j, where);
  clock::ClockConfig cfg;
  cfg.sample_rate = jsonutil::number(j, "sample_rate_ghz", where) * 1e9;
  cfg.duty_cycle_error = jsonutil::number_or(j, "duty_cycle_error_ui", 0.0, where);
  cfg.quadrature_error = jsonutil::number_or(j, "quadrature_error_ui", 0.0, where);
  cfg.rj_sigma = jsonutil::number_or(j, "rj_sigma_ns", 0.0, where) * 1e-9;
  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned()) raise(Errc::format_error, where + "/seed: expected a non-negative integer");
    cfg.rng_seed = j["seed"].get<std::uint64_t>();
  }
  cfg.validate();
  return cfg;
}

eq::ChannelModel channel_from_json(const json& j, const std::string& where) {
  eq::ChannelModel ch;
  if (j.is_array()) {
    ch.taps = number_array(j, where);
  } else {
    jsonutil::object(j, where);
    if (!j.contains("taps")) raise(Errc::format_error, where + "/taps: required field missing");
    ch.taps = number_array(j["taps"], where + "/taps");
    ch.pole_hz = jsonutil::number_or(j, "pole_ghz", 0.0, where) * 1e9;
  }
  ch.validate();
  return ch;
}

eq::FfeTaps taps_from_json(const json& j, const std::string& where) {
  eq::FfeTaps t;
  if (j.is_array()) {
    t.taps = number_array(j, where);
  } else {
    jsonutil::object(j, where);
    if (!j.contains("taps")) raise(Errc::format_error, where + "/taps: required field missing");
    t.taps = number_array(j["taps"], where + "/taps");
    if (j.contains("main_tap_index")) {
      if (!j["main_tap_index"].is_number_unsigned())
        raise(Errc::format_error, where + "/main_tap_index: expected a non-negative integer");
      t.main_tap_index = j["main_tap_index"].get<std::size_t>();
    }
    t.dc_scale = jsonutil::number_or(j, "dc_scale", 1.0, where);
  }
  t.validate();
  return t;
}

json taps_to_json(const eq::FfeTaps& taps) {
  return {{"taps", taps.taps}, {"main_tap_index", taps.main_tap_index}, {"dc_scale", taps.dc_scale}};
}

json resolve(const json& entry, const std::filesystem::path& base_dir, const std::string& where) {
  if (entry.is_string()) {
    std::filesystem::path p = entry.get<std::string>();
    if (p.is_relative()) p = base_dir / p;
    if (!std::filesystem::exists(p)) raise(Errc::io_error, where + ": file " + p.string() + " does not exist");
    return jsonutil::load(p);
  }
  return entry;
}

std::string fnv1a_hex(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace awgsim::cli
