#include <cmath>
#include <fstream>
#include <sstream>

#include "awgsim/error.hpp"
#include "awgsim/json_util.hpp"
#include "awgsim/wavec.hpp"

namespace awgsim {
namespace jsonutil {

json parse(const std::string& text, const std::string& source) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') { ++line; col = 1; }
      else ++col;
    }
    raise(Errc::format_error, source + ":" + std::to_string(line) + ":" + std::to_string(col) + ": invalid JSON");
  }
}

json load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) raise(Errc::io_error, "cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str(), path.string());
}

const json& object(const json& j, const std::string& where) {
  if (!j.is_object()) raise(Errc::format_error, where + ": expected an object");
  return j;
}

const json& array(const json& j, const std::string& where) {
  if (!j.is_array()) raise(Errc::format_error, where + ": expected an array");
  return j;
}

double number(const json& obj, const std::string& key, const std::string& where) {
  const auto it = obj.find(key);
  if (it == obj.end()) raise(Errc::format_error, where + "/" + key + ": required field missing");
  if (!it->is_number()) raise(Errc::format_error, where + "/" + key + ": expected a number");
  const double v = it->get<double>();
  if (!std::isfinite(v)) raise(Errc::format_error, where + "/" + key + ": must be finite");
  return v;
}

double number_or(const json& obj, const std::string& key, double fallback, const std::string& where) {
  return obj.contains(key) ? number(obj, key, where) : fallback;
}

std::string string(const json& obj, const std::string& key, const std::string& where) {
  const auto it = obj.find(key);
  if (it == obj.end()) raise(Errc::format_error, where + "/" + key + ": required field missing");
  if (!it->is_string()) raise(Errc::format_error, where + "/" + key + ": expected a string");
  return it->get<std::string>();
}

}  // namespace jsonutil

namespace wavec {
namespace {

using jsonutil::json;

Envelope envelope_from(const std::string& name, const std::string& where) {
  if (name == "gaussian") return Envelope::gaussian;
  if (name == "raised_cosine") return Envelope::raised_cosine;
  if (name == "square") return Envelope::square;
  if (name == "flat_gap") return Envelope::flat_gap;
  raise(Errc::format_error, where + "/envelope: unknown envelope '" + name + "'");
}

PulseProgram from_json(const json& doc) {
  jsonutil::object(doc, "");
  PulseProgram p;
  p.sample_rate_hz = jsonutil::number(doc, "sample_rate_ghz", "") * 1e9;
  if (!doc.contains("segments")) raise(Errc::format_error, "/segments: required field missing");
  const auto& segs = jsonutil::array(doc["segments"], "/segments");
  for (std::size_t i = 0; i < segs.size(); ++i) {
    const std::string where = "/segments/" + std::to_string(i);
    const auto& js = jsonutil::object(segs[i], where);
    PulseSegment s;
    s.envelope = envelope_from(jsonutil::string(js, "envelope", where), where);
    s.amplitude = jsonutil::number_or(js, "amplitude", 1.0, where);
    s.duration_s = jsonutil::number(js, "duration_ns", where) * 1e-9;
    s.carrier_hz = jsonutil::number_or(js, "carrier_ghz", 0.0, where) * 1e9;
    s.phase_rad = jsonutil::number_or(js, "phase_rad", 0.0, where);
    s.sigma_s = jsonutil::number_or(js, "sigma_ns", 0.0, where) * 1e-9;
    if (js.contains("tones")) {
      const auto& tones = jsonutil::array(js["tones"], where + "/tones");
      for (std::size_t t = 0; t < tones.size(); ++t) {
        const std::string tw = where + "/tones/" + std::to_string(t);
        const auto& jt = jsonutil::object(tones[t], tw);
        s.tones.push_back({jsonutil::number(jt, "amplitude", tw), jsonutil::number(jt, "frequency_ghz", tw) * 1e9,
                           jsonutil::number_or(jt, "phase_rad", 0.0, tw)});
      }
    }
    p.segments.push_back(std::move(s));
  }
  return p;
}

}  // namespace

PulseProgram parse_program(const std::string& json_text) { return from_json(jsonutil::parse(json_text, "<program>")); }

PulseProgram load_program(const std::filesystem::path& path) { return from_json(jsonutil::load(path)); }

}  // namespace wavec
}  // namespace awgsim
