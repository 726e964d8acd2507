#include "awgsim/csv.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "awgsim/error.hpp"

namespace awgsim::csv {
namespace {

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) raise(Errc::io_error, "cannot open " + path.string() + " for writing");
  return out;
}

}  // namespace

std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

void write_trace(const std::filesystem::path& path, const dac::AnalogTrace& trace) {
  auto out = open_out(path);
  out << "time_s,voltage_v\n";
  for (std::size_t i = 0; i < trace.size(); ++i)
    out << format_number(trace.time_at(i)) << ',' << format_number(trace.samples[i]) << '\n';
}

dac::AnalogTrace read_trace(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) raise(Errc::io_error, "cannot open " + path.string());
  std::string line;
  std::vector<double> times;
  dac::AnalogTrace trace;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    if (lineno == 1 && line.rfind("time_s", 0) == 0) continue;
    double t = 0.0, v = 0.0;
    char comma = 0;
    std::istringstream ss(line);
    if (!(ss >> t >> comma >> v) || comma != ',')
      raise(Errc::format_error, path.string() + ":" + std::to_string(lineno) + ": expected time_s,voltage_v");
    times.push_back(t);
    trace.samples.push_back(v);
  }
  if (times.size() < 2) raise(Errc::insufficient_samples, path.string() + ": need at least two samples");
  trace.start_time = times.front();
  trace.sample_period = (times.back() - times.front()) / static_cast<double>(times.size() - 1);
  if (!(trace.sample_period > 0.0)) raise(Errc::format_error, path.string() + ": time column must increase");
  return trace;
}

void write_levels(const std::filesystem::path& path, const dac::LevelTable& table) {
  auto out = open_out(path);
  out << "code,voltage\n";
  for (int c = 0; c < 256; ++c) out << c << ',' << format_number(table.volts[c]) << '\n';
}

void write_spectrum(const std::filesystem::path& path, const analysis::Spectrum& spec) {
  auto out = open_out(path);
  out << "freq_hz,dbfs\n";
  for (std::size_t k = 0; k < spec.bins(); ++k)
    out << format_number(spec.frequency_hz[k]) << ',' << format_number(spec.dbfs[k]) << '\n';
}

void write_edges(const std::filesystem::path& path, const clock::EdgeSchedule& edges) {
  auto out = open_out(path);
  out << "index,time_s\n";
  for (std::size_t k = 0; k < edges.size(); ++k) out << k << ',' << format_number(edges.edge_times[k]) << '\n';
}

void write_eye(const std::filesystem::path& path, const analysis::EyeDiagram& eye) {
  auto out = open_out(path);
  out << "time_s,voltage_v,count\n";
  for (std::size_t t = 0; t < eye.time_bins; ++t)
    for (std::size_t v = 0; v < eye.volt_bins; ++v) {
      const double tc = (static_cast<double>(t) + 0.5) * eye.time_bin_width();
      const double vc = eye.v_min + (static_cast<double>(v) + 0.5) * eye.volt_bin_height();
      out << format_number(tc) << ',' << format_number(vc) << ',' << eye.at(t, v) << '\n';
    }
}

void write_codes(const std::filesystem::path& path, std::span<const std::uint8_t> codes) {
  auto out = open_out(path);
  out << "index,code\n";
  for (std::size_t i = 0; i < codes.size(); ++i) out << i << ',' << static_cast<int>(codes[i]) << '\n';
}

}  // namespace awgsim::csv
