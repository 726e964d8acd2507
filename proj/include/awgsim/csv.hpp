#pragma once

// Plot-ready CSV exports. Numbers carry 9 significant digits.

#include <filesystem>
#include <span>
#include <string>

#include "awgsim/analysis/eye.hpp"
#include "awgsim/analysis/spectrum.hpp"
#include "awgsim/clocktree.hpp"
#include "awgsim/dacmodel.hpp"

namespace awgsim::csv {

std::string format_number(double v);

void write_trace(const std::filesystem::path& path, const dac::AnalogTrace& trace);       // time_s,voltage_v
/// Sample period is the mean spacing of the time column.
dac::AnalogTrace read_trace(const std::filesystem::path& path);
void write_levels(const std::filesystem::path& path, const dac::LevelTable& table);       // code,voltage
void write_spectrum(const std::filesystem::path& path, const analysis::Spectrum& spec);   // freq_hz,dbfs
void write_edges(const std::filesystem::path& path, const clock::EdgeSchedule& edges);    // index,time_s
void write_eye(const std::filesystem::path& path, const analysis::EyeDiagram& eye);       // time_s,voltage_v,count
void write_codes(const std::filesystem::path& path, std::span<const std::uint8_t> codes); // index,code

}  // namespace awgsim::csv
