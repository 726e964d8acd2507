#pragma once

#include <array>

#include "awgsim/dacmodel.hpp"

namespace awgsim::analysis {

/// Endpoint-fit static linearity, in LSB of the fit line.
struct LinearityReport {
  std::array<double, 256> inl{};
  std::array<double, 255> dnl{};
  double lsb_volts = 0.0;

  double max_abs_inl() const noexcept;
  double max_abs_dnl() const noexcept;
};

/// Throws DegenerateTable when level[255] == level[0].
LinearityReport inl_dnl(const dac::LevelTable& levels);

}  // namespace awgsim::analysis
