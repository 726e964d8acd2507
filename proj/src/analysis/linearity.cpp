#include "awgsim/analysis/linearity.hpp"

#include <algorithm>
#include <cmath>

#include "awgsim/error.hpp"

namespace awgsim::analysis {

double LinearityReport::max_abs_inl() const noexcept {
  double m = 0.0;
  for (double v : inl) m = std::max(m, std::abs(v));
  return m;
}

double LinearityReport::max_abs_dnl() const noexcept {
  double m = 0.0;
  for (double v : dnl) m = std::max(m, std::abs(v));
  return m;
}

LinearityReport inl_dnl(const dac::LevelTable& levels) {
  const auto& v = levels.volts;
  const double span = v[255] - v[0];
  if (span == 0.0 || !std::isfinite(span)) raise(Errc::degenerate_table, "level[255] equals level[0]");

  // Position of each level along the endpoint line, in codes.
  std::array<double, 256> pos;
  for (int c = 0; c < 256; ++c) pos[c] = (v[c] - v[0]) * 255.0 / span;

  LinearityReport r;
  r.lsb_volts = span / 255.0;
  for (int c = 0; c < 256; ++c) r.inl[c] = pos[c] - c;
  for (int c = 0; c < 255; ++c) r.dnl[c] = pos[c + 1] - pos[c] - 1.0;
  return r;
}

}  // namespace awgsim::analysis
