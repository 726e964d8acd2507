#include <cmath>

#include "awgsim/dacmodel.hpp"
#include "awgsim/error.hpp"
#include "doctest.h"
#include "support/gen.hpp"

using namespace awgsim;
using namespace awgsim::dac;

namespace {

// Brute-force level: walk the segments in order T2, T1, T0, B5..B0 and decide
// each enable from the code by comparison and remainder rather than shifts.
double oracle_level(int code, const std::array<double, 9>& mismatch, double fs) {
  const double nominal[9] = {64, 64, 64, 32, 16, 8, 4, 2, 1};
  bool on[9];
  on[0] = code >= 64;
  on[1] = code >= 128;
  on[2] = code >= 192;
  int rest = code % 64;
  for (int b = 0; b < 6; ++b) {
    const int weight = 32 >> b;
    on[3 + b] = rest >= weight;
    if (on[3 + b]) rest -= weight;
  }
  double sum = 0.0;
  for (int i = 0; i < 9; ++i)
    if (on[i]) sum += nominal[i] * (1.0 + mismatch[i]);
  return fs * sum / 255.0;
}

bool rel_close(double a, double b, double rel) { return std::abs(a - b) <= rel * std::max(std::abs(a), std::abs(b)); }

}  // namespace

TEST_CASE("thermometer_encode: code-sum identity over all codes") {
  for (int c = 0; c < 256; ++c) {
    const auto bits = thermometer_encode(static_cast<std::uint8_t>(c));
    int sum = 0;
    for (std::size_t i = 0; i < kSegmentCount; ++i) sum += bits[i] ? kNominalWeights[i] : 0;
    CHECK(sum == c);
    // Thermometer segments fill from T2 down.
    CHECK((bits[0] || !bits[1]));
    CHECK((bits[1] || !bits[2]));
  }
  const auto b0 = thermometer_encode(0), b255 = thermometer_encode(255);
  for (std::size_t i = 0; i < kSegmentCount; ++i) {
    CHECK_FALSE(b0[i]);
    CHECK(b255[i]);
  }
  const auto b130 = thermometer_encode(130);
  CHECK(b130 == SegmentBits{true, true, false, false, false, false, false, true, false});
}

TEST_CASE("level_of examples") {
  DacConfig cfg;
  CHECK(level_of(255, cfg) == 1.0);
  CHECK(level_of(128, cfg) == doctest::Approx(0.50196).epsilon(1e-5));
  CHECK(level_of(0, cfg) == 0.0);
  cfg.weight_mismatch[0] = 0.01;
  CHECK(level_of(64, cfg) == doctest::Approx(0.25349).epsilon(1e-5));
  CHECK(level_of(64, cfg) == doctest::Approx(64 * 1.01 / 255));
}

TEST_CASE("build_level_table") {
  SUBCASE("zero mismatch is exactly linear and strictly increasing") {
    const auto t = build_level_table(DacConfig{});
    for (int c = 0; c < 256; ++c) CHECK(t.volts[c] == static_cast<double>(c) / 255.0);
    for (int c = 1; c < 256; ++c) CHECK(t.volts[c] > t.volts[c - 1]);
  }
  SUBCASE("random mismatch matches the brute-force oracle") {
    test::Gen g(31);
    for (int trial = 0; trial < 100; ++trial) {
      DacConfig cfg;
      cfg.full_scale_voltage = g.real(0.2, 1.5);
      cfg.weight_mismatch = g.mismatch<9>(0.2);
      const auto t = build_level_table(cfg);
      for (int c = 0; c < 256; ++c) {
        const double o = oracle_level(c, cfg.weight_mismatch, cfg.full_scale_voltage);
        REQUIRE(rel_close(t.volts[c], o, 1e-12));
        REQUIRE(t.volts[c] == level_of(static_cast<std::uint8_t>(c), cfg));
      }
      CHECK(t.volts[0] == 0.0);
    }
  }
  SUBCASE("small mismatch keeps the table monotonic") {
    test::Gen g(32);
    for (int trial = 0; trial < 500; ++trial) {
      DacConfig cfg;
      cfg.weight_mismatch = g.mismatch<9>(0.004);
      const auto t = build_level_table(cfg);
      for (int c = 1; c < 256; ++c) REQUIRE(t.volts[c] > t.volts[c - 1]);
    }
  }
  SUBCASE("invalid configs") {
    DacConfig cfg;
    cfg.weight_mismatch[4] = 0.5;
    CHECK_THROWS_AS(build_level_table(cfg), Error);
    cfg = DacConfig{};
    cfg.full_scale_voltage = 0.0;
    CHECK_THROWS_AS(level_of(1, cfg), Error);
  }
}

TEST_CASE("render follows a superposition of single-pole step responses") {
  test::Gen g(33);
  clock::ClockConfig cc;
  cc.sample_rate = 20e9;
  cc.duty_cycle_error = 0.03;
  cc.quadrature_error = 0.02;
  cc.rj_sigma = 0.3e-12;
  const std::size_t n = 64;
  const auto edges = clock::derive_edges(n, cc);
  const auto levels = g.reals(n, 0.0, 1.0);
  const double rise = 12e-12, tau = rise / 2.2;
  const int os = 8;
  const auto tr = render_levels(levels, edges, rise, os);
  REQUIRE(tr.size() == n * os);
  CHECK(tr.sample_period == doctest::Approx(edges.nominal_period / os));
  for (std::size_t j = 0; j < tr.size(); ++j) {
    const double t = tr.time_at(j);
    double y = levels[0];
    for (std::size_t k = 1; k < n && edges.edge_times[k] <= t; ++k)
      y += (levels[k] - levels[k - 1]) * (1.0 - std::exp(-(t - edges.edge_times[k]) / tau));
    REQUIRE(tr.samples[j] == doctest::Approx(y).epsilon(1e-12).scale(1.0));
  }
}

TEST_CASE("render examples") {
  DacConfig cfg;
  SUBCASE("constant midscale settles at level(128)") {
    const std::vector<std::uint8_t> codes(40, 128);
    const auto tr = render(codes, clock::ideal_edges(codes.size(), 20e9), cfg, 8);
    for (double v : tr.samples) CHECK(v == level_of(128, cfg));
  }
  SUBCASE("alternating 0/255 crosses midscale once per edge") {
    std::vector<std::uint8_t> codes(200);
    for (std::size_t i = 0; i < codes.size(); ++i) codes[i] = i % 2 ? 255 : 0;
    const auto tr = render(codes, clock::ideal_edges(codes.size(), 20e9), cfg, 16);
    std::size_t crossings = 0;
    for (std::size_t j = 1; j < tr.size(); ++j)
      if ((tr.samples[j - 1] - 0.5) * (tr.samples[j] - 0.5) < 0.0) ++crossings;
    CHECK(crossings == codes.size() - 1);
  }
  SUBCASE("zero rise time gives an ideal full-scale step") {
    cfg.output_rise_time = 0.0;
    const std::vector<std::uint8_t> codes{0, 255};
    const auto tr = render(codes, clock::ideal_edges(2, 20e9), cfg, 8);
    for (std::size_t j = 0; j < 8; ++j) CHECK(tr.samples[j] == 0.0);
    for (std::size_t j = 8; j < 16; ++j) CHECK(tr.samples[j] == 1.0);
  }
  SUBCASE("errors") {
    const std::vector<std::uint8_t> codes{1, 2, 3};
    auto edges = clock::ideal_edges(3, 20e9);
    CHECK_THROWS_AS(render(codes, edges, cfg, 7), Error);
    edges.edge_times[2] = edges.edge_times[1];
    try {
      render(codes, edges, cfg, 8);
      FAIL("expected NonMonotonicEdges");
    } catch (const Error& e) {
      CHECK(e.code() == Errc::non_monotonic_edges);
    }
  }
}

TEST_CASE("render is time-shift equivariant on whole grid steps") {
  test::Gen g(34);
  DacConfig cfg;
  const auto codes = g.codes(50);
  const double fs = 10e9;
  const int os = 8;
  const auto base = clock::ideal_edges(codes.size(), fs);
  const auto tr0 = render(codes, base, cfg, os);
  for (int m : {1, 3, 8, 13}) {
    auto shifted = base;
    const double delta = m * base.nominal_period / os;
    for (double& e : shifted.edge_times) e += delta;
    const auto tr1 = render(codes, shifted, cfg, os);
    for (std::size_t j = static_cast<std::size_t>(m); j < tr1.size(); ++j)
      REQUIRE(tr1.samples[j] == doctest::Approx(tr0.samples[j - m]).epsilon(1e-9).scale(1.0));
  }
}

TEST_CASE("segment_levels equals level_of on the decoded code") {
  test::Gen g(35);
  DacConfig cfg;
  cfg.weight_mismatch = g.mismatch<9>(0.05);
  cfg.full_scale_voltage = 0.8;
  std::vector<patgen::PatternFrame> frames(8);
  for (auto& f : frames)
    for (auto& c : f) c = g.code();
  const auto streams = patgen::serialize(frames);
  const auto lv = segment_levels(streams, cfg);
  for (std::size_t n = 0; n < lv.size(); ++n) REQUIRE(lv[n] == level_of(frames[n / 32][n % 32], cfg));
}
