#include <cmath>
#include <fstream>

#include "awgsim/analysis/linearity.hpp"
#include "awgsim/csv.hpp"
#include "awgsim/error.hpp"
#include "awgsim/pipeline.hpp"
#include "doctest.h"
#include "support/gen.hpp"

using namespace awgsim;
using namespace awgsim::pipeline;

namespace {

Errc code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error raised");
  return Errc::invalid_argument;
}

}  // namespace

TEST_CASE("play: an ideal chain holds each code's level for one UI") {
  test::Gen g(81);
  const auto v = g.codes(32 * 12);
  const auto img = patgen::pack_image(v);
  SignalChain chain;
  chain.dac.output_rise_time = 0.0;
  chain.dac.weight_mismatch = g.mismatch<9>(0.02);
  chain.clock.sample_rate = 16e9;
  const auto out = play(img, patgen::SequencerConfig::whole(img), chain);
  CHECK(out.codes == v);
  REQUIRE(out.trace.size() == v.size() * 8);
  for (std::size_t j = 0; j < out.trace.size(); ++j)
    REQUIRE(out.trace.samples[j] == dac::level_of(v[j / 8], chain.dac));
}

TEST_CASE("play: looping the sequencer repeats the codes") {
  test::Gen g(82);
  const auto v = g.codes(32 * 5);
  const auto img = patgen::pack_image(v);
  SignalChain chain;
  const auto out = play(img, {1, 3, 3, 0}, chain);
  REQUIRE(out.codes.size() == 3 * 96);
  for (std::size_t i = 0; i < out.codes.size(); ++i) REQUIRE(out.codes[i] == v[32 + i % 96]);
  CHECK(out.edges.size() == out.codes.size());
}

TEST_CASE("play: channel output has the channel's DC gain on a constant") {
  const std::vector<std::uint8_t> v(64, 200);
  SignalChain chain;
  chain.channel = eq::ChannelModel{{1.0, 0.35}, 9e9};
  const auto out = play(patgen::pack_image(v), patgen::SequencerConfig::whole(patgen::pack_image(v)), chain);
  for (double s : out.trace.samples) CHECK(s == doctest::Approx(1.35 * 200 / 255.0).epsilon(1e-12));
}

TEST_CASE("DC ramp measurement recovers the level table") {
  test::Gen g(83);
  dac::DacConfig cfg;
  cfg.weight_mismatch = g.mismatch<9>(0.01);
  cfg.full_scale_voltage = 0.9;
  const std::size_t hold = 64;
  const auto codes = dc_ramp_codes(hold);
  REQUIRE(codes.size() == 256 * hold);
  for (std::size_t i = 0; i < codes.size(); ++i) REQUIRE(codes[i] == i / hold);
  const auto img = patgen::pack_image(codes);
  SignalChain chain;
  chain.dac = cfg;
  const auto out = play(img, patgen::SequencerConfig::whole(img), chain);
  const auto measured = measure_ramp_levels(out.trace, hold, chain.oversample);
  const auto table = dac::build_level_table(cfg);
  for (int c = 0; c < 256; ++c) CHECK(measured.volts[c] == doctest::Approx(table.volts[c]).epsilon(1e-9).scale(1.0));
  const auto a = analysis::inl_dnl(measured), b = analysis::inl_dnl(table);
  CHECK(a.max_abs_inl() == doctest::Approx(b.max_abs_inl()).epsilon(1e-6));
  CHECK(a.max_abs_dnl() == doctest::Approx(b.max_abs_dnl()).epsilon(1e-6));

  CHECK(code_of([] { dc_ramp_codes(0); }) == Errc::invalid_argument);
  CHECK(code_of([] { dc_ramp_codes(129); }) == Errc::invalid_argument);
  CHECK(code_of([&] { measure_ramp_levels(out.trace, hold * 2, chain.oversample); }) == Errc::insufficient_samples);
}

TEST_CASE("prbs7_symbols") {
  const auto s = prbs7_symbols(0.45, 0x7f, 254);
  const auto bits = eq::prbs7(0x7f, 254);
  for (std::size_t i = 0; i < s.size(); ++i) CHECK(s[i] == (bits[i] ? 0.45 : -0.45));
}

TEST_CASE("prbs_eye: FFE reduces edge DJ behind the reference channel") {
  const eq::ChannelModel ref{{1.0, 0.35}, 9e9};
  PrbsEyeSetup setup;
  const auto plain = prbs_eye(ref, std::nullopt, setup);
  const auto eqd = prbs_eye(ref, eq::solve_ffe(ref, 5, 0), setup);
  CHECK(plain.crossings.size() > 1000);
  CHECK(eqd.clip_count == 0);
  CHECK(plain.threshold == doctest::Approx(0.675));
  CHECK(eqd.edge_dj_pkpk < plain.edge_dj_pkpk);
  // With no channel and an ideal clock, the only DJ left is the render's own.
  const auto clean = prbs_eye(eq::ChannelModel{}, std::nullopt, setup);
  CHECK(clean.edge_dj_pkpk < 0.1e-12);

  setup.periods = 31;
  CHECK(code_of([&] { prbs_eye(ref, std::nullopt, setup); }) == Errc::invalid_argument);
}

TEST_CASE("CSV exports") {
  test::TempDir dir;
  SUBCASE("trace round trip") {
    test::Gen g(84);
    dac::AnalogTrace tr;
    tr.sample_period = 6.25e-12;
    tr.start_time = 1e-9;
    tr.samples = g.reals(500, -1, 1);
    csv::write_trace(dir / "t.csv", tr);
    const auto back = csv::read_trace(dir / "t.csv");
    REQUIRE(back.size() == tr.size());
    CHECK(back.sample_period == doctest::Approx(tr.sample_period).epsilon(1e-8));
    CHECK(back.start_time == doctest::Approx(tr.start_time).epsilon(1e-8));
    for (std::size_t i = 0; i < tr.size(); ++i) CHECK(back.samples[i] == doctest::Approx(tr.samples[i]).epsilon(1e-8));
    std::ifstream in(dir / "t.csv");
    std::string header;
    std::getline(in, header);
    CHECK(header == "time_s,voltage_v");
  }
  SUBCASE("malformed and missing files") {
    {
      std::ofstream out(dir / "bad.csv");
      out << "time_s,voltage_v\n0,1\nabc,2\n";
    }
    CHECK(code_of([&] { csv::read_trace(dir / "bad.csv"); }) == Errc::format_error);
    CHECK(code_of([&] { csv::read_trace(dir / "nope.csv"); }) == Errc::io_error);
  }
  SUBCASE("numbers carry nine significant digits") {
    CHECK(csv::format_number(0.5) == "0.5");
    CHECK(csv::format_number(1.0 / 3.0) == "0.333333333");
  }
  SUBCASE("codes") {
    const std::vector<std::uint8_t> codes{0, 128, 255};
    csv::write_codes(dir / "c.csv", codes);
    std::ifstream in(dir / "c.csv");
    std::string all((std::istreambuf_iterator<char>(in)), {});
    CHECK(all == "index,code\n0,0\n1,128\n2,255\n");
  }
}
