#include <cmath>
#include <numbers>

#include "awgsim/equalizer.hpp"
#include "awgsim/error.hpp"
#include "doctest.h"
#include "support/gen.hpp"

using namespace awgsim;
using namespace awgsim::eq;

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

// Register-array LFSR: r[0] is the newest bit, feedback from stages 7 and 6.
std::vector<int> lfsr_oracle(unsigned seed, std::size_t n) {
  int r[7];
  for (int i = 0; i < 7; ++i) r[i] = (seed >> i) & 1;
  std::vector<int> out;
  for (std::size_t k = 0; k < n; ++k) {
    const int fb = r[6] ^ r[5];
    for (int i = 6; i > 0; --i) r[i] = r[i - 1];
    r[0] = fb;
    out.push_back(fb);
  }
  return out;
}

std::vector<double> direct_convolution(const std::vector<double>& x, const std::vector<double>& h) {
  std::vector<double> y(x.size(), 0.0);
  for (std::size_t n = 0; n < x.size(); ++n)
    for (std::size_t k = 0; k < h.size() && k <= n; ++k) y[n] += h[k] * x[n - k];
  return y;
}

// Normal equations solved by plain Gaussian elimination, independent of the library's QR.
std::vector<double> normal_equation_taps(const std::vector<double>& ch, std::size_t n, std::size_t main) {
  const std::size_t rows = n + ch.size() - 1;
  std::vector<std::vector<double>> a(rows, std::vector<double>(n, 0.0));
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < ch.size(); ++i) a[i + j][j] = ch[i];
  std::vector<std::vector<double>> m(n, std::vector<double>(n + 1, 0.0));
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c)
      for (std::size_t k = 0; k < rows; ++k) m[r][c] += a[k][r] * a[k][c];
    m[r][n] = a[main][r];
  }
  for (std::size_t p = 0; p < n; ++p) {
    for (std::size_t r = p + 1; r < n; ++r) {
      const double f = m[r][p] / m[p][p];
      for (std::size_t c = p; c <= n; ++c) m[r][c] -= f * m[p][c];
    }
  }
  std::vector<double> w(n);
  for (std::size_t p = n; p-- > 0;) {
    double s = m[p][n];
    for (std::size_t c = p + 1; c < n; ++c) s -= m[p][c] * w[c];
    w[p] = s / m[p][p];
  }
  return w;
}

}  // namespace

TEST_CASE("prbs7") {
  SUBCASE("matches the register-array oracle for every seed") {
    for (unsigned seed = 1; seed < 128; ++seed) {
      const auto bits = prbs7(seed, 300);
      const auto oracle = lfsr_oracle(seed, 300);
      for (std::size_t i = 0; i < 300; ++i) REQUIRE(bits[i] == oracle[i]);
    }
  }
  SUBCASE("seed all-ones, first seven outputs") {
    const auto bits = prbs7(0x7f, 7);
    const auto oracle = lfsr_oracle(0x7f, 7);
    for (std::size_t i = 0; i < 7; ++i) CHECK(bits[i] == oracle[i]);
  }
  SUBCASE("period is exactly 127 with 64 ones per period") {
    for (unsigned seed : {1u, 0x40u, 0x55u, 0x7fu}) {
      const auto bits = prbs7(seed, 254);
      for (std::size_t i = 0; i < 127; ++i) REQUIRE(bits[i] == bits[i + 127]);
      CHECK(std::count(bits.begin(), bits.begin() + 127, 1) == 64);
      // 127 is prime, so the only shorter period would be 1.
      CHECK(std::count(bits.begin(), bits.begin() + 127, 0) == 63);
    }
  }
  SUBCASE("errors") {
    CHECK(code_of([] { prbs7(0, 10); }) == Errc::zero_seed);
    CHECK(code_of([] { prbs7(128, 10); }) == Errc::invalid_argument);
  }
}

TEST_CASE("apply_channel on symbol sequences") {
  test::Gen g(61);
  const std::vector<double> x{1, 2, 3};
  CHECK(apply_channel(x, ChannelModel{}) == x);
  std::vector<double> impulse(6, 0.0);
  impulse[0] = 1.0;
  const auto r = apply_channel(impulse, ChannelModel{{1.0, 0.3}, 0.0});
  CHECK(r == std::vector<double>{1.0, 0.3, 0, 0, 0, 0});
  for (int trial = 0; trial < 50; ++trial) {
    const ChannelModel ch{g.reals(g.size(1, 6), -1, 1), 0.0};
    if (ch.taps[0] == 0.0) continue;
    const auto xs = g.reals(g.size(1, 100), -1, 1);
    const auto y = apply_channel(xs, ch);
    const auto o = direct_convolution(xs, ch.taps);
    for (std::size_t i = 0; i < y.size(); ++i) CHECK(y[i] == doctest::Approx(o[i]).epsilon(1e-12).scale(1.0));
  }
  CHECK(code_of([] { apply_channel(std::vector<double>{1.0}, ChannelModel{{0.0, 1.0}, 0.0}); }) == Errc::invalid_config);
  CHECK(code_of([] { apply_channel(std::vector<double>{}, ChannelModel{}); }) == Errc::invalid_argument);
}

TEST_CASE("apply_channel on traces: UI-spaced taps then a discrete pole") {
  test::Gen g(62);
  dac::AnalogTrace tr;
  tr.sample_period = 5e-12;
  tr.samples = g.reals(400, 0, 1);
  const double ui = 8 * tr.sample_period;
  const ChannelModel ch{{1.0, 0.35, -0.1}, 9e9};
  const auto out = apply_channel(tr, ch, ui);
  REQUIRE(out.size() == tr.size());
  const double a = std::exp(-2 * std::numbers::pi * 9e9 * tr.sample_period);
  double y = 0.0;
  for (std::size_t j = 0; j < tr.size(); ++j) {
    double fir = 0.0;
    for (std::size_t k = 0; k < 3; ++k) {
      const long idx = static_cast<long>(j) - static_cast<long>(8 * k);
      fir += ch.taps[k] * tr.samples[idx < 0 ? 0 : idx];
    }
    y = j == 0 ? fir : a * y + (1 - a) * fir;
    REQUIRE(out.samples[j] == doctest::Approx(y).epsilon(1e-12).scale(1.0));
  }
  CHECK(code_of([&] { apply_channel(tr, ch, 7.5 * tr.sample_period); }) == Errc::invalid_argument);
}

TEST_CASE("solve_ffe") {
  SUBCASE("identity channel gives a unit impulse at the main tap") {
    for (std::size_t n = 1; n <= 8; ++n)
      for (std::size_t m = 0; m < n; ++m) {
        const auto t = solve_ffe(ChannelModel{}, n, m);
        for (std::size_t k = 0; k < n; ++k) CHECK(t.taps[k] == doctest::Approx(k == m ? 1.0 : 0.0).scale(1.0));
        CHECK(t.main_tap_index == m);
      }
  }
  SUBCASE("[1, 0.3] with three taps is proportional to the truncated inverse") {
    const ChannelModel ch{{1.0, 0.3}, 0.0};
    const auto t = solve_ffe(ch, 3, 0);
    // Scale so the main tap is 1 and compare with 1 / (1 + 0.3 z^-1) truncated.
    CHECK(t.taps[1] / t.taps[0] == doctest::Approx(-0.3).epsilon(0.01));
    CHECK(t.taps[2] / t.taps[0] == doctest::Approx(0.09).epsilon(0.1));
    const auto ne = normal_equation_taps(ch.taps, 3, 0);
    for (std::size_t k = 0; k < 3; ++k) CHECK(t.taps[k] / t.dc_scale == doctest::Approx(ne[k]).epsilon(1e-10));
    double sum = 0.0;
    for (double x : t.taps) sum += x;
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-14));
  }
  SUBCASE("random channels match the normal-equation oracle") {
    test::Gen g(63);
    for (int trial = 0; trial < 100; ++trial) {
      ChannelModel ch{g.reals(g.size(1, 5), -0.5, 0.5), 0.0};
      ch.taps[0] = g.real(0.5, 1.5);
      const std::size_t n = g.size(1, 12), m = g.size(0, n - 1);
      const auto t = solve_ffe(ch, n, m);
      const auto ne = normal_equation_taps(ch.taps, n, m);
      for (std::size_t k = 0; k < n; ++k) CHECK(t.taps[k] / t.dc_scale == doctest::Approx(ne[k]).epsilon(1e-8).scale(1.0));
    }
  }
  SUBCASE("post-cursor ISI on [1, 0.3] drops by at least 90%") {
    const ChannelModel ch{{1.0, 0.3}, 0.0};
    const auto before = isi_report(ch.taps, 0);
    const auto after = isi_report(combined_response(ch, solve_ffe(ch, 3, 0)), 0);
    // Worst single post-cursor. The summed residual only falls ~89% because the
    // least-squares fit spreads error over the tail instead of zeroing early cursors.
    CHECK(after.peak_isi <= 0.1 * before.peak_isi);
    CHECK(after.residual_isi < 0.12 * before.residual_isi);
  }
  SUBCASE("errors") {
    CHECK(code_of([] { solve_ffe(ChannelModel{}, 0, 0); }) == Errc::invalid_argument);
    CHECK(code_of([] { solve_ffe(ChannelModel{}, 33, 0); }) == Errc::invalid_argument);
    CHECK(code_of([] { solve_ffe(ChannelModel{}, 3, 3); }) == Errc::invalid_argument);
    CHECK(code_of([] { solve_ffe(ChannelModel{{1e-200}, 0.0}, 3, 0); }) == Errc::singular_system);
  }
}

TEST_CASE("solved taps are a local least-squares minimum") {
  test::Gen g(64);
  for (int trial = 0; trial < 50; ++trial) {
    ChannelModel ch{g.reals(g.size(2, 5), -0.4, 0.4), 0.0};
    ch.taps[0] = 1.0;
    const std::size_t n = g.size(2, 9), m = g.size(0, n - 1);
    const auto t = solve_ffe(ch, n, m);
    std::vector<double> w(n);
    for (std::size_t k = 0; k < n; ++k) w[k] = t.taps[k] / t.dc_scale;
    const double r0 = ls_residual(ch, w, m);
    for (std::size_t k = 0; k < n; ++k)
      for (double d : {1e-3, -1e-3}) {
        auto p = w;
        p[k] += d;
        CHECK(ls_residual(ch, p, m) >= r0);
      }
  }
}

TEST_CASE("residual ISI falls strictly with 3, 5 and 7 taps on the reference channel taps") {
  const ChannelModel ch{{1.0, 0.35}, 0.0};
  double last = isi_report(ch.taps, 0).residual_isi;
  for (std::size_t n : {3u, 5u, 7u}) {
    const auto t = solve_ffe(ch, n, 0);
    const double isi = isi_report(combined_response(ch, t), 0).residual_isi;
    CAPTURE(n);
    CHECK(isi < last);
    last = isi;
  }
}

TEST_CASE("apply_ffe") {
  test::Gen g(65);
  SUBCASE("delta taps are the identity") {
    const auto x = g.reals(77, -1, 1);
    FfeTaps d{{0.0, 1.0, 0.0}, 1, 1.0};
    CHECK(apply_ffe(x, d).samples == x);
    CHECK(apply_ffe(x, FfeTaps{}).samples == x);
  }
  SUBCASE("matches y[n] = sum taps[k] x[n + main - k] with either boundary") {
    const auto x = g.reals(64, -0.3, 0.3);
    const FfeTaps t{{0.1, 0.9, -0.2, 0.2}, 1, 1.0};
    for (Boundary b : {Boundary::hold, Boundary::periodic}) {
      const auto y = apply_ffe(x, t, b).samples;
      for (long n = 0; n < 64; ++n) {
        double o = 0.0;
        for (long k = 0; k < 4; ++k) {
          long i = n + 1 - k;
          if (b == Boundary::periodic) i = (i + 64) % 64;
          else i = std::clamp(i, 0L, 63L);
          o += t.taps[k] * x[i];
        }
        CHECK(y[n] == doctest::Approx(o).epsilon(1e-12).scale(1.0));
      }
    }
  }
  SUBCASE("constant input keeps its level after the DC rescale") {
    const auto t = solve_ffe(ChannelModel{{1.0, 0.35}, 0.0}, 5, 1);
    const std::vector<double> x(100, 0.5);
    for (double v : apply_ffe(x, t).samples) CHECK(v == doctest::Approx(0.5).epsilon(1e-12));
  }
  SUBCASE("clipping is counted") {
    const std::vector<double> x{0.9, -0.9, 0.9, -0.9};
    const auto out = apply_ffe(x, FfeTaps{{2.0}, 0, 1.0});
    CHECK(out.clip_count == 4);
    CHECK(out.samples == std::vector<double>{1, -1, 1, -1});
  }
  SUBCASE("equalized PRBS7 opens the eye at the sampling instants") {
    const ChannelModel ch{{1.0, 0.3}, 0.0};
    const auto bits = prbs7(0x7f, 127 * 4);
    std::vector<double> x(bits.size());
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = bits[i] ? 0.8 : -0.8;
    auto opening = [&](const std::vector<double>& tx) {
      const auto rx = apply_channel(tx, ch);
      double worst = 1e9;
      for (std::size_t i = 8; i < rx.size(); ++i) worst = std::min(worst, (x[i] > 0 ? 1 : -1) * rx[i]);
      return worst;
    };
    const auto eqd = apply_ffe(x, solve_ffe(ch, 3, 0), Boundary::periodic);
    CHECK(opening(eqd.samples) > opening(x));
  }
}
