#pragma once

// Cable channel model, PRBS7 test patterns, least-squares FFE tap training and
// pre-distortion of waveform samples.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "awgsim/dacmodel.hpp"

namespace awgsim::eq {

/// UI-spaced FIR (taps[0] is the main cursor) optionally followed by a
/// continuous-time single pole at pole_hz (0 disables it).
struct ChannelModel {
  std::vector<double> taps{1.0};
  double pole_hz = 0.0;

  /// Throws InvalidConfig.
  void validate() const;
  double dc_gain() const noexcept;
};

/// FIR [1.0, 0.35] followed by a pole at 0.45 x sample_rate.
ChannelModel reference_channel(double sample_rate);

/// Fibonacci LFSR x^7 + x^6 + 1, period 127. seed must be in 1..127.
std::vector<std::uint8_t> prbs7(unsigned seed, std::size_t n);

/// Linear convolution with the FIR taps, truncated to the input length.
std::vector<double> apply_channel(std::span<const double> samples, const ChannelModel& ch);

/// Applies FIR and pole to a rendered trace; FIR taps are spaced one UI apart,
/// which must be a whole number of trace samples. The pre-trace history holds
/// the first sample.
dac::AnalogTrace apply_channel(const dac::AnalogTrace& trace, const ChannelModel& ch, double unit_interval);

struct FfeTaps {
  std::vector<double> taps{1.0};
  std::size_t main_tap_index = 0;
  /// Factor applied to the least-squares solution so that sum(taps) == 1.
  double dc_scale = 1.0;

  /// Throws InvalidConfig.
  void validate() const;
};

/// Least squares on the combined response: minimises
/// sum_k (conv(ffe, ch)[k] - delta[k - main])^2, then rescales so the
/// equalized DC gain equals the channel DC gain.
FfeTaps solve_ffe(const ChannelModel& ch, std::size_t n_taps, std::size_t main_tap_index);

/// Squared error of conv(taps, ch) against a unit impulse at main.
double ls_residual(const ChannelModel& ch, std::span<const double> taps, std::size_t main_tap_index);

/// Full convolution of the FFE taps with the channel FIR.
std::vector<double> combined_response(const ChannelModel& ch, const FfeTaps& ffe);

struct IsiReport {
  double main_cursor = 0.0;
  double residual_isi = 0.0;  // sum |r_k| / |r_main| over k != main
  double peak_isi = 0.0;      // max |r_k| / |r_main| over k != main
};

IsiReport isi_report(std::span<const double> response, std::size_t main_index);

enum class Boundary {
  hold,      // samples before/after the sequence repeat the first/last value
  periodic,  // the sequence loops, as when the sequencer repeats it
};

struct FfeOutput {
  std::vector<double> samples;
  std::size_t clip_count = 0;
};

/// y[n] = sum_k taps[k] * x[n + main - k], clipped to [-1, 1].
FfeOutput apply_ffe(std::span<const double> samples, const FfeTaps& ffe, Boundary boundary = Boundary::hold);

}  // namespace awgsim::eq
