#pragma once

// End-to-end playback of a pattern memory image through the modelled chip and
// cable, plus the measurement set-ups built on top of it (DC ramp, PRBS eye).

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "awgsim/clocktree.hpp"
#include "awgsim/dacmodel.hpp"
#include "awgsim/equalizer.hpp"
#include "awgsim/patgen.hpp"

namespace awgsim::pipeline {

struct SignalChain {
  dac::DacConfig dac;
  clock::ClockConfig clock;
  std::optional<eq::ChannelModel> channel;
  int oversample = 8;
};

struct Playback {
  std::vector<std::uint8_t> codes;  // as seen by the DAC, after the serializer
  clock::EdgeSchedule edges;
  dac::AnalogTrace trace;           // after the channel, when one is configured
};

/// image -> sequencer -> 32:4 / 4:1 serializer -> segment sum -> render -> channel.
Playback play(const patgen::SramImage& image, const patgen::SequencerConfig& seq, const SignalChain& chain);

/// Every code 0..255 held for hold_samples full-rate samples.
std::vector<std::uint8_t> dc_ramp_codes(std::size_t hold_samples);

/// Averages the settled second half of each code's hold window.
dac::LevelTable measure_ramp_levels(const dac::AnalogTrace& trace, std::size_t hold_samples, int oversample);

/// +amplitude for a one, -amplitude for a zero.
std::vector<double> prbs7_symbols(double amplitude, unsigned seed, std::size_t n);

struct PrbsEyeSetup {
  double sample_rate = 20e9;
  double amplitude = 0.45;
  unsigned seed = 0x7f;
  std::size_t periods = 32;  // whole PRBS7 periods, 127 UI each
  int oversample = 16;
  dac::DacConfig dac;
};

struct PrbsEyeResult {
  dac::AnalogTrace trace;
  std::vector<double> crossings;
  double threshold = 0.0;
  double edge_dj_pkpk = 0.0;  // seconds
  std::size_t clip_count = 0;
};

/// Plays PRBS7 (optionally FFE pre-distorted, loop-periodic boundary) through
/// the full chip model and the channel, and measures crossing DJ after the
/// first pattern period.
PrbsEyeResult prbs_eye(const eq::ChannelModel& channel, const std::optional<eq::FfeTaps>& ffe,
                       const PrbsEyeSetup& setup);

}  // namespace awgsim::pipeline
