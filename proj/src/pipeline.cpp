#include "awgsim/pipeline.hpp"

#include <string>

#include "awgsim/analysis/jitter.hpp"
#include "awgsim/error.hpp"
#include "awgsim/wavec.hpp"

namespace awgsim::pipeline {

Playback play(const patgen::SramImage& image, const patgen::SequencerConfig& seq, const SignalChain& chain) {
  chain.dac.validate();
  chain.clock.validate();
  const auto frames = patgen::run_sequencer(image, seq);
  const auto streams = patgen::serialize(frames);

  Playback out;
  out.codes = patgen::deserialize(streams);
  out.edges = clock::derive_edges(streams.size(), chain.clock);
  const auto levels = dac::segment_levels(streams, chain.dac);
  out.trace = dac::render_levels(levels, out.edges, chain.dac.output_rise_time, chain.oversample);
  if (chain.channel) out.trace = eq::apply_channel(out.trace, *chain.channel, out.edges.nominal_period);
  return out;
}

std::vector<std::uint8_t> dc_ramp_codes(std::size_t hold_samples) {
  if (hold_samples == 0 || hold_samples * 256 > patgen::kCapacity)
    raise(Errc::invalid_argument, "ramp hold must be 1..128 samples per code");
  std::vector<std::uint8_t> codes;
  codes.reserve(hold_samples * 256);
  for (int c = 0; c < 256; ++c) codes.insert(codes.end(), hold_samples, static_cast<std::uint8_t>(c));
  return codes;
}

dac::LevelTable measure_ramp_levels(const dac::AnalogTrace& trace, std::size_t hold_samples, int oversample) {
  const std::size_t window = hold_samples * static_cast<std::size_t>(oversample);
  if (trace.size() < 256 * window) raise(Errc::insufficient_samples, "trace shorter than a full DC ramp");
  dac::LevelTable t;
  for (std::size_t c = 0; c < 256; ++c) {
    double sum = 0.0;
    const std::size_t first = c * window + window / 2;
    for (std::size_t j = first; j < (c + 1) * window; ++j) sum += trace.samples[j];
    t.volts[c] = sum / static_cast<double>(window - window / 2);
  }
  return t;
}

std::vector<double> prbs7_symbols(double amplitude, unsigned seed, std::size_t n) {
  const auto bits = eq::prbs7(seed, n);
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = bits[i] ? amplitude : -amplitude;
  return out;
}

PrbsEyeResult prbs_eye(const eq::ChannelModel& channel, const std::optional<eq::FfeTaps>& ffe,
                       const PrbsEyeSetup& setup) {
  constexpr std::size_t kPeriod = 127;
  if (setup.periods < 2 || (setup.periods * kPeriod) % patgen::kFrameSamples != 0)
    raise(Errc::invalid_argument, "PRBS eye needs a multiple of 32 pattern periods so frames hold whole periods");
  auto symbols = prbs7_symbols(setup.amplitude, setup.seed, kPeriod * setup.periods);

  PrbsEyeResult r;
  if (ffe) {
    auto eq_out = eq::apply_ffe(symbols, *ffe, eq::Boundary::periodic);
    symbols = std::move(eq_out.samples);
    r.clip_count = eq_out.clip_count;
  }
  const auto image = patgen::pack_image(wavec::quantize(symbols));

  SignalChain chain;
  chain.dac = setup.dac;
  chain.clock.sample_rate = setup.sample_rate;
  chain.channel = channel;
  chain.oversample = setup.oversample;
  // Whole PRBS periods only; frame padding would break the pattern.
  patgen::SequencerConfig seq = patgen::SequencerConfig::whole(image);
  const auto played = play(image, seq, chain);

  const double ui = played.edges.nominal_period;
  r.threshold = channel.dc_gain() * setup.dac.full_scale_voltage * 0.5;
  r.crossings = analysis::find_crossings(played.trace, r.threshold, static_cast<double>(kPeriod) * ui);
  const double t_end = static_cast<double>(symbols.size()) * ui;
  std::erase_if(r.crossings, [&](double t) { return t > t_end; });
  r.edge_dj_pkpk = analysis::tie_peak_to_peak(r.crossings, ui);
  r.trace = played.trace;
  return r;
}

}  // namespace awgsim::pipeline
