#include "scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "awgsim/analysis/eye.hpp"
#include "awgsim/analysis/jitter.hpp"
#include "awgsim/analysis/linearity.hpp"
#include "awgsim/analysis/power.hpp"
#include "awgsim/analysis/spectrum.hpp"
#include "awgsim/csv.hpp"
#include "awgsim/error.hpp"
#include "awgsim/wavec.hpp"

namespace awgsim::cli {
namespace {

constexpr std::array<std::pair<AnalysisKind, std::string_view>, 7> kAnalysisNames{{
    {AnalysisKind::sfdr, "sfdr"},
    {AnalysisKind::im3, "im3"},
    {AnalysisKind::thd, "thd"},
    {AnalysisKind::linearity, "linearity"},
    {AnalysisKind::jitter, "jitter"},
    {AnalysisKind::eye, "eye"},
    {AnalysisKind::power, "power"},
}};

json metric(double value, std::string_view units) { return {{"value", value}, {"units", units}}; }

bool selected(const std::vector<AnalysisKind>& list, AnalysisKind k) {
  return std::find(list.begin(), list.end(), k) != list.end();
}

std::size_t largest_pow2(std::size_t n) {
  std::size_t p = 1;
  while (p * 2 <= n) p *= 2;
  return p;
}

std::size_t uint_field(const json& obj, const std::string& key, std::size_t fallback, const std::string& where) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_number_unsigned()) raise(Errc::format_error, where + "/" + key + ": expected a non-negative integer");
  return obj[key].get<std::size_t>();
}

double threshold_for(const dac::AnalogTrace& trace, const AnalysisParams& p) {
  if (p.threshold_v) return *p.threshold_v;
  const auto [lo, hi] = std::minmax_element(trace.samples.begin(), trace.samples.end());
  return 0.5 * (*lo + *hi);
}

}  // namespace

std::optional<AnalysisKind> analysis_from_name(std::string_view name) {
  for (const auto& [kind, n] : kAnalysisNames)
    if (n == name) return kind;
  return std::nullopt;
}

std::string_view analysis_name(AnalysisKind kind) {
  for (const auto& [k, n] : kAnalysisNames)
    if (k == kind) return n;
  return "?";
}

std::vector<AnalysisKind> parse_analyses(const std::vector<std::string>& names) {
  std::vector<AnalysisKind> out;
  for (const auto& n : names) {
    const auto k = analysis_from_name(n);
    if (!k) raise(Errc::format_error, "/analyses: unknown analysis '" + n + "'");
    if (!selected(out, *k)) out.push_back(*k);
  }
  return out;
}

void check_params(const std::vector<AnalysisKind>& analyses, const AnalysisParams& p) {
  if (selected(analyses, AnalysisKind::im3) && p.tones_hz.size() != 2)
    raise(Errc::format_error, "/params/tones_ghz: im3 needs exactly two tones");
  if (selected(analyses, AnalysisKind::thd) && !p.f0_hz && p.tones_hz.empty())
    raise(Errc::format_error, "/params/f0_ghz: thd needs a fundamental");
  if (selected(analyses, AnalysisKind::linearity) && p.ramp_hold == 0)
    raise(Errc::format_error, "/source: linearity needs the DC ramp pattern");
  if ((selected(analyses, AnalysisKind::jitter) || selected(analyses, AnalysisKind::eye)) && !(p.unit_interval > 0.0))
    raise(Errc::format_error, "jitter and eye analyses need the unit interval");
  if (selected(analyses, AnalysisKind::power) && !(p.sample_rate_hz > 0.0))
    raise(Errc::format_error, "power analysis needs the sample rate");
  if (p.record != 0 && (p.record & (p.record - 1)) != 0)
    raise(Errc::format_error, "/params/record: must be a power of two");
}

json analyze_trace(const dac::AnalogTrace& trace, const std::vector<AnalysisKind>& analyses,
                   const AnalysisParams& p, const std::filesystem::path& out_dir) {
  json blocks = json::object();

  const bool spectral = selected(analyses, AnalysisKind::sfdr) || selected(analyses, AnalysisKind::im3) ||
                        selected(analyses, AnalysisKind::thd);
  if (spectral) {
    const std::size_t record = p.record ? p.record : largest_pow2(trace.size());
    const double fs = 1.0 / trace.sample_period;
    std::vector<double> tones;
    for (double f : p.tones_hz) tones.push_back(analysis::snap_to_bin(f, fs, record));
    std::optional<double> f0;
    if (p.f0_hz) f0 = analysis::snap_to_bin(*p.f0_hz, fs, record);
    else if (!tones.empty()) f0 = tones.front();

    std::vector<double> declared = tones;
    if (f0) declared.push_back(*f0);
    const auto spec = analysis::spectrum(trace, record, p.full_scale_amplitude, declared);
    csv::write_spectrum(out_dir / "spectrum.csv", spec);

    if (selected(analyses, AnalysisKind::sfdr)) {
      std::vector<std::size_t> bins;
      for (double f : tones) bins.push_back(spec.bin_of(f));
      if (bins.empty()) bins.push_back(f0 ? spec.bin_of(*f0) : analysis::peak_bin(spec));
      json freqs = json::array();
      for (std::size_t k : bins) freqs.push_back(spec.frequency_hz[k]);
      const double band = p.band_hz > 0.0 ? p.band_hz : 0.5 * p.sample_rate_hz;
      const std::size_t band_end =
          band > 0.0 ? std::min(spec.bins(), static_cast<std::size_t>(std::floor(band * record / fs)) + 1) : 0;
      const std::size_t centres = bins.size();
      for (std::size_t i = 0; i < centres; ++i)
        for (std::size_t d = 1; d <= p.guard_bins; ++d) {
          if (bins[i] >= d + 1) bins.push_back(bins[i] - d);
          if (bins[i] + d < spec.amplitude.size()) bins.push_back(bins[i] + d);
        }
      blocks["sfdr"] = {{"sfdr_db", metric(analysis::sfdr(spec, bins, band_end), "dB")},
                        {"sndr_db", metric(analysis::sndr(spec, bins, band_end), "dB")},
                        {"signal_hz", freqs},
                        {"band_hz", metric(band_end ? spec.frequency_hz[band_end - 1] : spec.frequency_hz.back(), "Hz")},
                        {"record", record}};
    }
    if (selected(analyses, AnalysisKind::im3)) {
      const double f1 = std::min(tones[0], tones[1]), f2 = std::max(tones[0], tones[1]);
      blocks["im3"] = {{"im3_dbc", metric(analysis::im3(spec, f1, f2), "dBc")},
                       {"f1_hz", metric(f1, "Hz")},
                       {"f2_hz", metric(f2, "Hz")},
                       {"tone_spacing_hz", metric(f2 - f1, "Hz")},
                       {"tone_bins", {spec.bin_of(f1), spec.bin_of(f2)}},
                       {"record", record}};
    }
    if (selected(analyses, AnalysisKind::thd)) {
      blocks["thd"] = {{"thd_percent", metric(analysis::thd(spec, *f0, p.harmonics), "%")},
                       {"f0_hz", metric(*f0, "Hz")},
                       {"harmonics", p.harmonics}};
    }
  }

  if (selected(analyses, AnalysisKind::linearity)) {
    const auto levels = pipeline::measure_ramp_levels(trace, p.ramp_hold, p.oversample);
    csv::write_levels(out_dir / "levels.csv", levels);
    const auto lin = analysis::inl_dnl(levels);
    blocks["linearity"] = {{"max_inl_lsb", metric(lin.max_abs_inl(), "LSB")},
                           {"max_dnl_lsb", metric(lin.max_abs_dnl(), "LSB")},
                           {"lsb_v", metric(lin.lsb_volts, "V")},
                           {"inl_lsb", lin.inl},
                           {"dnl_lsb", lin.dnl}};
  }

  if (selected(analyses, AnalysisKind::jitter)) {
    const double thr = threshold_for(trace, p);
    const double t_begin = trace.start_time + static_cast<double>(p.skip_ui) * p.unit_interval;
    const auto crossings = analysis::find_crossings(trace, thr, t_begin);
    const auto rep = analysis::jitter_decompose(crossings, p.unit_interval);
    blocks["jitter"] = {{"tj_ps", metric(rep.total * 1e12, "ps")},
                        {"rj_ps", metric(rep.random_sigma * 1e12, "ps")},
                        {"dj_ps", metric(rep.deterministic * 1e12, "ps")},
                        {"edge_dj_pkpk_ps", metric(analysis::tie_peak_to_peak(crossings, p.unit_interval) * 1e12, "ps")},
                        {"threshold_v", metric(thr, "V")},
                        {"crossings", rep.crossings}};
  }

  if (selected(analyses, AnalysisKind::eye)) {
    const double thr = threshold_for(trace, p);
    const auto eye = analysis::eye_diagram(trace, p.unit_interval, p.eye_time_bins, p.eye_volt_bins);
    csv::write_eye(out_dir / "eye.csv", eye);
    const auto open = analysis::eye_opening(eye, thr);
    blocks["eye"] = {{"height_v", metric(open.height, "V")},
                     {"width_ps", metric(open.width * 1e12, "ps")},
                     {"threshold_v", metric(thr, "V")},
                     {"bins", {p.eye_time_bins, p.eye_volt_bins}}};
  }

  if (selected(analyses, AnalysisKind::power)) {
    const auto pw = analysis::power_model(p.sample_rate_hz, p.supply_v);
    blocks["power"] = {{"total_mw", metric(pw.total_mw, "mW")},
                       {"analog_mw", metric(pw.analog_mw, "mW")},
                       {"digital_mw", metric(pw.digital_mw, "mW")},
                       {"per_qubit_mw", metric(pw.per_qubit_mw, "mW")},
                       {"digital_share", metric(pw.digital_mw / pw.total_mw, "ratio")},
                       {"sample_rate_hz", metric(p.sample_rate_hz, "Hz")},
                       {"supply_v", metric(p.supply_v, "V")}};
  }
  return blocks;
}

Scenario load_scenario(const std::filesystem::path& file, std::optional<std::uint64_t> seed_override) {
  const json doc = jsonutil::load(file);
  jsonutil::object(doc, "");
  const auto base = file.parent_path();

  Scenario sc;
  sc.name = doc.contains("name") ? jsonutil::string(doc, "name", "") : file.stem().string();
  json resolved = {{"scenario", doc}};

  // Seed precedence: command line, scenario, clock file.
  std::optional<std::uint64_t> seed = seed_override;
  if (!seed && doc.contains("seed")) {
    if (!doc["seed"].is_number_unsigned()) raise(Errc::format_error, "/seed: expected a non-negative integer");
    seed = doc["seed"].get<std::uint64_t>();
  }

  if (!doc.contains("source")) raise(Errc::format_error, "/source: required field missing");
  const json& src = jsonutil::object(doc["source"], "/source");

  std::vector<std::uint8_t> codes;
  std::optional<double> program_rate;
  std::optional<wavec::PulseProgram> program;
  if (src.contains("program")) {
    const json pj = resolve(src["program"], base, "/source/program");
    resolved["program"] = pj;
    program = wavec::parse_program(pj.dump());
    program_rate = program->sample_rate_hz;
  } else if (src.contains("pattern")) {
    const std::string kind = jsonutil::string(src, "pattern", "/source");
    if (kind == "ramp") {
      sc.params.ramp_hold = uint_field(src, "hold_samples", 128, "/source");
      codes = pipeline::dc_ramp_codes(sc.params.ramp_hold);
    } else if (kind == "prbs7") {
      const double amp = jsonutil::number_or(src, "amplitude", 0.45, "/source");
      const auto pseed = static_cast<unsigned>(uint_field(src, "seed", 0x7f, "/source"));
      const std::size_t periods = uint_field(src, "periods", 32, "/source");
      auto symbols = pipeline::prbs7_symbols(amp, pseed, 127 * periods);
      codes = wavec::quantize(symbols);
    } else if (kind == "square") {
      const std::size_t period = uint_field(src, "period_samples", 2, "/source");
      const double amp = jsonutil::number_or(src, "amplitude", 1.0, "/source");
      const std::size_t n = uint_field(src, "samples", patgen::kCapacity, "/source");
      if (period < 2 || period % 2 != 0) raise(Errc::format_error, "/source/period_samples: must be even and >= 2");
      std::vector<double> s(n);
      for (std::size_t i = 0; i < n; ++i) s[i] = (i % period) < period / 2 ? amp : -amp;
      codes = wavec::quantize(s);
    } else {
      raise(Errc::format_error, "/source/pattern: unknown pattern '" + kind + "'");
    }
  } else if (src.contains("image")) {
    std::filesystem::path p = jsonutil::string(src, "image", "/source");
    if (p.is_relative()) p = base / p;
    sc.image = patgen::read_image_file(p);
    const auto bytes = patgen::encode_image_file(sc.image);
    resolved["image_fnv1a"] = fnv1a_hex(std::string(bytes.begin(), bytes.end()));
  } else {
    raise(Errc::format_error, "/source: expected one of program, pattern, image");
  }

  std::optional<eq::FfeTaps> ffe;
  if (doc.contains("ffe")) {
    const json fj = resolve(doc["ffe"], base, "/ffe");
    resolved["ffe"] = fj;
    ffe = taps_from_json(fj, "/ffe");
  }

  if (doc.contains("dac")) {
    const json dj = resolve(doc["dac"], base, "/dac");
    resolved["dac"] = dj;
    sc.chain.dac = dac_from_json(dj, "/dac");
  }

  json cj = doc.contains("clock") ? resolve(doc["clock"], base, "/clock") : json::object();
  jsonutil::object(cj, "/clock");
  if (!cj.contains("sample_rate_ghz")) {
    if (!program_rate) raise(Errc::format_error, "/clock/sample_rate_ghz: required unless a program sets it");
    cj["sample_rate_ghz"] = *program_rate / 1e9;
  }
  resolved["clock"] = cj;
  sc.chain.clock = clock_from_json(cj, "/clock");
  if (program_rate && std::abs(*program_rate - sc.chain.clock.sample_rate) > 1e-9 * *program_rate)
    raise(Errc::format_error, "/clock/sample_rate_ghz: differs from the program's sample rate");
  if (!seed) seed = cj.contains("seed") ? sc.chain.clock.rng_seed : 1;
  sc.seed = *seed;
  sc.chain.clock.rng_seed = sc.seed;

  if (doc.contains("channel")) {
    const json chj = resolve(doc["channel"], base, "/channel");
    resolved["channel"] = chj;
    sc.chain.channel = channel_from_json(chj, "/channel");
  }

  sc.chain.oversample = static_cast<int>(uint_field(doc, "oversample", 8, ""));
  if (sc.chain.oversample < 8) raise(Errc::format_error, "/oversample: must be at least 8");

  // Compile or pack the pattern memory.
  if (program) {
    const auto compiled = wavec::compile_program(*program, ffe);
    sc.image = compiled.image;
    sc.ffe_clip_count = compiled.ffe_clip_count;
  } else if (!codes.empty()) {
    if (ffe) {
      std::vector<double> s(codes.size());
      for (std::size_t i = 0; i < codes.size(); ++i) s[i] = wavec::dequantize(codes[i]);
      auto eq_out = eq::apply_ffe(s, *ffe, eq::Boundary::periodic);
      sc.ffe_clip_count = eq_out.clip_count;
      codes = wavec::quantize(eq_out.samples);
    }
    sc.image = patgen::pack_image(codes);
  }

  sc.sequencer = patgen::SequencerConfig::whole(sc.image);
  if (doc.contains("sequencer")) {
    const json& sj = jsonutil::object(doc["sequencer"], "/sequencer");
    sc.sequencer.start_frame = uint_field(sj, "start_frame", 0, "/sequencer");
    sc.sequencer.frame_count =
        uint_field(sj, "frame_count", sc.image.frame_count() - std::min(sc.sequencer.start_frame, sc.image.frame_count()), "/sequencer");
    sc.sequencer.loop_count = uint_field(sj, "loop_count", 1, "/sequencer");
    sc.sequencer.byte_rotation = static_cast<unsigned>(uint_field(sj, "byte_rotation", 0, "/sequencer"));
  }

  std::vector<std::string> names;
  if (doc.contains("analyses")) {
    const auto& arr = jsonutil::array(doc["analyses"], "/analyses");
    for (const auto& a : arr) {
      if (!a.is_string()) raise(Errc::format_error, "/analyses: expected strings");
      names.push_back(a.get<std::string>());
    }
  }
  sc.analyses = parse_analyses(names);

  auto& p = sc.params;
  const json params = doc.contains("params") ? jsonutil::object(doc["params"], "/params") : json::object();
  if (params.contains("tones_ghz")) {
    for (const auto& t : jsonutil::array(params["tones_ghz"], "/params/tones_ghz")) {
      if (!t.is_number()) raise(Errc::format_error, "/params/tones_ghz: expected numbers");
      p.tones_hz.push_back(t.get<double>() * 1e9);
    }
  }
  if (params.contains("f0_ghz")) p.f0_hz = jsonutil::number(params, "f0_ghz", "/params") * 1e9;
  p.harmonics = static_cast<int>(uint_field(params, "harmonics", 5, "/params"));
  p.record = uint_field(params, "record", 0, "/params");
  p.guard_bins = uint_field(params, "guard_bins", 0, "/params");
  p.band_hz = jsonutil::number_or(params, "band_ghz", 0.0, "/params") * 1e9;
  p.supply_v = jsonutil::number_or(params, "supply_v", 0.8, "/params");
  p.skip_ui = uint_field(params, "skip_ui", 16, "/params");
  if (params.contains("threshold_v")) p.threshold_v = jsonutil::number(params, "threshold_v", "/params");
  if (params.contains("eye_bins")) {
    const auto& eb = jsonutil::array(params["eye_bins"], "/params/eye_bins");
    if (eb.size() != 2 || !eb[0].is_number_unsigned() || !eb[1].is_number_unsigned())
      raise(Errc::format_error, "/params/eye_bins: expected [time_bins, volt_bins]");
    p.eye_time_bins = eb[0].get<std::size_t>();
    p.eye_volt_bins = eb[1].get<std::size_t>();
  }
  p.full_scale_amplitude = 0.5 * sc.chain.dac.full_scale_voltage;
  p.unit_interval = sc.chain.clock.unit_interval();
  p.sample_rate_hz = sc.chain.clock.sample_rate;
  p.oversample = sc.chain.oversample;
  check_params(sc.analyses, p);

  resolved["seed"] = sc.seed;
  sc.config_hash = "fnv1a64:" + fnv1a_hex(resolved.dump());
  return sc;
}

json report_header(std::string_view scenario, std::uint64_t seed, const std::string& config_hash) {
  return {{"tool", kToolName}, {"version", kToolVersion}, {"scenario", scenario}, {"seed", seed},
          {"config_hash", config_hash}};
}

void write_json(const std::filesystem::path& path, const json& doc) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) raise(Errc::io_error, "cannot open " + path.string() + " for writing");
  out << doc.dump(2) << '\n';
  if (!out) raise(Errc::io_error, "short write to " + path.string());
}

json run_scenario(const Scenario& sc, const std::filesystem::path& out_dir) {
  std::filesystem::create_directories(out_dir);
  const auto played = pipeline::play(sc.image, sc.sequencer, sc.chain);
  csv::write_trace(out_dir / "trace.csv", played.trace);
  if (std::find(sc.analyses.begin(), sc.analyses.end(), AnalysisKind::jitter) != sc.analyses.end())
    csv::write_edges(out_dir / "edges.csv", played.edges);

  json report = report_header(sc.name, sc.seed, sc.config_hash);
  report["sample_rate_hz"] = sc.chain.clock.sample_rate;
  report["samples"] = played.codes.size();
  report["oversample"] = sc.chain.oversample;
  report["ffe_clip_count"] = sc.ffe_clip_count;
  report["analyses"] = analyze_trace(played.trace, sc.analyses, sc.params, out_dir);
  write_json(out_dir / "report.json", report);
  return report;
}

}  // namespace awgsim::cli
