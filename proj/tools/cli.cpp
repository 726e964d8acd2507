#include "cli.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "awgsim/csv.hpp"
#include "awgsim/error.hpp"
#include "awgsim/wavec.hpp"
#include "scenario.hpp"

namespace awgsim::cli {
namespace {

namespace fs = std::filesystem;

// Runs one phase of a command; any exception becomes a diagnostic and the
// phase's exit code.
template <class F>
int phase(int code_on_error, std::ostream& err, F&& body) {
  try {
    body();
    return kExitOk;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return code_on_error;
  }
}

struct Globals {
  std::optional<std::uint64_t> seed;
  std::string out_dir = ".";
  unsigned jobs = 1;
};

std::string read_bytes(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) raise(Errc::io_error, "cannot open " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// ---------------------------------------------------------------- compile

struct CompileArgs {
  std::string program;
  std::string ffe;
  std::string output;
};

int cmd_compile(const CompileArgs& a, const Globals& g, std::ostream& out, std::ostream& err) {
  wavec::Compiled compiled;
  fs::path target;
  int rc = phase(kExitConfig, err, [&] {
    const auto program = wavec::load_program(a.program);
    std::optional<eq::FfeTaps> ffe;
    if (!a.ffe.empty()) ffe = taps_from_json(jsonutil::load(a.ffe), "/");
    compiled = wavec::compile_program(program, ffe);
    target = a.output.empty() ? fs::path(g.out_dir) / (fs::path(a.program).stem().string() + ".bin") : fs::path(a.output);
  });
  if (rc) return rc;
  rc = phase(kExitRuntime, err, [&] {
    if (target.has_parent_path()) fs::create_directories(target.parent_path());
    patgen::write_image_file(target, compiled.image);
  });
  if (rc) return rc;

  const std::size_t used = compiled.image.frame_count() * patgen::kFrameSamples;
  out << "samples: " << compiled.codes.size() << '\n'
      << "frames: " << compiled.image.frame_count() << '\n'
      << "occupancy: " << std::fixed << std::setprecision(2)
      << 100.0 * static_cast<double>(used) / static_cast<double>(patgen::kCapacity) << "% (" << used << " of "
      << patgen::kCapacity << " bytes)\n";
  out.unsetf(std::ios::floatfield);
  if (compiled.ffe_clip_count) out << "ffe clipped samples: " << compiled.ffe_clip_count << '\n';
  out << "image: " << target.string() << '\n';
  return kExitOk;
}

// ---------------------------------------------------------------- simulate

int cmd_simulate(const std::vector<std::string>& files, const Globals& g, std::ostream& out, std::ostream& err) {
  struct Job {
    fs::path file;
    fs::path dir;
    int rc = kExitOk;
    std::ostringstream out, err;
  };
  std::vector<Job> jobs(files.size());
  std::set<std::string> stems;
  for (std::size_t i = 0; i < files.size(); ++i) {
    jobs[i].file = files[i];
    std::string stem = jobs[i].file.stem().string();
    if (files.size() > 1 && !stems.insert(stem).second) {
      err << "error: FormatError: two scenarios share the output name '" << stem << "'\n";
      return kExitConfig;
    }
    jobs[i].dir = files.size() == 1 ? fs::path(g.out_dir) : fs::path(g.out_dir) / stem;
  }

  auto run_one = [&](Job& job) {
    Scenario sc;
    job.rc = phase(kExitConfig, job.err, [&] { sc = load_scenario(job.file, g.seed); });
    if (job.rc) return;
    job.rc = phase(kExitRuntime, job.err, [&] {
      run_scenario(sc, job.dir);
      job.out << sc.name << ": seed " << sc.seed << ", " << sc.config_hash << " -> " << (job.dir / "report.json").string()
              << '\n';
    });
  };

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < jobs.size();) run_one(jobs[i]);
  };
  const unsigned n_threads = std::max(1u, std::min<unsigned>(g.jobs, static_cast<unsigned>(jobs.size())));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < n_threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  int rc = kExitOk;
  for (auto& job : jobs) {
    out << job.out.str();
    if (job.rc) err << job.file.string() << ": " << job.err.str();
    rc = std::max(rc, job.rc);
  }
  return rc;
}

// ---------------------------------------------------------------- ffe-train

struct TrainArgs {
  std::string channel;
  long n_taps = 5;
  long main_tap = 0;
  std::string output;
  double sample_rate_ghz = 20.0;
  bool no_predict = false;
};

int cmd_ffe_train(const TrainArgs& a, const Globals& g, std::ostream& out, std::ostream& err) {
  eq::ChannelModel ch;
  fs::path target;
  int rc = phase(kExitConfig, err, [&] {
    if (a.n_taps < 1 || a.n_taps > 32) raise(Errc::invalid_argument, "--taps must be in 1..32");
    if (a.main_tap < 0 || a.main_tap >= a.n_taps) raise(Errc::invalid_argument, "--main must be in 0..taps-1");
    if (!(a.sample_rate_ghz > 0.0)) raise(Errc::invalid_argument, "--sample-rate-ghz must be positive");
    ch = channel_from_json(jsonutil::load(a.channel), "/");
    target = a.output.empty() ? fs::path(g.out_dir) / "taps.json" : fs::path(a.output);
  });
  if (rc) return rc;

  return phase(kExitRuntime, err, [&] {
    const auto taps = eq::solve_ffe(ch, static_cast<std::size_t>(a.n_taps), static_cast<std::size_t>(a.main_tap));
    if (target.has_parent_path()) fs::create_directories(target.parent_path());
    write_json(target, taps_to_json(taps));

    const auto before = eq::isi_report(ch.taps, 0);
    const auto after = eq::isi_report(eq::combined_response(ch, taps), taps.main_tap_index);
    out << std::setprecision(6) << "taps:";
    for (double t : taps.taps) out << ' ' << t;
    out << "\nmain tap: " << taps.main_tap_index << '\n'
        << "residual ISI: " << before.residual_isi << " -> " << after.residual_isi << '\n'
        << "peak ISI: " << before.peak_isi << " -> " << after.peak_isi << '\n';

    if (!a.no_predict) {
      pipeline::PrbsEyeSetup setup;
      setup.sample_rate = a.sample_rate_ghz * 1e9;
      const auto raw = pipeline::prbs_eye(ch, std::nullopt, setup);
      const auto eqd = pipeline::prbs_eye(ch, taps, setup);
      out << "PRBS7 edge DJ: " << raw.edge_dj_pkpk * 1e12 << " ps -> " << eqd.edge_dj_pkpk * 1e12 << " ps\n";
      if (raw.edge_dj_pkpk > 1e-15) {
        out << "predicted DJ reduction: " << std::fixed << std::setprecision(1)
            << 100.0 * (1.0 - eqd.edge_dj_pkpk / raw.edge_dj_pkpk) << "%\n";
        out.unsetf(std::ios::floatfield);
      } else {
        out << "predicted DJ reduction: n/a (channel adds no data-dependent jitter)\n";
      }
      if (eqd.clip_count) out << "ffe clipped samples: " << eqd.clip_count << '\n';
    }
    out << "taps file: " << target.string() << '\n';
  });
}

// ---------------------------------------------------------------- analyze

struct AnalyzeArgs {
  std::string trace;
  std::vector<std::string> analyses;
  std::vector<double> tones_ghz;
  std::optional<double> f0_ghz;
  int harmonics = 5;
  std::size_t guard_bins = 0;
  double band_ghz = 0.0;
  std::size_t record = 0;
  double full_scale_v = 1.0;
  std::optional<double> sample_rate_ghz;
  double supply_v = 0.8;
  std::optional<double> threshold_v;
  std::size_t skip_ui = 16;
  std::size_t ramp_hold = 0;
  std::vector<std::size_t> eye_bins;
};

int cmd_analyze(const AnalyzeArgs& a, const Globals& g, std::ostream& out, std::ostream& err) {
  dac::AnalogTrace trace;
  std::vector<AnalysisKind> kinds;
  AnalysisParams p;
  std::string hash;
  int rc = phase(kExitConfig, err, [&] {
    trace = csv::read_trace(a.trace);
    kinds = parse_analyses(a.analyses);
    if (kinds.empty()) raise(Errc::format_error, "--analyses: select at least one analysis");
    for (double f : a.tones_ghz) p.tones_hz.push_back(f * 1e9);
    if (a.f0_ghz) p.f0_hz = *a.f0_ghz * 1e9;
    p.harmonics = a.harmonics;
    p.guard_bins = a.guard_bins;
    p.band_hz = a.band_ghz * 1e9;
    p.record = a.record;
    p.full_scale_amplitude = 0.5 * a.full_scale_v;
    p.supply_v = a.supply_v;
    p.threshold_v = a.threshold_v;
    p.skip_ui = a.skip_ui;
    p.ramp_hold = a.ramp_hold;
    if (!a.eye_bins.empty()) {
      if (a.eye_bins.size() != 2) raise(Errc::format_error, "--eye-bins: expected time,volt");
      p.eye_time_bins = a.eye_bins[0];
      p.eye_volt_bins = a.eye_bins[1];
    }
    if (a.sample_rate_ghz) {
      p.sample_rate_hz = *a.sample_rate_ghz * 1e9;
      p.unit_interval = 1.0 / p.sample_rate_hz;
      p.oversample = static_cast<int>(std::lround(p.unit_interval / trace.sample_period));
      if (p.oversample < 1) raise(Errc::format_error, "--sample-rate-ghz: faster than the trace sampling");
    }
    check_params(kinds, p);

    json resolved = {{"trace_fnv1a", fnv1a_hex(read_bytes(a.trace))},
                     {"analyses", a.analyses},
                     {"tones_hz", p.tones_hz},
                     {"harmonics", p.harmonics},
                     {"guard_bins", p.guard_bins},
                     {"band_hz", p.band_hz},
                     {"record", p.record},
                     {"full_scale_v", a.full_scale_v},
                     {"sample_rate_hz", p.sample_rate_hz},
                     {"supply_v", p.supply_v},
                     {"skip_ui", p.skip_ui},
                     {"ramp_hold", p.ramp_hold}};
    if (p.f0_hz) resolved["f0_hz"] = *p.f0_hz;
    if (p.threshold_v) resolved["threshold_v"] = *p.threshold_v;
    hash = "fnv1a64:" + fnv1a_hex(resolved.dump());
  });
  if (rc) return rc;

  return phase(kExitRuntime, err, [&] {
    const fs::path dir = g.out_dir;
    fs::create_directories(dir);
    json report = report_header(fs::path(a.trace).stem().string(), g.seed.value_or(0), hash);
    report["trace"] = a.trace;
    report["analyses"] = analyze_trace(trace, kinds, p, dir);
    write_json(dir / "report.json", report);
    out << report.dump(2) << '\n';
  });
}

// ---------------------------------------------------------------- disasm

struct DisasmArgs {
  std::string image;
  std::string output;
};

int cmd_disasm(const DisasmArgs& a, const Globals& g, std::ostream& out, std::ostream& err) {
  patgen::SramImage image;
  int rc = phase(kExitConfig, err, [&] { image = patgen::read_image_file(a.image); });
  if (rc) return rc;
  return phase(kExitRuntime, err, [&] {
    const fs::path target = a.output.empty() ? fs::path(g.out_dir) / (fs::path(a.image).stem().string() + ".csv")
                                             : fs::path(a.output);
    if (target.has_parent_path()) fs::create_directories(target.parent_path());
    const auto codes = patgen::unpack_image(image);
    csv::write_codes(target, codes);
    out << "samples: " << codes.size() << '\n' << "frames: " << image.frame_count() << '\n'
        << "csv: " << target.string() << '\n';
  });
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Behavioural simulator for an SRAM-based RF arbitrary waveform generator", "awgsim"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kToolVersion));

  Globals g;
  std::uint64_t seed = 0;
  auto* seed_opt = app.add_option("--seed", seed, "RNG seed recorded in every report");
  app.add_option("--out-dir", g.out_dir, "Directory for reports, traces and images");
  app.add_option("--jobs", g.jobs, "Scenarios run concurrently by simulate")->check(CLI::PositiveNumber);

  CompileArgs ca;
  auto* compile = app.add_subcommand("compile", "Compile a pulse program into an SRAM image");
  compile->add_option("program", ca.program, "Pulse-program JSON")->required();
  compile->add_option("--ffe", ca.ffe, "FFE taps JSON applied before quantization");
  compile->add_option("-o,--output", ca.output, "Image file (default <out-dir>/<program>.bin)");

  std::vector<std::string> scenarios;
  auto* simulate = app.add_subcommand("simulate", "Play scenarios through the chip and cable models");
  simulate->add_option("scenario", scenarios, "Scenario JSON files")->required();

  TrainArgs ta;
  auto* train = app.add_subcommand("ffe-train", "Solve least-squares FFE taps for a channel");
  train->add_option("channel", ta.channel, "Channel JSON")->required();
  train->add_option("--taps", ta.n_taps, "Number of taps");
  train->add_option("--main", ta.main_tap, "Main tap index");
  train->add_option("-o,--output", ta.output, "Taps JSON (default <out-dir>/taps.json)");
  train->add_option("--sample-rate-ghz", ta.sample_rate_ghz, "Symbol rate for the PRBS7 DJ prediction");
  train->add_flag("--no-predict", ta.no_predict, "Skip the PRBS7 DJ prediction");

  AnalyzeArgs aa;
  auto* analyze = app.add_subcommand("analyze", "Re-run metrics on a trace CSV");
  analyze->add_option("trace", aa.trace, "Trace CSV (time_s,voltage_v)")->required();
  analyze->add_option("--analyses", aa.analyses, "sfdr,im3,thd,linearity,jitter,eye,power")->delimiter(',')->required();
  analyze->add_option("--tones-ghz", aa.tones_ghz, "Signal tones")->delimiter(',');
  analyze->add_option("--f0-ghz", aa.f0_ghz, "THD fundamental");
  analyze->add_option("--harmonics", aa.harmonics, "THD harmonic count");
  analyze->add_option("--guard-bins", aa.guard_bins, "Bins either side of a tone counted as signal");
  analyze->add_option("--band-ghz", aa.band_ghz, "SFDR/SNDR search band (default DAC Nyquist)");
  analyze->add_option("--record", aa.record, "FFT record length (power of two)");
  analyze->add_option("--full-scale-v", aa.full_scale_v, "DAC full-scale voltage");
  analyze->add_option("--sample-rate-ghz", aa.sample_rate_ghz, "DAC sample rate (unit interval, power model)");
  analyze->add_option("--supply-v", aa.supply_v, "Supply voltage for the power model");
  analyze->add_option("--threshold-v", aa.threshold_v, "Crossing threshold (default mid-swing)");
  analyze->add_option("--skip-ui", aa.skip_ui, "Unit intervals skipped before jitter measurement");
  analyze->add_option("--ramp-hold", aa.ramp_hold, "Hold samples per code of a DC-ramp trace");
  analyze->add_option("--eye-bins", aa.eye_bins, "Eye histogram bins: time,volt")->delimiter(',');

  DisasmArgs da;
  auto* disasm = app.add_subcommand("disasm", "Dump an SRAM image as a sample CSV");
  disasm->add_option("image", da.image, "SRAM image file")->required();
  disasm->add_option("-o,--output", da.output, "CSV file (default <out-dir>/<image>.csv)");

  for (auto* sub : {compile, simulate, train, analyze, disasm}) sub->fallthrough();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e, out, err);
    return rc == 0 ? kExitOk : kExitConfig;
  }
  if (seed_opt->count()) g.seed = seed;

  if (compile->parsed()) return cmd_compile(ca, g, out, err);
  if (simulate->parsed()) return cmd_simulate(scenarios, g, out, err);
  if (train->parsed()) return cmd_ffe_train(ta, g, out, err);
  if (analyze->parsed()) return cmd_analyze(aa, g, out, err);
  return cmd_disasm(da, g, out, err);
}

}  // namespace awgsim::cli
