#include <fstream>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "support/gen.hpp"
#include "cli.hpp"

using awgsim::cli::run_cli;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

const fs::path kScenarios = AWGSIM_SCENARIO_DIR;

struct Run {
  int rc;
  std::string out, err;
};

Run cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int rc = run_cli(args, out, err);
  return {rc, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

void put(const fs::path& p, const std::string& text) { std::ofstream(p) << text; }

}  // namespace

TEST_CASE("cli compile") {
  awgsim::test::TempDir dir;
  const auto program = (kScenarios / "programs/two_tone.json").string();
  const auto a = cli({"compile", program, "-o", (dir / "a.bin").string()});
  REQUIRE(a.rc == 0);
  CHECK(a.out.find("samples: 4096") != std::string::npos);
  CHECK(a.out.find("occupancy:") != std::string::npos);
  CHECK(fs::file_size(dir / "a.bin") == 32784);
  REQUIRE(cli({"--seed", "3", "compile", program, "-o", (dir / "b.bin").string()}).rc == 0);
  CHECK(slurp(dir / "a.bin") == slurp(dir / "b.bin"));

  SUBCASE("default output lands in --out-dir") {
    REQUIRE(cli({"--out-dir", dir.path().string(), "compile", program}).rc == 0);
    CHECK(fs::exists(dir / "two_tone.bin"));
  }
  SUBCASE("program too long exits 2 with the error name") {
    put(dir / "long.json", R"({"sample_rate_ghz": 20.48, "segments": [{"envelope": "square", "amplitude": 0.5,
        "duration_ns": 2000, "tones": [{"amplitude": 0.5, "frequency_ghz": 1.0}]}]})");
    const auto r = cli({"compile", (dir / "long.json").string(), "-o", (dir / "l.bin").string()});
    CHECK(r.rc == 2);
    CHECK(r.err.find("ProgramTooLong") != std::string::npos);
    CHECK_FALSE(fs::exists(dir / "l.bin"));
  }
  SUBCASE("malformed program exits 2") {
    put(dir / "bad.json", R"({"sample_rate_ghz": 20.48, "segments": [{"duration_ns": "x"}]})");
    CHECK(cli({"compile", (dir / "bad.json").string()}).rc == 2);
    CHECK(cli({"compile", (dir / "missing.json").string()}).rc == 2);
  }
}

TEST_CASE("cli disasm inverts compile") {
  awgsim::test::TempDir dir;
  const auto program = (kScenarios / "programs/two_tone.json").string();
  REQUIRE(cli({"compile", program, "-o", (dir / "a.bin").string()}).rc == 0);
  const auto r = cli({"disasm", (dir / "a.bin").string(), "-o", (dir / "a.csv").string()});
  REQUIRE(r.rc == 0);
  std::ifstream in(dir / "a.csv");
  std::string line;
  std::getline(in, line);
  CHECK(line == "index,code");
  std::size_t rows = 0;
  while (std::getline(in, line)) ++rows;
  CHECK(rows == 4096);
  put(dir / "junk.bin", "not an image");
  CHECK(cli({"disasm", (dir / "junk.bin").string()}).rc == 2);
}

TEST_CASE("cli simulate") {
  awgsim::test::TempDir dir;
  auto report = [&](const fs::path& d) { return json::parse(slurp(d / "report.json")); };

  SUBCASE("DC ramp reports linearity") {
    REQUIRE(cli({"--out-dir", dir.path().string(), "simulate", (kScenarios / "dc_ramp.json").string()}).rc == 0);
    const auto rep = report(dir.path());
    CHECK(rep["analyses"].contains("linearity"));
    CHECK(rep["analyses"]["linearity"]["max_inl_lsb"]["value"].get<double>() < 2.0);
    CHECK(rep["analyses"]["linearity"]["max_dnl_lsb"]["value"].get<double>() < 1.0);
    CHECK(fs::exists(dir / "trace.csv"));
    CHECK(fs::exists(dir / "levels.csv"));
    CHECK(rep["seed"] == 1);
    CHECK(rep["config_hash"].get<std::string>().starts_with("fnv1a64:"));
    CHECK(rep.contains("version"));
  }
  SUBCASE("two-tone reports im3_dbc") {
    REQUIRE(cli({"--out-dir", dir.path().string(), "simulate", (kScenarios / "two_tone.json").string()}).rc == 0);
    const auto rep = report(dir.path());
    CHECK(rep["analyses"]["im3"].contains("im3_dbc"));
    CHECK(fs::exists(dir / "spectrum.csv"));
  }
  SUBCASE("power-only selection has exactly one block") {
    REQUIRE(cli({"--out-dir", dir.path().string(), "simulate", (kScenarios / "power_only.json").string()}).rc == 0);
    const auto rep = report(dir.path());
    CHECK(rep["analyses"].size() == 1);
    CHECK(rep["analyses"].contains("power"));
  }
  SUBCASE("reports are byte-identical across runs and seeds are recorded") {
    const auto s = (kScenarios / "prbs7_eye.json").string();
    REQUIRE(cli({"--out-dir", (dir / "a").string(), "simulate", s}).rc == 0);
    REQUIRE(cli({"--out-dir", (dir / "b").string(), "simulate", s}).rc == 0);
    CHECK(slurp(dir / "a/report.json") == slurp(dir / "b/report.json"));
    CHECK(slurp(dir / "a/trace.csv") == slurp(dir / "b/trace.csv"));
    REQUIRE(cli({"--seed", "11", "--out-dir", (dir / "c").string(), "simulate", s}).rc == 0);
    CHECK(report(dir / "c")["seed"] == 11);
    CHECK(report(dir / "c")["config_hash"] != report(dir / "a")["config_hash"]);
  }
  SUBCASE("batch mode isolates outputs per scenario") {
    const auto r = cli({"--jobs", "3", "--out-dir", dir.path().string(), "simulate",
                        (kScenarios / "dc_ramp.json").string(), (kScenarios / "power_only.json").string(),
                        (kScenarios / "two_tone.json").string()});
    REQUIRE(r.rc == 0);
    for (const char* name : {"dc_ramp", "power_only", "two_tone"}) CHECK(fs::exists(dir / name / "report.json"));
    const auto serial = cli({"--out-dir", (dir / "serial").string(), "simulate", (kScenarios / "two_tone.json").string()});
    REQUIRE(serial.rc == 0);
    CHECK(slurp(dir / "two_tone/report.json") == slurp(dir / "serial/report.json"));
  }
  SUBCASE("config errors exit 2") {
    put(dir / "unknown.json", R"({"source": {"pattern": "ramp"}, "analyses": ["bogus"]})");
    CHECK(cli({"simulate", (dir / "unknown.json").string()}).rc == 2);
    put(dir / "nofile.json", R"({"source": {"program": "nowhere.json"}, "analyses": ["power"]})");
    CHECK(cli({"simulate", (dir / "nofile.json").string()}).rc == 2);
    CHECK(cli({"simulate", (dir / "absent.json").string()}).rc == 2);
  }
  SUBCASE("runtime errors exit 3") {
    // Too few edges for the jitter decomposition only shows up after playback.
    put(dir / "short.json",
        R"({"source": {"pattern": "square", "period_samples": 2, "amplitude": 0.5, "samples": 1024},
            "clock": {"sample_rate_ghz": 20.0}, "analyses": ["jitter"], "params": {"skip_ui": 4}})");
    const auto r = cli({"--out-dir", (dir / "o").string(), "simulate", (dir / "short.json").string()});
    CHECK(r.rc == 3);
    CHECK(r.err.find("InsufficientSamples") != std::string::npos);
  }
}

TEST_CASE("cli ffe-train") {
  awgsim::test::TempDir dir;
  SUBCASE("identity channel gives a unit impulse") {
    const auto r = cli({"ffe-train", (kScenarios / "configs/identity_channel.json").string(), "--taps", "4", "-o",
                        (dir / "t.json").string()});
    REQUIRE(r.rc == 0);
    const auto t = json::parse(slurp(dir / "t.json"));
    const auto taps = t["taps"].get<std::vector<double>>();
    REQUIRE(taps.size() == 4);
    CHECK(taps[0] == doctest::Approx(1.0));
    for (std::size_t k = 1; k < 4; ++k) CHECK(taps[k] == doctest::Approx(0.0).scale(1.0));
    CHECK(r.out.find("n/a") != std::string::npos);
  }
  SUBCASE("reference channel with five taps predicts at least 35% DJ reduction") {
    const auto r = cli({"--out-dir", dir.path().string(), "ffe-train",
                        (kScenarios / "configs/reference_channel.json").string(), "--taps", "5"});
    REQUIRE(r.rc == 0);
    const auto pos = r.out.find("predicted DJ reduction: ");
    REQUIRE(pos != std::string::npos);
    const double pct = std::stod(r.out.substr(pos + 24));
    CHECK(pct >= 35.0);
    CHECK(fs::exists(dir / "taps.json"));
  }
  SUBCASE("validation and solver failures") {
    const auto ch = (kScenarios / "configs/reference_channel.json").string();
    CHECK(cli({"ffe-train", ch, "--taps", "0"}).rc == 2);
    CHECK(cli({"ffe-train", ch, "--taps", "3", "--main", "3"}).rc == 2);
    CHECK(cli({"ffe-train", (dir / "missing.json").string()}).rc == 2);
    put(dir / "tiny.json", R"({"taps": [1e-200]})");
    const auto r = cli({"ffe-train", (dir / "tiny.json").string(), "--no-predict", "-o", (dir / "x.json").string()});
    CHECK(r.rc == 3);
    CHECK(r.err.find("SingularSystem") != std::string::npos);
  }
}

TEST_CASE("cli analyze re-runs metrics on a trace") {
  awgsim::test::TempDir dir;
  REQUIRE(cli({"--out-dir", (dir / "sim").string(), "simulate", (kScenarios / "two_tone.json").string()}).rc == 0);
  const auto sim = json::parse(slurp(dir / "sim/report.json"));
  const auto r = cli({"--out-dir", (dir / "re").string(), "analyze", (dir / "sim/trace.csv").string(), "--analyses",
                      "im3,power", "--tones-ghz", "5.1,5.3", "--record", "32768", "--sample-rate-ghz", "20.48"});
  REQUIRE(r.rc == 0);
  const auto re = json::parse(slurp(dir / "re/report.json"));
  // The CSV keeps nine significant digits, so the re-measured value agrees closely.
  CHECK(re["analyses"]["im3"]["im3_dbc"]["value"].get<double>() ==
        doctest::Approx(sim["analyses"]["im3"]["im3_dbc"]["value"].get<double>()).epsilon(1e-3));
  CHECK(re["analyses"]["power"]["total_mw"]["value"].get<double>() ==
        doctest::Approx(sim["analyses"]["power"]["total_mw"]["value"].get<double>()));
  CHECK(cli({"analyze", (dir / "sim/trace.csv").string(), "--analyses", "nope"}).rc == 2);
  CHECK(cli({"analyze", (dir / "sim/trace.csv").string(), "--analyses", "im3"}).rc == 2);
}

TEST_CASE("cli parsing") {
  CHECK(cli({}).rc == 2);
  CHECK(cli({"frobnicate"}).rc == 2);
  CHECK(cli({"--help"}).rc == 0);
  const auto v = cli({"--version"});
  CHECK(v.rc == 0);
  CHECK(cli({"--jobs", "0", "simulate", "x.json"}).rc == 2);
}
