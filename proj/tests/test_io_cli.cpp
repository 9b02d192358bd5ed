#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "ionpar/cli.hpp"
#include "ionpar/io.hpp"

using namespace ionpar;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("ionpar_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

struct Outcome {
  int code = 0;
  std::string out;
  std::string err;
};

Outcome cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::map<std::string, std::string> directory_bytes(const fs::path& dir) {
  std::map<std::string, std::string> out;
  for (const auto& e : fs::directory_iterator(dir)) out[e.path().filename().string()] = read_text(e.path());
  return out;
}

}  // namespace

TEST(Json, TrapRoundTrip) {
  TrapConfig t = default_trap();
  t.radial_freq_x = kTwoPi * 3.1e6;
  const TrapConfig back = trap_from_json(to_json(t));
  EXPECT_EQ(to_json(back).dump(), to_json(t).dump());
  EXPECT_EQ(back.qubit_ions, t.qubit_ions);
  EXPECT_DOUBLE_EQ(back.radial_freq_x, t.radial_freq_x);
}

TEST(Json, PulseRoundTripUsesOneBasedIons) {
  PulseSchedule p;
  p.pair = {2, 4};
  p.axis = Axis::Y;
  p.detuning = kTwoPi * 2.9e6;
  p.segments = {{1e-4, 1234.5, -1234.5}, {2e-4, 0.0, 7.0}};
  const Json j = to_json(p);
  EXPECT_EQ(j.at("pair"), Json::array({3, 5}));
  EXPECT_NEAR(j.at("detuning_hz").get<double>(), 2.9e6, 1e-6);
  EXPECT_DOUBLE_EQ(j.at("tau_s").get<double>(), 3e-4);
  const PulseSchedule back = pulse_from_json(j);
  EXPECT_EQ(back.pair, p.pair);
  EXPECT_EQ(back.axis, p.axis);
  EXPECT_EQ(back.detuning, p.detuning);
  ASSERT_EQ(back.segments.size(), 2u);
  EXPECT_EQ(back.segments[1].amplitude_q, 7.0);
  Json bad = j;
  bad["tau_s"] = 1.0;
  EXPECT_THROW(pulse_from_json(bad), ValidationError);
}

TEST(Json, SettingsRoundTripAndUnknownKeys) {
  Settings s;
  s.seed = 42;
  s.tfim.field = 0.3;
  s.calibrate_to = 0.99;
  s.ghz = {0, 1, 2};
  const Settings back = settings_from_json(to_json(s));
  EXPECT_EQ(to_json(back).dump(), to_json(s).dump());
  Json j = to_json(s);
  j["tfim"]["bogus"] = 1;
  EXPECT_THROW(settings_from_json(j), ValidationError);
  Json top = to_json(s);
  top["extra"] = true;
  EXPECT_THROW(settings_from_json(top), ValidationError);
}

TEST(Json, DefaultConfigFileLoads) {
  const Settings s = load_settings(fs::path(IONPAR_SOURCE_DIR) / "configs" / "default.json");
  EXPECT_EQ(s.trap.ion_count, 7);
  ASSERT_TRUE(s.calibrate_to.has_value());
  EXPECT_NEAR(s.effective_noise(5).depolarizing, 4 * (1 - *s.calibrate_to) / 3, 1e-12);
}

TEST(Io, ErrorsMapToIoAndValidation) {
  EXPECT_THROW(read_text("/nonexistent/ionpar/file"), IoError);
  const fs::path dir = scratch("io");
  write_text(dir / "bad.json", "{ not json");
  EXPECT_THROW(read_json(dir / "bad.json"), ValidationError);
}

TEST(Io, NumbersRoundTrip) {
  for (double x : {0.1, 1.0 / 3.0, -2.5e-17, 6.02214076e23, 0.0}) EXPECT_EQ(std::stod(format_number(x)), x);
  EXPECT_EQ(format_number(0.5), "0.5");
}

TEST(Io, Sha256KnownVectors) {
  EXPECT_EQ(sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  EXPECT_EQ(sha256_hex(""), "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
}

TEST(Io, TablesRenderCsvAndJson) {
  MagnetizationTrace t{{0.0, 0.5}, {5.0, 4.25}, {0.0, 0.01}};
  const Table table = trace_table(t);
  EXPECT_EQ(table.csv(), "time,magnetization,stderr\n0,5,0\n0.5,4.25,0.01\n");
  EXPECT_EQ(table.json()[1]["magnetization"], 4.25);
}

TEST(Io, ManifestRoundTrip) {
  RunManifest m;
  m.command = "ghz";
  m.arguments = {"ghz", "--noiseless"};
  m.config = to_json(Settings{});
  m.seed = 9;
  m.inputs["a.json"] = sha256_hex("x");
  m.outputs["ghz.json"] = sha256_hex("y");
  const RunManifest back = RunManifest::from_json(m.to_json());
  EXPECT_EQ(back.to_json().dump(), m.to_json().dump());
  EXPECT_EQ(m.to_json().at("version"), kToolVersion);
}

TEST(Cli, ExitCodes) {
  const fs::path dir = scratch("codes");
  EXPECT_EQ(cli({"bogus"}).code, kExitValidation);
  EXPECT_EQ(cli({"--config", "/nonexistent.json", "modes", "--out", dir.string()}).code, kExitIo);
  write_text(dir / "degenerate.json", R"({"trap": {"radial_freq_x_hz": 3.0e6, "radial_freq_y_hz": 3.0e6}})");
  EXPECT_EQ(cli({"--config", (dir / "degenerate.json").string(), "modes", "--out", dir.string()}).code,
            kExitValidation);
  EXPECT_EQ(cli({"design", "--pair", "3", "5", "--axis", "Z", "--out", dir.string()}).code, kExitValidation);
  EXPECT_EQ(cli({"design", "--pair", "3", "5", "--segments", "3", "--out", dir.string()}).code, kExitNumeric);
  EXPECT_EQ(cli({"tfim", "--ratio", "0.1", "--field", "0.1", "--out", dir.string()}).code, kExitValidation);
}

TEST(Cli, ModesWritesAxisFiles) {
  const fs::path dir = scratch("modes");
  const Outcome r = cli({"modes", "--out", dir.string()});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  for (const char* f : {"modes_x.json", "modes_y.json", "modes_z.json", "separation.json", "manifest.json"}) {
    EXPECT_TRUE(fs::exists(dir / f)) << f;
  }
  const ModeSet x = modes_from_json(read_json(dir / "modes_x.json"));
  EXPECT_EQ(x.mode_count(), 7);
}

TEST(Cli, DesignReportsClosure) {
  const fs::path dir = scratch("design");
  const Outcome r = cli({"design", "--pair", "3", "5", "--axis", "X", "--angle", "0.7853981633974483", "--out",
                         dir.string()});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const Json report = read_json(dir / "pulse_X_3_5_report.json");
  EXPECT_LT(report.at("max_residual").get<double>(), 1e-10 * report.at("residual_scale").get<double>());
  EXPECT_NEAR(report.at("achieved_angle").get<double>(), kPi / 4, 1e-12);
  const PulseSchedule p = pulse_from_json(read_json(dir / "pulse_X_3_5.json"));
  EXPECT_EQ(p.segments.size(), 15u);
}

TEST(Cli, GhzNoiselessAndDeterministic) {
  const fs::path a = scratch("ghz_a"), b = scratch("ghz_b"), c = scratch("ghz_c");
  ASSERT_EQ(cli({"--seed", "5", "ghz", "--shots", "200", "--out", a.string()}).code, kExitOk);
  ASSERT_EQ(cli({"--seed", "5", "ghz", "--shots", "200", "--out", b.string()}).code, kExitOk);
  EXPECT_EQ(directory_bytes(a), directory_bytes(b));
  ASSERT_EQ(cli({"replay", (a / "manifest.json").string(), "--out", c.string()}).code, kExitOk);
  EXPECT_EQ(directory_bytes(a), directory_bytes(c));
  const fs::path d = scratch("ghz_d");
  ASSERT_EQ(cli({"ghz", "--noiseless", "--out", d.string()}).code, kExitOk);
  EXPECT_NEAR(read_json(d / "ghz.json").at("estimate").at("fidelity").get<double>(), 1.0, 1e-10);
}

TEST(Cli, TfimFormatsAndManifest) {
  const fs::path dir = scratch("tfim");
  ASSERT_EQ(cli({"--format", "json", "tfim", "--mode", "parallel", "--ratio", "0.096", "--noiseless", "--exact",
                 "--out", dir.string()})
                .code,
            kExitOk);
  const Json trace = read_json(dir / "tfim_parallel.json");
  EXPECT_EQ(trace.size(), 21u);
  EXPECT_EQ(trace[0]["magnetization"], 5.0);
  EXPECT_TRUE(fs::exists(dir / "tfim_exact.json"));
  const RunManifest m = RunManifest::from_json(read_json(dir / "manifest.json"));
  EXPECT_EQ(m.command, "tfim");
  EXPECT_EQ(m.outputs.at("tfim_parallel.json"), file_sha256(dir / "tfim_parallel.json"));
  for (const auto& a : m.arguments) EXPECT_NE(a, "--out");
}

TEST(Cli, ReplayRejectsChangedInputs) {
  const fs::path dir = scratch("replay");
  write_text(dir / "c.txt", "MS 1 2 0.785398 X\n");
  ASSERT_EQ(cli({"run", (dir / "c.txt").string(), "--out", (dir / "o").string()}).code, kExitOk);
  write_text(dir / "c.txt", "MS 1 2 0.5 X\n");
  EXPECT_EQ(cli({"replay", (dir / "o" / "manifest.json").string(), "--out", (dir / "p").string()}).code,
            kExitValidation);
}
