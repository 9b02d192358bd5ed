#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "ionpar/chain.hpp"
#include "ionpar/circuit.hpp"
#include "ionpar/dynamics.hpp"
#include "ionpar/experiments.hpp"
#include "ionpar/pulse.hpp"
#include "ionpar/scheduler.hpp"

namespace ionpar {

using Json = nlohmann::ordered_json;

/// Pulse-design settings shared by `design` and the verification pipeline.
struct GateSettings {
  double duration = kDefaultGateDuration;  // s
  int segments = 0;                        // 0 selects 2 * modes + 1
  double detuning_offset = kTwoPi * 3e3;   // above the top retained mode, rad/s
  double max_amplitude = kTwoPi * 2e6;     // rad/s
  int modes = 0;                           // retained top modes per axis; 0 keeps all
};

struct VerifySettings {
  int cutoff = 12;
  int modes_per_axis = 2;
  double dt_max = 10e-6;
  double leakage_bound = 1e-6;
  double max_distance = 1e-8;
  double max_infidelity = 1e-6;
};

/// Everything a command reads from the config file. Frequencies in files are Hz, times s.
struct Settings {
  TrapConfig trap = default_trap();
  GateSettings gate;
  VerifySettings verify;
  NoiseModel noise;
  std::optional<double> calibrate_to;  // single-MS fidelity that fixes the depolarizing strength
  double compare_t2 = 0.1;             // s
  Timing timing;
  ScanSettings scan;
  TfimConfig tfim;
  GhzQubits ghz;
  std::uint64_t seed = 0;

  /// Noise with the calibration applied.
  NoiseModel effective_noise(int qubits) const;
  void validate() const;
};

Json to_json(const TrapConfig& trap);
TrapConfig trap_from_json(const Json& j);

Json to_json(const ModeSet& modes);
ModeSet modes_from_json(const Json& j);

Json to_json(const SpectralSeparation& s);

/// Ion indices are written 1-based.
Json to_json(const PulseSchedule& schedule);
PulseSchedule pulse_from_json(const Json& j);

Json to_json(const PropagatorReport& report);
Json to_json(const Schedule& schedule, const DepthReport& depth);
Json to_json(const FidelityReport& report);
Json to_json(const NoiseModel& noise);

Json to_json(const Settings& settings);
/// Missing keys keep their defaults; unknown keys are rejected.
Settings settings_from_json(const Json& j);
Settings load_settings(const std::filesystem::path& path);

Json read_json(const std::filesystem::path& path);
std::string read_text(const std::filesystem::path& path);
/// Writes `text` verbatim; throws IoError on failure.
void write_text(const std::filesystem::path& path, const std::string& text);
void write_json(const std::filesystem::path& path, const Json& j);

/// Shortest round-trip decimal form of a double.
std::string format_number(double x);

/// Column-oriented result written as CSV or as a JSON array of row objects.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Json>> rows;  // numbers or strings

  std::string csv() const;
  Json json() const;
};

/// phi,parity,stderr
Table scan_table(const std::vector<ParityPoint>& scan);
/// time,magnetization,stderr
Table trace_table(const MagnetizationTrace& trace);
Table comparison_table(const RuntimeErrorReport& report);
/// bitstring,probability,count
Table histogram_table(const RunResult& result, int qubit_count);

std::string sha256_hex(const std::string& bytes);
std::string file_sha256(const std::filesystem::path& path);

/// Reproducibility record of one command. Output digests are keyed by file name inside
/// the output directory.
struct RunManifest {
  std::string command;
  std::vector<std::string> arguments;  // command line without the output directory
  Json config;
  std::uint64_t seed = 0;
  std::map<std::string, std::string> inputs;   // path -> sha256
  std::map<std::string, std::string> outputs;  // file name -> sha256

  Json to_json() const;
  static RunManifest from_json(const Json& j);
};

inline constexpr const char* kToolName = "ionpar";
inline constexpr const char* kToolVersion = "0.1.0";

}  // namespace ionpar
