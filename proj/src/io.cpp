#include "ionpar/io.hpp"

#include <charconv>
#include <fstream>
#include <initializer_list>
#include <sstream>

#include <openssl/evp.h>

namespace ionpar {

namespace {

double hz(double angular) { return angular / kTwoPi; }
double angular(double hertz) { return hertz * kTwoPi; }

void allow_keys(const Json& j, const char* where, std::initializer_list<const char*> keys) {
  if (!j.is_object()) throw ValidationError(std::string(where) + " must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    bool known = false;
    for (const char* k : keys) known = known || key == k;
    if (!known) throw ValidationError(std::string(where) + ": unknown key '" + key + "'");
  }
}

template <class T>
void read(const Json& j, const char* key, T& out) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("bad value for '") + key + "': " + e.what());
  }
}

template <class T>
T require(const Json& j, const char* key) {
  if (!j.contains(key)) throw ValidationError(std::string("missing key '") + key + "'");
  T out{};
  read(j, key, out);
  return out;
}

Json matrix_rows(const MatrixXd& m) {
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

MatrixXd matrix_from_rows(const Json& j) {
  const auto rows = j.get<std::vector<std::vector<double>>>();
  const Eigen::Index r = static_cast<Eigen::Index>(rows.size());
  const Eigen::Index c = r ? static_cast<Eigen::Index>(rows[0].size()) : 0;
  MatrixXd m(r, c);
  for (Eigen::Index i = 0; i < r; ++i) {
    if (static_cast<Eigen::Index>(rows[i].size()) != c) throw ValidationError("ragged matrix in JSON");
    for (Eigen::Index k = 0; k < c; ++k) m(i, k) = rows[i][k];
  }
  return m;
}

Json t2_json(const std::vector<double>& t2) {
  if (t2.empty()) return nullptr;
  bool uniform = true;
  for (double t : t2) uniform = uniform && t == t2.front();
  if (uniform) return t2.front();
  return t2;
}

std::vector<double> t2_from_json(const Json& j) {
  if (j.is_null()) return {};
  if (j.is_number()) return {j.get<double>()};
  if (j.is_array()) return j.get<std::vector<double>>();
  throw ValidationError("t2_s must be null, a number or an array");
}

std::string hex(const unsigned char* data, unsigned len) {
  static const char* digits = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned i = 0; i < len; ++i) {
    out.push_back(digits[data[i] >> 4]);
    out.push_back(digits[data[i] & 15]);
  }
  return out;
}

}  // namespace

NoiseModel Settings::effective_noise(int qubits) const {
  NoiseModel n = noise;
  if (n.t2.size() == 1 && qubits > 1) n.t2.assign(qubits, n.t2.front());
  if (calibrate_to) n.depolarizing = calibrate_depolarizing(*calibrate_to, timing);
  n.validate(qubits);
  return n;
}

void Settings::validate() const {
  trap.validate();
  if (!(gate.duration > 0.0)) throw ValidationError("gate duration must be positive");
  if (gate.segments < 0) throw ValidationError("segment count must be non-negative");
  if (gate.modes < 0) throw ValidationError("retained mode count must be non-negative");
  if (!(gate.max_amplitude > 0.0)) throw ValidationError("Rabi ceiling must be positive");
  if (verify.cutoff < 2) throw ValidationError("Fock cutoff must be at least 2");
  if (verify.modes_per_axis < 1) throw ValidationError("verification needs at least one mode per axis");
  if (!(verify.dt_max > 0.0)) throw ValidationError("dt_max must be positive");
  if (!(verify.max_distance > 0.0 && verify.max_infidelity > 0.0)) throw ValidationError("thresholds must be positive");
  if (calibrate_to && !(*calibrate_to > 0.25 && *calibrate_to <= 1.0)) {
    throw ValidationError("calibration fidelity must lie in (0.25, 1]");
  }
  if (!(compare_t2 > 0.0)) throw ValidationError("comparison T2 must be positive");
  if (!(timing.ms_gate >= 0.0 && timing.single_qubit >= 0.0)) throw ValidationError("moment times must be non-negative");
  if (scan.phase_points < 8) throw ValidationError("a parity scan needs at least 8 phases");
  if (scan.run.shots < 0) throw ValidationError("shot count must be non-negative");
  tfim.validate();
  for (int q : {ghz.outer_x, ghz.shared, ghz.outer_y}) {
    if (q < 0) throw ValidationError("GHZ qubit labels start at 1");
  }
}

Json to_json(const TrapConfig& trap) {
  Json ions = Json::array();
  for (int i : trap.qubit_ions) ions.push_back(i + 1);
  return Json{{"ion_count", trap.ion_count},
              {"axial_freq_hz", hz(trap.axial_freq)},
              {"radial_freq_x_hz", hz(trap.radial_freq_x)},
              {"radial_freq_y_hz", hz(trap.radial_freq_y)},
              {"ion_mass_kg", trap.ion_mass},
              {"wavevector_x_per_m", trap.wavevector_x},
              {"wavevector_y_per_m", trap.wavevector_y},
              {"wavevector_z_per_m", trap.wavevector_z},
              {"qubit_ions", ions}};
}

TrapConfig trap_from_json(const Json& j) {
  allow_keys(j, "trap", {"ion_count", "axial_freq_hz", "radial_freq_x_hz", "radial_freq_y_hz", "ion_mass_kg",
                         "wavevector_x_per_m", "wavevector_y_per_m", "wavevector_z_per_m", "qubit_ions"});
  TrapConfig t = default_trap();
  read(j, "ion_count", t.ion_count);
  double f = hz(t.axial_freq);
  read(j, "axial_freq_hz", f);
  t.axial_freq = angular(f);
  f = hz(t.radial_freq_x);
  read(j, "radial_freq_x_hz", f);
  t.radial_freq_x = angular(f);
  f = hz(t.radial_freq_y);
  read(j, "radial_freq_y_hz", f);
  t.radial_freq_y = angular(f);
  read(j, "ion_mass_kg", t.ion_mass);
  read(j, "wavevector_x_per_m", t.wavevector_x);
  read(j, "wavevector_y_per_m", t.wavevector_y);
  read(j, "wavevector_z_per_m", t.wavevector_z);
  if (j.contains("qubit_ions")) {
    std::vector<int> ions;
    read(j, "qubit_ions", ions);
    t.qubit_ions.clear();
    for (int i : ions) t.qubit_ions.push_back(i - 1);
  } else if (j.contains("ion_count") && t.ion_count != default_trap().ion_count) {
    t.qubit_ions.clear();
  }
  t.validate();
  return t;
}

Json to_json(const ModeSet& modes) {
  Json freqs = Json::array();
  for (Eigen::Index k = 0; k < modes.frequencies.size(); ++k) freqs.push_back(hz(modes.frequencies(k)));
  return Json{{"axis", std::string(to_string(modes.axis))},
              {"frequencies_hz", freqs},
              {"mode_vectors", matrix_rows(modes.mode_vectors)},
              {"lamb_dicke", matrix_rows(modes.lamb_dicke)},
              {"source_modes", modes.source_modes}};
}

ModeSet modes_from_json(const Json& j) {
  allow_keys(j, "modes", {"axis", "frequencies_hz", "mode_vectors", "lamb_dicke", "source_modes"});
  ModeSet m;
  m.axis = parse_axis(require<std::string>(j, "axis"));
  const auto f = require<std::vector<double>>(j, "frequencies_hz");
  m.frequencies.resize(static_cast<Eigen::Index>(f.size()));
  for (std::size_t k = 0; k < f.size(); ++k) m.frequencies(static_cast<Eigen::Index>(k)) = angular(f[k]);
  m.mode_vectors = matrix_from_rows(j.at("mode_vectors"));
  m.lamb_dicke = matrix_from_rows(j.at("lamb_dicke"));
  read(j, "source_modes", m.source_modes);
  if (m.mode_vectors.cols() != m.frequencies.size() || m.lamb_dicke.cols() != m.frequencies.size() ||
      m.lamb_dicke.rows() != m.mode_vectors.rows()) {
    throw ValidationError("mode file has inconsistent dimensions");
  }
  if (m.source_modes.empty()) {
    for (int k = 0; k < m.mode_count(); ++k) m.source_modes.push_back(k);
  }
  return m;
}

Json to_json(const SpectralSeparation& s) {
  return Json{{"x_band_hz", {hz(s.x_low), hz(s.x_high)}},
              {"y_band_hz", {hz(s.y_low), hz(s.y_high)}},
              {"gap_hz", hz(s.gap)},
              {"disjoint", s.disjoint}};
}

Json to_json(const PulseSchedule& schedule) {
  Json segs = Json::array();
  for (const auto& s : schedule.segments) {
    segs.push_back({{"dt_s", s.duration}, {"omega_p_rad_s", s.amplitude_p}, {"omega_q_rad_s", s.amplitude_q}});
  }
  return Json{{"pair", {schedule.pair.first + 1, schedule.pair.second + 1}},
              {"axis", std::string(to_string(schedule.axis))},
              {"detuning_hz", hz(schedule.detuning)},
              {"tau_s", schedule.duration()},
              {"phase_rad", {schedule.phase[0], schedule.phase[1]}},
              {"segments", segs}};
}

PulseSchedule pulse_from_json(const Json& j) {
  allow_keys(j, "pulse", {"pair", "axis", "detuning_hz", "tau_s", "phase_rad", "segments"});
  PulseSchedule p;
  const auto pair = require<std::vector<int>>(j, "pair");
  if (pair.size() != 2) throw ValidationError("pulse pair must hold two ions");
  p.pair = {pair[0] - 1, pair[1] - 1};
  p.axis = parse_axis(require<std::string>(j, "axis"));
  p.detuning = angular(require<double>(j, "detuning_hz"));
  if (j.contains("phase_rad")) {
    const auto ph = require<std::vector<double>>(j, "phase_rad");
    if (ph.size() != 2) throw ValidationError("phase_rad must hold two values");
    p.phase = {ph[0], ph[1]};
  }
  for (const auto& s : j.at("segments")) {
    allow_keys(s, "segment", {"dt_s", "omega_p_rad_s", "omega_q_rad_s"});
    p.segments.push_back({require<double>(s, "dt_s"), require<double>(s, "omega_p_rad_s"),
                          require<double>(s, "omega_q_rad_s")});
  }
  p.validate();
  if (j.contains("tau_s") && std::abs(require<double>(j, "tau_s") - p.duration()) > 1e-12 * std::max(1.0, p.duration())) {
    throw ValidationError("tau_s does not match the summed segment durations");
  }
  return p;
}

Json to_json(const PropagatorReport& report) {
  Json ions = Json::array();
  for (int i : report.ions) ions.push_back(i + 1);
  Json residuals = Json::array();
  for (const auto& r : report.residuals) {
    residuals.push_back({{"ion", r.ion + 1},
                         {"axis", std::string(to_string(r.axis))},
                         {"mode", r.mode},
                         {"alpha", {r.alpha.real(), r.alpha.imag()}}});
  }
  Json unitary = Json::array();
  for (Eigen::Index r = 0; r < report.unitary.rows(); ++r) {
    for (Eigen::Index c = 0; c < report.unitary.cols(); ++c) {
      unitary.push_back({report.unitary(r, c).real(), report.unitary(r, c).imag()});
    }
  }
  return Json{{"ions", ions},
              {"angles", report.angles},
              {"residuals", residuals},
              {"max_residual", report.max_residual},
              {"closed", report.closed},
              {"entanglement_entropy", report.entanglement_entropy},
              {"unitary_dim", report.unitary.rows()},
              {"unitary", unitary}};
}

Json to_json(const Schedule& schedule, const DepthReport& depth) {
  auto gate = [](const ScheduledGate& g) {
    return Json{{"index", g.index + 1},
                {"pair", {g.gate.pair.first + 1, g.gate.pair.second + 1}},
                {"angle", g.gate.angle},
                {"axis", std::string(to_string(g.axis))}};
  };
  Json layers = Json::array();
  for (const auto& l : schedule.layers) {
    layers.push_back({{"x", l.x ? gate(*l.x) : Json(nullptr)}, {"y", l.y ? gate(*l.y) : Json(nullptr)}});
  }
  Json power = Json::array();
  for (const auto& p : schedule.power) {
    power.push_back({{"layer", p.layer + 1},
                     {"qubit", p.qubit + 1},
                     {"max_rabi_hz", hz(p.max_amplitude)},
                     {"exceeds", p.exceeds}});
  }
  return Json{{"depth", schedule.depth()},
              {"gate_count", schedule.gate_count()},
              {"layers", layers},
              {"power", power},
              {"warnings", schedule.warnings},
              {"sequential_time_s", depth.sequential},
              {"parallel_time_s", depth.parallel},
              {"speedup", depth.ratio}};
}

Json to_json(const FidelityReport& r) {
  return Json{{"fidelity", r.fidelity},
              {"fidelity_error", r.fidelity_error},
              {"population", r.population},
              {"population_error", r.population_error},
              {"contrast", r.contrast},
              {"contrast_error", r.contrast_error},
              {"offset", r.offset},
              {"phase", r.phase}};
}

Json to_json(const NoiseModel& noise) {
  return Json{{"t2_s", t2_json(noise.t2)}, {"depolarizing", noise.depolarizing}};
}

Json to_json(const Settings& s) {
  return Json{
      {"trap", to_json(s.trap)},
      {"gate",
       {{"duration_s", s.gate.duration},
        {"segments", s.gate.segments},
        {"detuning_offset_hz", hz(s.gate.detuning_offset)},
        {"max_rabi_hz", hz(s.gate.max_amplitude)},
        {"modes", s.gate.modes}}},
      {"verify",
       {{"cutoff", s.verify.cutoff},
        {"modes_per_axis", s.verify.modes_per_axis},
        {"dt_max_s", s.verify.dt_max},
        {"leakage_bound", s.verify.leakage_bound},
        {"max_distance", s.verify.max_distance},
        {"max_infidelity", s.verify.max_infidelity}}},
      {"noise",
       {{"t2_s", t2_json(s.noise.t2)},
        {"depolarizing", s.noise.depolarizing},
        {"calibrate_to_fidelity", s.calibrate_to ? Json(*s.calibrate_to) : Json(nullptr)}}},
      {"compare", {{"t2_s", s.compare_t2}}},
      {"timing", {{"ms_gate_s", s.timing.ms_gate}, {"single_qubit_s", s.timing.single_qubit}}},
      {"scan", {{"phase_points", s.scan.phase_points}, {"shots", s.scan.run.shots}}},
      {"tfim",
       {{"spins", s.tfim.spins},
        {"coupling", s.tfim.coupling},
        {"field", s.tfim.field},
        {"dt", s.tfim.dt},
        {"steps", s.tfim.steps}}},
      {"ghz", {{"outer_x", s.ghz.outer_x + 1}, {"shared", s.ghz.shared + 1}, {"outer_y", s.ghz.outer_y + 1}}},
      {"seed", s.seed}};
}

Settings settings_from_json(const Json& j) {
  allow_keys(j, "config", {"trap", "gate", "verify", "noise", "compare", "timing", "scan", "tfim", "ghz", "seed"});
  Settings s;
  if (j.contains("trap")) s.trap = trap_from_json(j.at("trap"));
  if (j.contains("gate")) {
    const Json& g = j.at("gate");
    allow_keys(g, "gate", {"duration_s", "segments", "detuning_offset_hz", "max_rabi_hz", "modes"});
    read(g, "duration_s", s.gate.duration);
    read(g, "segments", s.gate.segments);
    double f = hz(s.gate.detuning_offset);
    read(g, "detuning_offset_hz", f);
    s.gate.detuning_offset = angular(f);
    f = hz(s.gate.max_amplitude);
    read(g, "max_rabi_hz", f);
    s.gate.max_amplitude = angular(f);
    read(g, "modes", s.gate.modes);
  }
  if (j.contains("verify")) {
    const Json& v = j.at("verify");
    allow_keys(v, "verify", {"cutoff", "modes_per_axis", "dt_max_s", "leakage_bound", "max_distance", "max_infidelity"});
    read(v, "cutoff", s.verify.cutoff);
    read(v, "modes_per_axis", s.verify.modes_per_axis);
    read(v, "dt_max_s", s.verify.dt_max);
    read(v, "leakage_bound", s.verify.leakage_bound);
    read(v, "max_distance", s.verify.max_distance);
    read(v, "max_infidelity", s.verify.max_infidelity);
  }
  if (j.contains("noise")) {
    const Json& n = j.at("noise");
    allow_keys(n, "noise", {"t2_s", "depolarizing", "calibrate_to_fidelity"});
    if (n.contains("t2_s")) s.noise.t2 = t2_from_json(n.at("t2_s"));
    read(n, "depolarizing", s.noise.depolarizing);
    if (n.contains("calibrate_to_fidelity") && !n.at("calibrate_to_fidelity").is_null()) {
      s.calibrate_to = require<double>(n, "calibrate_to_fidelity");
    }
  }
  if (j.contains("compare")) {
    allow_keys(j.at("compare"), "compare", {"t2_s"});
    read(j.at("compare"), "t2_s", s.compare_t2);
  }
  if (j.contains("timing")) {
    allow_keys(j.at("timing"), "timing", {"ms_gate_s", "single_qubit_s"});
    read(j.at("timing"), "ms_gate_s", s.timing.ms_gate);
    read(j.at("timing"), "single_qubit_s", s.timing.single_qubit);
  }
  if (j.contains("scan")) {
    allow_keys(j.at("scan"), "scan", {"phase_points", "shots"});
    read(j.at("scan"), "phase_points", s.scan.phase_points);
    read(j.at("scan"), "shots", s.scan.run.shots);
  }
  if (j.contains("tfim")) {
    const Json& t = j.at("tfim");
    allow_keys(t, "tfim", {"spins", "coupling", "field", "dt", "steps"});
    read(t, "spins", s.tfim.spins);
    read(t, "coupling", s.tfim.coupling);
    read(t, "field", s.tfim.field);
    read(t, "dt", s.tfim.dt);
    read(t, "steps", s.tfim.steps);
  }
  if (j.contains("ghz")) {
    const Json& g = j.at("ghz");
    allow_keys(g, "ghz", {"outer_x", "shared", "outer_y"});
    int a = s.ghz.outer_x + 1, b = s.ghz.shared + 1, c = s.ghz.outer_y + 1;
    read(g, "outer_x", a);
    read(g, "shared", b);
    read(g, "outer_y", c);
    s.ghz = {a - 1, b - 1, c - 1};
  }
  read(j, "seed", s.seed);
  s.tfim.timing = s.timing;
  s.validate();
  return s;
}

Settings load_settings(const std::filesystem::path& path) { return settings_from_json(read_json(path)); }

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IoError("cannot read '" + path.string() + "'");
  return ss.str();
}

Json read_json(const std::filesystem::path& path) {
  const std::string text = read_text(path);
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError("'" + path.string() + "' is not valid JSON: " + e.what());
  }
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  out << text;
  out.flush();
  if (!out) throw IoError("write to '" + path.string() + "' failed");
}

void write_json(const std::filesystem::path& path, const Json& j) { write_text(path, j.dump(2) + "\n"); }

std::string format_number(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

std::string Table::csv() const {
  std::string out;
  for (std::size_t c = 0; c < columns.size(); ++c) out += (c ? "," : "") + columns[c];
  out += "\n";
  for (const auto& row : rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) out += ",";
      out += row[c].is_string() ? row[c].get<std::string>()
             : row[c].is_number_integer() ? row[c].dump()
                                          : format_number(row[c].get<double>());
    }
    out += "\n";
  }
  return out;
}

Json Table::json() const {
  Json out = Json::array();
  for (const auto& row : rows) {
    Json obj = Json::object();
    for (std::size_t c = 0; c < columns.size() && c < row.size(); ++c) obj[columns[c]] = row[c];
    out.push_back(std::move(obj));
  }
  return out;
}

Table scan_table(const std::vector<ParityPoint>& scan) {
  Table t{{"phi", "parity", "stderr"}, {}};
  for (const auto& p : scan) t.rows.push_back({p.phase, p.parity, p.error});
  return t;
}

Table trace_table(const MagnetizationTrace& trace) {
  Table t{{"time", "magnetization", "stderr"}, {}};
  for (std::size_t k = 0; k < trace.times.size(); ++k) {
    t.rows.push_back({trace.times[k], trace.magnetization[k], trace.error[k]});
  }
  return t;
}

Table comparison_table(const RuntimeErrorReport& r) {
  Table t{{"time", "ideal", "parallel_error", "sequential_error", "ratio"}, {}};
  for (std::size_t k = 0; k < r.times.size(); ++k) {
    t.rows.push_back({r.times[k], r.ideal[k], r.parallel_error[k], r.sequential_error[k], r.ratio[k]});
  }
  return t;
}

Table histogram_table(const RunResult& result, int qubit_count) {
  Table t{{"bitstring", "probability", "count"}, {}};
  for (Eigen::Index i = 0; i < result.probabilities.size(); ++i) {
    std::string bits(static_cast<std::size_t>(qubit_count), '0');
    for (int q = 0; q < qubit_count; ++q) {
      if ((i >> (qubit_count - 1 - q)) & 1) bits[static_cast<std::size_t>(q)] = '1';
    }
    const auto count = result.counts.empty() ? std::uint64_t{0} : result.counts[static_cast<std::size_t>(i)];
    t.rows.push_back({bits, result.probabilities(i), count});
  }
  return t;
}

std::string sha256_hex(const std::string& bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw IoError("SHA-256 computation failed");
  }
  return hex(digest, len);
}

std::string file_sha256(const std::filesystem::path& path) { return sha256_hex(read_text(path)); }

Json RunManifest::to_json() const {
  return Json{{"tool", kToolName},
              {"version", kToolVersion},
              {"command", command},
              {"arguments", arguments},
              {"seed", seed},
              {"config", config},
              {"inputs", inputs},
              {"outputs", outputs}};
}

RunManifest RunManifest::from_json(const Json& j) {
  allow_keys(j, "manifest", {"tool", "version", "command", "arguments", "seed", "config", "inputs", "outputs"});
  RunManifest m;
  m.command = require<std::string>(j, "command");
  read(j, "arguments", m.arguments);
  read(j, "seed", m.seed);
  if (j.contains("config")) m.config = j.at("config");
  read(j, "inputs", m.inputs);
  read(j, "outputs", m.outputs);
  return m;
}

}  // namespace ionpar
