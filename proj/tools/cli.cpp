#include "ionpar/cli.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"

#include "ionpar/io.hpp"

namespace ionpar {

namespace {

namespace fs = std::filesystem;

struct Globals {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out = ".";
  std::string format = "csv";
};

/// Output directory, manifest bookkeeping and the resolved settings of one command.
class Session {
 public:
  Session(const Globals& g, std::string command, std::vector<std::string> arguments, std::ostream& log)
      : format_(g.format), out_dir_(g.out), log_(log) {
    if (!g.config.empty()) {
      settings_ = load_settings(g.config);
      manifest_.inputs[g.config] = file_sha256(g.config);
    }
    if (g.seed) settings_.seed = *g.seed;
    settings_.tfim.timing = settings_.timing;
    manifest_.command = std::move(command);
    manifest_.arguments = std::move(arguments);
  }

  Settings& settings() { return settings_; }
  std::ostream& log() { return log_; }
  const std::string& format() const { return format_; }

  void input(const std::string& path) { manifest_.inputs[path] = file_sha256(path); }

  void emit(const std::string& name, const std::string& text) {
    write_text(out_dir_ / name, text);
    manifest_.outputs[name] = sha256_hex(text);
    log_ << "wrote " << (out_dir_ / name).string() << "\n";
  }

  void emit_json(const std::string& name, const Json& j) { emit(name, j.dump(2) + "\n"); }

  /// A result table in the selected format; `stem` gets the matching extension.
  void emit_table(const std::string& stem, const Table& table) {
    if (format_ == "json") {
      emit_json(stem + ".json", table.json());
    } else {
      emit(stem + ".csv", table.csv());
    }
  }

  void finish() {
    manifest_.seed = settings_.seed;
    manifest_.config = to_json(settings_);
    write_json(out_dir_ / "manifest.json", manifest_.to_json());
  }

 private:
  Settings settings_;
  RunManifest manifest_;
  std::string format_;
  fs::path out_dir_;
  std::ostream& log_;
};

std::vector<std::string> without_output_dir(const std::vector<std::string>& args) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--out") {
      ++i;
      continue;
    }
    if (args[i].rfind("--out=", 0) == 0) continue;
    out.push_back(args[i]);
  }
  return out;
}

std::pair<ModeSet, ModeSet> radial_modes(const Chain& chain, int keep) {
  if (keep <= 0) return {chain.x, chain.y};
  return {chain.x.top_modes(std::min(keep, chain.x.mode_count())),
          chain.y.top_modes(std::min(keep, chain.y.mode_count()))};
}

std::string num(double x) {
  std::ostringstream s;
  s << std::setprecision(10) << x;
  return s.str();
}

// ---- commands ------------------------------------------------------------

int cmd_modes(Session& s) {
  const Chain chain = build_chain(s.settings().trap);
  s.emit_json("modes_x.json", to_json(chain.x));
  s.emit_json("modes_y.json", to_json(chain.y));
  s.emit_json("modes_z.json", to_json(chain.z));
  const SpectralSeparation sep = spectral_separation(chain.x, chain.y);
  s.emit_json("separation.json", to_json(sep));
  for (const ModeSet* m : {&chain.x, &chain.y, &chain.z}) {
    s.log() << to_string(m->axis) << " modes (MHz):";
    for (Eigen::Index k = 0; k < m->frequencies.size(); ++k) s.log() << " " << num(m->frequencies(k) / kTwoPi / 1e6);
    s.log() << "\n";
  }
  s.log() << "X/Y band gap: " << num(sep.gap / kTwoPi / 1e3) << " kHz" << (sep.disjoint ? "" : " (overlapping)") << "\n";
  return kExitOk;
}

struct DesignArgs {
  std::vector<int> pair{3, 5};
  std::string axis = "X";
  double angle = kPi / 4;
  std::optional<double> duration;
  std::optional<int> segments;
  std::optional<double> detuning_hz;
  std::optional<int> modes;
  std::string output;
};

int cmd_design(Session& s, const DesignArgs& a) {
  Settings& cfg = s.settings();
  if (a.pair.size() != 2) throw ValidationError("--pair takes two qubit labels");
  const Axis axis = parse_axis(a.axis);
  if (axis == Axis::Z) throw ValidationError("gates are driven on the X or Y bus");
  const Chain chain = build_chain(cfg.trap);
  const int keep = a.modes.value_or(cfg.gate.modes);
  const ModeSet& all = chain.modes(axis);
  const ModeSet modes = keep > 0 ? all.top_modes(std::min(keep, all.mode_count())) : all;
  const std::pair<int, int> ions{cfg.trap.ion_for_qubit(a.pair[0]), cfg.trap.ion_for_qubit(a.pair[1])};
  const double duration = a.duration.value_or(cfg.gate.duration);
  const double detuning = a.detuning_hz ? *a.detuning_hz * kTwoPi : modes.frequencies.maxCoeff() + cfg.gate.detuning_offset;
  DesignOptions opts;
  opts.segments = a.segments.value_or(cfg.gate.segments);
  opts.max_amplitude = cfg.gate.max_amplitude;
  const DesignResult r = design_amplitude_modulated(ions, modes, duration, detuning, a.angle, opts);

  const std::string stem = a.output.empty()
                               ? "pulse_" + std::string(to_string(axis)) + "_" + std::to_string(a.pair[0]) + "_" +
                                     std::to_string(a.pair[1])
                               : a.output;
  s.emit_json(stem + ".json", to_json(r.schedule));
  s.emit_json(stem + "_report.json", Json{{"max_residual", r.max_residual},
                                          {"residual_scale", r.residual_scale},
                                          {"achieved_angle", r.achieved_angle},
                                          {"lamb_dicke_metric", r.lamb_dicke},
                                          {"null_space_dim", r.null_space_dim},
                                          {"retained_modes", modes.mode_count()},
                                          {"warnings", r.warnings}});
  s.log() << "max |alpha|: " << num(r.max_residual) << "\n";
  s.log() << "chi: " << num(r.achieved_angle) << " (target " << num(a.angle) << ")\n";
  for (const auto& w : r.warnings) s.log() << "warning: " << w << "\n";
  return kExitOk;
}

int cmd_verify(Session& s, const std::vector<std::string>& files) {
  const Settings& cfg = s.settings();
  if (files.size() != 2) throw ValidationError("verify takes two pulse files");
  std::vector<PulseSchedule> pulses;
  for (const auto& f : files) {
    s.input(f);
    pulses.push_back(pulse_from_json(read_json(f)));
  }
  if (pulses[0].axis == pulses[1].axis) {
    throw ValidationError("both pulses drive the " + std::string(to_string(pulses[0].axis)) +
                          " bus; same-axis gates must be serialised by the scheduler");
  }
  if (pulses[0].axis == Axis::Y) std::swap(pulses[0], pulses[1]);
  const Chain chain = build_chain(cfg.trap);
  const auto [mx, my] = radial_modes(chain, cfg.verify.modes_per_axis);
  const PropagatorReport report = magnus_propagator(pulses, mx, my);
  EvolveOptions opts;
  opts.dt_max = cfg.verify.dt_max;
  opts.leakage_bound = cfg.verify.leakage_bound;
  double distance = 0.0;
  double fidelity = 0.0;
  try {
    const SpinMotionState start = ground_state(report.ions, {&mx, &my}, cfg.verify.cutoff);
    const SpinMotionState parallel = evolve_exact(pulses, mx, my, start, opts);
    const SpinMotionState x_only = evolve_exact({pulses[0]}, mx, my, start, opts);
    const SpinMotionState sequential = evolve_exact({pulses[1]}, mx, my, x_only, opts);
    distance = (parallel.amplitudes - sequential.amplitudes).norm();
    std::vector<std::pair<std::pair<int, int>, double>> gates;
    for (std::size_t i = 0; i < pulses.size(); ++i) gates.push_back({pulses[i].pair, report.angles[i]});
    VectorXcd zero = VectorXcd::Zero(Eigen::Index{1} << report.ions.size());
    zero(0) = 1.0;
    fidelity = spin_fidelity(parallel, ideal_parallel_unitary(report.ions, gates) * zero);
  } catch (const CutoffError& e) {
    throw CutoffError(std::string(e.what()) + "; motional population reaches the Fock cutoff " +
                          std::to_string(cfg.verify.cutoff) + ", retry with a larger verify.cutoff (e.g. " +
                          std::to_string(2 * cfg.verify.cutoff) + ") or check the pulse closure (max |alpha| = " +
                          num(report.max_residual) + ")",
                      e.mode_slot(), e.population());
  }
  const double infidelity = 1.0 - fidelity;
  const bool pass = report.closed && distance < cfg.verify.max_distance && infidelity < cfg.verify.max_infidelity;
  Json out{{"distance", distance},
           {"fidelity", fidelity},
           {"infidelity", infidelity},
           {"max_distance", cfg.verify.max_distance},
           {"max_infidelity", cfg.verify.max_infidelity},
           {"retained_modes_per_axis", mx.mode_count()},
           {"cutoff", cfg.verify.cutoff},
           {"pass", pass},
           {"propagator", to_json(report)}};
  s.emit_json("verify.json", out);
  s.log() << "max |alpha|: " << num(report.max_residual) << "\n";
  for (std::size_t i = 0; i < pulses.size(); ++i) {
    s.log() << "chi " << to_string(pulses[i].axis) << ": " << num(report.angles[i]) << "\n";
  }
  s.log() << "D: " << num(distance) << "\n";
  s.log() << "1 - F: " << num(infidelity) << "\n";
  s.log() << (pass ? "PASS" : "FAIL") << "\n";
  return pass ? kExitOk : kExitNumeric;
}

struct ScheduleArgs {
  std::string circuit;
  std::string policy = "greedy";
  bool strict = false;
  bool no_shared = false;
  bool power = false;
};

int cmd_schedule(Session& s, const ScheduleArgs& a) {
  const Settings& cfg = s.settings();
  s.input(a.circuit);
  const Circuit circuit = parse_circuit_text(read_text(a.circuit));
  const GateList gates =
      gate_list_from_circuit(circuit, a.strict ? DependencyMode::StrictOrder : DependencyMode::CommutingXX);
  ScheduleOptions opts;
  if (a.policy == "greedy") {
    opts.policy = SchedulePolicy::Greedy;
  } else if (a.policy == "exhaustive") {
    opts.policy = SchedulePolicy::Exhaustive;
  } else {
    throw ValidationError("unknown policy '" + a.policy + "'");
  }
  opts.allow_shared_ion = !a.no_shared;
  Schedule schedule = schedule_gates(gates, opts);
  if (a.power) {
    const Chain chain = build_chain(cfg.trap);
    const auto [mx, my] = radial_modes(chain, cfg.gate.modes);
    std::vector<int> ion_of_qubit;
    for (int q = 1; q <= cfg.trap.qubit_count(); ++q) ion_of_qubit.push_back(cfg.trap.ion_for_qubit(q));
    std::vector<PulseSchedule> pulses(gates.gates.size());
    DesignOptions dopts;
    dopts.segments = cfg.gate.segments;
    dopts.max_amplitude = cfg.gate.max_amplitude;
    for (const auto& layer : schedule.layers) {
      for (const auto* g : {&layer.x, &layer.y}) {
        if (!*g) continue;
        const ModeSet& m = (*g)->axis == Axis::X ? mx : my;
        const auto [p, q] = (*g)->gate.pair;
        if (p >= static_cast<int>(ion_of_qubit.size()) || q >= static_cast<int>(ion_of_qubit.size())) {
          throw ValidationError("circuit addresses more qubits than the trap hosts");
        }
        pulses[(*g)->index] = design_amplitude_modulated({ion_of_qubit[p], ion_of_qubit[q]}, m, cfg.gate.duration,
                                                         m.frequencies.maxCoeff() + cfg.gate.detuning_offset,
                                                         (*g)->gate.angle, dopts)
                                  .schedule;
      }
    }
    attach_power_report(schedule, pulses, ion_of_qubit, cfg.gate.max_amplitude);
  }
  const DepthReport depth = depth_report(schedule, cfg.timing);
  s.emit_json("schedule.json", to_json(schedule, depth));
  std::string annotated = "# " + std::to_string(schedule.depth()) + " layers for " +
                          std::to_string(schedule.gate_count()) + " gates\n";
  s.emit("scheduled.txt", annotated + to_text(schedule.to_circuit(circuit.qubit_count)));
  s.log() << "depth: " << schedule.depth() << " (" << schedule.gate_count() << " gates), speedup "
          << num(depth.ratio) << "\n";
  for (const auto& w : schedule.warnings) s.log() << "warning: " << w << "\n";
  return kExitOk;
}

struct RunArgs {
  std::string circuit;
  std::optional<int> shots;
  bool noiseless = false;
};

int cmd_run(Session& s, const RunArgs& a) {
  Settings& cfg = s.settings();
  s.input(a.circuit);
  Circuit circuit = parse_circuit_text(read_text(a.circuit));
  circuit.timing = cfg.timing;
  const NoiseModel noise = a.noiseless ? NoiseModel::noiseless() : cfg.effective_noise(circuit.qubit_count);
  RunOptions opts{a.shots.value_or(cfg.scan.run.shots), cfg.seed};
  const RunResult r = run(circuit, noise, opts);
  s.emit_table("histogram", histogram_table(r, circuit.qubit_count));
  s.log() << "qubits: " << circuit.qubit_count << ", moments: " << circuit.moments.size()
          << ", duration: " << num(circuit.total_duration()) << " s\n";
  return kExitOk;
}

struct GhzArgs {
  bool noiseless = false;
  std::optional<int> shots;
};

int cmd_ghz(Session& s, const GhzArgs& a) {
  Settings& cfg = s.settings();
  const int n = cfg.trap.qubit_count();
  const NoiseModel noise = a.noiseless ? NoiseModel::noiseless() : cfg.effective_noise(n);
  ScanSettings scan = cfg.scan;
  scan.run.shots = a.shots.value_or(cfg.scan.run.shots);
  scan.run.seed = cfg.seed;
  const GhzResult r = ghz_experiment(noise, scan, n, cfg.ghz);
  s.emit_table("ghz_scan", scan_table(r.scan));
  Json pops = Json::object();
  for (int i = 0; i < 8; ++i) {
    std::string label = {char('0' + ((i >> 2) & 1)), char('0' + ((i >> 1) & 1)), char('0' + (i & 1))};
    pops[label] = r.populations(i);
  }
  s.emit_json("ghz.json", Json{{"qubits", {cfg.ghz.outer_x + 1, cfg.ghz.shared + 1, cfg.ghz.outer_y + 1}},
                               {"noise", to_json(noise)},
                               {"shots", scan.run.shots},
                               {"estimate", to_json(r.report)},
                               {"exact_fidelity", r.exact_fidelity},
                               {"populations", pops},
                               {"circuit", to_text(r.circuit)}});
  s.log() << "F = " << num(r.report.fidelity) << " +- " << num(r.report.fidelity_error) << " (P = "
          << num(r.report.population) << ", C = " << num(r.report.contrast) << "), exact " << num(r.exact_fidelity)
          << "\n";
  return kExitOk;
}

struct TfimArgs {
  std::string mode = "parallel";
  std::optional<double> coupling;
  std::optional<double> ratio;
  std::optional<double> field;
  std::optional<int> steps;
  std::optional<double> dt;
  std::optional<int> shots;
  bool noiseless = false;
  bool exact = false;
};

int cmd_tfim(Session& s, const TfimArgs& a) {
  Settings& cfg = s.settings();
  if (a.ratio && a.field) throw ValidationError("give either --ratio or --field");
  if (a.coupling) cfg.tfim.coupling = *a.coupling;
  if (a.ratio) cfg.tfim.set_field_ratio(*a.ratio);
  if (a.field) cfg.tfim.field = *a.field;
  if (a.steps) cfg.tfim.steps = *a.steps;
  if (a.dt) cfg.tfim.dt = *a.dt;
  cfg.tfim.validate();
  TfimMode mode;
  if (a.mode == "parallel") {
    mode = TfimMode::Parallel;
  } else if (a.mode == "sequential") {
    mode = TfimMode::Sequential;
  } else {
    throw ValidationError("unknown mode '" + a.mode + "'");
  }
  const NoiseModel noise = a.noiseless ? NoiseModel::noiseless() : cfg.effective_noise(cfg.tfim.spins);
  const MagnetizationTrace trace =
      tfim_trotter(cfg.tfim, mode, noise, RunOptions{a.shots.value_or(cfg.scan.run.shots), cfg.seed});
  s.emit_table("tfim_" + a.mode, trace_table(trace));
  if (a.exact) s.emit_table("tfim_exact", trace_table(exact_reference(cfg.tfim)));
  s.log() << a.mode << " trace: " << trace.times.size() << " points, J = " << num(cfg.tfim.coupling)
          << ", B = " << num(cfg.tfim.field) << ", final m = " << num(trace.magnetization.back()) << "\n";
  return kExitOk;
}

int cmd_compare(Session& s, std::optional<double> t2) {
  Settings& cfg = s.settings();
  if (t2) cfg.compare_t2 = *t2;
  if (!(cfg.compare_t2 > 0.0)) throw ValidationError("T2 must be positive");
  const RuntimeErrorReport r = runtime_error_comparison(cfg.tfim, NoiseModel::dephasing(cfg.tfim.spins, cfg.compare_t2));
  s.emit_table("compare", comparison_table(r));
  double lo = 0.0, hi = 0.0;
  int points = 0;
  for (std::size_t k = 0; k < r.times.size(); ++k) {
    if (std::abs(r.ideal[k]) < 0.5 * cfg.tfim.spins || r.parallel_error[k] <= 0.0) continue;
    lo = points ? std::min(lo, r.ratio[k]) : r.ratio[k];
    hi = points ? std::max(hi, r.ratio[k]) : r.ratio[k];
    ++points;
  }
  s.log() << "sequential/parallel error ratio at |m| >= " << num(0.5 * cfg.tfim.spins) << ": ";
  if (points) {
    s.log() << num(lo) << " .. " << num(hi) << " (" << points << " points)\n";
  } else {
    s.log() << "no points\n";
  }
  return kExitOk;
}

int cmd_replay(const std::string& manifest_path, const Globals& g, std::ostream& out, std::ostream& err) {
  const RunManifest m = RunManifest::from_json(read_json(manifest_path));
  for (const auto& [path, digest] : m.inputs) {
    if (file_sha256(path) != digest) throw ValidationError("input '" + path + "' differs from the manifest");
  }
  std::vector<std::string> args = m.arguments;
  args.push_back("--out");
  args.push_back(g.out);
  return run_cli(args, out, err);
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Pairwise-parallel trapped-ion gates: design, verification and circuit experiments", "ionpar"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--config", g.config, "JSON configuration file");
  app.add_option("--seed", g.seed, "RNG seed (overrides the config)");
  app.add_option("--out", g.out, "output directory");
  app.add_option("--format", g.format, "result table format")->check(CLI::IsMember({"json", "csv"}));

  std::function<int(Session&)> action;
  auto sub = [&](const char* name, const char* help) { return app.add_subcommand(name, help); };

  CLI::App* modes = sub("modes", "normal modes of every axis");
  modes->final_callback([&] { action = cmd_modes; });

  DesignArgs design_args;
  CLI::App* design = sub("design", "amplitude-modulated MS pulse for one qubit pair");
  design->add_option("--pair", design_args.pair, "qubit labels (1-based)")->expected(2);
  design->add_option("--axis", design_args.axis, "motional bus (X or Y)");
  design->add_option("--angle", design_args.angle, "target gate angle chi (rad)");
  design->add_option("--duration", design_args.duration, "gate duration (s)");
  design->add_option("--segments", design_args.segments, "segment count");
  design->add_option("--detuning-hz", design_args.detuning_hz, "beat-note detuning mu / 2pi (Hz)");
  design->add_option("--modes", design_args.modes, "retained top modes (0 keeps all)");
  design->add_option("--output", design_args.output, "output file stem");
  design->final_callback([&] { action = [&](Session& s) { return cmd_design(s, design_args); }; });

  std::vector<std::string> verify_files;
  CLI::App* verify = sub("verify", "cross-coupling residual and exact-vs-Magnus fidelity of an X/Y pulse pair");
  verify->add_option("pulses", verify_files, "two pulse files")->required()->expected(2);
  verify->final_callback([&] { action = [&](Session& s) { return cmd_verify(s, verify_files); }; });

  ScheduleArgs schedule_args;
  CLI::App* schedule = sub("schedule", "pack MS gates into parallel X/Y layers");
  schedule->add_option("circuit", schedule_args.circuit, "circuit text file")->required();
  schedule->add_option("--policy", schedule_args.policy, "greedy or exhaustive");
  schedule->add_flag("--strict", schedule_args.strict, "keep the input gate order");
  schedule->add_flag("--no-shared", schedule_args.no_shared, "forbid a shared qubit within a layer");
  schedule->add_flag("--power", schedule_args.power, "design pulses and report summed drive on shared qubits");
  schedule->final_callback([&] { action = [&](Session& s) { return cmd_schedule(s, schedule_args); }; });

  RunArgs run_args;
  CLI::App* runc = sub("run", "simulate a circuit file");
  runc->add_option("circuit", run_args.circuit, "circuit text file")->required();
  runc->add_option("--shots", run_args.shots, "shots (0 gives exact probabilities)");
  runc->add_flag("--noiseless", run_args.noiseless, "ignore the configured noise");
  runc->final_callback([&] { action = [&](Session& s) { return cmd_run(s, run_args); }; });

  GhzArgs ghz_args;
  CLI::App* ghz = sub("ghz", "one-step GHZ state with parallel gates sharing a qubit");
  ghz->add_flag("--noiseless", ghz_args.noiseless, "ignore the configured noise");
  ghz->add_option("--shots", ghz_args.shots, "shots per scan point");
  ghz->final_callback([&] { action = [&](Session& s) { return cmd_ghz(s, ghz_args); }; });

  TfimArgs tfim_args;
  CLI::App* tfim = sub("tfim", "Trotterized transverse-field Ising magnetization");
  tfim->add_option("--mode", tfim_args.mode, "parallel or sequential");
  tfim->add_option("--coupling", tfim_args.coupling, "coupling J");
  tfim->add_option("--ratio", tfim_args.ratio, "field to coupling ratio B/J");
  tfim->add_option("--field", tfim_args.field, "field B");
  tfim->add_option("--steps", tfim_args.steps, "Trotter steps");
  tfim->add_option("--dt", tfim_args.dt, "Trotter step");
  tfim->add_option("--shots", tfim_args.shots, "shots per time point");
  tfim->add_flag("--noiseless", tfim_args.noiseless, "ignore the configured noise");
  tfim->add_flag("--exact", tfim_args.exact, "also write the exact-diagonalization trace");
  tfim->final_callback([&] { action = [&](Session& s) { return cmd_tfim(s, tfim_args); }; });

  std::optional<double> compare_t2;
  CLI::App* compare = sub("compare", "dephasing error of parallel versus sequential Trotter circuits");
  compare->add_option("--t2", compare_t2, "dephasing time (s)");
  compare->final_callback([&] { action = [&](Session& s) { return cmd_compare(s, compare_t2); }; });

  std::string replay_manifest;
  bool replay = false;
  CLI::App* replayc = app.add_subcommand("replay", "re-run the command recorded in a manifest");
  replayc->add_option("manifest", replay_manifest, "manifest.json")->required();
  replayc->final_callback([&] { replay = true; });

  std::vector<const char*> argv{"ionpar"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kExitOk : kExitValidation;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    if (replay) return cmd_replay(replay_manifest, g, out, err);
    Session session(g, command, without_output_dir(args), out);
    const int code = action(session);
    session.finish();
    return code;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const NumericError& e) {
    err << "error: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitNumeric;
  }
}

}  // namespace ionpar
