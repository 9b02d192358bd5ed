#include "ionpar/experiments.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <string>

#include <Eigen/Eigenvalues>

namespace ionpar {

namespace {

constexpr std::uint32_t kPopulationStream = 0xffffu;

void check_qubit(int q, int n, const char* what) {
  if (q < 0 || q >= n) throw ValidationError(std::string(what) + " is outside the register");
}

// Pair or register populations, with a binomial error when sampled.
std::pair<double, double> population(const Circuit& prep, const std::vector<int>& qubits, const NoiseModel& noise,
                                     const RunOptions& options, std::uint32_t stream) {
  RunOptions o = options;
  if (o.shots > 0) o.seed = derive_seed(options.seed, stream);
  const RunResult r = run(prep, noise, o);
  const double p = extreme_population(r.probabilities, qubits, prep.qubit_count);
  const double err = o.shots > 0 ? std::sqrt(std::max(0.0, p * (1.0 - p)) / o.shots) : 0.0;
  return {p, err};
}

PairFidelity pair_fidelity(const Circuit& prep, std::pair<int, int> pair, const NoiseModel& noise,
                           const ScanSettings& settings, std::uint32_t stream) {
  const std::vector<int> qubits{pair.first, pair.second};
  RunOptions scan_options = settings.run;
  if (scan_options.shots > 0) scan_options.seed = derive_seed(settings.run.seed, stream);
  PairFidelity out;
  out.pair = pair;
  out.scan = parity_scan(prep, qubits, uniform_phases(settings.phase_points), noise, scan_options);
  const auto [p, perr] = population(prep, qubits, noise, scan_options, kPopulationStream);
  out.report = estimate_fidelity(p, out.scan, 2, perr);
  return out;
}

// Magnetization sum_i <Z_i> with its standard error over shots.
std::pair<double, double> magnetization(const VectorXd& probs, int n, const RunOptions& options) {
  auto m_of = [n](std::size_t x) { return n - 2.0 * std::popcount(static_cast<std::uint64_t>(x)); };
  if (options.shots <= 0) {
    double m = 0.0;
    for (Eigen::Index x = 0; x < probs.size(); ++x) m += probs(x) * m_of(static_cast<std::size_t>(x));
    return {m, 0.0};
  }
  const auto counts = sample_counts(probs, options.shots, options.seed);
  double sum = 0.0;
  double sum2 = 0.0;
  for (std::size_t x = 0; x < counts.size(); ++x) {
    const double m = m_of(x);
    sum += counts[x] * m;
    sum2 += counts[x] * m * m;
  }
  const double shots = options.shots;
  const double mean = sum / shots;
  const double var = shots > 1 ? std::max(0.0, (sum2 - shots * mean * mean) / (shots - 1)) : 0.0;
  return {mean, std::sqrt(var / shots)};
}

}  // namespace

double calibrate_depolarizing(double target_fidelity, const Timing& timing) {
  if (!(target_fidelity > 0.25 && target_fidelity <= 1.0)) {
    throw ValidationError("target fidelity must lie in (0.25, 1]");
  }
  Circuit bell(2);
  bell.timing = timing;
  bell.add({Operation::ms(0, 1, kPi / 4)});
  const auto phases = uniform_phases(16);
  auto estimate = [&](double p) {
    NoiseModel noise;
    noise.depolarizing = p;
    const auto scan = parity_scan(bell, {0, 1}, phases, noise);
    return estimate_fidelity(extreme_population(probabilities(bell, noise), {0, 1}, 2), scan, 2).fidelity;
  };
  if (target_fidelity >= estimate(0.0)) return 0.0;
  double lo = 0.0;
  double hi = 1.0;
  if (estimate(hi) > target_fidelity) throw DesignError("target fidelity is below the fully depolarized estimate");
  for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
    const double mid = 0.5 * (lo + hi);
    (estimate(mid) > target_fidelity ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

ParallelGateResult parallel_gate_experiment(int qubit_count, std::pair<int, int> x_pair, std::pair<int, int> y_pair,
                                            const NoiseModel& noise, const ScanSettings& settings) {
  for (int q : {x_pair.first, x_pair.second, y_pair.first, y_pair.second}) check_qubit(q, qubit_count, "gate qubit");
  if (x_pair.first == y_pair.first || x_pair.first == y_pair.second || x_pair.second == y_pair.first ||
      x_pair.second == y_pair.second) {
    throw ValidationError("parallel gate pairs must be disjoint");
  }
  Circuit prep(qubit_count);
  prep.add({Operation::ms(x_pair.first, x_pair.second, kPi / 4, Axis::X),
            Operation::ms(y_pair.first, y_pair.second, kPi / 4, Axis::Y)});
  prep.validate();
  noise.validate(qubit_count);

  ParallelGateResult out;
  out.gates[0] = pair_fidelity(prep, x_pair, noise, settings, 0);
  out.gates[1] = pair_fidelity(prep, y_pair, noise, settings, 1);
  int k = 0;
  for (int a : {x_pair.first, x_pair.second}) {
    for (int b : {y_pair.first, y_pair.second}) {
      out.cross[k] = pair_fidelity(prep, {a, b}, noise, settings, static_cast<std::uint32_t>(2 + k));
      ++k;
    }
  }
  return out;
}

Circuit ghz_circuit(int qubit_count, const GhzQubits& qubits, bool swap_buses) {
  for (int q : {qubits.outer_x, qubits.shared, qubits.outer_y}) check_qubit(q, qubit_count, "GHZ qubit");
  if (qubits.outer_x == qubits.shared || qubits.outer_y == qubits.shared || qubits.outer_x == qubits.outer_y) {
    throw ValidationError("GHZ qubits must be distinct");
  }
  const Axis first = swap_buses ? Axis::Y : Axis::X;
  const Axis second = swap_buses ? Axis::X : Axis::Y;
  Circuit c(qubit_count);
  c.add({Operation::ms(qubits.outer_x, qubits.shared, -kPi / 4, first),
         Operation::ms(qubits.outer_y, qubits.shared, -kPi / 4, second)});
  c.add({Operation::s(qubits.outer_x), Operation::s(qubits.outer_y)});
  c.add({Operation::h(qubits.outer_x), Operation::h(qubits.shared), Operation::h(qubits.outer_y)});
  return c;
}

GhzResult ghz_experiment(const NoiseModel& noise, const ScanSettings& settings, int qubit_count,
                         const GhzQubits& qubits) {
  noise.validate(qubit_count);
  GhzResult out;
  out.circuit = ghz_circuit(qubit_count, qubits);
  const std::vector<int> three{qubits.outer_x, qubits.shared, qubits.outer_y};

  const MatrixXcd rho = simulate_density(out.circuit, noise);
  const VectorXcd ideal = simulate_state(out.circuit);
  out.exact_fidelity = std::real(ideal.dot(rho * ideal));

  RunOptions pop_options = settings.run;
  if (pop_options.shots > 0) pop_options.seed = derive_seed(settings.run.seed, kPopulationStream);
  VectorXd probs = rho.diagonal().real();
  if (pop_options.shots > 0) {
    const auto counts = sample_counts(probs, pop_options.shots, pop_options.seed);
    for (std::size_t i = 0; i < counts.size(); ++i) {
      probs(static_cast<Eigen::Index>(i)) = static_cast<double>(counts[i]) / pop_options.shots;
    }
  }
  out.populations = VectorXd::Zero(8);
  for (Eigen::Index x = 0; x < probs.size(); ++x) {
    int idx = 0;
    for (int q : three) idx = (idx << 1) | static_cast<int>((x >> (qubit_count - 1 - q)) & 1);
    out.populations(idx) += probs(x);
  }
  const double p = out.populations(0) + out.populations(7);
  const double perr = pop_options.shots > 0 ? std::sqrt(std::max(0.0, p * (1.0 - p)) / pop_options.shots) : 0.0;

  RunOptions scan_options = settings.run;
  if (scan_options.shots > 0) scan_options.seed = derive_seed(settings.run.seed, 0);
  out.scan = parity_scan(out.circuit, three, uniform_phases(settings.phase_points), noise, scan_options);
  out.report = estimate_fidelity(p, out.scan, 3, perr);
  return out;
}

void TfimConfig::validate() const {
  if (spins < 2 || spins > 24) throw ValidationError("spin count must lie in [2, 24]");
  if (!std::isfinite(coupling) || !std::isfinite(field)) throw ValidationError("coupling and field must be finite");
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ValidationError("Trotter step must be positive");
  if (steps < 0) throw ValidationError("step count must be non-negative");
}

GateList tfim_bonds(const TfimConfig& config) {
  config.validate();
  GateList list;
  list.mode = DependencyMode::CommutingXX;
  const double chi = config.coupling * config.dt;
  for (int start : {0, 1}) {
    for (int i = start; i + 1 < config.spins; i += 2) list.gates.push_back({{i, i + 1}, chi});
  }
  return list;
}

Circuit tfim_step_circuit(const TfimConfig& config, TfimMode mode) {
  const GateList bonds = tfim_bonds(config);
  Circuit c = mode == TfimMode::Parallel ? schedule_gates(bonds).to_circuit(config.spins)
                                         : sequential_circuit(bonds, config.spins);
  std::vector<Operation> rotations;
  for (int q = 0; q < config.spins; ++q) rotations.push_back(Operation::rz(q, -2.0 * config.field * config.dt));
  c.add(rotations);
  c.timing = config.timing;
  return c;
}

MagnetizationTrace tfim_trotter(const TfimConfig& config, TfimMode mode, const NoiseModel& noise,
                                const RunOptions& options) {
  const Circuit step = tfim_step_circuit(config, mode);
  noise.validate(config.spins);
  const int n = config.spins;
  const bool dense = !noise.is_noiseless();
  if (dense && n > 10) throw ValidationError("noisy simulation is limited to 10 qubits");
  const Eigen::Index dim = Eigen::Index{1} << n;

  MagnetizationTrace out;
  VectorXcd psi;
  MatrixXcd rho;
  if (dense) {
    rho = MatrixXcd::Zero(dim, dim);
    rho(0, 0) = 1.0;
  } else {
    psi = VectorXcd::Zero(dim);
    psi(0) = 1.0;
  }
  for (int k = 0; k <= config.steps; ++k) {
    if (k > 0) {
      if (dense) {
        evolve_density(rho, step, noise);
      } else {
        evolve_state(psi, step);
      }
    }
    const VectorXd probs = dense ? VectorXd(rho.diagonal().real()) : VectorXd(psi.cwiseAbs2());
    RunOptions o = options;
    if (o.shots > 0) o.seed = derive_seed(options.seed, static_cast<std::uint32_t>(k));
    const auto [m, err] = magnetization(probs, n, o);
    out.times.push_back(k * config.dt);
    out.magnetization.push_back(m);
    out.error.push_back(err);
  }
  return out;
}

MagnetizationTrace exact_reference(const TfimConfig& config) {
  config.validate();
  const int n = config.spins;
  if (n > 12) throw ValidationError("exact reference is limited to 12 spins");
  const Eigen::Index dim = Eigen::Index{1} << n;
  auto bit = [n](Eigen::Index x, int q) { return (x >> (n - 1 - q)) & 1; };
  MatrixXd h = MatrixXd::Zero(dim, dim);
  for (Eigen::Index x = 0; x < dim; ++x) {
    for (int q = 0; q < n; ++q) h(x, x) -= config.field * (bit(x, q) ? -1.0 : 1.0);
    for (int q = 0; q + 1 < n; ++q) {
      const Eigen::Index y = x ^ (Eigen::Index{1} << (n - 1 - q)) ^ (Eigen::Index{1} << (n - 2 - q));
      h(y, x) -= config.coupling;
    }
  }
  const Eigen::SelfAdjointEigenSolver<MatrixXd> eig(h);
  const VectorXd zsum = [&] {
    VectorXd z(dim);
    for (Eigen::Index x = 0; x < dim; ++x) z(x) = n - 2.0 * std::popcount(static_cast<std::uint64_t>(x));
    return z;
  }();
  // |0...0> in the eigenbasis is the first row of V.
  const VectorXcd c0 = eig.eigenvectors().row(0).transpose().cast<std::complex<double>>();
  MagnetizationTrace out;
  for (int k = 0; k <= config.steps; ++k) {
    const double t = k * config.dt;
    VectorXcd ct(dim);
    for (Eigen::Index j = 0; j < dim; ++j) ct(j) = c0(j) * std::polar(1.0, -eig.eigenvalues()(j) * t);
    const VectorXcd psi = eig.eigenvectors().cast<std::complex<double>>() * ct;
    out.times.push_back(t);
    out.magnetization.push_back(psi.cwiseAbs2().dot(zsum));
    out.error.push_back(0.0);
  }
  return out;
}

RuntimeErrorReport runtime_error_comparison(const TfimConfig& config, const NoiseModel& noise) {
  const MagnetizationTrace ideal = tfim_trotter(config, TfimMode::Parallel, NoiseModel::noiseless());
  const MagnetizationTrace par = tfim_trotter(config, TfimMode::Parallel, noise);
  const MagnetizationTrace seq = tfim_trotter(config, TfimMode::Sequential, noise);
  RuntimeErrorReport out;
  out.times = ideal.times;
  out.ideal = ideal.magnetization;
  for (std::size_t k = 0; k < out.times.size(); ++k) {
    const double ep = std::abs(par.magnetization[k] - ideal.magnetization[k]);
    const double es = std::abs(seq.magnetization[k] - ideal.magnetization[k]);
    out.parallel_error.push_back(ep);
    out.sequential_error.push_back(es);
    out.ratio.push_back(ep > 0.0 ? es / ep : 0.0);
  }
  return out;
}

}  // namespace ionpar
