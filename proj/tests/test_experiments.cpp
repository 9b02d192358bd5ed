#include <cmath>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "ionpar/experiments.hpp"

using namespace ionpar;

namespace {

const Complex kI(0, 1);

double overlap(const VectorXcd& a, const VectorXcd& b) { return std::abs(a.dot(b)); }

// Dense H = -J sum X_i X_{i+1} - B sum Z_i from embedded Paulis.
MatrixXcd tfim_hamiltonian(int n, double j, double b) {
  const Eigen::Index dim = Eigen::Index{1} << n;
  MatrixXcd h = MatrixXcd::Zero(dim, dim);
  for (int q = 0; q + 1 < n; ++q) h -= j * embed(pauli::x(), q, n) * embed(pauli::x(), q + 1, n);
  for (int q = 0; q < n; ++q) h -= b * embed(pauli::z(), q, n);
  return h;
}

double z_sum(const VectorXcd& psi, int n) {
  double m = 0;
  for (int q = 0; q < n; ++q) m += std::real(psi.dot(embed(pauli::z(), q, n) * psi));
  return m;
}

double max_deviation(const MagnetizationTrace& a, const MagnetizationTrace& b) {
  double d = 0;
  for (std::size_t k = 0; k < a.magnetization.size(); ++k) d = std::max(d, std::abs(a.magnetization[k] - b.magnetization[k]));
  return d;
}

}  // namespace

TEST(Calibration, BellDepolarizingMatchesClosedForm) {
  for (double f : {0.999, 0.99, 0.95, 0.8}) {
    EXPECT_NEAR(calibrate_depolarizing(f), 4 * (1 - f) / 3, 1e-12) << f;
  }
  EXPECT_EQ(calibrate_depolarizing(1.0), 0.0);
  EXPECT_THROW(calibrate_depolarizing(0.2), ValidationError);
}

TEST(ParallelGates, NoiselessGatesPerfectAndCrossPairsFlat) {
  const auto r = parallel_gate_experiment(5, {2, 4}, {1, 3}, NoiseModel::noiseless());
  for (const auto& g : r.gates) EXPECT_NEAR(g.report.fidelity, 1.0, 1e-12);
  for (const auto& c : r.cross) {
    EXPECT_LT(c.report.contrast, 1e-6);
    for (const auto& p : c.scan) EXPECT_LT(std::abs(p.parity), 1e-12);
  }
  EXPECT_EQ(r.cross[0].pair, (std::pair{2, 1}));
  EXPECT_EQ(r.cross[3].pair, (std::pair{4, 3}));
  EXPECT_THROW(parallel_gate_experiment(5, {2, 4}, {4, 3}, NoiseModel::noiseless()), ValidationError);
}

TEST(ParallelGates, CalibratedNoiseGivesTargetPerGate) {
  NoiseModel noise;
  noise.depolarizing = calibrate_depolarizing(0.99);
  const auto r = parallel_gate_experiment(5, {2, 4}, {1, 3}, noise);
  for (const auto& g : r.gates) EXPECT_NEAR(g.report.fidelity, 0.99, 1e-10);
  for (const auto& c : r.cross) EXPECT_LT(c.report.contrast, 1e-6);
}

TEST(Ghz, CircuitMatchesBruteForceComposition) {
  const GhzQubits q;
  const Circuit c = ghz_circuit(5, q);
  MatrixXcd u = oracle::xx_unitary(5, {{{q.outer_x, q.shared}, -kPi / 4}, {{q.outer_y, q.shared}, -kPi / 4}});
  const MatrixXcd s = (-kI * 0.25 * kPi * MatrixXcd(pauli::z())).exp();
  const MatrixXcd h = (MatrixXcd(pauli::x()) + MatrixXcd(pauli::z())) / std::sqrt(2.0);
  u = embed(s, q.outer_x, 5) * embed(s, q.outer_y, 5) * u;
  u = embed(h, q.outer_x, 5) * embed(h, q.shared, 5) * embed(h, q.outer_y, 5) * u;
  VectorXcd zero = VectorXcd::Zero(32);
  zero(0) = 1;
  VectorXcd ghz = VectorXcd::Zero(32);
  ghz(0) = 1 / std::sqrt(2.0);
  ghz((1 << (4 - q.outer_x)) | (1 << (4 - q.shared)) | (1 << (4 - q.outer_y))) = 1 / std::sqrt(2.0);
  EXPECT_NEAR(overlap(u * zero, ghz), 1.0, 1e-14);
  EXPECT_NEAR(overlap(simulate_state(c), ghz), 1.0, 1e-14);
}

TEST(Ghz, NoiselessFidelityIsOne) {
  const auto r = ghz_experiment(NoiseModel::noiseless());
  EXPECT_NEAR(r.report.fidelity, 1.0, 1e-10);
  EXPECT_NEAR(r.report.contrast, 1.0, 1e-10);
  EXPECT_NEAR(r.exact_fidelity, 1.0, 1e-12);
  EXPECT_NEAR(r.populations(0), 0.5, 1e-12);
  EXPECT_NEAR(r.populations(7), 0.5, 1e-12);
  // period 2 pi / 3: the scan is exactly cos(3 phi + phase)
  for (const auto& p : r.scan) EXPECT_NEAR(p.parity, std::cos(3 * p.phase + r.report.phase), 1e-12);
  // parity extremum at the fitted phase
  const double phi_star = -r.report.phase / 3;
  const auto at = parity_scan(r.circuit, {2, 4, 1}, {phi_star}, NoiseModel::noiseless());
  EXPECT_NEAR(std::abs(at[0].parity), 1.0, 1e-12);
}

TEST(Ghz, BusSwapLeavesStateUnchanged) {
  for (const GhzQubits q : {GhzQubits{}, GhzQubits{0, 1, 2}, GhzQubits{4, 0, 3}}) {
    const VectorXcd a = simulate_state(ghz_circuit(5, q, false));
    const VectorXcd b = simulate_state(ghz_circuit(5, q, true));
    EXPECT_NEAR(overlap(a, b), 1.0, 1e-14);
  }
}

TEST(Ghz, CalibratedNoiseRecoveredByEstimator) {
  NoiseModel noise;
  noise.depolarizing = calibrate_depolarizing(0.99);
  const auto exact = ghz_experiment(noise);
  EXPECT_NEAR(exact.report.fidelity, exact.exact_fidelity, 1e-10);
  EXPECT_LT(exact.exact_fidelity, 0.99);
  int within = 0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    ScanSettings s;
    s.run = {2000, seed};
    const auto r = ghz_experiment(noise, s);
    EXPECT_GT(r.report.fidelity_error, 0.0);
    if (std::abs(r.report.fidelity - exact.exact_fidelity) <= 2 * r.report.fidelity_error) ++within;
  }
  EXPECT_GE(within, 17);
}

TEST(Ghz, SampledRunIsReproducible) {
  ScanSettings s;
  s.run = {500, 99};
  const auto a = ghz_experiment(NoiseModel::dephasing(5, 1e-3), s);
  const auto b = ghz_experiment(NoiseModel::dephasing(5, 1e-3), s);
  EXPECT_EQ(a.populations, b.populations);
  ASSERT_EQ(a.scan.size(), b.scan.size());
  for (std::size_t i = 0; i < a.scan.size(); ++i) EXPECT_EQ(a.scan[i].parity, b.scan[i].parity);
  EXPECT_EQ(a.report.fidelity, b.report.fidelity);
}

TEST(Tfim, BondsAndStepCircuits) {
  const TfimConfig c;
  const GateList bonds = tfim_bonds(c);
  ASSERT_EQ(bonds.gates.size(), 4u);
  EXPECT_EQ(bonds.gates[0].pair, (std::pair{0, 1}));
  EXPECT_EQ(bonds.gates[1].pair, (std::pair{2, 3}));
  EXPECT_EQ(bonds.gates[2].pair, (std::pair{1, 2}));
  EXPECT_EQ(bonds.gates[3].pair, (std::pair{3, 4}));
  const Circuit par = tfim_step_circuit(c, TfimMode::Parallel);
  const Circuit seq = tfim_step_circuit(c, TfimMode::Sequential);
  EXPECT_EQ(par.moments.size(), 3u);
  EXPECT_EQ(seq.moments.size(), 5u);
  EXPECT_DOUBLE_EQ(seq.total_duration(), 2 * par.total_duration());
  EXPECT_EQ(par.moment_duration(2), 0.0);
}

TEST(Tfim, NoDynamicsWithoutCouplingOrField) {
  TfimConfig c;
  c.coupling = 0.0;
  c.field = 0.0;
  for (double m : tfim_trotter(c, TfimMode::Parallel, NoiseModel::noiseless()).magnetization) EXPECT_NEAR(m, 5.0, 1e-12);
  c.field = 0.7;
  for (double m : tfim_trotter(c, TfimMode::Sequential, NoiseModel::noiseless()).magnetization) EXPECT_NEAR(m, 5.0, 1e-12);
  for (double m : exact_reference(c).magnetization) EXPECT_NEAR(m, 5.0, 1e-12);
}

TEST(Tfim, ParallelEqualsSequentialNoiseless) {
  TfimConfig c;
  for (double ratio : {0.0, 0.096, 1.3}) {
    c.set_field_ratio(ratio);
    const auto par = tfim_trotter(c, TfimMode::Parallel, NoiseModel::noiseless());
    const auto seq = tfim_trotter(c, TfimMode::Sequential, NoiseModel::noiseless());
    EXPECT_LT(max_deviation(par, seq), 1e-12);
    EXPECT_EQ(par.magnetization.front(), 5.0);
    for (double m : par.magnetization) EXPECT_LE(std::abs(m), 5.0 + 1e-12);
  }
}

TEST(Tfim, ExactReferenceMatchesMatrixExponential) {
  TfimConfig c;
  c.steps = 8;
  c.coupling = 1.3;
  c.field = 0.4;
  const auto trace = exact_reference(c);
  const MatrixXcd h = tfim_hamiltonian(5, c.coupling, c.field);
  VectorXcd zero = VectorXcd::Zero(32);
  zero(0) = 1;
  for (int k = 0; k <= c.steps; ++k) {
    const VectorXcd psi = (-kI * h * (k * c.dt)).exp() * zero;
    EXPECT_NEAR(trace.magnetization[k], z_sum(psi, 5), 1e-10) << k;
    EXPECT_DOUBLE_EQ(trace.times[k], k * c.dt);
  }
  c.spins = 13;
  EXPECT_THROW(exact_reference(c), ValidationError);
}

TEST(Tfim, TrotterConvergesToExact) {
  TfimConfig c;
  double previous = 0;
  for (int div : {1, 2, 4, 8}) {
    TfimConfig f = c;
    f.dt = c.dt / div;
    f.steps = c.steps * div;
    const double err = max_deviation(tfim_trotter(f, TfimMode::Parallel, NoiseModel::noiseless()), exact_reference(f));
    if (div > 1) EXPECT_LE(err, 0.6 * previous) << div;
    previous = err;
  }
  EXPECT_LT(previous, 1e-3);
}

TEST(Tfim, SampledTraceWithinErrorBars) {
  TfimConfig c;
  const auto exact = tfim_trotter(c, TfimMode::Parallel, NoiseModel::noiseless());
  const auto sampled = tfim_trotter(c, TfimMode::Parallel, NoiseModel::noiseless(), {4000, 5});
  int outside = 0;
  for (std::size_t k = 1; k < exact.magnetization.size(); ++k) {
    if (std::abs(sampled.magnetization[k] - exact.magnetization[k]) > 3 * sampled.error[k]) ++outside;
  }
  EXPECT_LE(outside, 1);
  const auto again = tfim_trotter(c, TfimMode::Parallel, NoiseModel::noiseless(), {4000, 5});
  EXPECT_EQ(again.magnetization, sampled.magnetization);
}

TEST(Runtime, NoDephasingMeansNoError) {
  const auto r = runtime_error_comparison(TfimConfig{}, NoiseModel::noiseless());
  for (std::size_t k = 0; k < r.times.size(); ++k) {
    EXPECT_EQ(r.parallel_error[k], 0.0);
    EXPECT_EQ(r.sequential_error[k], 0.0);
  }
}

TEST(Runtime, SequentialErrorNearlyDoubleAtHighMagnetization) {
  const auto r = runtime_error_comparison(TfimConfig{}, NoiseModel::dephasing(5, 0.1));
  int points = 0;
  for (std::size_t k = 1; k < r.times.size(); ++k) {
    // the first step leaves no dephasing signature in Z, so both errors vanish there
    if (r.parallel_error[k] == 0.0) {
      EXPECT_EQ(r.sequential_error[k], 0.0);
      continue;
    }
    if (std::abs(r.ideal[k]) < 2.5 || r.sequential_error[k] >= 0.5) continue;
    EXPECT_GE(r.ratio[k], 1.6) << k;
    EXPECT_LE(r.ratio[k], 2.1) << k;
    ++points;
  }
  EXPECT_GE(points, 4);
}

TEST(Runtime, DoublingDurationsDoublesSmallErrors) {
  TfimConfig c;
  c.steps = 6;
  const NoiseModel noise = NoiseModel::dephasing(5, 20.0);
  TfimConfig slow = c;
  slow.timing.ms_gate *= 2;
  slow.timing.single_qubit *= 2;
  const auto a = runtime_error_comparison(c, noise);
  const auto b = runtime_error_comparison(slow, noise);
  for (std::size_t k = 2; k < a.times.size(); ++k) {
    ASSERT_GT(a.parallel_error[k], 0.0);
    EXPECT_NEAR(b.parallel_error[k] / a.parallel_error[k], 2.0, 0.01) << k;
    EXPECT_NEAR(b.sequential_error[k] / a.sequential_error[k], 2.0, 0.01) << k;
  }
}

TEST(Tfim, RejectsBadConfig) {
  TfimConfig c;
  c.spins = 1;
  EXPECT_THROW(c.validate(), ValidationError);
  c = {};
  c.dt = 0;
  EXPECT_THROW(c.validate(), ValidationError);
  c = {};
  c.steps = -1;
  EXPECT_THROW(c.validate(), ValidationError);
  EXPECT_THROW(tfim_trotter(TfimConfig{.spins = 11}, TfimMode::Parallel, NoiseModel::dephasing(11, 1.0)),
               ValidationError);
}
