#pragma once

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ionpar/core.hpp"

namespace ionpar {

enum class GateKind : std::uint8_t { MS, RX, RY, RZ, R, H, S };

/// One gate. Qubit indices are 0-based.
/// MS(p, q, chi) = exp(i chi X_p X_q); RX/RY/RZ(theta) = exp(-i theta sigma / 2);
/// R(theta, phi) rotates by theta about (cos phi, sin phi, 0); S = exp(-i Z pi / 4).
struct Operation {
  GateKind kind = GateKind::RZ;
  int qubit = 0;
  int partner = -1;  // second qubit of an MS gate
  double angle = 0.0;
  double phase = 0.0;
  Axis axis = Axis::X;  // motional bus of an MS gate

  static Operation ms(int p, int q, double chi, Axis axis = Axis::X);
  static Operation rx(int qubit, double theta);
  static Operation ry(int qubit, double theta);
  static Operation rz(int qubit, double theta);
  static Operation r(int qubit, double theta, double phi);
  static Operation h(int qubit);
  static Operation s(int qubit);

  bool is_ms() const { return kind == GateKind::MS; }
  bool touches(int q) const { return qubit == q || partner == q; }
  /// 2x2 matrix of a single-qubit gate.
  Eigen::Matrix2cd matrix() const;
};

/// Wall-time defaults for moments without an explicit duration.
struct Timing {
  double ms_gate = 200e-6;
  double single_qubit = 10e-6;
};

struct Moment {
  std::vector<Operation> ops;
  double duration = -1.0;  // negative selects the Timing default
};

struct Circuit {
  int qubit_count = 0;
  std::vector<Moment> moments;
  Timing timing;

  explicit Circuit(int qubits = 0) : qubit_count(qubits) {}

  Circuit& add(std::vector<Operation> ops, double duration = -1.0);
  Circuit& append(const Circuit& other);
  /// Moment wall time: explicit, else MS gate time if it holds an MS, else the single-qubit
  /// time unless every gate is an RZ (instantaneous).
  double moment_duration(std::size_t index) const;
  double total_duration() const;
  int ms_count() const;
  /// Throws ValidationError when an operation is malformed or a moment violates the
  /// one-MS-per-axis and no-overlap rules.
  void validate() const;
};

/// Per-qubit pure dephasing (coherences decay as e^{-t/T2}) and a two-qubit depolarizing
/// probability applied after every MS gate.
struct NoiseModel {
  std::vector<double> t2;  // per qubit, s; empty means no dephasing
  double depolarizing = 0.0;

  static NoiseModel noiseless() { return {}; }
  static NoiseModel dephasing(int qubits, double t2);
  double t2_of(int qubit) const;
  bool is_noiseless() const;
  void validate(int qubits) const;
};

/// Pure-state evolution of a circuit from |0...0> (noise ignored).
VectorXcd simulate_state(const Circuit& circuit);

/// Density-matrix evolution from |0...0>.
MatrixXcd simulate_density(const Circuit& circuit, const NoiseModel& noise);

/// In-place versions acting on an existing state of matching size.
void evolve_state(VectorXcd& state, const Circuit& circuit);
void evolve_density(MatrixXcd& rho, const Circuit& circuit, const NoiseModel& noise);

/// Computational-basis probabilities; qubit 0 is the most significant bit.
VectorXd probabilities(const Circuit& circuit, const NoiseModel& noise);

struct RunOptions {
  int shots = 0;  // 0 returns exact probabilities
  std::uint64_t seed = 0;
};

struct RunResult {
  VectorXd probabilities;            // exact, or empirical frequencies when sampled
  std::vector<std::uint64_t> counts; // empty for exact runs
  int shots = 0;
};

RunResult run(const Circuit& circuit, const NoiseModel& noise, const RunOptions& options = {});

/// Independent seed for sub-run `stream` of a run seeded with `seed`.
std::uint64_t derive_seed(std::uint64_t seed, std::uint32_t stream);

/// Born-rule sampling with a seeded 64-bit Mersenne twister.
std::vector<std::uint64_t> sample_counts(const VectorXd& probabilities, int shots, std::uint64_t seed);

/// Expectation of prod Z over `qubits`.
double parity(const VectorXd& probabilities, const std::vector<int>& qubits, int qubit_count);

/// Probability that all `qubits` read 0 plus the probability that all read 1.
double extreme_population(const VectorXd& probabilities, const std::vector<int>& qubits, int qubit_count);

struct ParityPoint {
  double phase = 0.0;
  double parity = 0.0;
  double error = 0.0;  // standard error; 0 in exact mode
};

/// Appends R(pi/2, phi) on every listed qubit to `prep` and records <prod Z> for each phi.
/// Point i of a sampled scan uses a seed derived from (seed, i).
std::vector<ParityPoint> parity_scan(const Circuit& prep, const std::vector<int>& qubits,
                                     const std::vector<double>& phases, const NoiseModel& noise,
                                     const RunOptions& options = {});

/// `count` equally spaced phases covering [0, 2 pi).
std::vector<double> uniform_phases(int count);

struct FidelityReport {
  double population = 0.0;        // P(0...0) + P(1...1)
  double population_error = 0.0;
  double contrast = 0.0;
  double contrast_error = 0.0;
  double offset = 0.0;            // fitted constant term
  double phase = 0.0;             // phase of the fitted cosine
  double fidelity = 0.0;          // (population + contrast) / 2
  double fidelity_error = 0.0;
  Eigen::Matrix3d covariance = Eigen::Matrix3d::Zero();  // (offset, cos, sin) coefficients
};

/// Least-squares fit of c + a cos(n phi) + b sin(n phi) at the known frequency n = qubit count.
/// A contrast below its own standard error is reported as 0.
FidelityReport estimate_fidelity(double population, const std::vector<ParityPoint>& scan, int qubits,
                                 double population_error = 0.0);

/// Text form: one moment per line, operations separated by '|', 1-based qubit labels,
/// e.g. "MS 3 5 0.785398 X | MS 2 4 0.785398 Y". "DELAY t" sets the moment duration,
/// "QUBITS n" fixes the register size and '#' starts a comment.
Circuit parse_circuit(std::istream& in);
Circuit parse_circuit_text(const std::string& text);
void write_circuit(std::ostream& out, const Circuit& circuit);
std::string to_text(const Circuit& circuit);

}  // namespace ionpar
