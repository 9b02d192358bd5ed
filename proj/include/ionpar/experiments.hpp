#pragma once

#include <array>
#include <utility>
#include <vector>

#include "ionpar/circuit.hpp"
#include "ionpar/scheduler.hpp"

namespace ionpar {

/// Shot and phase settings shared by the scan-based experiments.
struct ScanSettings {
  int phase_points = 24;
  RunOptions run;  // shots = 0 gives exact parity values
};

/// Two-qubit depolarizing probability after each MS that makes a single MS(pi/4) Bell state
/// estimate to `target_fidelity` (bisection on the estimator in exact mode).
double calibrate_depolarizing(double target_fidelity, const Timing& timing = {});

struct PairFidelity {
  std::pair<int, int> pair;
  FidelityReport report;
  std::vector<ParityPoint> scan;
};

struct ParallelGateResult {
  std::array<PairFidelity, 2> gates;   // the X pair, then the Y pair
  std::array<PairFidelity, 4> cross;   // one qubit from each gate
};

/// Parallel MS(pi/4) on `x_pair` and `y_pair` (0-based, disjoint), fidelity of each gate from
/// its pair populations and parity scan, and the parity contrast of the four cross pairs.
ParallelGateResult parallel_gate_experiment(int qubit_count, std::pair<int, int> x_pair,
                                            std::pair<int, int> y_pair, const NoiseModel& noise,
                                            const ScanSettings& settings = {});

/// Qubits of the three-qubit GHZ experiment: `shared` is driven by both gates.
struct GhzQubits {
  int outer_x = 2;  // qubit 3
  int shared = 4;   // qubit 5
  int outer_y = 1;  // qubit 2
};

/// One parallel moment MS(outer_x, shared) on X and MS(outer_y, shared) on Y, then S on the outer
/// qubits and H on all three. The MS angle is -pi/4, which with S = exp(-i Z pi/4) yields
/// (|000> + |111>)/sqrt(2) up to a global phase.
Circuit ghz_circuit(int qubit_count = 5, const GhzQubits& qubits = {}, bool swap_buses = false);

struct GhzResult {
  Circuit circuit;
  VectorXd populations;  // 8 entries over (outer_x, shared, outer_y), first qubit most significant
  std::vector<ParityPoint> scan;
  FidelityReport report;
  double exact_fidelity = 0.0;  // <GHZ|rho|GHZ> of the simulated state
};

GhzResult ghz_experiment(const NoiseModel& noise, const ScanSettings& settings = {}, int qubit_count = 5,
                         const GhzQubits& qubits = {});

struct TfimConfig {
  int spins = 5;
  double coupling = 1.0;  // J
  double field = 0.096;   // B
  double dt = kPi / 10;   // Trotter step, same time unit as 1/J
  int steps = 20;
  Timing timing;          // wall time of the circuit moments

  /// B = ratio * J.
  void set_field_ratio(double ratio) { field = ratio * coupling; }
  void validate() const;
};

enum class TfimMode { Parallel, Sequential };

struct MagnetizationTrace {
  std::vector<double> times;  // multiples of dt
  std::vector<double> magnetization;
  std::vector<double> error;  // standard error when sampled
};

/// Nearest-neighbour bonds of the open chain, in the order (1,2),(3,4),...,(2,3),(4,5),...
GateList tfim_bonds(const TfimConfig& config);

/// One Trotter step: the XX bonds (two layers in parallel mode, one per moment otherwise) followed by
/// an instantaneous RZ moment.
Circuit tfim_step_circuit(const TfimConfig& config, TfimMode mode);

/// m(t) = sum_i <Z_i> after 0..steps Trotter steps from |0...0>. Sampled runs use a seed derived
/// from (seed, step).
MagnetizationTrace tfim_trotter(const TfimConfig& config, TfimMode mode, const NoiseModel& noise,
                                const RunOptions& options = {});

/// Dense propagation of H = -J sum X_i X_{i+1} - B sum Z_i at the Trotter times.
MagnetizationTrace exact_reference(const TfimConfig& config);

struct RuntimeErrorReport {
  std::vector<double> times;
  std::vector<double> ideal;            // noiseless m(t)
  std::vector<double> parallel_error;   // |m_noisy - m_ideal|
  std::vector<double> sequential_error;
  std::vector<double> ratio;            // sequential / parallel (0 where parallel error is 0)
};

RuntimeErrorReport runtime_error_comparison(const TfimConfig& config, const NoiseModel& noise);

}  // namespace ionpar
