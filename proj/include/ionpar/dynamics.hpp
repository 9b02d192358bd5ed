#pragma once

#include <vector>

#include "ionpar/chain.hpp"
#include "ionpar/pulse.hpp"

namespace ionpar {

/// One truncated motional mode carried by a SpinMotionState.
struct MotionalMode {
  Axis axis = Axis::X;
  int mode = 0;      // column of the ModeSet passed to the evolution
  int cutoff = 12;   // highest retained Fock level
};

/// Pure state on (driven qubits) x (truncated Fock spaces).
/// Index = spin * motional_dim + motional index; qubit 0 is the most significant spin bit
/// and mode 0 the most significant motional digit.
struct SpinMotionState {
  std::vector<int> ions;  // chain index of each local qubit
  std::vector<MotionalMode> modes;
  VectorXcd amplitudes;

  int qubit_count() const { return static_cast<int>(ions.size()); }
  Eigen::Index spin_dim() const { return Eigen::Index{1} << ions.size(); }
  Eigen::Index motional_dim() const;
  /// Slot of (axis, mode) in `modes`, or -1.
  int find_mode(Axis axis, int mode) const;
  /// Local qubit of a chain ion, or -1.
  int find_ion(int ion) const;

  /// spin (x) |n_0, n_1, ...>.
  static SpinMotionState product(std::vector<int> ions, std::vector<MotionalMode> modes,
                                 const VectorXcd& spin, const std::vector<int>& fock = {});
};

/// Every mode of each ModeSet with a common cutoff, spins |0...0>, motion in the ground state.
SpinMotionState ground_state(const std::vector<int>& ions, const std::vector<const ModeSet*>& mode_sets,
                             int cutoff);

/// Reduced spin density matrix (computational basis).
MatrixXcd reduced_spin_density(const SpinMotionState& state);

/// Von Neumann entropy of the spin reduction.
double spin_motion_entropy(const SpinMotionState& state);

/// <psi| rho_spin |psi>.
double spin_fidelity(const SpinMotionState& state, const VectorXcd& ideal_spin);

/// Population of the top Fock level of each mode slot.
std::vector<double> top_level_populations(const SpinMotionState& state);

struct EvolveOptions {
  double dt_max = 10e-6;        // s
  double leakage_bound = 1e-6;  // top-level population per mode
  bool check_convergence = false;
  double convergence_tolerance = 1e-9;  // 1 - |<psi_dt|psi_dt/2>|^2
};

/// Evolution under H_x(t) + H_y(t) (interaction picture, Lamb-Dicke linear coupling) as a
/// time-ordered product of per-step Magnus exponentials. Both Magnus terms of every step are
/// integrated in closed form; the first is exponentiated in the truncated Fock space.
SpinMotionState evolve_exact(const std::vector<PulseSchedule>& schedules, const ModeSet& modes_x,
                             const ModeSet& modes_y, const SpinMotionState& state,
                             const EvolveOptions& options = {});

struct DisplacementResidual {
  int ion = 0;
  Axis axis = Axis::X;
  int mode = 0;  // chain mode index
  Complex alpha;
};

struct PropagatorReport {
  std::vector<int> ions;       // qubit order of the unitary
  std::vector<double> angles;  // chi per schedule
  std::vector<DisplacementResidual> residuals;
  double max_residual = 0.0;
  bool closed = false;         // every |alpha| below the tolerance
  MatrixXcd unitary;           // exp(i sum chi X_p X_q); empty when not closed
  double entanglement_entropy = 0.0;  // from |0...0> and motional vacuum
};

/// Second-order Magnus propagator, exact for the linear spin-motion coupling.
PropagatorReport magnus_propagator(const std::vector<PulseSchedule>& schedules,
                                   const ModeSet& modes_x, const ModeSet& modes_y,
                                   double residual_tolerance = 1e-6);

/// Spin reduction of the Magnus propagator applied to spin (x) vacuum, for an arbitrary
/// initial spin state on `ions`.
MatrixXcd magnus_spin_density(const std::vector<PulseSchedule>& schedules, const ModeSet& modes_x,
                              const ModeSet& modes_y, const std::vector<int>& ions,
                              const VectorXcd& initial_spin);

/// exp(i sum_s chi_s X_p X_q) on the given qubit ordering.
MatrixXcd ideal_parallel_unitary(const std::vector<int>& ions,
                                 const std::vector<std::pair<std::pair<int, int>, double>>& gates);

/// || psi_parallel - U_y U_x psi || for the given initial state.
double cross_coupling_residual(const PulseSchedule& schedule_x, const PulseSchedule& schedule_y,
                               const ModeSet& modes_x, const ModeSet& modes_y,
                               const SpinMotionState& initial, const EvolveOptions& options = {});

/// Same, starting from |0...0> (x) vacuum on the union of both pairs.
double cross_coupling_residual(const PulseSchedule& schedule_x, const PulseSchedule& schedule_y,
                               const ModeSet& modes_x, const ModeSet& modes_y, int cutoff = 12,
                               const EvolveOptions& options = {});

/// Boltzmann occupation probabilities truncated at `cutoff` and renormalised.
std::vector<double> thermal_weights(double nbar, int cutoff);

struct ThermalFidelity {
  double fidelity = 0.0;  // weighted spin-reduced fidelity
  int branches = 0;
  double discarded_weight = 0.0;
};

/// Spin-reduced fidelity of exact evolution against `ideal_spin` for a thermal motional start,
/// realised as weighted runs over Fock-product initial states with weight above `min_weight`.
/// The leakage bound applies to the weighted mixture.
ThermalFidelity thermal_spin_fidelity(const std::vector<PulseSchedule>& schedules,
                                      const ModeSet& modes_x, const ModeSet& modes_y,
                                      const std::vector<int>& ions, const VectorXcd& initial_spin,
                                      const VectorXcd& ideal_spin, double nbar, int cutoff,
                                      const EvolveOptions& options = {},
                                      double min_weight = 1e-8);

}  // namespace ionpar
