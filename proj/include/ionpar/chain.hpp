#pragma once

#include <vector>

#include "ionpar/core.hpp"

namespace ionpar {

/// Linear Paul trap holding a chain of identical ions. Frequencies are angular (rad/s).
struct TrapConfig {
  int ion_count = 7;
  double axial_freq = kTwoPi * 0.4e6;
  double radial_freq_x = kTwoPi * 3.0e6;
  double radial_freq_y = kTwoPi * 2.9e6;
  double ion_mass = constants::yb171_mass;
  // Raman wavevector difference projected on each axis (1/m). The default is a
  // 355 nm counter-propagating pair at 45 degrees to both radial axes.
  double wavevector_x = 2.0 * kTwoPi / 355e-9 / std::numbers::sqrt2;
  double wavevector_y = 2.0 * kTwoPi / 355e-9 / std::numbers::sqrt2;
  double wavevector_z = 0.0;
  // Chain index hosting each register qubit; empty means every ion is a qubit.
  std::vector<int> qubit_ions;

  double wavevector(Axis axis) const;
  double trap_freq(Axis axis) const;
  /// Ion index for a 1-based qubit label.
  int ion_for_qubit(int qubit_label) const;
  int qubit_count() const;

  /// Throws ValidationError when an invariant is violated.
  void validate() const;

  /// Length unit of the dimensionless equilibrium problem (m).
  double length_scale() const;
};

/// Seven ions, five middle ones as qubits, radial 3.0/2.9 MHz, axial 0.4 MHz.
TrapConfig default_trap();

/// Axial equilibrium coordinates in units of TrapConfig::length_scale().
struct EquilibriumPositions {
  VectorXd positions;
  double residual_norm = 0.0;
  int iterations = 0;
};

/// Minimizes sum u_i^2/2 + sum_{i<j} 1/|u_i - u_j| by damped Newton iteration.
EquilibriumPositions solve_equilibrium(const TrapConfig& config);

/// Gradient of the dimensionless potential (the net force with opposite sign).
VectorXd equilibrium_gradient(const VectorXd& positions);

/// Hessian of the dimensionless potential along the chain axis, in units of w_z^2.
MatrixXd axial_hessian(const VectorXd& positions);

/// Radial Hessian (w_r/w_z)^2 I - K in units of w_z^2.
MatrixXd radial_hessian(const VectorXd& positions, double radial_to_axial_ratio);

/// Normal modes of one principal axis.
struct ModeSet {
  Axis axis = Axis::X;
  /// Angular frequencies, sorted descending.
  VectorXd frequencies;
  /// (ion, mode) participation; columns are orthonormal mode vectors.
  MatrixXd mode_vectors;
  /// (ion, mode) Lamb-Dicke parameters.
  MatrixXd lamb_dicke;
  /// Chain-mode index for each retained column (identity unless subset()).
  std::vector<int> source_modes;

  int ion_count() const { return static_cast<int>(mode_vectors.rows()); }
  int mode_count() const { return static_cast<int>(frequencies.size()); }

  /// Copy restricted to the given mode columns (ions are kept).
  ModeSet subset(const std::vector<int>& modes) const;
  /// The `count` highest-frequency modes.
  ModeSet top_modes(int count) const;
};

ModeSet normal_modes(const TrapConfig& config, const EquilibriumPositions& eq, Axis axis);

/// eta_k^i = dk * b_k^i * sqrt(hbar / (2 M w_k)).
MatrixXd lamb_dicke_matrix(const TrapConfig& config, const ModeSet& modes);

/// X/Y frequency-band comparison. Bands are [min w_k, max w_k] per radial axis.
struct SpectralSeparation {
  double x_low = 0, x_high = 0, y_low = 0, y_high = 0;
  double gap = 0;  // positive when disjoint, negative overlap otherwise (rad/s)
  bool disjoint = false;
};

SpectralSeparation spectral_separation(const ModeSet& x_modes, const ModeSet& y_modes);

/// Convenience: equilibrium plus all three mode sets.
struct Chain {
  TrapConfig config;
  EquilibriumPositions equilibrium;
  ModeSet x, y, z;

  const ModeSet& modes(Axis axis) const;
};

Chain build_chain(const TrapConfig& config);

}  // namespace ionpar
