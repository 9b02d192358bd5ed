#include "ionpar/chain.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "ionpar/linalg.hpp"

namespace ionpar {

std::string_view to_string(Axis axis) {
  switch (axis) {
    case Axis::X: return "X";
    case Axis::Y: return "Y";
    case Axis::Z: return "Z";
  }
  return "?";
}

Axis parse_axis(std::string_view text) {
  if (text == "X" || text == "x") return Axis::X;
  if (text == "Y" || text == "y") return Axis::Y;
  if (text == "Z" || text == "z") return Axis::Z;
  throw ValidationError("unknown axis '" + std::string(text) + "'");
}

double TrapConfig::wavevector(Axis axis) const {
  switch (axis) {
    case Axis::X: return wavevector_x;
    case Axis::Y: return wavevector_y;
    case Axis::Z: return wavevector_z;
  }
  return 0.0;
}

double TrapConfig::trap_freq(Axis axis) const {
  switch (axis) {
    case Axis::X: return radial_freq_x;
    case Axis::Y: return radial_freq_y;
    case Axis::Z: return axial_freq;
  }
  return 0.0;
}

int TrapConfig::qubit_count() const {
  return qubit_ions.empty() ? ion_count : static_cast<int>(qubit_ions.size());
}

int TrapConfig::ion_for_qubit(int qubit_label) const {
  if (qubit_label < 1 || qubit_label > qubit_count()) {
    throw ValidationError("qubit label " + std::to_string(qubit_label) + " outside 1.." +
                          std::to_string(qubit_count()));
  }
  return qubit_ions.empty() ? qubit_label - 1 : qubit_ions[qubit_label - 1];
}

void TrapConfig::validate() const {
  if (ion_count < 1) throw ValidationError("ion_count must be >= 1");
  if (!(axial_freq > 0 && radial_freq_x > 0 && radial_freq_y > 0)) {
    throw ValidationError("trap frequencies must be strictly positive");
  }
  if (!(ion_mass > 0)) throw ValidationError("ion_mass must be positive");
  if (radial_freq_x == radial_freq_y) {
    throw ValidationError("degenerate radial frequencies: w_x must differ from w_y");
  }
  if (radial_freq_x <= axial_freq || radial_freq_y <= axial_freq) {
    throw ValidationError("radial frequencies must exceed the axial frequency");
  }
  for (int ion : qubit_ions) {
    if (ion < 0 || ion >= ion_count) {
      throw ValidationError("qubit_ions entry " + std::to_string(ion) + " is not a chain index");
    }
  }
  std::vector<int> sorted = qubit_ions;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw ValidationError("qubit_ions contains duplicates");
  }
}

double TrapConfig::length_scale() const {
  const double e2 = constants::elementary_charge * constants::elementary_charge;
  return std::cbrt(e2 / (4.0 * kPi * constants::vacuum_permittivity * ion_mass *
                         axial_freq * axial_freq));
}

TrapConfig default_trap() {
  TrapConfig config;
  config.qubit_ions = {1, 2, 3, 4, 5};
  return config;
}

namespace {

double potential(const VectorXd& u) {
  double v = 0.5 * u.squaredNorm();
  for (Eigen::Index i = 0; i < u.size(); ++i) {
    for (Eigen::Index j = i + 1; j < u.size(); ++j) v += 1.0 / std::abs(u(i) - u(j));
  }
  return v;
}

bool strictly_increasing(const VectorXd& u) {
  for (Eigen::Index i = 1; i < u.size(); ++i) {
    if (!(u(i) > u(i - 1))) return false;
  }
  return true;
}

// Symmetric matrix of inverse cubed separations, zero diagonal.
MatrixXd inverse_cubed_distances(const VectorXd& u) {
  const Eigen::Index n = u.size();
  MatrixXd k = MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double d = std::abs(u(i) - u(j));
      k(i, j) = k(j, i) = 1.0 / (d * d * d);
    }
  }
  return k;
}

constexpr int kMaxNewtonIterations = 200;
constexpr double kNewtonTolerance = 1e-13;

}  // namespace

VectorXd equilibrium_gradient(const VectorXd& u) {
  VectorXd g = u;
  for (Eigen::Index i = 0; i < u.size(); ++i) {
    for (Eigen::Index j = 0; j < u.size(); ++j) {
      if (i == j) continue;
      const double d = u(i) - u(j);
      g(i) -= (d > 0 ? 1.0 : -1.0) / (d * d);
    }
  }
  return g;
}

MatrixXd axial_hessian(const VectorXd& u) {
  const MatrixXd k = inverse_cubed_distances(u);
  MatrixXd h = -2.0 * k;
  h.diagonal() = VectorXd::Ones(u.size()) + 2.0 * k.rowwise().sum();
  return h;
}

MatrixXd radial_hessian(const VectorXd& u, double radial_to_axial_ratio) {
  const MatrixXd k = inverse_cubed_distances(u);
  MatrixXd h = k;
  h.diagonal() = VectorXd::Constant(u.size(), radial_to_axial_ratio * radial_to_axial_ratio) -
                 k.rowwise().sum();
  return h;
}

EquilibriumPositions solve_equilibrium(const TrapConfig& config) {
  config.validate();
  const int n = config.ion_count;
  EquilibriumPositions eq;
  if (n == 1) {
    eq.positions = VectorXd::Zero(1);
    return eq;
  }

  // Quasi-uniform start with the empirical minimum spacing 2.018 / N^0.559.
  const double spacing = 2.018 / std::pow(static_cast<double>(n), 0.559);
  VectorXd u(n);
  for (int i = 0; i < n; ++i) u(i) = spacing * (i - 0.5 * (n - 1));

  double residual = equilibrium_gradient(u).norm();
  int iter = 0;
  for (; iter < kMaxNewtonIterations && residual > kNewtonTolerance; ++iter) {
    const VectorXd g = equilibrium_gradient(u);
    // The Hessian is identity plus a weighted graph Laplacian: always SPD for an ordered chain.
    const VectorXd step = axial_hessian(u).llt().solve(g);
    const double v0 = potential(u);
    double t = 1.0;
    VectorXd trial = u - step;
    while ((!strictly_increasing(trial) || potential(trial) > v0 + 1e-14 * std::abs(v0)) &&
           t > 1e-8) {
      t *= 0.5;
      trial = u - t * step;
    }
    u = trial;
    // Re-centre: the exact minimizer is symmetric about the trap centre.
    u.array() -= u.mean();
    residual = equilibrium_gradient(u).norm();
  }
  if (residual > kNewtonTolerance) {
    throw SolverError("equilibrium solver did not converge after " +
                          std::to_string(kMaxNewtonIterations) + " iterations",
                      residual);
  }
  // Enforce exact mirror symmetry to round-off.
  const VectorXd mirrored = -u.reverse();
  u = 0.5 * (u + mirrored);
  eq.positions = u;
  eq.residual_norm = equilibrium_gradient(u).norm();
  eq.iterations = iter;
  return eq;
}

ModeSet normal_modes(const TrapConfig& config, const EquilibriumPositions& eq, Axis axis) {
  config.validate();
  if (eq.positions.size() != config.ion_count) {
    throw ValidationError("equilibrium does not match the configured ion count");
  }
  const MatrixXd hessian =
      axis == Axis::Z ? axial_hessian(eq.positions)
                      : radial_hessian(eq.positions, config.trap_freq(axis) / config.axial_freq);

  Eigen::SelfAdjointEigenSolver<MatrixXd> solver(hessian);
  if (solver.info() != Eigen::Success) {
    throw NumericError("mode eigen-decomposition failed");
  }
  const VectorXd& values = solver.eigenvalues();  // ascending
  const Eigen::Index n = values.size();
  if (values(0) <= 0.0) {
    std::ostringstream msg;
    msg << "chain unstable along " << to_string(axis) << ": Hessian eigenvalue " << values(0)
        << " (radial confinement too weak for " << n << " ions)";
    throw ChainInstabilityError(msg.str());
  }

  ModeSet modes;
  modes.axis = axis;
  modes.frequencies.resize(n);
  modes.mode_vectors.resize(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const Eigen::Index src = n - 1 - k;  // descending order
    modes.frequencies(k) = config.axial_freq * std::sqrt(values(src));
    modes.mode_vectors.col(k) = solver.eigenvectors().col(src);
  }
  fix_column_signs(modes.mode_vectors);
  modes.source_modes.resize(n);
  std::iota(modes.source_modes.begin(), modes.source_modes.end(), 0);
  modes.lamb_dicke = lamb_dicke_matrix(config, modes);
  return modes;
}

MatrixXd lamb_dicke_matrix(const TrapConfig& config, const ModeSet& modes) {
  const double dk = config.wavevector(modes.axis);
  MatrixXd eta = modes.mode_vectors;
  for (Eigen::Index k = 0; k < eta.cols(); ++k) {
    const double w = modes.frequencies(k);
    if (!(w > 0)) throw ValidationError("mode frequencies must be positive");
    eta.col(k) *= dk * std::sqrt(constants::hbar / (2.0 * config.ion_mass * w));
  }
  if (!eta.allFinite()) throw NumericError("non-finite Lamb-Dicke parameter");
  return eta;
}

ModeSet ModeSet::subset(const std::vector<int>& modes) const {
  ModeSet out;
  out.axis = axis;
  const auto m = static_cast<Eigen::Index>(modes.size());
  out.frequencies.resize(m);
  out.mode_vectors.resize(mode_vectors.rows(), m);
  out.lamb_dicke.resize(lamb_dicke.rows(), m);
  for (Eigen::Index c = 0; c < m; ++c) {
    const int k = modes[c];
    if (k < 0 || k >= mode_count()) throw ValidationError("mode index out of range");
    out.frequencies(c) = frequencies(k);
    out.mode_vectors.col(c) = mode_vectors.col(k);
    out.lamb_dicke.col(c) = lamb_dicke.col(k);
    out.source_modes.push_back(source_modes.empty() ? k : source_modes[k]);
  }
  return out;
}

ModeSet ModeSet::top_modes(int count) const {
  if (count < 1 || count > mode_count()) throw ValidationError("invalid retained mode count");
  std::vector<int> idx(count);
  std::iota(idx.begin(), idx.end(), 0);
  return subset(idx);
}

SpectralSeparation spectral_separation(const ModeSet& x_modes, const ModeSet& y_modes) {
  SpectralSeparation s;
  s.x_low = x_modes.frequencies.minCoeff();
  s.x_high = x_modes.frequencies.maxCoeff();
  s.y_low = y_modes.frequencies.minCoeff();
  s.y_high = y_modes.frequencies.maxCoeff();
  s.gap = std::max(s.x_low - s.y_high, s.y_low - s.x_high);
  s.disjoint = s.gap > 0;
  return s;
}

const ModeSet& Chain::modes(Axis axis) const {
  switch (axis) {
    case Axis::X: return x;
    case Axis::Y: return y;
    case Axis::Z: return z;
  }
  return x;
}

Chain build_chain(const TrapConfig& config) {
  Chain chain;
  chain.config = config;
  chain.equilibrium = solve_equilibrium(config);
  chain.x = normal_modes(config, chain.equilibrium, Axis::X);
  chain.y = normal_modes(config, chain.equilibrium, Axis::Y);
  chain.z = normal_modes(config, chain.equilibrium, Axis::Z);
  return chain;
}

}  // namespace ionpar
