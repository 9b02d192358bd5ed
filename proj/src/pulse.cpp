#include "ionpar/pulse.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "ionpar/linalg.hpp"
#include "ionpar/oscillatory.hpp"

namespace ionpar {

namespace {

constexpr Complex kI{0.0, 1.0};

// Unit-amplitude integrals of cos(mu t - phi) e^{+-i w t} over [a, b].
Complex carrier_up(double mu, double phi, double w, double a, double b) {
  return 0.5 * (std::exp(-kI * phi) * osc::integral(w + mu, a, b) +
                std::exp(kI * phi) * osc::integral(w - mu, a, b));
}

Complex carrier_down(double mu, double phi, double w, double a, double b) {
  return 0.5 * (std::exp(-kI * phi) * osc::integral(mu - w, a, b) +
                std::exp(kI * phi) * osc::integral(-(mu + w), a, b));
}

// int_a^b dt2 int_a^t2 dt1 cos(mu t2 - phi2) e^{i w t2} cos(mu t1 - phi1) e^{-i w t1}.
Complex carrier_triangle(double mu, double phi2, double phi1, double w, double a, double b) {
  const Complex c[2] = {std::exp(-kI * phi2), std::exp(kI * phi2)};
  const double x[2] = {w + mu, w - mu};
  const Complex d[2] = {std::exp(-kI * phi1), std::exp(kI * phi1)};
  const double y[2] = {mu - w, -(mu + w)};
  Complex total = 0.0;
  for (int m = 0; m < 2; ++m) {
    for (int n = 0; n < 2; ++n) total += c[m] * d[n] * osc::triangle(x[m], y[n], a, b);
  }
  return 0.25 * total;
}

void check_mode_args(const PulseSchedule& schedule, const ModeSet& modes) {
  schedule.validate();
  if (schedule.axis != modes.axis) {
    throw ValidationError("schedule axis " + std::string(to_string(schedule.axis)) +
                          " does not match mode axis " + std::string(to_string(modes.axis)));
  }
  const int n = modes.ion_count();
  if (schedule.pair.first >= n || schedule.pair.second >= n) {
    throw ValidationError("schedule pair outside the chain");
  }
}

}  // namespace

double PulseSchedule::duration() const {
  double total = 0.0;
  for (const auto& s : segments) total += s.duration;
  return total;
}

std::vector<double> PulseSchedule::boundaries() const {
  std::vector<double> t{0.0};
  for (const auto& s : segments) t.push_back(t.back() + s.duration);
  return t;
}

double PulseSchedule::amplitude(int ion, int segment) const {
  const auto& s = segments.at(segment);
  if (ion == pair.first) return s.amplitude_p;
  if (ion == pair.second) return s.amplitude_q;
  return 0.0;
}

double PulseSchedule::phase_of(int ion) const {
  if (ion == pair.first) return phase[0];
  if (ion == pair.second) return phase[1];
  return 0.0;
}

PulseSchedule PulseSchedule::scaled(double s) const {
  PulseSchedule out = *this;
  for (auto& seg : out.segments) {
    seg.amplitude_p *= s;
    seg.amplitude_q *= s;
  }
  return out;
}

void PulseSchedule::validate() const {
  if (pair.first == pair.second) throw ValidationError("pulse pair must name two distinct ions");
  if (pair.first < 0 || pair.second < 0) throw ValidationError("negative ion index");
  if (segments.empty()) throw ValidationError("pulse has no segments");
  for (const auto& s : segments) {
    if (!(s.duration > 0)) throw ValidationError("segment durations must be positive");
    if (!std::isfinite(s.amplitude_p) || !std::isfinite(s.amplitude_q)) {
      throw ValidationError("non-finite segment amplitude");
    }
  }
  if (!std::isfinite(detuning)) throw ValidationError("non-finite detuning");
}

void GateSpec::validate() const {
  if (pair.first == pair.second) throw ValidationError("gate pair must name two distinct qubits");
  if (std::abs(target_angle) > kPi / 2 + 1e-12) {
    throw ValidationError("gate angle must satisfy |chi| <= pi/2");
  }
}

Complex alpha_final(const PulseSchedule& schedule, const ModeSet& modes, int ion, int mode) {
  return displacement_trajectory(schedule, modes, ion, mode).back();
}

std::vector<Complex> displacement_trajectory(const PulseSchedule& schedule, const ModeSet& modes,
                                             int ion, int mode) {
  check_mode_args(schedule, modes);
  if (mode < 0 || mode >= modes.mode_count()) throw ValidationError("mode index out of range");
  if (ion < 0 || ion >= modes.ion_count()) throw ValidationError("ion index out of range");
  const double eta = modes.lamb_dicke(ion, mode);
  const double w = modes.frequencies(mode);
  const double phi = schedule.phase_of(ion);
  const auto t = schedule.boundaries();

  std::vector<Complex> alpha{0.0};
  Complex acc = 0.0;
  for (std::size_t s = 0; s < schedule.segments.size(); ++s) {
    const double amp = schedule.amplitude(ion, static_cast<int>(s));
    if (amp != 0.0) acc -= eta * amp * carrier_up(schedule.detuning, phi, w, t[s], t[s + 1]);
    alpha.push_back(acc);
  }
  return alpha;
}

MatrixXd chi_kernel(const PulseSchedule& schedule, const ModeSet& modes) {
  check_mode_args(schedule, modes);
  const auto t = schedule.boundaries();
  const int n_seg = static_cast<int>(schedule.segments.size());
  const int p = schedule.pair.first;
  const int q = schedule.pair.second;
  const double mu = schedule.detuning;
  const double phi_p = schedule.phase[0];
  const double phi_q = schedule.phase[1];

  MatrixXd kernel = MatrixXd::Zero(n_seg, n_seg);
  std::vector<Complex> up_p(n_seg), up_q(n_seg), down_p(n_seg), down_q(n_seg);
  for (int k = 0; k < modes.mode_count(); ++k) {
    const double weight = modes.lamb_dicke(p, k) * modes.lamb_dicke(q, k);
    if (weight == 0.0) continue;
    const double w = modes.frequencies(k);
    for (int s = 0; s < n_seg; ++s) {
      up_p[s] = carrier_up(mu, phi_p, w, t[s], t[s + 1]);
      up_q[s] = carrier_up(mu, phi_q, w, t[s], t[s + 1]);
      down_p[s] = carrier_down(mu, phi_p, w, t[s], t[s + 1]);
      down_q[s] = carrier_down(mu, phi_q, w, t[s], t[s + 1]);
    }
    for (int a = 0; a < n_seg; ++a) {
      for (int b = 0; b < n_seg; ++b) {
        Complex term;
        if (a > b) {
          term = up_p[a] * down_q[b];
        } else if (b > a) {
          term = up_q[b] * down_p[a];
        } else {
          term = carrier_triangle(mu, phi_p, phi_q, w, t[a], t[a + 1]) +
                 carrier_triangle(mu, phi_q, phi_p, w, t[a], t[a + 1]);
        }
        kernel(a, b) += weight * term.imag();
      }
    }
  }
  return kernel;
}

double chi_angle_mode(const PulseSchedule& schedule, const ModeSet& modes, int mode) {
  if (mode < 0 || mode >= modes.mode_count()) throw ValidationError("mode index out of range");
  return chi_angle(schedule, modes.subset({mode}));
}

double chi_angle(const PulseSchedule& schedule, const ModeSet& modes) {
  const MatrixXd kernel = chi_kernel(schedule, modes);
  const auto n = static_cast<Eigen::Index>(schedule.segments.size());
  VectorXd amp_p(n), amp_q(n);
  for (Eigen::Index s = 0; s < n; ++s) {
    amp_p(s) = schedule.segments[s].amplitude_p;
    amp_q(s) = schedule.segments[s].amplitude_q;
  }
  return amp_p.dot(kernel * amp_q);
}

MatrixXd closure_matrix(const PulseSchedule& schedule, const ModeSet& modes) {
  check_mode_args(schedule, modes);
  const auto t = schedule.boundaries();
  const auto n_seg = static_cast<Eigen::Index>(schedule.segments.size());
  const double phi = schedule.phase[0];
  MatrixXd a(2 * modes.mode_count(), n_seg);
  for (int k = 0; k < modes.mode_count(); ++k) {
    for (Eigen::Index s = 0; s < n_seg; ++s) {
      const Complex c = carrier_up(schedule.detuning, phi, modes.frequencies(k), t[s], t[s + 1]);
      a(2 * k, s) = c.real();
      a(2 * k + 1, s) = c.imag();
    }
  }
  return a;
}

double lamb_dicke_metric(const PulseSchedule& schedule, const ModeSet& modes) {
  check_mode_args(schedule, modes);
  double worst = 0.0;
  for (int ion : {schedule.pair.first, schedule.pair.second}) {
    double amp = 0.0;
    for (int s = 0; s < static_cast<int>(schedule.segments.size()); ++s) {
      amp = std::max(amp, std::abs(schedule.amplitude(ion, s)));
    }
    for (int k = 0; k < modes.mode_count(); ++k) {
      const double gap = std::abs(schedule.detuning - modes.frequencies(k));
      const double coupling = std::abs(modes.lamb_dicke(ion, k)) * amp;
      if (coupling == 0.0) continue;
      worst = std::max(worst, gap == 0.0 ? std::numeric_limits<double>::infinity()
                                         : coupling / gap);
    }
  }
  return worst;
}

double default_detuning(const ModeSet& modes) {
  return modes.frequencies.maxCoeff() + kTwoPi * 3.0e3;
}

DesignResult design_amplitude_modulated(std::pair<int, int> pair, const ModeSet& modes,
                                        double duration, double detuning, double target_angle,
                                        const DesignOptions& options) {
  const int n_modes = modes.mode_count();
  const int n_ions = modes.ion_count();
  if (pair.first == pair.second) throw ValidationError("pulse pair must name two distinct ions");
  if (pair.first < 0 || pair.second < 0 || pair.first >= n_ions || pair.second >= n_ions) {
    throw ValidationError("pulse pair outside the chain");
  }
  if (!(duration > 0)) throw ValidationError("gate duration must be positive");
  const double band_low = modes.frequencies.minCoeff();
  const double band_high = modes.frequencies.maxCoeff();
  const double margin = 0.1 * band_high;
  if (!(detuning > band_low - margin && detuning < band_high + margin)) {
    throw ValidationError("detuning lies outside the sideband region of the driven axis");
  }
  const int n_seg = options.segments > 0 ? options.segments : 2 * n_modes + 1;
  if (n_seg < n_modes + 1) {
    std::ostringstream msg;
    msg << "infeasible design: " << n_seg << " segments cannot null " << n_modes
        << " modes; use at least " << n_modes + 1 << " (default " << 2 * n_modes + 1 << ")";
    throw DesignError(msg.str());
  }

  DesignResult result;
  PulseSchedule& schedule = result.schedule;
  schedule.pair = pair;
  schedule.axis = modes.axis;
  schedule.detuning = detuning;
  schedule.segments.assign(n_seg, Segment{duration / n_seg, 0.0, 0.0});

  const double eta_max = std::max(modes.lamb_dicke.row(pair.first).cwiseAbs().maxCoeff(),
                                  modes.lamb_dicke.row(pair.second).cwiseAbs().maxCoeff());

  if (target_angle != 0.0) {
    // Closure rows only for modes that couple to the pair.
    std::vector<int> coupled;
    for (int k = 0; k < n_modes; ++k) {
      const double c = std::max(std::abs(modes.lamb_dicke(pair.first, k)),
                                std::abs(modes.lamb_dicke(pair.second, k)));
      if (c > 1e-12 * eta_max) coupled.push_back(k);
    }
    const MatrixXd constraints = closure_matrix(schedule, modes.subset(coupled)) / duration;

    Eigen::JacobiSVD<MatrixXd> svd(constraints, Eigen::ComputeFullV);
    const VectorXd& sigma = svd.singularValues();
    const double sigma_max = sigma.size() > 0 ? sigma(0) : 0.0;
    int rank = 0;
    for (Eigen::Index i = 0; i < sigma.size(); ++i) {
      if (sigma(i) > options.rank_tolerance * sigma_max) ++rank;
    }
    const int null_dim = n_seg - rank;
    result.null_space_dim = null_dim;
    if (null_dim <= 0) {
      throw DesignError("infeasible design: closure constraints leave no null space; "
                        "add segments or change the detuning");
    }
    const MatrixXd basis = svd.matrixV().rightCols(null_dim);

    const MatrixXd kernel = chi_kernel(schedule, modes);
    const MatrixXd sym = 0.5 * (kernel + kernel.transpose());
    const MatrixXd reduced = basis.transpose() * sym * basis;
    Eigen::SelfAdjointEigenSolver<MatrixXd> eig(reduced);
    const VectorXd& lambdas = eig.eigenvalues();
    Eigen::Index best = 0;
    for (Eigen::Index i = 1; i < lambdas.size(); ++i) {
      if (std::abs(lambdas(i)) > std::abs(lambdas(best)) * (1.0 + 1e-12)) best = i;
    }
    const double lambda = lambdas(best);
    const double kernel_norm = sym.cwiseAbs().maxCoeff();
    if (!(std::abs(lambda) > 1e-9 * kernel_norm)) {
      throw DesignError("infeasible design: closed pulses produce no gate angle; "
                        "add segments or change the detuning");
    }
    MatrixXd shape = basis * eig.eigenvectors().col(best);
    fix_column_signs(shape);
    const double scale = std::sqrt(std::abs(target_angle) / std::abs(lambda));
    const double q_sign = (lambda > 0) == (target_angle > 0) ? 1.0 : -1.0;
    for (int s = 0; s < n_seg; ++s) {
      schedule.segments[s].amplitude_p = scale * shape(s, 0);
      schedule.segments[s].amplitude_q = q_sign * scale * shape(s, 0);
    }
  }

  double amp_max = 0.0;
  for (const auto& s : schedule.segments) {
    amp_max = std::max({amp_max, std::abs(s.amplitude_p), std::abs(s.amplitude_q)});
  }
  if (amp_max > options.max_amplitude) {
    std::ostringstream msg;
    msg << "power limit: peak Rabi frequency " << amp_max / kTwoPi << " Hz exceeds "
        << options.max_amplitude / kTwoPi << " Hz";
    throw PowerLimitError(msg.str());
  }

  for (int ion : {pair.first, pair.second}) {
    for (int k = 0; k < n_modes; ++k) {
      result.max_residual =
          std::max(result.max_residual, std::abs(alpha_final(schedule, modes, ion, k)));
    }
  }
  result.residual_scale = eta_max * amp_max * duration;
  result.achieved_angle = target_angle == 0.0 ? 0.0 : chi_angle(schedule, modes);
  result.lamb_dicke = lamb_dicke_metric(schedule, modes);
  if (result.lamb_dicke > kLambDickeWarning) {
    std::ostringstream msg;
    msg << "Lamb-Dicke metric " << result.lamb_dicke << " exceeds " << kLambDickeWarning;
    result.warnings.push_back(msg.str());
  }
  return result;
}

SummedDrive summed_drive(const std::vector<PulseSchedule>& schedules, int ion) {
  SummedDrive out;
  if (schedules.empty()) return out;
  const double tau = schedules.front().duration();
  std::set<double> cuts;
  for (std::size_t i = 0; i < schedules.size(); ++i) {
    const auto& s = schedules[i];
    s.validate();
    if (std::abs(s.duration() - tau) > 1e-12 * tau) {
      throw AlignmentError("schedules must share a common duration");
    }
    if (s.drives(ion)) out.contributing.push_back(static_cast<int>(i));
    for (double t : s.boundaries()) cuts.insert(std::min(t, tau));
  }
  // Merge boundaries that differ only by round-off.
  std::vector<double> grid;
  for (double t : cuts) {
    if (grid.empty() || t - grid.back() > 1e-12 * tau) grid.push_back(t);
  }
  grid.back() = tau;

  for (std::size_t g = 0; g + 1 < grid.size(); ++g) {
    const double mid = 0.5 * (grid[g] + grid[g + 1]);
    double total = 0.0;
    for (int idx : out.contributing) {
      const auto& s = schedules[idx];
      const auto b = s.boundaries();
      const auto it = std::upper_bound(b.begin(), b.end(), mid);
      const int seg = std::clamp(static_cast<int>(it - b.begin()) - 1, 0,
                                 static_cast<int>(s.segments.size()) - 1);
      total += std::abs(s.amplitude(ion, seg));
    }
    out.pieces.push_back({grid[g], grid[g + 1], total});
    out.max_amplitude = std::max(out.max_amplitude, total);
  }
  return out;
}

std::vector<int> overlapping_ions(const std::vector<PulseSchedule>& schedules) {
  std::map<int, int> count;
  for (const auto& s : schedules) {
    ++count[s.pair.first];
    ++count[s.pair.second];
  }
  std::vector<int> out;
  for (const auto& [ion, c] : count) {
    if (c > 1) out.push_back(ion);
  }
  return out;
}

}  // namespace ionpar
