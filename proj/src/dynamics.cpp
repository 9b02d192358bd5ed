#include "ionpar/dynamics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <set>
#include <sstream>

#include "ionpar/linalg.hpp"
#include "ionpar/oscillatory.hpp"
#include "ionpar/parallel.hpp"

namespace ionpar {

namespace {

constexpr Complex kI{0.0, 1.0};

// Largest generator-norm bound exponentiated by a single Taylor series.
constexpr double kTaylorReach = 6.0;

const ModeSet& modes_for(Axis axis, const ModeSet& modes_x, const ModeSet& modes_y) {
  if (axis == Axis::X) return modes_x;
  if (axis == Axis::Y) return modes_y;
  throw ValidationError("schedules must drive the X or Y axis");
}

void check_axes(const std::vector<PulseSchedule>& schedules) {
  bool used[2] = {false, false};
  for (const auto& s : schedules) {
    s.validate();
    const int a = s.axis == Axis::X ? 0 : s.axis == Axis::Y ? 1 : -1;
    if (a < 0) throw ValidationError("schedules must drive the X or Y axis");
    if (used[a]) throw ValidationError("at most one schedule per axis");
    used[a] = true;
  }
}

// One (ion, mode) coupling X_q (f(t) a^dag + f(t)^* a) with
// f(t) = eta Omega(t) cos(mu t - phi) e^{i w t}.
struct Coupling {
  int schedule = 0;
  int ion = 0;
  int qubit = 0;
  int slot = 0;
  double eta = 0.0;
  double frequency = 0.0;
};

// f(t) / (eta Omega) = sum_b weight_b e^{i nu_b t}.
struct DriveComponents {
  std::array<Complex, 2> weight;
  std::array<double, 2> nu;
};

DriveComponents drive_components(double mu, double phi, double w) {
  return {{0.5 * std::exp(-kI * phi), 0.5 * std::exp(kI * phi)}, {w + mu, w - mu}};
}

// int_a^b f / (eta Omega).
Complex drive_integral(const DriveComponents& d, double a, double b) {
  return d.weight[0] * osc::integral(d.nu[0], a, b) + d.weight[1] * osc::integral(d.nu[1], a, b);
}

// int_a^b dt2 int_a^t2 dt1 g^*(t2) f(t1) for unit-amplitude drives.
Complex drive_triangle(const DriveComponents& g, const DriveComponents& f, double a, double b) {
  Complex total = 0.0;
  for (int i = 0; i < 2; ++i) {
    for (int k = 0; k < 2; ++k) {
      total += std::conj(g.weight[i]) * f.weight[k] * osc::triangle(-g.nu[i], f.nu[k], a, b);
    }
  }
  return total;
}

// y += k x over `count` interleaved complex values.
inline void axpy(Complex k, const double* x, double* y, Eigen::Index count) {
  const double kr = k.real();
  const double ki = k.imag();
  for (Eigen::Index i = 0; i < 2 * count; i += 2) {
    y[i] += kr * x[i] - ki * x[i + 1];
    y[i + 1] += kr * x[i + 1] + ki * x[i];
  }
}

class Propagator {
 public:
  Propagator(const SpinMotionState& layout, std::vector<Coupling> couplings)
      : couplings_(std::move(couplings)),
        qubits_(layout.qubit_count()),
        spin_dim_(layout.spin_dim()),
        motional_dim_(layout.motional_dim()) {
    int max_cutoff = 0;
    strides_.assign(layout.modes.size(), 1);
    for (int slot = static_cast<int>(layout.modes.size()) - 2; slot >= 0; --slot) {
      strides_[slot] = strides_[slot + 1] * (layout.modes[slot + 1].cutoff + 1);
    }
    for (const auto& m : layout.modes) {
      cutoffs_.push_back(m.cutoff);
      max_cutoff = std::max(max_cutoff, m.cutoff);
    }
    roots_.resize(max_cutoff + 2);
    for (int n = 0; n < max_cutoff + 2; ++n) roots_[n] = std::sqrt(static_cast<double>(n));
    work_.resize(spin_dim_ * motional_dim_);
    term_.resize(spin_dim_ * motional_dim_);
  }

  const std::vector<Coupling>& couplings() const { return couplings_; }

  // out = factor * sum_j X_j (c_j a_j^dag + c_j^* a_j) in
  void apply(const std::vector<Complex>& c, Complex factor, const VectorXcd& in, VectorXcd& out) const {
    out.setZero();
    const Eigen::Index md = motional_dim_;
    for (std::size_t j = 0; j < couplings_.size(); ++j) {
      if (c[j] == Complex(0.0)) continue;
      const auto& cp = couplings_[j];
      const Eigen::Index bit = Eigen::Index{1} << (qubits_ - 1 - cp.qubit);
      const Eigen::Index stride = strides_[cp.slot];
      const int top = cutoffs_[cp.slot];
      const Eigen::Index block = stride * (top + 1);
      const Complex up = factor * c[j];
      const Complex down = factor * std::conj(c[j]);
      for (Eigen::Index s = 0; s < spin_dim_; ++s) {
        const double* src = reinterpret_cast<const double*>(in.data() + (s ^ bit) * md);
        double* dst = reinterpret_cast<double*>(out.data() + s * md);
        for (Eigen::Index hi = 0; hi < md; hi += block) {
          for (int n = 0; n <= top; ++n) {
            const Eigen::Index base = 2 * (hi + n * stride);
            if (n > 0) axpy(up * roots_[n], src + base - 2 * stride, dst + base, stride);
            if (n < top) axpy(down * roots_[n + 1], src + base + 2 * stride, dst + base, stride);
          }
        }
      }
    }
  }

  // state <- exp(-i G(c0)) state by a scaled Taylor series.
  void exponentiate(const std::vector<Complex>& c0, VectorXcd& state) {
    double bound = 0.0;
    for (std::size_t j = 0; j < couplings_.size(); ++j) {
      bound += 2.0 * std::abs(c0[j]) * roots_[cutoffs_[couplings_[j].slot]];
    }
    if (bound == 0.0) return;
    const int pieces = std::max(1, static_cast<int>(std::ceil(bound / kTaylorReach)));
    const Complex factor = -kI / static_cast<double>(pieces);
    for (int piece = 0; piece < pieces; ++piece) {
      term_ = state;
      const double scale = state.norm();
      int k = 1;
      for (; k < 60; ++k) {
        apply(c0, factor, term_, work_);
        term_.swap(work_);
        term_ /= static_cast<double>(k);
        state += term_;
        if (term_.norm() <= 1e-17 * scale) break;
      }
      if (k == 60) throw ConvergenceError("Taylor series of the step exponential did not converge");
    }
  }

  // state <- e^{-i scalar} prod_{a<b} exp(-i z_ab X_a X_b) state
  void apply_spin_phase(double scalar, const MatrixXd& z, VectorXcd& state) {
    if (scalar != 0.0) state *= std::exp(-kI * scalar);
    const Eigen::Index md = motional_dim_;
    for (int a = 0; a < qubits_; ++a) {
      for (int b = a + 1; b < qubits_; ++b) {
        const double angle = z(a, b);
        if (angle == 0.0) continue;
        const Eigen::Index flip = (Eigen::Index{1} << (qubits_ - 1 - a)) |
                                  (Eigen::Index{1} << (qubits_ - 1 - b));
        const double cs = std::cos(angle);
        const Complex sn = -kI * std::sin(angle);
        for (Eigen::Index s = 0; s < spin_dim_; ++s) {
          const Eigen::Index t = s ^ flip;
          if (t < s) continue;
          auto x = state.segment(s * md, md);
          auto y = state.segment(t * md, md);
          work_.head(md) = x;
          x = cs * x + sn * y;
          y = cs * y + sn * work_.head(md);
        }
      }
    }
  }

 private:
  std::vector<Coupling> couplings_;
  int qubits_;
  Eigen::Index spin_dim_;
  Eigen::Index motional_dim_;
  std::vector<Eigen::Index> strides_;
  std::vector<int> cutoffs_;
  std::vector<double> roots_;
  VectorXcd work_;
  VectorXcd term_;
};

void check_leakage(const SpinMotionState& state, double bound) {
  const auto pops = top_level_populations(state);
  for (std::size_t slot = 0; slot < pops.size(); ++slot) {
    if (pops[slot] > bound) {
      std::ostringstream msg;
      msg << "Fock cutoff " << state.modes[slot].cutoff << " of " << to_string(state.modes[slot].axis)
          << " mode " << state.modes[slot].mode << " reached population " << pops[slot];
      throw CutoffError(msg.str(), static_cast<int>(slot), pops[slot]);
    }
  }
}

SpinMotionState evolve_once(const std::vector<PulseSchedule>& schedules, const ModeSet& modes_x,
                            const ModeSet& modes_y, const SpinMotionState& initial, double dt_max,
                            double leakage_bound) {
  std::vector<Coupling> couplings;
  for (int si = 0; si < static_cast<int>(schedules.size()); ++si) {
    const auto& sched = schedules[si];
    const ModeSet& modes = modes_for(sched.axis, modes_x, modes_y);
    for (int ion : {sched.pair.first, sched.pair.second}) {
      if (ion >= modes.ion_count()) throw ValidationError("schedule ion outside the mode set");
      const int qubit = initial.find_ion(ion);
      if (qubit < 0) {
        throw ValidationError("ion " + std::to_string(ion) + " is driven but not carried by the state");
      }
      for (int k = 0; k < modes.mode_count(); ++k) {
        const int slot = initial.find_mode(sched.axis, k);
        if (slot < 0) {
          throw ValidationError(std::string("mode ") + std::to_string(k) + " of axis " +
                                std::string(to_string(sched.axis)) + " is not carried by the state");
        }
        couplings.push_back({si, ion, qubit, slot, modes.lamb_dicke(ion, k), modes.frequencies(k)});
      }
    }
  }

  std::vector<double> breaks{0.0};
  for (const auto& s : schedules) {
    const auto b = s.boundaries();
    breaks.insert(breaks.end(), b.begin(), b.end());
  }
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end(),
                           [](double a, double b) { return std::abs(a - b) <= 1e-15 * std::max(1.0, std::abs(b)); }),
               breaks.end());

  SpinMotionState state = initial;
  Propagator prop(state, couplings);
  const std::size_t nc = couplings.size();
  std::vector<Complex> c0(nc);
  std::vector<DriveComponents> drives;
  for (const auto& cp : couplings) {
    const auto& sched = schedules[cp.schedule];
    drives.push_back(drive_components(sched.detuning, sched.phase_of(cp.ion), cp.frequency));
  }
  std::vector<double> amp(nc);
  MatrixXd z(state.qubit_count(), state.qubit_count());

  for (std::size_t iv = 0; iv + 1 < breaks.size(); ++iv) {
    const double a = breaks[iv];
    const double b = breaks[iv + 1];
    const double mid = 0.5 * (a + b);
    bool any = false;
    for (std::size_t j = 0; j < nc; ++j) {
      const auto& cp = couplings[j];
      const auto& sched = schedules[cp.schedule];
      const auto bounds = sched.boundaries();
      amp[j] = 0.0;
      for (std::size_t seg = 0; seg + 1 < bounds.size(); ++seg) {
        if (mid >= bounds[seg] && mid < bounds[seg + 1]) {
          amp[j] = sched.amplitude(cp.ion, static_cast<int>(seg));
          break;
        }
      }
      any = any || amp[j] != 0.0;
    }
    if (!any) continue;
    const int steps = std::max(1, static_cast<int>(std::ceil((b - a) / dt_max - 1e-9)));
    const double h = (b - a) / steps;
    for (int st = 0; st < steps; ++st) {
      const double t0 = a + st * h;
      const double t1 = st + 1 == steps ? b : t0 + h;
      for (std::size_t j = 0; j < nc; ++j) {
        c0[j] = amp[j] == 0.0 ? Complex(0.0) : couplings[j].eta * amp[j] * drive_integral(drives[j], t0, t1);
      }
      // -1/2 int int [H(t2), H(t1)] = -i sum_{j,k sharing a mode} Im J_jk X_j X_k with
      // J_jk = int int f_j^*(t2) f_k(t1).
      z.setZero();
      double scalar = 0.0;
      for (std::size_t j = 0; j < nc; ++j) {
        if (amp[j] == 0.0) continue;
        for (std::size_t k = 0; k < nc; ++k) {
          if (amp[k] == 0.0 || couplings[j].slot != couplings[k].slot) continue;
          const double scale = couplings[j].eta * amp[j] * couplings[k].eta * amp[k];
          const double w = scale * std::imag(drive_triangle(drives[j], drives[k], t0, t1));
          const int qa = couplings[j].qubit;
          const int qb = couplings[k].qubit;
          if (qa == qb) {
            scalar += w;
          } else {
            z(std::min(qa, qb), std::max(qa, qb)) += w;
          }
        }
      }
      prop.exponentiate(c0, state.amplitudes);
      prop.apply_spin_phase(scalar, z, state.amplitudes);
      check_leakage(state, leakage_bound);
    }
  }
  return state;
}

MatrixXcd hadamard_all(int qubits) {
  MatrixXcd h(2, 2);
  h << 1, 1, 1, -1;
  h /= std::sqrt(2.0);
  MatrixXcd out = MatrixXcd::Identity(1, 1);
  for (int q = 0; q < qubits; ++q) out = kron(out, h);
  return out;
}

struct MagnusData {
  std::vector<double> angles;
  std::vector<DisplacementResidual> residuals;
  std::vector<std::pair<std::pair<int, int>, double>> gates;  // local qubits
};

MagnusData magnus_data(const std::vector<PulseSchedule>& schedules, const ModeSet& modes_x,
                       const ModeSet& modes_y, const std::vector<int>& ions) {
  check_axes(schedules);
  MagnusData out;
  auto local = [&](int ion) {
    const auto it = std::find(ions.begin(), ions.end(), ion);
    if (it == ions.end()) throw ValidationError("driven ion missing from the qubit list");
    return static_cast<int>(it - ions.begin());
  };
  for (const auto& s : schedules) {
    const ModeSet& modes = modes_for(s.axis, modes_x, modes_y);
    const double chi = chi_angle(s, modes);
    out.angles.push_back(chi);
    out.gates.push_back({{local(s.pair.first), local(s.pair.second)}, chi});
    for (int ion : {s.pair.first, s.pair.second}) {
      for (int k = 0; k < modes.mode_count(); ++k) {
        const int chain_mode = modes.source_modes.empty() ? k : modes.source_modes[k];
        out.residuals.push_back({ion, s.axis, chain_mode, alpha_final(s, modes, ion, k)});
      }
    }
  }
  return out;
}

std::vector<int> driven_ions(const std::vector<PulseSchedule>& schedules) {
  std::set<int> ions;
  for (const auto& s : schedules) {
    ions.insert(s.pair.first);
    ions.insert(s.pair.second);
  }
  return {ions.begin(), ions.end()};
}

MatrixXcd density_from_magnus(const MagnusData& data, const std::vector<int>& ions,
                              const VectorXcd& initial_spin) {
  const int q = static_cast<int>(ions.size());
  const Eigen::Index dim = Eigen::Index{1} << q;
  if (initial_spin.size() != dim) throw ValidationError("initial spin state has the wrong dimension");
  const MatrixXcd hn = hadamard_all(q);
  const VectorXcd c = hn * initial_spin;  // amplitudes in the sigma_x eigenbasis

  // Per-configuration phase and displacement of every (axis, mode).
  auto sign = [&](Eigen::Index s, int qubit) { return ((s >> (q - 1 - qubit)) & 1) ? -1.0 : 1.0; };
  std::vector<std::pair<Axis, int>> keys;
  for (const auto& r : data.residuals) {
    const std::pair<Axis, int> key{r.axis, r.mode};
    if (std::find(keys.begin(), keys.end(), key) == keys.end()) keys.push_back(key);
  }
  VectorXd phase(dim);
  MatrixXcd beta = MatrixXcd::Zero(dim, static_cast<Eigen::Index>(keys.size()));
  for (Eigen::Index s = 0; s < dim; ++s) {
    double ph = 0.0;
    for (const auto& g : data.gates) ph += g.second * sign(s, g.first.first) * sign(s, g.first.second);
    phase(s) = ph;
    for (const auto& r : data.residuals) {
      const auto key_it = std::find(keys.begin(), keys.end(), std::pair<Axis, int>{r.axis, r.mode});
      const int qi = static_cast<int>(std::find(ions.begin(), ions.end(), r.ion) - ions.begin());
      beta(s, key_it - keys.begin()) += kI * sign(s, qi) * r.alpha;
    }
  }
  MatrixXcd rho_x(dim, dim);
  for (Eigen::Index s = 0; s < dim; ++s) {
    for (Eigen::Index t = 0; t < dim; ++t) {
      Complex overlap = 1.0;  // prod_k <beta_t | beta_s>
      for (Eigen::Index k = 0; k < beta.cols(); ++k) {
        const Complex bs = beta(s, k);
        const Complex bt = beta(t, k);
        overlap *= std::exp(-0.5 * std::norm(bs) - 0.5 * std::norm(bt) + std::conj(bt) * bs);
      }
      rho_x(s, t) = c(s) * std::conj(c(t)) * std::exp(kI * (phase(s) - phase(t))) * overlap;
    }
  }
  return hn * rho_x * hn;
}

}  // namespace

Eigen::Index SpinMotionState::motional_dim() const {
  Eigen::Index d = 1;
  for (const auto& m : modes) d *= m.cutoff + 1;
  return d;
}

int SpinMotionState::find_mode(Axis axis, int mode) const {
  for (std::size_t i = 0; i < modes.size(); ++i) {
    if (modes[i].axis == axis && modes[i].mode == mode) return static_cast<int>(i);
  }
  return -1;
}

int SpinMotionState::find_ion(int ion) const {
  const auto it = std::find(ions.begin(), ions.end(), ion);
  return it == ions.end() ? -1 : static_cast<int>(it - ions.begin());
}

SpinMotionState SpinMotionState::product(std::vector<int> ions, std::vector<MotionalMode> modes,
                                         const VectorXcd& spin, const std::vector<int>& fock) {
  SpinMotionState out;
  out.ions = std::move(ions);
  out.modes = std::move(modes);
  if (out.ions.empty() || out.ions.size() > 20) throw ValidationError("qubit count must be in 1..20");
  for (std::size_t i = 0; i < out.ions.size(); ++i) {
    for (std::size_t j = i + 1; j < out.ions.size(); ++j) {
      if (out.ions[i] == out.ions[j]) throw ValidationError("duplicate ion in state");
    }
  }
  for (std::size_t i = 0; i < out.modes.size(); ++i) {
    if (out.modes[i].cutoff < 1) throw ValidationError("Fock cutoff must be at least 1");
    for (std::size_t j = i + 1; j < out.modes.size(); ++j) {
      if (out.modes[i].axis == out.modes[j].axis && out.modes[i].mode == out.modes[j].mode) {
        throw ValidationError("duplicate mode in state");
      }
    }
  }
  if (spin.size() != out.spin_dim()) throw ValidationError("spin vector has the wrong dimension");
  if (std::abs(spin.norm() - 1.0) > 1e-10) throw ValidationError("spin vector is not normalised");
  if (!fock.empty() && fock.size() != out.modes.size()) {
    throw ValidationError("one Fock level per mode required");
  }
  Eigen::Index motional = 0;
  for (std::size_t i = 0; i < out.modes.size(); ++i) {
    const int n = fock.empty() ? 0 : fock[i];
    if (n < 0 || n > out.modes[i].cutoff) throw ValidationError("Fock level outside the cutoff");
    motional = motional * (out.modes[i].cutoff + 1) + n;
  }
  const Eigen::Index md = out.motional_dim();
  out.amplitudes = VectorXcd::Zero(out.spin_dim() * md);
  for (Eigen::Index s = 0; s < out.spin_dim(); ++s) out.amplitudes(s * md + motional) = spin(s);
  return out;
}

SpinMotionState ground_state(const std::vector<int>& ions, const std::vector<const ModeSet*>& mode_sets,
                             int cutoff) {
  std::vector<MotionalMode> modes;
  for (const ModeSet* set : mode_sets) {
    for (int k = 0; k < set->mode_count(); ++k) modes.push_back({set->axis, k, cutoff});
  }
  VectorXcd spin = VectorXcd::Zero(Eigen::Index{1} << ions.size());
  spin(0) = 1.0;
  return SpinMotionState::product(ions, std::move(modes), spin);
}

MatrixXcd reduced_spin_density(const SpinMotionState& state) {
  const Eigen::Index md = state.motional_dim();
  const Eigen::Map<const MatrixXcd> psi(state.amplitudes.data(), md, state.spin_dim());
  return (psi.adjoint() * psi).transpose();
}

double spin_motion_entropy(const SpinMotionState& state) {
  return von_neumann_entropy(reduced_spin_density(state));
}

double spin_fidelity(const SpinMotionState& state, const VectorXcd& ideal_spin) {
  if (ideal_spin.size() != state.spin_dim()) throw ValidationError("ideal spin state has the wrong dimension");
  return std::real(ideal_spin.dot(reduced_spin_density(state) * ideal_spin));
}

std::vector<double> top_level_populations(const SpinMotionState& state) {
  const int slots = static_cast<int>(state.modes.size());
  std::vector<double> pops(slots, 0.0);
  std::vector<Eigen::Index> stride(slots, 1);
  for (int slot = slots - 2; slot >= 0; --slot) stride[slot] = stride[slot + 1] * (state.modes[slot + 1].cutoff + 1);
  const Eigen::Index md = state.motional_dim();
  VectorXd motional = VectorXd::Zero(md);
  for (Eigen::Index s = 0; s < state.spin_dim(); ++s) {
    motional += state.amplitudes.segment(s * md, md).cwiseAbs2();
  }
  for (Eigen::Index m = 0; m < md; ++m) {
    for (int slot = 0; slot < slots; ++slot) {
      const int n = static_cast<int>((m / stride[slot]) % (state.modes[slot].cutoff + 1));
      if (n == state.modes[slot].cutoff) pops[slot] += motional(m);
    }
  }
  return pops;
}

SpinMotionState evolve_exact(const std::vector<PulseSchedule>& schedules, const ModeSet& modes_x,
                             const ModeSet& modes_y, const SpinMotionState& state,
                             const EvolveOptions& options) {
  check_axes(schedules);
  if (!(options.dt_max > 0.0)) throw ValidationError("dt_max must be positive");
  if (state.amplitudes.size() != state.spin_dim() * state.motional_dim()) {
    throw ValidationError("state amplitude vector has the wrong dimension");
  }
  SpinMotionState out = evolve_once(schedules, modes_x, modes_y, state, options.dt_max, options.leakage_bound);
  if (options.check_convergence) {
    SpinMotionState fine =
        evolve_once(schedules, modes_x, modes_y, state, 0.5 * options.dt_max, options.leakage_bound);
    const double change = 1.0 - std::norm(out.amplitudes.dot(fine.amplitudes));
    if (change > options.convergence_tolerance) {
      std::ostringstream msg;
      msg << "halving dt changed the final state by " << change;
      throw ConvergenceError(msg.str());
    }
    return fine;
  }
  return out;
}

PropagatorReport magnus_propagator(const std::vector<PulseSchedule>& schedules, const ModeSet& modes_x,
                                   const ModeSet& modes_y, double residual_tolerance) {
  PropagatorReport report;
  report.ions = driven_ions(schedules);
  const MagnusData data = magnus_data(schedules, modes_x, modes_y, report.ions);
  report.angles = data.angles;
  report.residuals = data.residuals;
  for (const auto& r : data.residuals) report.max_residual = std::max(report.max_residual, std::abs(r.alpha));
  report.closed = report.max_residual < residual_tolerance;
  if (report.closed) {
    std::vector<std::pair<std::pair<int, int>, double>> gates;
    for (const auto& s : schedules) gates.push_back({s.pair, 0.0});
    for (std::size_t i = 0; i < gates.size(); ++i) gates[i].second = data.angles[i];
    report.unitary = ideal_parallel_unitary(report.ions, gates);
  }
  if (!report.ions.empty()) {
    VectorXcd zero = VectorXcd::Zero(Eigen::Index{1} << report.ions.size());
    zero(0) = 1.0;
    report.entanglement_entropy = von_neumann_entropy(density_from_magnus(data, report.ions, zero));
  }
  return report;
}

MatrixXcd magnus_spin_density(const std::vector<PulseSchedule>& schedules, const ModeSet& modes_x,
                              const ModeSet& modes_y, const std::vector<int>& ions,
                              const VectorXcd& initial_spin) {
  return density_from_magnus(magnus_data(schedules, modes_x, modes_y, ions), ions, initial_spin);
}

MatrixXcd ideal_parallel_unitary(const std::vector<int>& ions,
                                 const std::vector<std::pair<std::pair<int, int>, double>>& gates) {
  const int q = static_cast<int>(ions.size());
  const Eigen::Index dim = Eigen::Index{1} << q;
  MatrixXcd u = MatrixXcd::Identity(dim, dim);
  for (const auto& [pair, chi] : gates) {
    const auto pa = std::find(ions.begin(), ions.end(), pair.first);
    const auto pb = std::find(ions.begin(), ions.end(), pair.second);
    if (pa == ions.end() || pb == ions.end()) throw ValidationError("gate ion missing from the qubit list");
    const MatrixXcd xx = embed(pauli::x(), static_cast<int>(pa - ions.begin()), q) *
                         embed(pauli::x(), static_cast<int>(pb - ions.begin()), q);
    u = (std::cos(chi) * MatrixXcd::Identity(dim, dim) + kI * std::sin(chi) * xx) * u;
  }
  return u;
}

double cross_coupling_residual(const PulseSchedule& schedule_x, const PulseSchedule& schedule_y,
                               const ModeSet& modes_x, const ModeSet& modes_y,
                               const SpinMotionState& initial, const EvolveOptions& options) {
  if (schedule_x.axis != Axis::X || schedule_y.axis != Axis::Y) {
    throw ValidationError("cross-coupling check needs one X and one Y schedule");
  }
  SpinMotionState parallel, x_only;
  parallel_for(2, [&](int run) {
    if (run == 0) {
      parallel = evolve_exact({schedule_x, schedule_y}, modes_x, modes_y, initial, options);
    } else {
      x_only = evolve_exact({schedule_x}, modes_x, modes_y, initial, options);
    }
  });
  const SpinMotionState sequential = evolve_exact({schedule_y}, modes_x, modes_y, x_only, options);
  return (parallel.amplitudes - sequential.amplitudes).norm();
}

double cross_coupling_residual(const PulseSchedule& schedule_x, const PulseSchedule& schedule_y,
                               const ModeSet& modes_x, const ModeSet& modes_y, int cutoff,
                               const EvolveOptions& options) {
  const SpinMotionState initial =
      ground_state(driven_ions({schedule_x, schedule_y}), {&modes_x, &modes_y}, cutoff);
  return cross_coupling_residual(schedule_x, schedule_y, modes_x, modes_y, initial, options);
}

std::vector<double> thermal_weights(double nbar, int cutoff) {
  if (!(nbar >= 0.0)) throw ValidationError("mean phonon number must be non-negative");
  if (cutoff < 0) throw ValidationError("cutoff must be non-negative");
  std::vector<double> w(cutoff + 1, 0.0);
  const double ratio = nbar / (1.0 + nbar);
  double p = 1.0;
  double total = 0.0;
  for (int n = 0; n <= cutoff; ++n) {
    w[n] = p;
    total += p;
    p *= ratio;
  }
  for (auto& v : w) v /= total;
  return w;
}

ThermalFidelity thermal_spin_fidelity(const std::vector<PulseSchedule>& schedules, const ModeSet& modes_x,
                                      const ModeSet& modes_y, const std::vector<int>& ions,
                                      const VectorXcd& initial_spin, const VectorXcd& ideal_spin,
                                      double nbar, int cutoff, const EvolveOptions& options,
                                      double min_weight) {
  check_axes(schedules);
  std::vector<MotionalMode> modes;
  for (const auto& s : schedules) {
    const ModeSet& set = modes_for(s.axis, modes_x, modes_y);
    for (int k = 0; k < set.mode_count(); ++k) modes.push_back({s.axis, k, cutoff});
  }
  const auto weights = thermal_weights(nbar, cutoff);

  // Fock-product branches with weight above min_weight, in lexicographic order.
  std::vector<std::vector<int>> branches;
  std::vector<double> branch_weight;
  std::vector<int> levels(modes.size(), 0);
  double kept = 0.0;
  std::function<void(std::size_t, double)> visit = [&](std::size_t slot, double w) {
    if (w < min_weight) return;
    if (slot == modes.size()) {
      branches.push_back(levels);
      branch_weight.push_back(w);
      kept += w;
      return;
    }
    for (int n = 0; n <= cutoff; ++n) {
      levels[slot] = n;
      visit(slot + 1, w * weights[n]);
    }
    levels[slot] = 0;
  };
  visit(0, 1.0);

  std::vector<double> fidelity(branches.size(), 0.0);
  parallel_for(static_cast<int>(branches.size()), [&](int b) {
    const SpinMotionState start = SpinMotionState::product(ions, modes, initial_spin, branches[b]);
    // Bound the top-level population of the mixture, not of each branch.
    EvolveOptions branch = options;
    branch.leakage_bound = options.leakage_bound / (branch_weight[b] * static_cast<double>(branches.size()));
    fidelity[b] = spin_fidelity(evolve_exact(schedules, modes_x, modes_y, start, branch), ideal_spin);
  });
  ThermalFidelity out;
  out.branches = static_cast<int>(branches.size());
  out.discarded_weight = std::max(0.0, 1.0 - kept);
  for (std::size_t b = 0; b < branches.size(); ++b) out.fidelity += branch_weight[b] * fidelity[b];
  out.fidelity /= kept;
  return out;
}

}  // namespace ionpar
