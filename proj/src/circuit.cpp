#include "ionpar/circuit.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <iomanip>
#include <istream>
#include <random>
#include <sstream>

#include "ionpar/parallel.hpp"

namespace ionpar {

namespace {

constexpr Complex kI{0.0, 1.0};
constexpr int kMaxDensityQubits = 10;
constexpr int kMaxStateQubits = 24;

Eigen::Index bit_of(int qubit, int n) { return Eigen::Index{1} << (n - 1 - qubit); }

// Columns of `m` are states; apply u on `qubit` to each.
template <typename Derived>
void apply_single(Eigen::MatrixBase<Derived>& m, const Eigen::Matrix2cd& u, int qubit, int n) {
  const Eigen::Index bit = bit_of(qubit, n);
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    if (i & bit) continue;
    const Eigen::Index j = i | bit;
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      const Complex a = m(i, c);
      const Complex b = m(j, c);
      m(i, c) = u(0, 0) * a + u(0, 1) * b;
      m(j, c) = u(1, 0) * a + u(1, 1) * b;
    }
  }
}

template <typename Derived>
void apply_ms(Eigen::MatrixBase<Derived>& m, int p, int q, double chi, int n) {
  const Eigen::Index mask = bit_of(p, n) | bit_of(q, n);
  const double c = std::cos(chi);
  const Complex s = kI * std::sin(chi);
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    const Eigen::Index j = i ^ mask;
    if (j < i) continue;
    for (Eigen::Index col = 0; col < m.cols(); ++col) {
      const Complex a = m(i, col);
      const Complex b = m(j, col);
      m(i, col) = c * a + s * b;
      m(j, col) = c * b + s * a;
    }
  }
}

template <typename Derived>
void apply_operation(Eigen::MatrixBase<Derived>& m, const Operation& op, int n) {
  if (op.is_ms()) {
    apply_ms(m, op.qubit, op.partner, op.angle, n);
  } else {
    apply_single(m, op.matrix(), op.qubit, n);
  }
}

// rho <- U rho U^dag
void conjugate(MatrixXcd& rho, const Operation& op, int n) {
  apply_operation(rho, op, n);
  MatrixXcd adj = rho.adjoint();
  apply_operation(adj, op, n);
  rho = adj.adjoint();
}

void dephase(MatrixXcd& rho, int qubit, double factor, int n) {
  const Eigen::Index bit = bit_of(qubit, n);
  for (Eigen::Index c = 0; c < rho.cols(); ++c) {
    for (Eigen::Index r = 0; r < rho.rows(); ++r) {
      if ((r ^ c) & bit) rho(r, c) *= factor;
    }
  }
}

// (1 - p) rho + p Tr_{pq}(rho) (x) I/4, written as a uniform Pauli twirl.
void depolarize_pair(MatrixXcd& rho, int p, int q, double prob, int n) {
  if (prob == 0.0) return;
  const std::array<Eigen::Matrix2cd, 4> paulis = [] {
    std::array<Eigen::Matrix2cd, 4> out;
    out[0] << 1, 0, 0, 1;
    out[1] << 0, 1, 1, 0;
    out[2] << 0, -kI, kI, 0;
    out[3] << 1, 0, 0, -1;
    return out;
  }();
  MatrixXcd twirl = MatrixXcd::Zero(rho.rows(), rho.cols());
  for (int a = 0; a < 4; ++a) {
    for (int b = 0; b < 4; ++b) {
      MatrixXcd term = rho;
      for (auto [qubit, pauli] : {std::pair{p, a}, std::pair{q, b}}) {
        apply_single(term, paulis[pauli], qubit, n);
        MatrixXcd adj = term.adjoint();
        apply_single(adj, paulis[pauli], qubit, n);
        term = adj.adjoint();
      }
      twirl += term;
    }
  }
  rho = (1.0 - prob) * rho + (prob / 16.0) * twirl;
}

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double parse_number(const std::string& token, int line) {
  try {
    std::size_t used = 0;
    const double v = std::stod(token, &used);
    if (used != token.size() || !std::isfinite(v)) throw std::invalid_argument(token);
    return v;
  } catch (const std::exception&) {
    throw ValidationError("line " + std::to_string(line) + ": bad number '" + token + "'");
  }
}

int parse_label(const std::string& token, int line) {
  const double v = parse_number(token, line);
  if (v != std::floor(v) || v < 1 || v > 64) {
    throw ValidationError("line " + std::to_string(line) + ": bad qubit label '" + token + "'");
  }
  return static_cast<int>(v) - 1;
}

}  // namespace

Operation Operation::ms(int p, int q, double chi, Axis axis) {
  Operation op;
  op.kind = GateKind::MS;
  op.qubit = p;
  op.partner = q;
  op.angle = chi;
  op.axis = axis;
  return op;
}

Operation Operation::rx(int qubit, double theta) { return {GateKind::RX, qubit, -1, theta, 0.0, Axis::X}; }
Operation Operation::ry(int qubit, double theta) { return {GateKind::RY, qubit, -1, theta, 0.0, Axis::X}; }
Operation Operation::rz(int qubit, double theta) { return {GateKind::RZ, qubit, -1, theta, 0.0, Axis::X}; }
Operation Operation::r(int qubit, double theta, double phi) { return {GateKind::R, qubit, -1, theta, phi, Axis::X}; }
Operation Operation::h(int qubit) { return {GateKind::H, qubit, -1, 0.0, 0.0, Axis::X}; }
Operation Operation::s(int qubit) { return {GateKind::S, qubit, -1, 0.0, 0.0, Axis::X}; }

Eigen::Matrix2cd Operation::matrix() const {
  Eigen::Matrix2cd m;
  const double c = std::cos(0.5 * angle);
  const double s = std::sin(0.5 * angle);
  switch (kind) {
    case GateKind::RX:
      m << c, -kI * s, -kI * s, c;
      break;
    case GateKind::RY:
      m << c, -s, s, c;
      break;
    case GateKind::RZ:
      m << std::exp(-kI * (0.5 * angle)), 0, 0, std::exp(kI * (0.5 * angle));
      break;
    case GateKind::R:
      m << c, -kI * std::exp(-kI * phase) * s, -kI * std::exp(kI * phase) * s, c;
      break;
    case GateKind::H:
      m << 1, 1, 1, -1;
      m /= std::sqrt(2.0);
      break;
    case GateKind::S:
      m << std::exp(-kI * (kPi / 4)), 0, 0, std::exp(kI * (kPi / 4));
      break;
    case GateKind::MS:
      throw ValidationError("MS is a two-qubit gate");
  }
  return m;
}

Circuit& Circuit::add(std::vector<Operation> ops, double duration) {
  moments.push_back({std::move(ops), duration});
  return *this;
}

Circuit& Circuit::append(const Circuit& other) {
  if (other.qubit_count > qubit_count) throw ValidationError("appended circuit is wider than the register");
  moments.insert(moments.end(), other.moments.begin(), other.moments.end());
  return *this;
}

double Circuit::moment_duration(std::size_t index) const {
  const Moment& m = moments.at(index);
  if (m.duration >= 0.0) return m.duration;
  bool single = false;
  for (const auto& op : m.ops) {
    if (op.is_ms()) return timing.ms_gate;
    if (op.kind != GateKind::RZ) single = true;
  }
  return single ? timing.single_qubit : 0.0;
}

double Circuit::total_duration() const {
  double t = 0.0;
  for (std::size_t i = 0; i < moments.size(); ++i) t += moment_duration(i);
  return t;
}

int Circuit::ms_count() const {
  int n = 0;
  for (const auto& m : moments) {
    for (const auto& op : m.ops) n += op.is_ms() ? 1 : 0;
  }
  return n;
}

void Circuit::validate() const {
  if (qubit_count < 1) throw ValidationError("circuit needs at least one qubit");
  auto check_qubit = [&](int q) {
    if (q < 0 || q >= qubit_count) {
      throw ValidationError("qubit " + std::to_string(q + 1) + " out of range 1.." + std::to_string(qubit_count));
    }
  };
  for (std::size_t mi = 0; mi < moments.size(); ++mi) {
    const auto& m = moments[mi];
    const std::string where = "moment " + std::to_string(mi + 1) + ": ";
    if (!std::isfinite(m.duration)) throw ValidationError(where + "duration must be finite");
    std::vector<int> ms_use(qubit_count, 0);
    std::vector<int> single_use(qubit_count, 0);
    bool axis_used[3] = {false, false, false};
    const Operation* ms_ops[3] = {nullptr, nullptr, nullptr};
    for (const auto& op : m.ops) {
      check_qubit(op.qubit);
      if (!std::isfinite(op.angle) || !std::isfinite(op.phase)) throw ValidationError(where + "non-finite angle");
      if (op.is_ms()) {
        check_qubit(op.partner);
        if (op.partner == op.qubit) throw ValidationError(where + "MS needs two distinct qubits");
        if (op.axis == Axis::Z) throw ValidationError(where + "MS gates run on the X or Y bus");
        const int a = static_cast<int>(op.axis);
        if (axis_used[a]) throw ValidationError(where + "two MS gates on the same bus");
        axis_used[a] = true;
        ms_ops[a] = &op;
        ++ms_use[op.qubit];
        ++ms_use[op.partner];
      } else {
        ++single_use[op.qubit];
      }
    }
    if (ms_ops[0] && ms_ops[1]) {
      const auto& a = *ms_ops[0];
      const auto& b = *ms_ops[1];
      const int shared = (b.touches(a.qubit) ? 1 : 0) + (b.touches(a.partner) ? 1 : 0);
      if (shared > 1) throw ValidationError(where + "parallel MS gates may share at most one qubit");
    }
    for (int q = 0; q < qubit_count; ++q) {
      if (single_use[q] > 1) throw ValidationError(where + "two single-qubit gates on qubit " + std::to_string(q + 1));
      if (single_use[q] && ms_use[q]) {
        throw ValidationError(where + "single-qubit gate overlaps an MS gate on qubit " + std::to_string(q + 1));
      }
    }
  }
}

NoiseModel NoiseModel::dephasing(int qubits, double t2) {
  NoiseModel n;
  n.t2.assign(qubits, t2);
  return n;
}

double NoiseModel::t2_of(int qubit) const {
  if (t2.empty()) return std::numeric_limits<double>::infinity();
  return t2.at(qubit);
}

bool NoiseModel::is_noiseless() const {
  if (depolarizing != 0.0) return false;
  return std::all_of(t2.begin(), t2.end(), [](double t) { return std::isinf(t); });
}

void NoiseModel::validate(int qubits) const {
  if (!t2.empty() && static_cast<int>(t2.size()) != qubits) {
    throw ValidationError("need one T2 per qubit");
  }
  for (double t : t2) {
    if (!(t > 0.0)) throw ValidationError("T2 must be positive");
  }
  if (!(depolarizing >= 0.0 && depolarizing <= 1.0)) throw ValidationError("depolarizing probability must lie in [0, 1]");
}

void evolve_state(VectorXcd& state, const Circuit& circuit) {
  circuit.validate();
  const int n = circuit.qubit_count;
  if (n > kMaxStateQubits) throw ValidationError("too many qubits for the state-vector engine");
  if (state.size() != (Eigen::Index{1} << n)) throw ValidationError("state size does not match the circuit");
  for (const auto& m : circuit.moments) {
    for (const auto& op : m.ops) apply_operation(state, op, n);
  }
}

void evolve_density(MatrixXcd& rho, const Circuit& circuit, const NoiseModel& noise) {
  circuit.validate();
  noise.validate(circuit.qubit_count);
  const int n = circuit.qubit_count;
  if (n > kMaxDensityQubits) throw ValidationError("too many qubits for the density-matrix engine");
  const Eigen::Index dim = Eigen::Index{1} << n;
  if (rho.rows() != dim || rho.cols() != dim) throw ValidationError("density matrix size does not match the circuit");
  for (std::size_t mi = 0; mi < circuit.moments.size(); ++mi) {
    for (const auto& op : circuit.moments[mi].ops) {
      conjugate(rho, op, n);
      if (op.is_ms()) depolarize_pair(rho, op.qubit, op.partner, noise.depolarizing, n);
    }
    const double d = circuit.moment_duration(mi);
    if (d > 0.0) {
      for (int q = 0; q < n; ++q) {
        const double t2 = noise.t2_of(q);
        if (std::isfinite(t2)) dephase(rho, q, std::exp(-d / t2), n);
      }
    }
  }
}

VectorXcd simulate_state(const Circuit& circuit) {
  if (circuit.qubit_count < 1 || circuit.qubit_count > kMaxStateQubits) {
    throw ValidationError("qubit count outside the state-vector engine range");
  }
  VectorXcd psi = VectorXcd::Zero(Eigen::Index{1} << circuit.qubit_count);
  psi(0) = 1.0;
  evolve_state(psi, circuit);
  return psi;
}

MatrixXcd simulate_density(const Circuit& circuit, const NoiseModel& noise) {
  if (circuit.qubit_count < 1 || circuit.qubit_count > kMaxDensityQubits) {
    throw ValidationError("qubit count outside the density-matrix engine range");
  }
  const Eigen::Index dim = Eigen::Index{1} << circuit.qubit_count;
  MatrixXcd rho = MatrixXcd::Zero(dim, dim);
  rho(0, 0) = 1.0;
  evolve_density(rho, circuit, noise);
  return rho;
}

VectorXd probabilities(const Circuit& circuit, const NoiseModel& noise) {
  if (noise.is_noiseless()) {
    noise.validate(circuit.qubit_count);
    return simulate_state(circuit).cwiseAbs2();
  }
  return simulate_density(circuit, noise).diagonal().real().cwiseMax(0.0);
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint32_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32), stream};
  std::uint32_t words[2];
  seq.generate(words, words + 2);
  return (static_cast<std::uint64_t>(words[0]) << 32) | words[1];
}

std::vector<std::uint64_t> sample_counts(const VectorXd& probabilities, int shots, std::uint64_t seed) {
  if (shots < 0) throw ValidationError("shot count must be non-negative");
  std::vector<double> cdf(probabilities.size());
  double acc = 0.0;
  for (Eigen::Index i = 0; i < probabilities.size(); ++i) {
    acc += std::max(0.0, probabilities(i));
    cdf[i] = acc;
  }
  if (!(acc > 0.0)) throw NumericError("probability vector sums to zero");
  std::mt19937_64 rng(seed);
  std::vector<std::uint64_t> counts(probabilities.size(), 0);
  for (int s = 0; s < shots; ++s) {
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53 * acc;
    auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    if (it == cdf.end()) --it;
    ++counts[it - cdf.begin()];
  }
  return counts;
}

RunResult run(const Circuit& circuit, const NoiseModel& noise, const RunOptions& options) {
  RunResult out;
  out.probabilities = probabilities(circuit, noise);
  if (options.shots > 0) {
    out.counts = sample_counts(out.probabilities, options.shots, options.seed);
    out.shots = options.shots;
    for (std::size_t i = 0; i < out.counts.size(); ++i) {
      out.probabilities(static_cast<Eigen::Index>(i)) = static_cast<double>(out.counts[i]) / options.shots;
    }
  } else if (options.shots < 0) {
    throw ValidationError("shot count must be non-negative");
  }
  return out;
}

double parity(const VectorXd& probabilities, const std::vector<int>& qubits, int qubit_count) {
  Eigen::Index mask = 0;
  for (int q : qubits) {
    if (q < 0 || q >= qubit_count) throw ValidationError("parity qubit out of range");
    mask |= bit_of(q, qubit_count);
  }
  double total = 0.0;
  for (Eigen::Index i = 0; i < probabilities.size(); ++i) {
    total += (std::popcount(static_cast<std::uint64_t>(i & mask)) % 2 ? -1.0 : 1.0) * probabilities(i);
  }
  return total;
}

double extreme_population(const VectorXd& probabilities, const std::vector<int>& qubits, int qubit_count) {
  Eigen::Index mask = 0;
  for (int q : qubits) {
    if (q < 0 || q >= qubit_count) throw ValidationError("population qubit out of range");
    mask |= bit_of(q, qubit_count);
  }
  double total = 0.0;
  for (Eigen::Index i = 0; i < probabilities.size(); ++i) {
    const Eigen::Index bits = i & mask;
    if (bits == 0 || bits == mask) total += probabilities(i);
  }
  return total;
}

std::vector<ParityPoint> parity_scan(const Circuit& prep, const std::vector<int>& qubits,
                                     const std::vector<double>& phases, const NoiseModel& noise,
                                     const RunOptions& options) {
  if (qubits.empty()) throw ValidationError("parity scan needs at least one qubit");
  std::vector<ParityPoint> points(phases.size());
  parallel_for(static_cast<int>(phases.size()), [&](int i) {
    Circuit c = prep;
    std::vector<Operation> analysis;
    for (int q : qubits) analysis.push_back(Operation::r(q, kPi / 2, phases[i]));
    c.add(analysis);
    RunOptions point = options;
    if (options.shots > 0) point.seed = derive_seed(options.seed, static_cast<std::uint32_t>(i));
    const RunResult r = run(c, noise, point);
    const double p = parity(r.probabilities, qubits, c.qubit_count);
    const double err = options.shots > 0 ? std::sqrt(std::max(0.0, 1.0 - p * p) / options.shots) : 0.0;
    points[i] = {phases[i], p, err};
  });
  return points;
}

std::vector<double> uniform_phases(int count) {
  if (count < 1) throw ValidationError("need at least one phase");
  std::vector<double> out(count);
  for (int i = 0; i < count; ++i) out[i] = kTwoPi * i / count;
  return out;
}

FidelityReport estimate_fidelity(double population, const std::vector<ParityPoint>& scan, int qubits,
                                 double population_error) {
  if (qubits < 1) throw ValidationError("qubit count must be positive");
  if (scan.size() < 8) throw ValidationError("fidelity fit needs at least 8 scan points");
  double lo = scan.front().phase;
  double hi = lo;
  for (const auto& p : scan) {
    lo = std::min(lo, p.phase);
    hi = std::max(hi, p.phase);
  }
  const double period = kTwoPi / qubits;
  const double spacing = (hi - lo) / static_cast<double>(scan.size() - 1);
  if (hi - lo + spacing < period * (1.0 - 1e-9)) throw ValidationError("scan must cover a full parity period");

  const Eigen::Index m = static_cast<Eigen::Index>(scan.size());
  MatrixXd design(m, 3);
  VectorXd y(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    const double arg = qubits * scan[i].phase;
    design(i, 0) = 1.0;
    design(i, 1) = std::cos(arg);
    design(i, 2) = std::sin(arg);
    y(i) = scan[i].parity;
  }
  const Eigen::Matrix3d normal = design.transpose() * design;
  Eigen::LDLT<Eigen::Matrix3d> ldlt(normal);
  if (ldlt.info() != Eigen::Success || ldlt.rcond() < 1e-12) throw ValidationError("scan phases do not determine the fit");
  const Eigen::Vector3d coef = ldlt.solve(design.transpose() * y);
  const double rss = (design * coef - y).squaredNorm();
  const double sigma2 = m > 3 ? rss / static_cast<double>(m - 3) : 0.0;

  FidelityReport r;
  r.covariance = sigma2 * ldlt.solve(Eigen::Matrix3d::Identity());
  r.offset = coef(0);
  const double a = coef(1);
  const double b = coef(2);
  r.contrast = std::hypot(a, b);
  r.phase = std::atan2(-b, a);
  if (r.contrast > 0.0) {
    const Eigen::Vector2d grad(a / r.contrast, b / r.contrast);
    r.contrast_error = std::sqrt(std::max(0.0, grad.dot(r.covariance.block<2, 2>(1, 1) * grad)));
  } else {
    r.contrast_error = std::sqrt(std::max(0.0, 0.5 * (r.covariance(1, 1) + r.covariance(2, 2))));
  }
  if (r.contrast < r.contrast_error) r.contrast = 0.0;
  r.population = population;
  r.population_error = population_error;
  r.fidelity = 0.5 * (population + r.contrast);
  r.fidelity_error = 0.5 * std::hypot(population_error, r.contrast_error);
  return r;
}

Circuit parse_circuit(std::istream& in) {
  Circuit c;
  int declared = 0;
  int highest = 0;
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto hash = raw.find('#');
    const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (line.empty()) continue;
    Moment moment;
    std::stringstream parts(line);
    std::string part;
    bool header = false;
    while (std::getline(parts, part, '|')) {
      std::istringstream tok(trim(part));
      std::vector<std::string> t;
      for (std::string w; tok >> w;) t.push_back(w);
      if (t.empty()) throw ValidationError("line " + std::to_string(line_no) + ": empty operation");
      std::string name = t[0];
      std::transform(name.begin(), name.end(), name.begin(), [](unsigned char ch) { return std::toupper(ch); });
      auto need = [&](std::size_t lo, std::size_t hi) {
        if (t.size() < lo || t.size() > hi) {
          throw ValidationError("line " + std::to_string(line_no) + ": wrong argument count for " + name);
        }
      };
      Operation op;
      if (name == "QUBITS") {
        need(2, 2);
        declared = parse_label(t[1], line_no) + 1;
        header = true;
        continue;
      }
      if (name == "DELAY") {
        need(2, 2);
        moment.duration = parse_number(t[1], line_no);
        if (moment.duration < 0) throw ValidationError("line " + std::to_string(line_no) + ": negative delay");
        continue;
      }
      if (name == "MS") {
        need(4, 5);
        op = Operation::ms(parse_label(t[1], line_no), parse_label(t[2], line_no), parse_number(t[3], line_no),
                           t.size() == 5 ? parse_axis(t[4]) : Axis::X);
      } else if (name == "RX" || name == "RY" || name == "RZ") {
        need(3, 3);
        const int q = parse_label(t[1], line_no);
        const double th = parse_number(t[2], line_no);
        op = name == "RX" ? Operation::rx(q, th) : name == "RY" ? Operation::ry(q, th) : Operation::rz(q, th);
      } else if (name == "R") {
        need(4, 4);
        op = Operation::r(parse_label(t[1], line_no), parse_number(t[2], line_no), parse_number(t[3], line_no));
      } else if (name == "H" || name == "S") {
        need(2, 2);
        op = name == "H" ? Operation::h(parse_label(t[1], line_no)) : Operation::s(parse_label(t[1], line_no));
      } else {
        throw ValidationError("line " + std::to_string(line_no) + ": unknown operation '" + t[0] + "'");
      }
      highest = std::max({highest, op.qubit + 1, op.partner + 1});
      moment.ops.push_back(op);
    }
    if (header && moment.ops.empty() && moment.duration < 0) continue;
    c.moments.push_back(std::move(moment));
  }
  if (declared && highest > declared) throw ValidationError("qubit label exceeds the declared register size");
  c.qubit_count = declared ? declared : highest;
  c.validate();
  return c;
}

Circuit parse_circuit_text(const std::string& text) {
  std::istringstream in(text);
  return parse_circuit(in);
}

void write_circuit(std::ostream& out, const Circuit& circuit) {
  std::ostringstream s;
  s << std::setprecision(17);
  s << "QUBITS " << circuit.qubit_count << "\n";
  for (const auto& m : circuit.moments) {
    std::vector<std::string> items;
    for (const auto& op : m.ops) {
      std::ostringstream o;
      o << std::setprecision(17);
      switch (op.kind) {
        case GateKind::MS:
          o << "MS " << op.qubit + 1 << ' ' << op.partner + 1 << ' ' << op.angle << ' ' << to_string(op.axis);
          break;
        case GateKind::RX:
        case GateKind::RY:
        case GateKind::RZ:
          o << (op.kind == GateKind::RX ? "RX " : op.kind == GateKind::RY ? "RY " : "RZ ") << op.qubit + 1 << ' '
            << op.angle;
          break;
        case GateKind::R:
          o << "R " << op.qubit + 1 << ' ' << op.angle << ' ' << op.phase;
          break;
        case GateKind::H:
          o << "H " << op.qubit + 1;
          break;
        case GateKind::S:
          o << "S " << op.qubit + 1;
          break;
      }
      items.push_back(o.str());
    }
    if (m.duration >= 0) {
      std::ostringstream o;
      o << std::setprecision(17) << "DELAY " << m.duration;
      items.push_back(o.str());
    }
    if (items.empty()) items.push_back("DELAY 0");
    for (std::size_t i = 0; i < items.size(); ++i) s << (i ? " | " : "") << items[i];
    s << "\n";
  }
  out << s.str();
}

std::string to_text(const Circuit& circuit) {
  std::ostringstream out;
  write_circuit(out, circuit);
  return out.str();
}

}  // namespace ionpar
