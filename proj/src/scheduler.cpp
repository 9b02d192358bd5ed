#include "ionpar/scheduler.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <sstream>

namespace ionpar {

namespace {

int shared_qubits(const XXGate& a, const XXGate& b) {
  int n = 0;
  for (int q : {a.pair.first, a.pair.second}) {
    if (q == b.pair.first || q == b.pair.second) ++n;
  }
  return n;
}

Layer make_layer(const GateList& list, int first, int second) {
  Layer layer;
  layer.x = ScheduledGate{first, list.gates[first], Axis::X};
  if (second >= 0) layer.y = ScheduledGate{second, list.gates[second], Axis::Y};
  return layer;
}

std::vector<std::pair<int, int>> greedy_pairs(const GateList& list, bool shared) {
  const int n = static_cast<int>(list.gates.size());
  std::vector<bool> placed(n, false);
  std::vector<std::pair<int, int>> out;
  for (int i = 0; i < n; ++i) {
    if (placed[i]) continue;
    placed[i] = true;
    int partner = -1;
    if (list.mode == DependencyMode::StrictOrder) {
      if (i + 1 < n && compatible(list.gates[i], list.gates[i + 1], shared)) partner = i + 1;
    } else {
      for (int j = i + 1; j < n; ++j) {
        if (!placed[j] && compatible(list.gates[i], list.gates[j], shared)) {
          partner = j;
          break;
        }
      }
    }
    if (partner >= 0) placed[partner] = true;
    out.push_back({i, partner});
  }
  return out;
}

std::vector<std::pair<int, int>> exhaustive_pairs(const GateList& list, bool shared) {
  const int n = static_cast<int>(list.gates.size());
  if (list.mode == DependencyMode::StrictOrder) {
    // best[i]: fewest layers for gates i..n-1 keeping input order.
    std::vector<int> best(n + 2, 0);
    std::vector<bool> pair_here(n + 1, false);
    for (int i = n - 1; i >= 0; --i) {
      best[i] = 1 + best[i + 1];
      if (i + 1 < n && compatible(list.gates[i], list.gates[i + 1], shared) && 1 + best[i + 2] <= best[i]) {
        best[i] = 1 + best[i + 2];
        pair_here[i] = true;
      }
    }
    std::vector<std::pair<int, int>> out;
    for (int i = 0; i < n;) {
      if (pair_here[i]) {
        out.push_back({i, i + 1});
        i += 2;
      } else {
        out.push_back({i, -1});
        ++i;
      }
    }
    return out;
  }
  // Memoised search over subsets; the lowest remaining gate is always placed next, so layers come
  // out ordered by their first gate and ties resolve toward the earliest partner.
  const std::uint32_t full = (1u << n) - 1u;
  std::vector<int> memo(std::size_t{1} << n, -1);
  std::vector<int> choice(std::size_t{1} << n, -1);
  memo[0] = 0;
  auto solve = [&](auto&& self, std::uint32_t mask) -> int {
    if (memo[mask] >= 0) return memo[mask];
    const int i = std::countr_zero(mask);
    const std::uint32_t rest = mask & ~(1u << i);
    int best = 1 + self(self, rest);
    int pick = -1;
    for (int j = i + 1; j < n; ++j) {
      if (!(rest & (1u << j)) || !compatible(list.gates[i], list.gates[j], shared)) continue;
      const int v = 1 + self(self, rest & ~(1u << j));
      if (v < best || (v == best && pick < 0)) {
        best = v;
        pick = j;
      }
    }
    memo[mask] = best;
    choice[mask] = pick;
    return best;
  };
  solve(solve, full);
  std::vector<std::pair<int, int>> out;
  for (std::uint32_t mask = full; mask;) {
    const int i = std::countr_zero(mask);
    const int j = choice[mask];
    out.push_back({i, j});
    mask &= ~(1u << i);
    if (j >= 0) mask &= ~(1u << j);
  }
  return out;
}

}  // namespace

void GateList::validate(int qubit_count) const {
  for (std::size_t i = 0; i < gates.size(); ++i) {
    const auto& g = gates[i];
    if (g.pair.first == g.pair.second) throw ValidationError("gate " + std::to_string(i + 1) + " repeats a qubit");
    if (g.pair.first < 0 || g.pair.second < 0) throw ValidationError("gate " + std::to_string(i + 1) + " has a negative qubit");
    if (qubit_count > 0 && (g.pair.first >= qubit_count || g.pair.second >= qubit_count)) {
      throw ValidationError("gate " + std::to_string(i + 1) + " addresses a qubit outside the register");
    }
    if (!std::isfinite(g.angle)) throw ValidationError("gate " + std::to_string(i + 1) + " has a non-finite angle");
  }
}

GateList gate_list_from_circuit(const Circuit& circuit, DependencyMode mode) {
  circuit.validate();
  GateList list;
  list.mode = mode;
  for (const auto& m : circuit.moments) {
    for (const auto& op : m.ops) {
      if (!op.is_ms()) throw ValidationError("only MS gates can be scheduled");
      list.gates.push_back({{op.qubit, op.partner}, op.angle});
    }
  }
  return list;
}

int Schedule::gate_count() const {
  int n = 0;
  for (const auto& l : layers) n += l.size();
  return n;
}

Circuit Schedule::to_circuit(int qubit_count) const {
  Circuit c(qubit_count);
  for (const auto& l : layers) {
    std::vector<Operation> ops;
    for (const auto* g : {&l.x, &l.y}) {
      if (*g) ops.push_back(Operation::ms((*g)->gate.pair.first, (*g)->gate.pair.second, (*g)->gate.angle, (*g)->axis));
    }
    c.add(ops);
  }
  return c;
}

bool compatible(const XXGate& a, const XXGate& b, bool allow_shared_ion) {
  const int shared = shared_qubits(a, b);
  return allow_shared_ion ? shared <= 1 : shared == 0;
}

Schedule schedule_gates(const GateList& gates, const ScheduleOptions& options) {
  gates.validate();
  const int n = static_cast<int>(gates.gates.size());
  std::vector<std::pair<int, int>> pairs;
  if (options.policy == SchedulePolicy::Exhaustive) {
    if (n > 16) throw ValidationError("exhaustive scheduling is limited to 16 gates");
    pairs = exhaustive_pairs(gates, options.allow_shared_ion);
  } else {
    pairs = greedy_pairs(gates, options.allow_shared_ion);
  }
  Schedule s;
  for (const auto& [first, second] : pairs) s.layers.push_back(make_layer(gates, first, second));
  return s;
}

Circuit sequential_circuit(const GateList& gates, int qubit_count) {
  gates.validate(qubit_count);
  Circuit c(qubit_count);
  for (const auto& g : gates.gates) c.add({Operation::ms(g.pair.first, g.pair.second, g.angle, Axis::X)});
  return c;
}

DepthReport depth_report(const Schedule& schedule, const Timing& timing, double single_qubit_time) {
  DepthReport r;
  r.sequential = schedule.gate_count() * timing.ms_gate + single_qubit_time;
  r.parallel = schedule.depth() * timing.ms_gate + single_qubit_time;
  r.ratio = r.parallel > 0.0 ? r.sequential / r.parallel : 1.0;
  return r;
}

void attach_power_report(Schedule& schedule, const std::vector<PulseSchedule>& pulses,
                         const std::vector<int>& ion_of_qubit, double max_amplitude) {
  schedule.power.clear();
  auto ion = [&](int qubit) {
    if (qubit < 0 || qubit >= static_cast<int>(ion_of_qubit.size())) throw ValidationError("qubit without an ion");
    return ion_of_qubit[qubit];
  };
  for (int li = 0; li < schedule.depth(); ++li) {
    const Layer& l = schedule.layers[li];
    if (!l.x || !l.y) continue;
    for (const auto& gi : {l.x->index, l.y->index}) {
      if (gi >= static_cast<int>(pulses.size())) throw ValidationError("missing pulse for scheduled gate");
    }
    const std::vector<PulseSchedule> both{pulses[l.x->index], pulses[l.y->index]};
    for (int q : {l.x->gate.pair.first, l.x->gate.pair.second}) {
      if (q != l.y->gate.pair.first && q != l.y->gate.pair.second) continue;
      const SummedDrive drive = summed_drive(both, ion(q));
      PowerEntry e{li, q, drive.max_amplitude, drive.max_amplitude > max_amplitude};
      schedule.power.push_back(e);
      if (e.exceeds) {
        std::ostringstream msg;
        msg << "layer " << li + 1 << ": summed drive on qubit " << q + 1 << " is " << drive.max_amplitude / kTwoPi
            << " Hz, above the " << max_amplitude / kTwoPi << " Hz budget";
        schedule.warnings.push_back(msg.str());
      }
    }
  }
}

}  // namespace ionpar
