#include <functional>
#include <random>
#include <set>

#include <gtest/gtest.h>

#include "ionpar/scheduler.hpp"

using namespace ionpar;

namespace {

// Minimum layer count by brute force: depth = gates - (largest set of disjoint compatible pairs).
int brute_force_depth(const std::vector<XXGate>& g, bool allow_shared, bool adjacent_only) {
  const int n = static_cast<int>(g.size());
  std::function<int(unsigned)> best = [&](unsigned used) -> int {
    int first = 0;
    while (first < n && (used >> first & 1u)) ++first;
    if (first == n) return 0;
    int result = best(used | 1u << first);
    for (int j = first + 1; j < n; ++j) {
      if (used >> j & 1u) continue;
      if (adjacent_only && j != first + 1) continue;
      if (!compatible(g[first], g[j], allow_shared)) continue;
      result = std::max(result, 1 + best(used | 1u << first | 1u << j));
    }
    return result;
  };
  return n - best(0);
}

std::vector<XXGate> random_gates(std::mt19937_64& rng, int qubits, int count) {
  std::uniform_int_distribution<int> q(0, qubits - 1);
  std::uniform_real_distribution<double> angle(-1.0, 1.0);
  std::vector<XXGate> out;
  for (int i = 0; i < count; ++i) {
    int a = q(rng), b = q(rng);
    while (b == a) b = q(rng);
    out.push_back({{a, b}, angle(rng)});
  }
  return out;
}

std::multiset<int> scheduled_indices(const Schedule& s) {
  std::multiset<int> out;
  for (const auto& l : s.layers) {
    if (l.x) out.insert(l.x->index);
    if (l.y) out.insert(l.y->index);
  }
  return out;
}

GateList tfim_step() {
  return {{{{0, 1}, 0.3}, {{2, 3}, 0.3}, {{1, 2}, 0.3}, {{3, 4}, 0.3}}, DependencyMode::CommutingXX};
}

}  // namespace

TEST(Schedule, TfimStepPacksIntoTwoLayers) {
  for (auto policy : {SchedulePolicy::Greedy, SchedulePolicy::Exhaustive}) {
    const Schedule s = schedule_gates(tfim_step(), {policy, true});
    ASSERT_EQ(s.depth(), 2);
    EXPECT_EQ(s.layers[0].x->gate.pair, (std::pair{0, 1}));
    EXPECT_EQ(s.layers[0].y->gate.pair, (std::pair{2, 3}));
    EXPECT_EQ(s.layers[1].x->gate.pair, (std::pair{1, 2}));
    EXPECT_EQ(s.layers[1].y->gate.pair, (std::pair{3, 4}));
  }
  // ordered input (1,2),(2,3),(3,4),(4,5) also packs into two layers
  GateList ordered{{{{0, 1}, 0.3}, {{1, 2}, 0.3}, {{2, 3}, 0.3}, {{3, 4}, 0.3}}, DependencyMode::CommutingXX};
  EXPECT_EQ(schedule_gates(ordered, {SchedulePolicy::Exhaustive, false}).depth(), 2);
}

TEST(Schedule, SingleGateLeavesYEmpty) {
  const Schedule s = schedule_gates({{{{0, 1}, 0.5}}, DependencyMode::CommutingXX});
  ASSERT_EQ(s.depth(), 1);
  EXPECT_TRUE(s.layers[0].x.has_value());
  EXPECT_FALSE(s.layers[0].y.has_value());
}

TEST(Schedule, ThreeGatesOnOneQubitNeedTwoLayers) {
  const GateList g{{{{0, 1}, 0.2}, {{0, 2}, 0.2}, {{0, 3}, 0.2}}, DependencyMode::CommutingXX};
  for (auto policy : {SchedulePolicy::Greedy, SchedulePolicy::Exhaustive}) {
    const Schedule s = schedule_gates(g, {policy, true});
    EXPECT_EQ(s.depth(), brute_force_depth(g.gates, true, false));
    EXPECT_EQ(s.depth(), 2);
    EXPECT_EQ(s.layers[0].size(), 2);
  }
  EXPECT_EQ(schedule_gates(g, {SchedulePolicy::Exhaustive, false}).depth(), 3);
}

TEST(Schedule, ExhaustiveMatchesBruteForceAndBeatsGreedy) {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 200; ++trial) {
    const int count = 1 + trial % 12;
    const GateList g{random_gates(rng, 5, count), DependencyMode::CommutingXX};
    for (bool shared : {true, false}) {
      const Schedule greedy = schedule_gates(g, {SchedulePolicy::Greedy, shared});
      const Schedule best = schedule_gates(g, {SchedulePolicy::Exhaustive, shared});
      EXPECT_EQ(best.depth(), brute_force_depth(g.gates, shared, false));
      EXPECT_LE(best.depth(), greedy.depth());
      EXPECT_LE(greedy.depth(), count);
      EXPECT_GE(best.depth(), (count + 1) / 2);
      std::multiset<int> all;
      for (int i = 0; i < count; ++i) all.insert(i);
      EXPECT_EQ(scheduled_indices(greedy), all);
      EXPECT_EQ(scheduled_indices(best), all);
    }
  }
}

TEST(Schedule, StrictOrderPairsOnlyNeighbours) {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 100; ++trial) {
    const GateList g{random_gates(rng, 4, 2 + trial % 9), DependencyMode::StrictOrder};
    for (auto policy : {SchedulePolicy::Greedy, SchedulePolicy::Exhaustive}) {
      const Schedule s = schedule_gates(g, {policy, true});
      int next = 0;
      for (const auto& l : s.layers) {
        // layers consume the input in order
        const int first = l.x->index;
        EXPECT_EQ(first, next);
        if (l.y) EXPECT_EQ(l.y->index, first + 1);
        next = first + l.size();
      }
      EXPECT_EQ(next, static_cast<int>(g.gates.size()));
      if (policy == SchedulePolicy::Exhaustive) EXPECT_EQ(s.depth(), brute_force_depth(g.gates, true, true));
    }
  }
}

TEST(Schedule, PreservesSemanticsOnSimulator) {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 100; ++trial) {
    const int qubits = 3 + trial % 4;
    const GateList g{random_gates(rng, qubits, 1 + trial % 10), DependencyMode::CommutingXX};
    Circuit prep(qubits);
    for (int q = 0; q < qubits; ++q) prep.add({Operation::ry(q, 0.2 + 0.37 * q)});
    Circuit par = prep;
    par.append(schedule_gates(g).to_circuit(qubits));
    Circuit seq = prep;
    seq.append(sequential_circuit(g, qubits));
    EXPECT_LT((simulate_state(par) - simulate_state(seq)).norm(), 1e-12);
  }
}

TEST(Schedule, DeterministicAndAxisAlternates) {
  std::mt19937_64 rng(2);
  const GateList g{random_gates(rng, 6, 10), DependencyMode::CommutingXX};
  const Schedule a = schedule_gates(g);
  const Schedule b = schedule_gates(g);
  EXPECT_EQ(to_text(a.to_circuit(6)), to_text(b.to_circuit(6)));
  for (const auto& l : a.layers) {
    EXPECT_EQ(l.x->axis, Axis::X);
    if (l.y) {
      EXPECT_EQ(l.y->axis, Axis::Y);
      EXPECT_LT(l.x->index, l.y->index);
    }
  }
}

TEST(Depth, RatiosFollowLayerOccupancy) {
  const Timing t{200e-6, 10e-6};
  EXPECT_DOUBLE_EQ(depth_report(schedule_gates(tfim_step()), t).ratio, 2.0);
  EXPECT_DOUBLE_EQ(depth_report(schedule_gates({{{{0, 1}, 0.5}}, DependencyMode::CommutingXX}), t).ratio, 1.0);
  const GateList three{{{{0, 1}, 0.5}, {{2, 3}, 0.5}, {{1, 2}, 0.5}}, DependencyMode::CommutingXX};
  const DepthReport r = depth_report(schedule_gates(three), t);
  EXPECT_DOUBLE_EQ(r.ratio, 1.5);
  EXPECT_DOUBLE_EQ(r.sequential, 3 * 200e-6);
  EXPECT_DOUBLE_EQ(r.parallel, 2 * 200e-6);
  EXPECT_LT(depth_report(schedule_gates(tfim_step()), t, 10e-6).ratio, 2.0);
}

TEST(Power, SharedIonFlaggedAboveBudget) {
  const GateList g{{{{0, 1}, 0.5}, {{1, 2}, 0.5}}, DependencyMode::CommutingXX};
  Schedule s = schedule_gates(g);
  ASSERT_EQ(s.depth(), 1);
  PulseSchedule px, py;
  px.pair = {10, 11};
  px.detuning = 1.0;
  px.segments = {{1e-4, 3.0, 2.0}};
  py = px;
  py.axis = Axis::Y;
  py.pair = {11, 12};
  py.segments = {{1e-4, -4.0, 1.0}};
  attach_power_report(s, {px, py}, {10, 11, 12}, 5.0);
  ASSERT_EQ(s.power.size(), 1u);
  EXPECT_EQ(s.power[0].qubit, 1);
  EXPECT_DOUBLE_EQ(s.power[0].max_amplitude, 6.0);
  EXPECT_TRUE(s.power[0].exceeds);
  EXPECT_FALSE(s.warnings.empty());
}

TEST(Validation, GateListRejectsBadPairs) {
  EXPECT_THROW((GateList{{{{1, 1}, 0.5}}}.validate()), ValidationError);
  EXPECT_THROW((GateList{{{{0, 5}, 0.5}}}.validate(5)), ValidationError);
  Circuit c(3);
  c.add({Operation::h(0)});
  EXPECT_THROW(gate_list_from_circuit(c), ValidationError);
}
