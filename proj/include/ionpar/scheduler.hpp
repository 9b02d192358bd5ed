#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ionpar/circuit.hpp"
#include "ionpar/pulse.hpp"

namespace ionpar {

/// exp(i angle X_p X_q) on 0-based qubits.
struct XXGate {
  std::pair<int, int> pair{0, 1};
  double angle = kPi / 4;
};

enum class DependencyMode { StrictOrder, CommutingXX };
enum class SchedulePolicy { Greedy, Exhaustive };

struct GateList {
  std::vector<XXGate> gates;
  DependencyMode mode = DependencyMode::CommutingXX;

  /// Throws ValidationError for repeated or out-of-range qubits (qubit_count <= 0 skips the range check).
  void validate(int qubit_count = 0) const;
};

/// MS gates of an MS-only circuit, in moment order.
GateList gate_list_from_circuit(const Circuit& circuit, DependencyMode mode = DependencyMode::CommutingXX);

struct ScheduledGate {
  int index = 0;  // position in the input list
  XXGate gate;
  Axis axis = Axis::X;
};

struct Layer {
  std::optional<ScheduledGate> x;
  std::optional<ScheduledGate> y;
  int size() const { return (x ? 1 : 0) + (y ? 1 : 0); }
};

struct PowerEntry {
  int layer = 0;
  int qubit = 0;
  double max_amplitude = 0.0;  // rad/s
  bool exceeds = false;
};

struct Schedule {
  std::vector<Layer> layers;
  std::vector<PowerEntry> power;
  std::vector<std::string> warnings;

  int depth() const { return static_cast<int>(layers.size()); }
  int gate_count() const;
  /// One moment per layer with the X gate first.
  Circuit to_circuit(int qubit_count) const;
};

struct ScheduleOptions {
  SchedulePolicy policy = SchedulePolicy::Greedy;
  bool allow_shared_ion = true;
};

/// Two gates may share a layer when they share at most one qubit (none if shared ions are forbidden).
bool compatible(const XXGate& a, const XXGate& b, bool allow_shared_ion = true);

Schedule schedule_gates(const GateList& gates, const ScheduleOptions& options = {});

/// One MS per moment on the X bus, in input order.
Circuit sequential_circuit(const GateList& gates, int qubit_count);

struct DepthReport {
  double sequential = 0.0;
  double parallel = 0.0;
  double ratio = 1.0;
};

/// Wall time of the gates run one per moment versus layer by layer, each plus `single_qubit_time`.
DepthReport depth_report(const Schedule& schedule, const Timing& timing = {}, double single_qubit_time = 0.0);

/// Summed Rabi frequency on every qubit addressed by both gates of a layer. `pulses[i]` is the
/// pulse of input gate i and `ion_of_qubit` maps qubits to chain ions. Entries above
/// max_amplitude are flagged and produce a warning.
void attach_power_report(Schedule& schedule, const std::vector<PulseSchedule>& pulses,
                         const std::vector<int>& ion_of_qubit, double max_amplitude);

}  // namespace ionpar
