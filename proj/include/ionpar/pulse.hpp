#pragma once

#include <array>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "ionpar/chain.hpp"
#include "ionpar/core.hpp"

namespace ionpar {

/// Constant-amplitude piece of a pulse. Amplitudes are Rabi frequencies (rad/s);
/// a negative value encodes a pi phase flip.
struct Segment {
  double duration = 0.0;
  double amplitude_p = 0.0;
  double amplitude_q = 0.0;
};

/// Segmented amplitude-modulated MS pulse on the ion pair (p, q).
struct PulseSchedule {
  std::pair<int, int> pair{0, 1};  // chain ion indices
  Axis axis = Axis::X;
  double detuning = 0.0;           // mu, rad/s
  std::array<double, 2> phase{0.0, 0.0};  // motional phase phi_p, phi_q (rad)
  std::vector<Segment> segments;

  double duration() const;
  /// Start time of every segment plus the final time.
  std::vector<double> boundaries() const;
  double amplitude(int ion, int segment) const;
  double phase_of(int ion) const;
  bool drives(int ion) const { return ion == pair.first || ion == pair.second; }
  /// Same schedule with all amplitudes multiplied by s.
  PulseSchedule scaled(double s) const;
  /// Throws ValidationError on inconsistent data.
  void validate() const;
};

struct GateSpec {
  std::pair<int, int> pair{0, 1};
  Axis axis = Axis::X;
  double target_angle = kPi / 4;

  void validate() const;
};

/// alpha_{i,k}(tau) = -int_0^tau eta_k^i Omega_i(t) cos(mu t - phi_i) e^{i w_k t} dt.
Complex alpha_final(const PulseSchedule& schedule, const ModeSet& modes, int ion, int mode);

/// alpha_{i,k} at every segment boundary (first entry is 0, last is alpha(tau)).
std::vector<Complex> displacement_trajectory(const PulseSchedule& schedule, const ModeSet& modes,
                                             int ion, int mode);

/// Gate angle chi_pq accumulated by the second Magnus term, summed over all modes.
double chi_angle(const PulseSchedule& schedule, const ModeSet& modes);

/// Per-mode contribution to chi_angle.
double chi_angle_mode(const PulseSchedule& schedule, const ModeSet& modes, int mode);

/// Bilinear chi kernel K with chi = Omega_p^T K Omega_q over segment amplitudes.
MatrixXd chi_kernel(const PulseSchedule& schedule, const ModeSet& modes);

/// Closure constraint matrix: row pairs (Re, Im) per mode, one column per segment.
/// Entry is int_seg cos(mu t - phi) e^{i w_k t} dt for unit amplitude.
MatrixXd closure_matrix(const PulseSchedule& schedule, const ModeSet& modes);

/// max over driven ions, modes and segments of |eta_k^i Omega / (mu - w_k)|.
double lamb_dicke_metric(const PulseSchedule& schedule, const ModeSet& modes);

inline constexpr double kLambDickeWarning = 0.3;

/// Gate duration used when none is configured (s).
inline constexpr double kDefaultGateDuration = 400e-6;

struct DesignOptions {
  int segments = 0;  // 0 selects 2 * modes + 1
  /// Rabi-frequency ceiling (rad/s).
  double max_amplitude = kTwoPi * 2.0e6;
  /// Singular values below rank_tolerance * sigma_max count as null directions.
  double rank_tolerance = 1e-12;
};

struct DesignResult {
  PulseSchedule schedule;
  double max_residual = 0.0;     // max_{i,k} |alpha_{i,k}(tau)|
  double residual_scale = 0.0;   // max_k |eta_k Omega_max tau|
  double achieved_angle = 0.0;
  double lamb_dicke = 0.0;
  int null_space_dim = 0;
  std::vector<std::string> warnings;
};

/// Default detuning: 2 pi x 3 kHz above the highest mode of the set.
double default_detuning(const ModeSet& modes);

/// Shared-envelope amplitude-modulated MS design that closes every mode in `modes`
/// and reaches `target_angle` with the minimum-norm amplitude vector.
DesignResult design_amplitude_modulated(std::pair<int, int> pair, const ModeSet& modes,
                                        double duration, double detuning, double target_angle,
                                        const DesignOptions& options = {});

/// Piecewise-constant total |Omega| addressed to one ion by simultaneous schedules.
struct DrivePiece {
  double start = 0.0;
  double end = 0.0;
  double amplitude = 0.0;
};

struct SummedDrive {
  std::vector<DrivePiece> pieces;
  double max_amplitude = 0.0;
  /// Schedules (by position) that actually address the ion.
  std::vector<int> contributing;
};

SummedDrive summed_drive(const std::vector<PulseSchedule>& schedules, int ion);

/// Ions addressed by more than one schedule.
std::vector<int> overlapping_ions(const std::vector<PulseSchedule>& schedules);

}  // namespace ionpar
