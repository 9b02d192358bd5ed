#include <random>

#include <gtest/gtest.h>

#include "oracles.hpp"

using namespace ionpar;

namespace {

const Chain& default_chain() {
  static const Chain chain = build_chain(default_trap());
  return chain;
}

PulseSchedule random_schedule(std::mt19937_64& rng, const ModeSet& modes, int segments, double duration) {
  std::uniform_real_distribution<double> amp(-kTwoPi * 80e3, kTwoPi * 80e3);
  std::uniform_real_distribution<double> frac(0.5, 1.5);
  std::uniform_real_distribution<double> phase(-kPi, kPi);
  std::uniform_real_distribution<double> offset(-kTwoPi * 40e3, kTwoPi * 40e3);
  PulseSchedule s;
  s.pair = {2, 4};
  s.axis = modes.axis;
  s.detuning = modes.frequencies(0) + offset(rng);
  s.phase = {phase(rng), phase(rng)};
  std::vector<double> w(segments);
  double sum = 0;
  for (auto& x : w) sum += (x = frac(rng));
  for (int i = 0; i < segments; ++i) s.segments.push_back({duration * w[i] / sum, amp(rng), amp(rng)});
  return s;
}

double scale(const PulseSchedule& s, const ModeSet& m) {
  double amp = 0;
  for (const auto& seg : s.segments) amp = std::max({amp, std::abs(seg.amplitude_p), std::abs(seg.amplitude_q)});
  return m.lamb_dicke.cwiseAbs().maxCoeff() * amp * s.duration();
}

}  // namespace

TEST(Displacement, ZeroDriveGivesZero) {
  const ModeSet& m = default_chain().x;
  PulseSchedule s;
  s.pair = {2, 4};
  s.detuning = m.frequencies(0) + kTwoPi * 3e3;
  s.segments = {{100e-6, 0.0, 0.0}, {100e-6, 0.0, 0.0}};
  EXPECT_EQ(alpha_final(s, m, 2, 0), Complex(0.0));
  EXPECT_EQ(chi_angle(s, m), 0.0);
}

TEST(Displacement, MatchesQuadratureOnRandomSchedules) {
  std::mt19937_64 rng(7);
  const ModeSet& m = default_chain().x;
  for (int trial = 0; trial < 4; ++trial) {
    const PulseSchedule s = random_schedule(rng, m, 5 + trial, 120e-6);
    for (int ion : {2, 4}) {
      for (int k = 0; k < m.mode_count(); k += 3) {
        const Complex closed = alpha_final(s, m, ion, k);
        const Complex ref = oracle::alpha(s, m, ion, k);
        EXPECT_LT(std::abs(closed - ref), 1e-9 * std::max(std::abs(ref), 1e-3 * scale(s, m)))
            << "trial " << trial << " ion " << ion << " mode " << k;
      }
    }
  }
}

TEST(Displacement, ResonantDriveHasFiniteLimit) {
  const ModeSet& m = default_chain().x;
  PulseSchedule s;
  s.pair = {2, 4};
  s.detuning = m.frequencies(1);
  s.segments = {{50e-6, kTwoPi * 20e3, kTwoPi * 20e3}};
  const Complex closed = alpha_final(s, m, 2, 1);
  ASSERT_TRUE(std::isfinite(closed.real()) && std::isfinite(closed.imag()));
  EXPECT_LT(std::abs(closed - oracle::alpha(s, m, 2, 1)), 1e-9 * std::abs(closed));
}

TEST(Displacement, FullLoopClosesCoRotatingTerm) {
  TrapConfig t = default_trap();
  t.ion_count = 2;
  t.qubit_ions.clear();
  const Chain c = build_chain(t);
  const double tau = 100e-6;
  PulseSchedule s;
  s.pair = {0, 1};
  s.detuning = c.x.frequencies(0) + kTwoPi / tau;
  s.segments = {{tau, kTwoPi * 50e3, 0.0}};
  const Complex a = alpha_final(s, c.x, 0, 0);
  const double open_scale = c.x.lamb_dicke(0, 0) * kTwoPi * 50e3 * tau;
  EXPECT_LT(std::abs(a), 1e-3 * open_scale);
  EXPECT_LT(std::abs(a - oracle::alpha(s, c.x, 0, 0)), 1e-9 * open_scale);
  const auto traj = displacement_trajectory(s, c.x, 0, 0);
  EXPECT_EQ(traj.front(), Complex(0.0));
  EXPECT_EQ(traj.back(), a);
}

TEST(GateAngle, MatchesDoubleQuadrature) {
  std::mt19937_64 rng(11);
  const ModeSet m = default_chain().y.top_modes(3);
  const PulseSchedule s = random_schedule(rng, m, 6, 80e-6);
  const double closed = chi_angle(s, m);
  const double ref = oracle::chi(s, m);
  EXPECT_LT(std::abs(closed - ref), 1e-8 * std::abs(ref));
}

TEST(GateAngle, BilinearInAmplitude) {
  std::mt19937_64 rng(3);
  const ModeSet& m = default_chain().x;
  const PulseSchedule s = random_schedule(rng, m, 9, 200e-6);
  const double chi = chi_angle(s, m);
  EXPECT_NEAR(chi_angle(s.scaled(2.0), m), 4.0 * chi, 1e-10 * std::abs(chi));
  double per_mode = 0.0;
  for (int k = 0; k < m.mode_count(); ++k) per_mode += chi_angle_mode(s, m, k);
  EXPECT_NEAR(per_mode, chi, 1e-12 * std::abs(chi));
}

TEST(Design, ClosesEveryModeAndHitsTarget) {
  const TrapConfig t = default_trap();
  const ModeSet& m = default_chain().x;
  const std::pair<int, int> ions{t.ion_for_qubit(3), t.ion_for_qubit(5)};
  const auto r = design_amplitude_modulated(ions, m, kDefaultGateDuration, default_detuning(m), kPi / 4);
  ASSERT_EQ(static_cast<int>(r.schedule.segments.size()), 2 * m.mode_count() + 1);
  for (int ion : {ions.first, ions.second}) {
    for (int k = 0; k < m.mode_count(); ++k) {
      EXPECT_LT(std::abs(oracle::alpha(r.schedule, m, ion, k)), 1e-10 * r.residual_scale) << "mode " << k;
    }
  }
  EXPECT_LT(r.max_residual, 1e-10 * r.residual_scale);
  EXPECT_NEAR(oracle::chi(r.schedule, m), kPi / 4, 1e-8);
  EXPECT_NEAR(r.achieved_angle, kPi / 4, 1e-12);
  for (const auto& seg : r.schedule.segments) {
    EXPECT_EQ(std::abs(seg.amplitude_p), std::abs(seg.amplitude_q));
    EXPECT_NEAR(seg.duration, kDefaultGateDuration / r.schedule.segments.size(), 1e-18);
  }
}

TEST(Design, NegativeAngle) {
  const ModeSet m = default_chain().y.top_modes(2);
  const auto r = design_amplitude_modulated({1, 3}, m, kDefaultGateDuration, default_detuning(m), -kPi / 8);
  EXPECT_NEAR(chi_angle(r.schedule, m), -kPi / 8, 1e-12);
  EXPECT_LT(r.max_residual, 1e-10 * r.residual_scale);
}

TEST(Design, SingleIonPairOnOneModeChain) {
  TrapConfig t = default_trap();
  t.ion_count = 2;
  t.qubit_ions.clear();
  const ModeSet m = build_chain(t).x.top_modes(1);
  const double tau = 100e-6;
  DesignOptions o;
  o.segments = 2;
  const auto r = design_amplitude_modulated({0, 1}, m, tau, m.frequencies(0) + kTwoPi / tau, kPi / 4, o);
  EXPECT_LT(r.max_residual, 1e-10 * r.residual_scale);
  EXPECT_NEAR(chi_angle(r.schedule, m), kPi / 4, 1e-10);
}

TEST(Design, ZeroAngleGivesZeroPulse) {
  const ModeSet& m = default_chain().x;
  const auto r = design_amplitude_modulated({2, 4}, m, kDefaultGateDuration, default_detuning(m), 0.0);
  for (const auto& s : r.schedule.segments) {
    EXPECT_EQ(s.amplitude_p, 0.0);
    EXPECT_EQ(s.amplitude_q, 0.0);
  }
  EXPECT_EQ(r.max_residual, 0.0);
}

TEST(Design, TooFewSegmentsIsInfeasible) {
  const ModeSet& m = default_chain().x;
  DesignOptions o;
  o.segments = m.mode_count();
  EXPECT_THROW(design_amplitude_modulated({2, 4}, m, kDefaultGateDuration, default_detuning(m), kPi / 4, o),
               DesignError);
}

TEST(Design, PowerLimitIsEnforced) {
  const ModeSet& m = default_chain().x;
  DesignOptions o;
  o.max_amplitude = kTwoPi * 1e3;
  EXPECT_THROW(design_amplitude_modulated({2, 4}, m, kDefaultGateDuration, default_detuning(m), kPi / 4, o),
               PowerLimitError);
}

TEST(Design, DetuningOutsideSidebandsRejected) {
  const ModeSet& m = default_chain().x;
  EXPECT_THROW(design_amplitude_modulated({2, 4}, m, kDefaultGateDuration, kTwoPi * 1e6, kPi / 4), ValidationError);
  EXPECT_THROW(design_amplitude_modulated({2, 2}, m, kDefaultGateDuration, default_detuning(m), kPi / 4),
               ValidationError);
}

TEST(Design, Deterministic) {
  const ModeSet& m = default_chain().y;
  const auto a = design_amplitude_modulated({1, 3}, m, kDefaultGateDuration, default_detuning(m), kPi / 4);
  const auto b = design_amplitude_modulated({1, 3}, m, kDefaultGateDuration, default_detuning(m), kPi / 4);
  ASSERT_EQ(a.schedule.segments.size(), b.schedule.segments.size());
  for (std::size_t i = 0; i < a.schedule.segments.size(); ++i) {
    EXPECT_EQ(a.schedule.segments[i].amplitude_p, b.schedule.segments[i].amplitude_p);
    EXPECT_EQ(a.schedule.segments[i].amplitude_q, b.schedule.segments[i].amplitude_q);
  }
}

TEST(Design, ShortPulseWarnsAboutLambDicke) {
  const ModeSet& m = default_chain().x;
  const auto r = design_amplitude_modulated({2, 4}, m, 100e-6, default_detuning(m), kPi / 4);
  EXPECT_GT(r.lamb_dicke, kLambDickeWarning);
  EXPECT_FALSE(r.warnings.empty());
}

TEST(SummedDrive, SingleScheduleIsItsOwnProfile) {
  const ModeSet& m = default_chain().x;
  const auto r = design_amplitude_modulated({2, 4}, m, kDefaultGateDuration, default_detuning(m), kPi / 4);
  const SummedDrive d = summed_drive({r.schedule}, 2);
  ASSERT_EQ(d.pieces.size(), r.schedule.segments.size());
  for (std::size_t i = 0; i < d.pieces.size(); ++i) {
    EXPECT_EQ(d.pieces[i].amplitude, std::abs(r.schedule.segments[i].amplitude_p));
  }
  EXPECT_EQ(d.contributing, std::vector<int>{0});
}

TEST(SummedDrive, SharedIonBoundedByIndividualMaxima) {
  const TrapConfig t = default_trap();
  const Chain& c = default_chain();
  const int shared = t.ion_for_qubit(5);
  const auto x = design_amplitude_modulated({t.ion_for_qubit(3), shared}, c.x, kDefaultGateDuration,
                                            default_detuning(c.x), kPi / 4);
  const auto y = design_amplitude_modulated({t.ion_for_qubit(2), shared}, c.y, kDefaultGateDuration,
                                            default_detuning(c.y), kPi / 4);
  const SummedDrive d = summed_drive({x.schedule, y.schedule}, shared);
  const double mx = summed_drive({x.schedule}, shared).max_amplitude;
  const double my = summed_drive({y.schedule}, shared).max_amplitude;
  EXPECT_LE(d.max_amplitude, mx + my + 1e-9);
  EXPECT_GE(d.max_amplitude, std::max(mx, my));
  EXPECT_EQ(overlapping_ions({x.schedule, y.schedule}), std::vector<int>{shared});
}

TEST(SummedDrive, DisjointPairsDoNotOverlap) {
  const Chain& c = default_chain();
  const auto x = design_amplitude_modulated({1, 3}, c.x, kDefaultGateDuration, default_detuning(c.x), kPi / 4);
  const auto y = design_amplitude_modulated({2, 4}, c.y, kDefaultGateDuration, default_detuning(c.y), kPi / 4);
  EXPECT_TRUE(overlapping_ions({x.schedule, y.schedule}).empty());
  const auto z = design_amplitude_modulated({2, 4}, c.y, 300e-6, default_detuning(c.y), kPi / 4);
  EXPECT_THROW(summed_drive({x.schedule, z.schedule}, 2), AlignmentError);
}
