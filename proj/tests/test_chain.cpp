#include <cmath>

#include <gtest/gtest.h>

#include "ionpar/chain.hpp"
#include "oracles.hpp"

using namespace ionpar;

namespace {

TrapConfig trap(int n, double fx = kTwoPi * 3.0e6, double fy = kTwoPi * 2.9e6, double fz = kTwoPi * 0.4e6) {
  TrapConfig t = default_trap();
  t.ion_count = n;
  t.radial_freq_x = fx;
  t.radial_freq_y = fy;
  t.axial_freq = fz;
  t.qubit_ions.clear();
  return t;
}

}  // namespace

TEST(Equilibrium, SingleIonSitsAtCentre) {
  const auto eq = solve_equilibrium(trap(1));
  ASSERT_EQ(eq.positions.size(), 1);
  EXPECT_EQ(eq.positions(0), 0.0);
}

TEST(Equilibrium, TwoIonsClosedForm) {
  const auto eq = solve_equilibrium(trap(2));
  const double u = std::cbrt(0.25);
  EXPECT_NEAR(eq.positions(0), -u, 1e-12);
  EXPECT_NEAR(eq.positions(1), u, 1e-12);
}

TEST(Equilibrium, ThreeIonsClosedForm) {
  const auto eq = solve_equilibrium(trap(3));
  const double u = std::cbrt(1.25);
  EXPECT_NEAR(eq.positions(0), -u, 1e-12);
  EXPECT_NEAR(eq.positions(1), 0.0, 1e-12);
  EXPECT_NEAR(eq.positions(2), u, 1e-12);
}

TEST(Equilibrium, MatchesGradientDescentUpToTenIons) {
  for (int n = 1; n <= 10; ++n) {
    const auto eq = solve_equilibrium(trap(n, kTwoPi * 5e6, kTwoPi * 4.9e6));
    const VectorXd oracle = oracle::descend_equilibrium(n);
    EXPECT_LT((eq.positions - oracle).cwiseAbs().maxCoeff(), 1e-9) << "N = " << n;
    EXPECT_LT(eq.residual_norm, 1e-12);
    EXPECT_LT(std::abs(eq.positions.sum()), 1e-12);
    for (int i = 1; i < n; ++i) EXPECT_GT(eq.positions(i), eq.positions(i - 1));
  }
}

TEST(Modes, TwoIonAxialRatioIsRootThree) {
  const Chain c = build_chain(trap(2));
  EXPECT_NEAR(c.z.frequencies(0) / c.z.frequencies(1), std::sqrt(3.0), 1e-10);
  EXPECT_NEAR(c.z.frequencies(1), kTwoPi * 0.4e6, 1e-10 * kTwoPi * 0.4e6);
}

TEST(Modes, TwoIonRadialRockingMode) {
  const TrapConfig t = trap(2);
  const Chain c = build_chain(t);
  EXPECT_NEAR(c.x.frequencies(0), t.radial_freq_x, 1e-10 * t.radial_freq_x);
  const double rocking = std::sqrt(t.radial_freq_x * t.radial_freq_x - t.axial_freq * t.axial_freq);
  EXPECT_NEAR(c.x.frequencies(1), rocking, 1e-10 * rocking);
  EXPECT_NEAR(c.x.lamb_dicke(0, 0), c.x.lamb_dicke(1, 0), 1e-15);
  EXPECT_NEAR(c.x.lamb_dicke(0, 1), -c.x.lamb_dicke(1, 1), 1e-15);
}

TEST(Modes, SingleIonLambDicke) {
  const TrapConfig t = trap(1);
  const Chain c = build_chain(t);
  ASSERT_EQ(c.x.mode_count(), 1);
  EXPECT_NEAR(c.x.frequencies(0), t.radial_freq_x, 1e-6);
  EXPECT_NEAR(c.x.mode_vectors(0, 0), 1.0, 1e-15);
  const double eta = t.wavevector_x * std::sqrt(constants::hbar / (2.0 * t.ion_mass * t.radial_freq_x));
  EXPECT_NEAR(c.x.lamb_dicke(0, 0), eta, 1e-12 * eta);
}

TEST(Modes, OrthonormalAndOrderedForEveryAxis) {
  for (int n = 1; n <= 10; ++n) {
    const TrapConfig t = trap(n, kTwoPi * 5e6, kTwoPi * 4.9e6);
    const Chain c = build_chain(t);
    for (const ModeSet* m : {&c.x, &c.y, &c.z}) {
      const MatrixXd gram = m->mode_vectors.transpose() * m->mode_vectors;
      EXPECT_LT((gram - MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff(), 1e-10);
      const VectorXd rows = m->mode_vectors.rowwise().squaredNorm();
      EXPECT_LT((rows.array() - 1.0).abs().maxCoeff(), 1e-10);
      for (int k = 1; k < n; ++k) EXPECT_LE(m->frequencies(k), m->frequencies(k - 1));
      EXPECT_TRUE(m->lamb_dicke.allFinite());
      for (int k = 0; k < n; ++k) {
        const double peak = m->mode_vectors.col(k).cwiseAbs().maxCoeff();
        for (int i = 0; i < n; ++i) {
          if (std::abs(m->mode_vectors(i, k)) >= peak * (1 - 1e-9)) {
            EXPECT_GT(m->mode_vectors(i, k), 0.0);
            break;
          }
        }
      }
    }
    EXPECT_LE(c.x.frequencies(0), t.radial_freq_x * (1 + 1e-12));
    EXPECT_GE(c.z.frequencies(n - 1), t.axial_freq * (1 - 1e-12));
    // centre-of-mass radial mode has uniform participation
    EXPECT_LT((c.x.mode_vectors.col(0).array() - 1.0 / std::sqrt(double(n))).abs().maxCoeff(), 1e-9);
  }
}

TEST(Modes, DefaultChainSpectrum) {
  const Chain c = build_chain(default_trap());
  EXPECT_NEAR(c.x.frequencies(0) / kTwoPi, 3.0e6, 1e-3);
  EXPECT_NEAR(c.y.frequencies(0) / kTwoPi, 2.9e6, 1e-3);
  EXPECT_NEAR(c.z.frequencies(6) / kTwoPi, 0.4e6, 1e-3);
  const auto sep = spectral_separation(c.x, c.y);
  EXPECT_FALSE(sep.disjoint);
  EXPECT_LT(sep.gap, 0.0);
}

TEST(Modes, SeparatedBandsReportedDisjoint) {
  const Chain c = build_chain(trap(3, kTwoPi * 3.0e6, kTwoPi * 2.0e6));
  const auto sep = spectral_separation(c.x, c.y);
  EXPECT_TRUE(sep.disjoint);
  EXPECT_NEAR(sep.gap, sep.x_low - sep.y_high, 1e-6);
}

TEST(TrapValidation, RejectsDegenerateAndUnstableConfigs) {
  EXPECT_THROW(trap(2, kTwoPi * 3e6, kTwoPi * 3e6).validate(), ValidationError);
  EXPECT_THROW(trap(2, kTwoPi * 0.3e6, kTwoPi * 2.9e6).validate(), ValidationError);
  EXPECT_THROW(trap(0).validate(), ValidationError);
  EXPECT_THROW(build_chain(trap(20, kTwoPi * 0.5e6, kTwoPi * 0.45e6)), ChainInstabilityError);
}

TEST(Modes, SubsetKeepsTopModes) {
  const Chain c = build_chain(default_trap());
  const ModeSet top = c.x.top_modes(2);
  ASSERT_EQ(top.mode_count(), 2);
  EXPECT_EQ(top.source_modes, (std::vector<int>{0, 1}));
  EXPECT_EQ(top.frequencies(1), c.x.frequencies(1));
  EXPECT_EQ(top.lamb_dicke.col(1), c.x.lamb_dicke.col(1));
}
