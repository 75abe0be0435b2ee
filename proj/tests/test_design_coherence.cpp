#include "support/oracles.hpp"

#include <pulseforge/analysis.hpp>
#include <pulseforge/design_coherence.hpp>
#include <pulseforge/errors.hpp>
#include <pulseforge/family_dynamics.hpp>

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace pulseforge;

namespace {

const DecoherenceRates kDevice = rates_from_times(kReferenceTimes);

CoherenceTarget target(double h2, double h3, double tf = 3.0) {
  CoherenceTarget t;
  t.h2_final = h2;
  t.h3_final = h3;
  t.t_f = tf;
  return t;
}

const CoherenceDesign& reference_design() {
  static const CoherenceDesign d = design_coherence_pulses(target(0.2, 0.3), kDevice);
  return d;
}

double h2_of(const DensityMatrix& m) { return m(row_of(2), row_of(0)).real(); }
double h3_of(const DensityMatrix& m) { return m(row_of(0), row_of(1)).imag(); }
double h1_of(const DensityMatrix& m) { return m(row_of(1), row_of(2)).imag(); }

}  // namespace

TEST(CoherenceDrive, SolvesTheLinearSystem) {
  // The returned drive must produce the requested h2', h3' through the
  // master equation itself.
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  int checked = 0;
  for (int k = 0; k < 1000; ++k) {
    const DensityParams p = oracle::random_mixed(rng);
    const double h2dot = u(rng), h3dot = u(rng);
    const CoherenceDrive c = coherence_drive(p, h2dot, h3dot, kDevice);
    if (std::abs(c.denominator) < 1e-3) continue;
    ++checked;
    const auto rhs = oracle::lindblad(oracle::family(p), c.drive.omega01, c.drive.omega12, kDevice);
    EXPECT_NEAR(rhs[2][0].real(), h2dot, 1e-9 * (1.0 + std::abs(c.drive.omega01)));
    EXPECT_NEAR(rhs[0][1].imag(), h3dot, 1e-9 * (1.0 + std::abs(c.drive.omega01)));
    EXPECT_NEAR(c.denominator, 2.0 * p.h1 * p.h2 - 2.0 * p.h3 * (2.0 * p.f1 + p.f2 - 1.0), 1e-15);
  }
  EXPECT_GT(checked, 500);
}

TEST(PopulationDrive, SolvesForPrescribedPopulations) {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int k = 0; k < 1000; ++k) {
    const DensityParams p = oracle::random_mixed(rng);
    if (std::abs(p.h1) < 1e-2 || std::abs(p.h3) < 1e-2) continue;
    const double f1dot = u(rng), f2dot = u(rng);
    const Drive d = population_drive(p, f1dot, f2dot, kDevice);
    const auto rhs = oracle::lindblad(oracle::family(p), d.omega01, d.omega12, kDevice);
    EXPECT_NEAR(rhs[1][1].real(), f1dot, 1e-9 * (1.0 + std::abs(d.omega01) + std::abs(d.omega12)));
    EXPECT_NEAR(rhs[2][2].real(), f2dot, 1e-9 * (1.0 + std::abs(d.omega12)));
  }
}

TEST(PopulationDrive, ZeroOverZeroIsZero) {
  const Drive d = population_drive({0, 0, 0, 0, 0}, 0.0, 0.0, kDevice);
  EXPECT_EQ(d.omega01, 0.0);
  EXPECT_EQ(d.omega12, 0.0);
  EXPECT_TRUE(std::isinf(population_drive({0, 0, 0, 0, 0}, 1.0, 0.0, kDevice).omega01));
}

TEST(CoherenceDesign, ReferenceTargetClosedLoop) {
  const CoherenceDesign& d = reference_design();
  ASSERT_TRUE(d.report.feasible()) << d.report.detail;
  const Trajectory traj = evolve(ground_state(), d.pulses, kDevice);
  EXPECT_NEAR(h2_of(traj.states.back()), 0.2, 1e-3);
  EXPECT_NEAR(h3_of(traj.states.back()), 0.3, 1e-3);
  for (std::size_t k = 0; k < traj.size(); ++k) {
    const double t = traj.times[k];
    EXPECT_NEAR(h2_of(traj.states[k]), d.target.h2(t), 1e-3);
    EXPECT_NEAR(h3_of(traj.states[k]), d.target.h3(t), 1e-3);
    EXPECT_NEAR(h1_of(traj.states[k]), d.designed[k].h1, 1e-3);
  }
  EXPECT_LE(d.h1_prediction_error, 1e-3);
  EXPECT_LE(d.report.closed_loop_error, 1e-3);
}

TEST(CoherenceDesign, ReferenceValuesFrozen) {
  const CoherenceDesign& d = reference_design();
  EXPECT_NEAR(d.report.max_omega01, 2.0087, 5e-3);
  EXPECT_NEAR(d.report.max_omega12, 11.3509, 5e-3);
  EXPECT_LE(d.report.closed_loop_error, 1e-5);
}

TEST(CoherenceDesign, PurityBoundAlongTrajectory) {
  const CoherenceDesign& d = reference_design();
  for (const auto& p : d.designed) {
    const double margin = 1.0 - p.f1 * p.f1 - p.f2 * p.f2 - (1 - p.f1 - p.f2) * (1 - p.f1 - p.f2) -
                          2 * p.h1 * p.h1 - 2 * p.h2 * p.h2 - 2 * p.h3 * p.h3;
    EXPECT_GE(margin, -1e-9);
    EXPECT_NEAR(purity_margin(p), margin, 1e-12);
  }
  EXPECT_GE(d.min_purity_margin, -1e-9);
}

TEST(CoherenceDesign, ZeroTargetStaysInGround) {
  const CoherenceDesign d = design_coherence_pulses(target(0.0, 0.0), kDevice);
  EXPECT_EQ(d.pulses.max_abs_omega01(), 0.0);
  EXPECT_EQ(d.pulses.max_abs_omega12(), 0.0);
  const Trajectory traj = evolve(ground_state(), d.pulses, kDevice);
  EXPECT_EQ((traj.states.back() - ground_state()).cwiseAbs().maxCoeff(), 0.0);
}

TEST(CoherenceDesign, OutsidePurityDiscRejected) {
  try {
    design_coherence_pulses(target(0.5, 0.5), kDevice);
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InfeasibleTarget);
  }
  EXPECT_EQ(try_design_coherence(target(0.5, 0.5), kDevice).report.reason, Infeasibility::constraint);
  EXPECT_FALSE(within_constraints(target(0.55, 0.0)));
  EXPECT_TRUE(within_constraints(target(0.4, -0.4)));
}

TEST(CoherenceDesign, CollapseIsReportedAsSingular) {
  // Long ramps push the denominator through zero for large targets.
  int singular = 0;
  for (double h2 : {0.3, 0.4, -0.3}) {
    for (double h3 : {0.3, 0.4, -0.4}) {
      const CoherenceTarget t = target(h2, h3, 10.0);
      if (!within_constraints(t)) continue;
      const CoherenceDesign d = try_design_coherence(t, kDevice);
      if (d.report.reason != Infeasibility::singular) continue;
      ++singular;
      try {
        design_coherence_pulses(t, kDevice);
        ADD_FAILURE();
      } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::DenominatorCollapse);
      }
    }
  }
  EXPECT_GT(singular, 0);
}

TEST(CoherenceDesign, ClosedLoopOnCoarseGrid) {
  int feasible = 0;
  for (int i = -10; i <= 10; ++i) {
    for (int j = -10; j <= 10; ++j) {
      const CoherenceTarget t = target(0.05 * i, 0.05 * j);
      if (!within_constraints(t)) continue;
      const CoherenceDesign d = try_design_coherence(t, kDevice);
      if (!d.report.feasible()) continue;
      ++feasible;
      EXPECT_LE(d.report.closed_loop_error, 1e-3) << t.h2_final << ", " << t.h3_final;
      EXPECT_LE(d.h1_prediction_error, 1e-3);
      EXPECT_GE(d.min_purity_margin, -1e-7);
    }
  }
  EXPECT_GT(feasible, 20);
}

TEST(CoherenceDesign, FreeDecayWithoutDrive) {
  // Undriven, the coherences decay independently; over 1.2 us
  //   h3 -> exp(-(gamma1 + Gamma1) t / 2) = exp(-t / T2^01),
  //   h2 -> exp(-(gamma2 + Gamma2) t / 2).
  // Pure state 0.7 |0> - 0.5 i |1> + c2 |2>.
  const double c0 = 0.7, c1 = -0.5, c2 = std::sqrt(1.0 - c0 * c0 - c1 * c1);
  const DensityParams p{c1 * c1, c2 * c2, c1 * c2, c0 * c2, -c0 * c1};
  const Trajectory traj = evolve(params_to_matrix(p), PulseSchedule::zero(1.2, 0.01), kDevice);
  const double r3 = h3_of(traj.states.back()) / p.h3;
  const double r2 = h2_of(traj.states.back()) / p.h2;
  EXPECT_NEAR(r3, std::exp(-1.2 / 6.0), 1e-9);
  EXPECT_NEAR(r3, 0.8187, 1e-4);
  EXPECT_NEAR(r2, std::exp(-0.5 * (kDevice.gamma2 + kDevice.Gamma2) * 1.2), 1e-9);
  EXPECT_NEAR(r2, 0.6495, 1e-4);
}

TEST(CoherenceDesign, DrivenHoldKeepsTargets) {
  // A long plateau: the driven loop holds the coherences where free decay
  // would lose a fifth of h3.
  CoherenceTarget t = target(0.1, 0.2, 3.0);
  t.a = 50.0 / 1.5;
  const CoherenceDesign d = try_design_coherence(t, kDevice);
  ASSERT_TRUE(d.report.feasible()) << d.report.detail;
  const Trajectory traj = evolve(ground_state(), d.pulses, kDevice);
  for (std::size_t k = 0; k < traj.size(); ++k) {
    if (traj.times[k] < 1.8) continue;
    EXPECT_NEAR(h2_of(traj.states[k]), 0.1, 1e-3);
    EXPECT_NEAR(h3_of(traj.states[k]), 0.2, 1e-3);
  }
}
