#include "support/oracles.hpp"

#include <pulseforge/analysis.hpp>
#include <pulseforge/design_population.hpp>
#include <pulseforge/errors.hpp>
#include <pulseforge/family_dynamics.hpp>
#include <pulseforge/logistic.hpp>

#include <gtest/gtest.h>

#include <cmath>

using namespace pulseforge;

namespace {

const DecoherenceRates kDevice = rates_from_times(kReferenceTimes);

PopulationTarget target(double p1, double p2, double tf = 3.0) {
  PopulationTarget t;
  t.p1_final = p1;
  t.p2_final = p2;
  t.t_f = tf;
  return t;
}

// One design shared by several tests.
const PopulationDesign& reference_design() {
  static const PopulationDesign d = design_population_pulses(target(0.3, 0.2), kDevice);
  return d;
}

}  // namespace

TEST(Logistic, Midpoint) {
  EXPECT_DOUBLE_EQ(sigmoid_f(1.5, 3.0, 50.0 / 3.0), 0.5);
}

TEST(Logistic, StartValue) {
  EXPECT_NEAR(sigmoid_f(0.0, 3.0, default_gradient(3.0)), 1.0 / (1.0 + std::exp(25.0)), 1e-24);
  EXPECT_NEAR(sigmoid_f(0.0, 3.0, default_gradient(3.0)), 1.3887943864771144e-11, 1e-22);
}

TEST(Logistic, Symmetry) {
  for (double t = 0.0; t <= 3.0; t += 0.01) {
    EXPECT_NEAR(sigmoid_f(t, 3.0, 50.0 / 3.0) + sigmoid_f(3.0 - t, 3.0, 50.0 / 3.0), 1.0, 1e-15);
  }
}

TEST(Logistic, DerivativeIsAnalytic) {
  const double a = 50.0 / 3.0;
  for (double t = 0.0; t <= 3.0; t += 0.01) {
    const double f = sigmoid_f(t, 3.0, a);
    EXPECT_NEAR(sigmoid_derivative(t, 3.0, a), a * f * (1.0 - f), 1e-12);
    const double h = 1e-6;
    const double fd = (sigmoid_f(t + h, 3.0, a) - sigmoid_f(t - h, 3.0, a)) / (2.0 * h);
    EXPECT_NEAR(sigmoid_derivative(t, 3.0, a), fd, 1e-6);
  }
}

TEST(Logistic, NoOverflowFarOutside) {
  EXPECT_EQ(sigmoid_f(-1e6, 3.0, 50.0), 0.0);
  EXPECT_EQ(sigmoid_f(1e6, 3.0, 50.0), 1.0);
  EXPECT_EQ(sigmoid_derivative(1e6, 3.0, 50.0), 0.0);
}

TEST(PopulationTarget, DefaultGradient) {
  EXPECT_DOUBLE_EQ(target(0.3, 0.2, 3.0).gradient(), 50.0 / 3.0);
  PopulationTarget t = target(0.3, 0.2);
  t.a = 7.0;
  EXPECT_DOUBLE_EQ(t.gradient(), 7.0);
}

TEST(PopulationDesign, ReferenceTargetClosedLoop) {
  const PopulationDesign& d = reference_design();
  ASSERT_TRUE(d.report.feasible()) << d.report.detail;
  EXPECT_TRUE(d.report.verified);
  EXPECT_LE(d.report.closed_loop_error, 1e-3);
  const Trajectory traj = evolve(ground_state(), d.pulses, kDevice);
  const Populations p = populations(traj.states.back());
  EXPECT_NEAR(p[0], 0.5, 1e-3);
  EXPECT_NEAR(p[1], 0.3, 1e-3);
  EXPECT_NEAR(p[2], 0.2, 1e-3);
  EXPECT_LE(population_tracking_error(d.target, traj), 1e-3);
}

TEST(PopulationDesign, ReferencePulseAmplitudes) {
  // Frozen from an independent design of the same target.
  const PopulationDesign& d = reference_design();
  EXPECT_NEAR(d.report.max_omega01, 3.2999, 5e-3);
  EXPECT_NEAR(d.report.max_omega12, 7.0677, 5e-3);
  EXPECT_EQ(d.report.capped_points, 0u);
  EXPECT_NEAR(d.report.delta, 3e-4, 1e-15);
  EXPECT_EQ(d.pulses.size(), 3001u);
}

TEST(PopulationDesign, DesignedStatesArePhysical) {
  const PopulationDesign& d = reference_design();
  for (const auto& p : d.designed) {
    EXPECT_TRUE(oracle::principal_minors_nonnegative(oracle::family(p), 1e-7));
  }
  EXPECT_GE(d.report.min_eigenvalue, -1e-7);
}

TEST(PopulationDesign, MasterEquationReproducesPrescribedRates) {
  const PopulationDesign& d = reference_design();
  const LogisticRamp ramp = d.target.ramp();
  for (std::size_t k = 1; k < d.pulses.size(); k += 7) {
    const double t = d.pulses.time(k);
    const auto rhs = oracle::lindblad(oracle::family(d.designed[k]), d.pulses.omega01()[k],
                                      d.pulses.omega12()[k], kDevice);
    EXPECT_NEAR(rhs[1][1].real(), ramp.derivative(t) * 0.3, 1e-6) << "t = " << t;
    EXPECT_NEAR(rhs[2][2].real(), ramp.derivative(t) * 0.2, 1e-6) << "t = " << t;
  }
}

TEST(PopulationDesign, LatePulsesApproachOffsetDrive) {
  // As f -> 1 the drive only has to offset relaxation:
  //   O12 -> f2 Gamma2 / (2 h1),  O01 -> f1 Gamma1 / (2 h3).
  // The coherences keep decaying, so the limit is evaluated with the
  // instantaneous h rather than as a constant.
  const PopulationDesign& d = reference_design();
  const std::size_t n = d.pulses.size();
  for (std::size_t k = n - n / 10; k < n; ++k) {
    const DensityParams& p = d.designed[k];
    const double w12 = p.f2 * kDevice.Gamma2 / (2.0 * p.h1);
    const double w01 = p.f1 * kDevice.Gamma1 / (2.0 * p.h3);
    EXPECT_NEAR(d.pulses.omega12()[k], w12, 1e-3 * std::abs(w12));
    EXPECT_NEAR(d.pulses.omega01()[k], w01, 1e-3 * std::abs(w01));
  }
}

TEST(PopulationDesign, ZeroTargetNeedsNoDrive) {
  const PopulationDesign d = design_population_pulses(target(0.0, 0.0), kDevice);
  EXPECT_TRUE(d.report.feasible());
  EXPECT_EQ(d.pulses.max_abs_omega01(), 0.0);
  EXPECT_EQ(d.pulses.max_abs_omega12(), 0.0);
  const Trajectory traj = evolve(ground_state(), d.pulses, kDevice);
  EXPECT_EQ((traj.states.back() - ground_state()).cwiseAbs().maxCoeff(), 0.0);
}

TEST(PopulationDesign, SumAboveOneRejectedUpFront) {
  try {
    design_population_pulses(target(0.6, 0.5), kDevice);
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InfeasibleTarget);
  }
  const PopulationDesign d = try_design_population(target(0.6, 0.5), kDevice);
  EXPECT_EQ(d.report.reason, Infeasibility::constraint);
  EXPECT_FALSE(within_constraints(target(-0.1, 0.2)));
  EXPECT_TRUE(within_constraints(target(0.5, 0.5)));
}

TEST(PopulationDesign, SecondLevelWithoutFirstDiverges) {
  // Reaching |2> requires passing population through |1>.
  const PopulationDesign d = try_design_population(target(0.0, 0.3), kDevice);
  EXPECT_FALSE(d.report.feasible());
  EXPECT_EQ(d.report.reason, Infeasibility::cap);
}

TEST(PopulationDesign, TightCapMakesTargetInfeasible) {
  DesignOptions o;
  o.omega_cap = 2.0;
  const PopulationDesign d = try_design_population(target(0.3, 0.2), kDevice, o);
  EXPECT_EQ(d.report.reason, Infeasibility::cap);
  EXPECT_GT(d.report.capped_points, 30u);
  EXPECT_THROW(design_population_pulses(target(0.3, 0.2), kDevice, o), Error);
}

TEST(PopulationDesign, ClosedLoopConvergesWithStep) {
  DesignOptions fine;
  fine.dt = 1e-4;
  const PopulationDesign d = try_design_population(target(0.3, 0.2), kDevice, fine);
  ASSERT_TRUE(d.report.feasible());
  EXPECT_LE(d.report.closed_loop_error, 1e-5);
}

TEST(PopulationDesign, InsensitiveToStartOffset) {
  DesignOptions half;
  half.delta_fraction = 0.5e-4;
  const PopulationDesign a = reference_design();
  const PopulationDesign b = try_design_population(target(0.3, 0.2), kDevice, half);
  ASSERT_TRUE(b.report.feasible());
  const Populations pa = populations(evolve(ground_state(), a.pulses, kDevice).states.back());
  const Populations pb = populations(evolve(ground_state(), b.pulses, kDevice).states.back());
  for (int i = 0; i < 3; ++i) EXPECT_LE(std::abs(pa[i] - pb[i]), 1e-5);
}

TEST(PopulationDesign, CustomGradientStillTracks) {
  PopulationTarget t = target(0.25, 0.15);
  t.a = 10.0;
  const PopulationDesign d = try_design_population(t, kDevice);
  ASSERT_TRUE(d.report.feasible()) << d.report.detail;
  EXPECT_LE(d.report.closed_loop_error, 1e-3);
}

TEST(PopulationDesign, ClosedLoopOnCoarseGrid) {
  // Every feasible target on a 0.05 grid tracks within 1e-3.
  int feasible = 0;
  for (int i = 0; i <= 20; ++i) {
    for (int j = 0; i + j <= 20; ++j) {
      const PopulationDesign d = try_design_population(target(0.05 * i, 0.05 * j), kDevice);
      if (!d.report.feasible()) continue;
      ++feasible;
      EXPECT_LE(d.report.closed_loop_error, 1e-3) << 0.05 * i << ", " << 0.05 * j;
    }
  }
  EXPECT_GT(feasible, 20);
}

TEST(PopulationDesign, ClosedSystemDesignMissesUnderDecoherence) {
  const PopulationDesign closed = design_population_pulses(target(0.3, 0.2), DecoherenceRates::none());
  EXPECT_LE(closed.report.closed_loop_error, 1e-3);
  const Populations p = populations(evolve(ground_state(), closed.pulses, kDevice).states.back());
  const double err = population_error({0.5, 0.3, 0.2}, p);
  // Frozen from an independent simulation of the same protocol.
  EXPECT_NEAR(err, 0.04751, 2e-4);
  EXPECT_GT(err, 20.0 * reference_design().report.closed_loop_error);
}
