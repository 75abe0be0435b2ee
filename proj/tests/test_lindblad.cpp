#include "support/oracles.hpp"

#include <pulseforge/errors.hpp>
#include <pulseforge/family_dynamics.hpp>
#include <pulseforge/lindblad.hpp>
#include <pulseforge/pulse.hpp>

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace pulseforge;

namespace {

const DecoherenceRates kDevice = rates_from_times(kReferenceTimes);

double dot_population(const DensityMatrix& d, int level) {
  return d(row_of(level), row_of(level)).real();
}

}  // namespace

TEST(LindbladRhs, GroundStateIsDark) {
  const DensityMatrix d = lindblad_rhs(ground_state(), 0.0, 0.0, kDevice);
  EXPECT_EQ(d.cwiseAbs().maxCoeff(), 0.0);
}

TEST(LindbladRhs, ExcitedStateRelaxes) {
  const DensityMatrix d = lindblad_rhs(basis_state(1), 0.0, 0.0, kDevice);
  EXPECT_NEAR(dot_population(d, 1), -kDevice.Gamma1, 1e-15);
  EXPECT_NEAR(dot_population(d, 0), kDevice.Gamma1, 1e-15);
  EXPECT_EQ(dot_population(d, 2), 0.0);
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b)
      if (a != b) EXPECT_EQ(std::abs(d(a, b)), 0.0);
}

TEST(LindbladRhs, SecondLevelCascades) {
  const DensityMatrix d = lindblad_rhs(basis_state(2), 0.0, 0.0, kDevice);
  EXPECT_NEAR(dot_population(d, 2), -kDevice.Gamma2, 1e-15);
  EXPECT_NEAR(dot_population(d, 1), kDevice.Gamma2, 1e-15);
  EXPECT_EQ(dot_population(d, 0), 0.0);
}

TEST(LindbladRhs, MatchesTermByTermOracle) {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> w(-5.0, 5.0);
  std::uniform_real_distribution<double> rate(0.0, 1.0);
  for (int k = 0; k < 500; ++k) {
    const DecoherenceRates r{rate(rng), rate(rng), rate(rng), rate(rng)};
    const DensityParams p = oracle::random_mixed(rng);
    const double w01 = w(rng), w12 = w(rng);
    const DensityMatrix lib = lindblad_rhs(params_to_matrix(p), w01, w12, r);
    const auto ref = oracle::lindblad(oracle::family(p), w01, w12, r);
    EXPECT_LE(oracle::max_abs_diff(oracle::from_library(lib), ref), 1e-13);
  }
}

TEST(LindbladRhs, HermitianAndTraceless) {
  std::mt19937_64 rng(22);
  std::uniform_real_distribution<double> w(-10.0, 10.0);
  for (int k = 0; k < 500; ++k) {
    const DensityMatrix d =
        lindblad_rhs(params_to_matrix(oracle::random_mixed(rng)), w(rng), w(rng), kDevice);
    EXPECT_LE((d - d.adjoint()).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_LE(std::abs(d.trace()), 1e-12);
  }
}

TEST(LindbladRhs, MasterEquationObjectAgrees) {
  const MasterEquation eq(kDevice);
  const DensityMatrix m = params_to_matrix({0.3, 0.2, 0.05, 0.1, 0.15});
  EXPECT_LE((eq.rhs(m, {1.5, -0.7}) - lindblad_rhs(m, 1.5, -0.7, kDevice)).cwiseAbs().maxCoeff(),
            1e-15);
}

TEST(FamilyDerivative, AgreesWithMasterEquation) {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> w(-10.0, 10.0);
  std::uniform_real_distribution<double> rate(0.0, 2.0);
  for (int k = 0; k < 1000; ++k) {
    const DecoherenceRates r{rate(rng), rate(rng), rate(rng), rate(rng)};
    const DensityParams p = oracle::random_mixed(rng);
    const Drive d{w(rng), w(rng)};
    const auto full = oracle::lindblad(oracle::family(p), d.omega01, d.omega12, r);
    const DensityParams fd = family_derivative(p, d, r);
    EXPECT_NEAR(fd.f1, full[1][1].real(), 1e-9);
    EXPECT_NEAR(fd.f2, full[2][2].real(), 1e-9);
    EXPECT_NEAR(fd.h1, full[1][2].imag(), 1e-9);
    EXPECT_NEAR(fd.h2, full[2][0].real(), 1e-9);
    EXPECT_NEAR(fd.h3, full[0][1].imag(), 1e-9);
  }
}

TEST(Pulse, ValidatesInput) {
  EXPECT_THROW(PulseSchedule(0.0, {0, 0}, {0, 0}), Error);
  EXPECT_THROW(PulseSchedule(0.1, {0, 0}, {0}), Error);
  EXPECT_THROW(PulseSchedule(0.1, {0}, {0}), Error);
  EXPECT_THROW(PulseSchedule(0.1, {0, NAN}, {0, 0}), Error);
  const std::vector<double> t{0.0, 0.1, 0.3};
  EXPECT_THROW(PulseSchedule::from_samples(t, {0, 0, 0}, {0, 0, 0}), Error);
}

TEST(Pulse, LinearInterpolation) {
  const PulseSchedule p(0.5, {0.0, 1.0, 3.0}, {2.0, 2.0, -2.0});
  EXPECT_DOUBLE_EQ(p.duration(), 1.0);
  EXPECT_DOUBLE_EQ(p.at(0.25).omega01, 0.5);
  EXPECT_DOUBLE_EQ(p.at(0.75).omega01, 2.0);
  EXPECT_DOUBLE_EQ(p.at(0.75).omega12, 0.0);
  EXPECT_DOUBLE_EQ(p.at(-1.0).omega01, 0.0);
  EXPECT_DOUBLE_EQ(p.at(5.0).omega01, 3.0);
  EXPECT_DOUBLE_EQ(p.max_abs_omega12(), 2.0);
}

TEST(Evolve, FreeDecayOfExcitedState) {
  const DecoherenceRates r{1.0 / 9.5, 0.0, 0.0, 0.0};
  const PulseSchedule zero = PulseSchedule::zero(9.5, 0.01);
  const Trajectory traj = evolve(basis_state(1), zero, r, 1e-3, 100);
  EXPECT_NEAR(traj.times.back(), 9.5, 1e-12);
  EXPECT_NEAR(populations(traj.states.back())[1], std::exp(-1.0), 1e-6);
  for (std::size_t k = 0; k < traj.size(); ++k) {
    EXPECT_NEAR(populations(traj.states[k])[1], oracle::decay_p1_from_1(traj.times[k], r), 1e-9);
  }
}

TEST(Evolve, CascadeFromSecondLevel) {
  const PulseSchedule zero = PulseSchedule::zero(5.0, 0.05);
  const Trajectory traj = evolve(basis_state(2), zero, kDevice, 1e-3, 50);
  for (std::size_t k = 0; k < traj.size(); ++k) {
    const auto ref = oracle::cascade_from_2(traj.times[k], kDevice);
    const Populations p = populations(traj.states[k]);
    for (int i = 0; i < 3; ++i) EXPECT_NEAR(p[i], ref[i], 1e-9);
  }
}

TEST(Evolve, ClosedSystemRabiFlop) {
  const double w = std::numbers::pi / 4.0;
  const PulseSchedule pulses = PulseSchedule::constant(2.0, 0.01, {w, 0.0});
  const Trajectory traj = evolve(ground_state(), pulses, DecoherenceRates::none(), 1e-3, 10);
  EXPECT_NEAR(populations(traj.states.back())[1], 1.0, 1e-6);
  for (std::size_t k = 0; k < traj.size(); ++k) {
    const double s = std::sin(w * traj.times[k]);
    EXPECT_NEAR(populations(traj.states[k])[1], s * s, 1e-9);
  }
}

TEST(Evolve, GroundStateStaysPut) {
  const Trajectory traj = evolve(ground_state(), PulseSchedule::zero(3.0, 0.01), kDevice);
  for (const auto& s : traj.states) EXPECT_EQ((s - ground_state()).cwiseAbs().maxCoeff(), 0.0);
}

TEST(Evolve, SamplingKeepsEndpoints) {
  const Trajectory traj = evolve(ground_state(), PulseSchedule::zero(1.0, 0.1), kDevice, 0.01, 7);
  EXPECT_EQ(traj.times.front(), 0.0);
  EXPECT_NEAR(traj.times.back(), 1.0, 1e-12);
  EXPECT_EQ(traj.size(), traj.states.size());
  EXPECT_EQ(traj.size(), traj.trace_dev.size());
}

TEST(Evolve, RejectsStepThatDoesNotTile) {
  EXPECT_THROW(evolve(ground_state(), PulseSchedule::zero(1.0, 0.1), kDevice, 0.3, 1), Error);
}

TEST(Evolve, UnphysicalStateOnHugeStep) {
  const PulseSchedule pulses = PulseSchedule::constant(4.0, 0.5, {20.0, 20.0});
  try {
    evolve(ground_state(), pulses, kDevice, 0.5, 1);
    ADD_FAILURE() << "expected UnphysicalState";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::UnphysicalState);
  }
}

TEST(Evolve, TraceHermiticityAndFamilyClosure) {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> w(-4.0, 4.0);
  std::vector<double> w01(301), w12(301);
  for (std::size_t k = 0; k < w01.size(); ++k) {
    w01[k] = 2.0 * std::sin(0.05 * static_cast<double>(k)) + 0.2 * w(rng);
    w12[k] = 1.5 * std::cos(0.03 * static_cast<double>(k)) + 0.2 * w(rng);
  }
  const PulseSchedule pulses(0.01, w01, w12);
  const DensityMatrix rho0 = params_to_matrix(oracle::random_mixed(rng));
  const Trajectory traj = evolve(rho0, pulses, kDevice, 1e-3, 1);
  for (std::size_t k = 0; k < traj.size(); ++k) {
    EXPECT_LE(traj.trace_dev[k], 1e-9);
    EXPECT_GE(traj.min_eig[k], -1e-7);
  }
  EXPECT_LE(traj.herm_dev_max, 1e-10);
  EXPECT_TRUE(traj.params(1e-7).has_value());
}

TEST(Evolve, LinearInInitialState) {
  std::mt19937_64 rng(32);
  const PulseSchedule pulses = PulseSchedule::constant(1.5, 0.01, {1.3, -0.8});
  const DensityMatrix a = params_to_matrix(oracle::random_mixed(rng));
  const DensityMatrix b = params_to_matrix(oracle::random_mixed(rng));
  const double lambda = 0.37;
  const Trajectory ta = evolve(a, pulses, kDevice, 1e-3, 10);
  const Trajectory tb = evolve(b, pulses, kDevice, 1e-3, 10);
  const Trajectory tm = evolve(lambda * a + (1.0 - lambda) * b, pulses, kDevice, 1e-3, 10);
  for (std::size_t k = 0; k < tm.size(); ++k) {
    const DensityMatrix mix = lambda * ta.states[k] + (1.0 - lambda) * tb.states[k];
    EXPECT_LE((tm.states[k] - mix).cwiseAbs().maxCoeff(), 1e-8);
  }
}

TEST(Evolve, FourthOrderConvergence) {
  const double w = 2.0;
  const PulseSchedule pulses = PulseSchedule::constant(3.0, 0.1, {w, 1.3});
  const DensityMatrix ref = evolve_final(ground_state(), pulses, kDevice, 0.1 / 8.0 / 8.0);
  const double e1 = (evolve_final(ground_state(), pulses, kDevice, 0.1) - ref).cwiseAbs().maxCoeff();
  const double e2 = (evolve_final(ground_state(), pulses, kDevice, 0.05) - ref).cwiseAbs().maxCoeff();
  EXPECT_GE(e1 / e2, 12.0);
  EXPECT_LE(e1 / e2, 20.0);
  EXPECT_GT(step_doubling_error(ground_state(), pulses, kDevice, 0.1), 0.0);
}

TEST(Trajectory, ParamsRejectsStatesOutsideFamily) {
  Trajectory traj;
  traj.times = {0.0};
  DensityMatrix m = params_to_matrix({0.3, 0.2, 0.05, 0.1, 0.15});
  m(0, 2) = {0.1, 0.01};
  m(2, 0) = {0.1, -0.01};
  traj.states = {m};
  traj.trace_dev = {0.0};
  traj.min_eig = {0.0};
  EXPECT_FALSE(traj.params().has_value());
}
