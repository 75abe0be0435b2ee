#pragma once

#include "pulseforge/density.hpp"
#include "pulseforge/design.hpp"
#include "pulseforge/lindblad.hpp"
#include "pulseforge/logistic.hpp"
#include "pulseforge/pulse.hpp"
#include "pulseforge/rates.hpp"

#include <vector>

namespace pulseforge {

// Drive the qutrit from |0> to populations (1 - p1 - p2, p1, p2) along
// f1(t) = f(t) p1, f2(t) = f(t) p2 with the logistic ramp f.
struct PopulationTarget {
  double p1_final = 0.0;
  double p2_final = 0.0;
  double t_f = 3.0;  // us
  double a = 0.0;    // 1/us; 0 selects 50 / t_f

  double gradient() const { return a > 0.0 ? a : default_gradient(t_f); }
  LogisticRamp ramp() const { return {t_f, gradient()}; }

  // Prescribed (f1, f2) and their time derivatives at t.
  double f1(double t) const { return ramp().value(t) * p1_final; }
  double f2(double t) const { return ramp().value(t) * p2_final; }
  Populations populations(double t) const;
};

// Throws Error(InfeasibleTarget) if the target lies outside the triangle
// p1, p2 >= 0, p1 + p2 <= 1, and Error(InvalidArgument) for t_f <= 0.
void validate(const PopulationTarget& target);
bool within_constraints(const PopulationTarget& target) noexcept;

struct PopulationDesign {
  PopulationTarget target;
  PulseSchedule pulses;
  std::vector<DensityParams> designed;  // family state on the pulse grid
  DesignReport report;
};

// Inverse-engineers the drive, never throwing on infeasibility: the reason
// is recorded in report. The h-system is integrated by RK4 from
// t = delta with a pure-state seed; O01, O12 are re-evaluated from the
// current coherences at every stage. When options.verify is set the pulses
// are replayed through evolve() from |0><0| and report.closed_loop_error is
// the largest population deviation over all samples.
PopulationDesign try_design_population(const PopulationTarget& target,
                                       const DecoherenceRates& rates,
                                       const DesignOptions& options = {});

// As try_design_population, but throws Error(InfeasibleTarget) when the
// target is infeasible.
PopulationDesign design_population_pulses(const PopulationTarget& target,
                                          const DecoherenceRates& rates,
                                          const DesignOptions& options = {});

// Max |P_i(t) - prescribed_i(t)| over the trajectory samples.
double population_tracking_error(const PopulationTarget& target, const Trajectory& traj);

}  // namespace pulseforge
