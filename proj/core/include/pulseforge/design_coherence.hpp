#pragma once

#include "pulseforge/density.hpp"
#include "pulseforge/design.hpp"
#include "pulseforge/lindblad.hpp"
#include "pulseforge/logistic.hpp"
#include "pulseforge/pulse.hpp"
#include "pulseforge/rates.hpp"

#include <vector>

namespace pulseforge {

// Drive the coherences along h2(t) = f(t) h2_final, h3(t) = f(t) h3_final;
// f1, f2 and h1 follow from the dynamics.
struct CoherenceTarget {
  double h2_final = 0.0;
  double h3_final = 0.0;
  double t_f = 3.0;  // us
  double a = 0.0;    // 1/us; 0 selects 50 / t_f

  double gradient() const { return a > 0.0 ? a : default_gradient(t_f); }
  LogisticRamp ramp() const { return {t_f, gradient()}; }
  double h2(double t) const { return ramp().value(t) * h2_final; }
  double h3(double t) const { return ramp().value(t) * h3_final; }
};

// |h2|, |h3| <= 0.5 and h2^2 + h3^2 <= 1/3, otherwise Error(InfeasibleTarget).
void validate(const CoherenceTarget& target);
bool within_constraints(const CoherenceTarget& target) noexcept;

struct CoherenceDesign {
  CoherenceTarget target;
  PulseSchedule pulses;
  std::vector<DensityParams> designed;  // f1, f2, h1 integrated; h2, h3 prescribed
  DesignReport report;                  // closed_loop_error covers h2 and h3
  double h1_prediction_error = 0.0;     // max |h1 designed - h1 simulated|
  double min_purity_margin = 0.0;       // min of 1 - tr(rho^2) over the design
};

double denominator_collapse_threshold() noexcept;

CoherenceDesign try_design_coherence(const CoherenceTarget& target,
                                     const DecoherenceRates& rates,
                                     const DesignOptions& options = {});

// Throws Error(InfeasibleTarget) when infeasible and Error(DenominatorCollapse)
// when the shared denominator vanishes past the startup window.
CoherenceDesign design_coherence_pulses(const CoherenceTarget& target,
                                        const DecoherenceRates& rates,
                                        const DesignOptions& options = {});

// 1 - tr(rho^2) for a family member; non-negative for physical states.
double purity_margin(const DensityParams& p);

}  // namespace pulseforge
