#pragma once

#include "pulseforge/density.hpp"
#include "pulseforge/pulse.hpp"
#include "pulseforge/rates.hpp"

namespace pulseforge {

// Closed-form time derivative of the five family parameters under the
// master equation (component-wise expansion of the Lindblad equation):
//
//   f1' = -Gamma1 f1 + Gamma2 f2 + 2 h3 O01 - 2 h1 O12
//   f2' = -Gamma2 f2 + 2 h1 O12
//   h1' = -(gamma1+gamma2+Gamma1+Gamma2) h1/2 + (f1-f2) O12 - h2 O01
//   h2' = -(gamma2+Gamma2) h2/2 - h3 O12 + h1 O01
//   h3' = -(gamma1+Gamma1) h3/2 + h2 O12 - (2 f1 + f2 - 1) O01
//
// Both inverse designs integrate exactly these equations.
DensityParams family_derivative(const DensityParams& p, Drive drive,
                                const DecoherenceRates& r);

// Drive that makes the populations move with the requested derivatives:
//   O01 = (f1 Gamma1 + f1' + f2') / (2 h3),  O12 = (f2 Gamma2 + f2') / (2 h1).
// A zero numerator yields a zero drive even when the coherence is zero; a
// nonzero numerator over a zero coherence yields +-inf.
Drive population_drive(const DensityParams& p, double f1_dot, double f2_dot,
                       const DecoherenceRates& r);

struct CoherenceDrive {
  Drive drive;
  double denominator = 0.0;  // 2 h1 h2 - 2 h3 (2 f1 + f2 - 1)
};

// Drive that makes h2 and h3 move with the requested derivatives. Solves
//   h1 O01 - h3 O12        = h2' + (gamma2+Gamma2) h2/2
//   -(2f1+f2-1) O01 + h2 O12 = h3' + (gamma1+Gamma1) h3/2
// for (O01, O12).
CoherenceDrive coherence_drive(const DensityParams& p, double h2_dot, double h3_dot,
                               const DecoherenceRates& r);

// Two-level reduction (f2 = h1 = h2 = 0, O12 = 0) used by the battery scenario.
double two_level_drive(double f1, double h3, double f1_dot, const DecoherenceRates& r);
double two_level_h3_derivative(double f1, double h3, double omega01,
                               const DecoherenceRates& r);

}  // namespace pulseforge
