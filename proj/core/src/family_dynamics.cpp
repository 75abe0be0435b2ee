#include "pulseforge/family_dynamics.hpp"

#include <limits>

namespace pulseforge {

namespace {

// num / den, except 0 / 0 = 0 (no drive is needed when nothing must change).
double ratio(double num, double den) {
  if (num == 0.0) return 0.0;
  if (den == 0.0) {
    return num > 0.0 ? std::numeric_limits<double>::infinity()
                     : -std::numeric_limits<double>::infinity();
  }
  return num / den;
}

}  // namespace

DensityParams family_derivative(const DensityParams& p, Drive d, const DecoherenceRates& r) {
  const double w01 = d.omega01;
  const double w12 = d.omega12;
  DensityParams dp;
  dp.f1 = -r.Gamma1 * p.f1 + r.Gamma2 * p.f2 + 2.0 * p.h3 * w01 - 2.0 * p.h1 * w12;
  dp.f2 = -r.Gamma2 * p.f2 + 2.0 * p.h1 * w12;
  dp.h1 = -0.5 * (r.gamma1 + r.gamma2 + r.Gamma1 + r.Gamma2) * p.h1 +
          (p.f1 - p.f2) * w12 - p.h2 * w01;
  dp.h2 = -0.5 * (r.gamma2 + r.Gamma2) * p.h2 - p.h3 * w12 + p.h1 * w01;
  dp.h3 = -0.5 * (r.gamma1 + r.Gamma1) * p.h3 + p.h2 * w12 -
          (2.0 * p.f1 + p.f2 - 1.0) * w01;
  return dp;
}

Drive population_drive(const DensityParams& p, double f1_dot, double f2_dot,
                       const DecoherenceRates& r) {
  const double n01 = p.f1 * r.Gamma1 + f1_dot + f2_dot;
  const double n12 = p.f2 * r.Gamma2 + f2_dot;
  return {ratio(n01, 2.0 * p.h3), ratio(n12, 2.0 * p.h1)};
}

CoherenceDrive coherence_drive(const DensityParams& p, double h2_dot, double h3_dot,
                               const DecoherenceRates& r) {
  const double c = 2.0 * p.f1 + p.f2 - 1.0;
  const double a = 2.0 * h2_dot + (r.gamma2 + r.Gamma2) * p.h2;
  const double b = 2.0 * h3_dot + (r.gamma1 + r.Gamma1) * p.h3;
  CoherenceDrive out;
  out.denominator = 2.0 * p.h1 * p.h2 - 2.0 * p.h3 * c;
  out.drive.omega01 = ratio(p.h2 * a + p.h3 * b, out.denominator);
  out.drive.omega12 = ratio(c * a + p.h1 * b, out.denominator);
  return out;
}

double two_level_drive(double f1, double h3, double f1_dot, const DecoherenceRates& r) {
  return ratio(r.Gamma1 * f1 + f1_dot, 2.0 * h3);
}

double two_level_h3_derivative(double f1, double h3, double omega01,
                               const DecoherenceRates& r) {
  return -0.5 * (r.gamma1 + r.Gamma1) * h3 - (2.0 * f1 - 1.0) * omega01;
}

}  // namespace pulseforge
