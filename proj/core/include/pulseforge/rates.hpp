#pragma once

namespace pulseforge {

// Decoherence rates in 1/us. Relaxation is the cascade |2> -> |1> -> |0>.
struct DecoherenceRates {
  double Gamma1 = 0.0;  // relaxation |1> -> |0>
  double Gamma2 = 0.0;  // relaxation |2> -> |1>
  double gamma1 = 0.0;  // dephasing of |1>
  double gamma2 = 0.0;  // dephasing of |2>

  static DecoherenceRates none() { return {}; }

  friend bool operator==(const DecoherenceRates&, const DecoherenceRates&) = default;
};

// Relaxation and dephasing times (us) measured on the 0-1 and 1-2 transitions.
struct CoherenceTimes {
  double t1_01 = 0.0;
  double t1_12 = 0.0;
  double t2_01 = 0.0;
  double t2_12 = 0.0;
};

// Times used for every designed pulse in the reference experiment.
inline constexpr CoherenceTimes kReferenceTimes{9.5, 4.6, 6.0, 1.9};

// Gamma1 = 1/T1^01, gamma1 = 2/T2^01 - Gamma1, Gamma2 = 1/T1^12,
// gamma2 = 2/T2^12 - Gamma2 - Gamma1 - gamma1.
// Throws Error(InvalidArgument) for non-positive times and
// Error(NegativeRate) when the combination implies a negative rate.
DecoherenceRates rates_from_times(double t1_01, double t1_12, double t2_01, double t2_12);
DecoherenceRates rates_from_times(const CoherenceTimes& times);

// Inverse of rates_from_times.
CoherenceTimes times_from_rates(const DecoherenceRates& r);

// Throws Error(NegativeRate) if any rate is negative or not finite.
void validate(const DecoherenceRates& r);

}  // namespace pulseforge
