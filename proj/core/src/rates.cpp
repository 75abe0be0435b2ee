#include "pulseforge/rates.hpp"

#include "pulseforge/errors.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace pulseforge {

namespace {

void require_rate(double value, const char* name) {
  if (!std::isfinite(value) || value < 0.0) {
    std::ostringstream msg;
    msg << "deduced rate " << name << " = " << value << " /us is negative";
    throw Error(ErrorCode::NegativeRate, msg.str());
  }
}

double inverse_or_inf(double rate) {
  return rate > 0.0 ? 1.0 / rate : std::numeric_limits<double>::infinity();
}

}  // namespace

DecoherenceRates rates_from_times(double t1_01, double t1_12, double t2_01, double t2_12) {
  for (double t : {t1_01, t1_12, t2_01, t2_12}) {
    if (!(t > 0.0) || !std::isfinite(t)) {
      throw Error(ErrorCode::InvalidArgument, "rates_from_times: times must be positive");
    }
  }
  DecoherenceRates r;
  r.Gamma1 = 1.0 / t1_01;
  r.gamma1 = 2.0 / t2_01 - r.Gamma1;
  r.Gamma2 = 1.0 / t1_12;
  r.gamma2 = 2.0 / t2_12 - r.Gamma2 - r.Gamma1 - r.gamma1;
  validate(r);
  return r;
}

DecoherenceRates rates_from_times(const CoherenceTimes& times) {
  return rates_from_times(times.t1_01, times.t1_12, times.t2_01, times.t2_12);
}

CoherenceTimes times_from_rates(const DecoherenceRates& r) {
  return {inverse_or_inf(r.Gamma1), inverse_or_inf(r.Gamma2),
          2.0 * inverse_or_inf(r.gamma1 + r.Gamma1),
          2.0 * inverse_or_inf(r.gamma2 + r.Gamma2 + r.Gamma1 + r.gamma1)};
}

void validate(const DecoherenceRates& r) {
  require_rate(r.Gamma1, "Gamma1");
  require_rate(r.gamma1, "gamma1");
  require_rate(r.Gamma2, "Gamma2");
  require_rate(r.gamma2, "gamma2");
}

}  // namespace pulseforge
