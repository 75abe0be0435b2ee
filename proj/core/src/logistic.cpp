#include "pulseforge/logistic.hpp"

#include <cmath>

namespace pulseforge {

double sigmoid_f(double t, double t_f, double a) {
  return 1.0 / (1.0 + std::exp(-a * (t - 0.5 * t_f)));
}

double sigmoid_derivative(double t, double t_f, double a) {
  // a f (1 - f), with 1 - f written as 1 / (1 + e^x) so it keeps full
  // relative precision as f -> 1.
  const double x = a * (t - 0.5 * t_f);
  return a / ((1.0 + std::exp(-x)) * (1.0 + std::exp(x)));
}

}  // namespace pulseforge
