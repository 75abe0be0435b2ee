#pragma once

namespace pulseforge {

// f(t) = 1 / (1 + exp(-a (t - t_f/2))), rising from ~0 to ~1 over [0, t_f].
double sigmoid_f(double t, double t_f, double a);

// df/dt = a f (1 - f).
double sigmoid_derivative(double t, double t_f, double a);

inline double default_gradient(double t_f) { return 50.0 / t_f; }

struct LogisticRamp {
  double t_f = 1.0;
  double a = 50.0;

  static LogisticRamp over(double t_f) { return {t_f, default_gradient(t_f)}; }

  double value(double t) const { return sigmoid_f(t, t_f, a); }
  double derivative(double t) const { return sigmoid_derivative(t, t_f, a); }
};

}  // namespace pulseforge
