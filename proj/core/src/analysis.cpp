#include "pulseforge/analysis.hpp"

#include "pulseforge/errors.hpp"
#include "pulseforge/family_dynamics.hpp"
#include "pulseforge/logistic.hpp"

#include "design_detail.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace pulseforge {

double population_error(const Populations& ideal, const Populations& measured) {
  double sum = 0.0;
  for (std::size_t i = 0; i < 3; ++i) {
    const double d = ideal[i] - measured[i];
    sum += d * d;
  }
  return std::sqrt(sum / 3.0);
}

double coherence_error(const std::array<double, 2>& ideal,
                       const std::array<double, 2>& measured) {
  const double a = ideal[0] - measured[0];
  const double b = ideal[1] - measured[1];
  return std::sqrt((a * a + b * b) / 2.0);
}

std::optional<TimeWindow> freezing_window(const Trajectory& traj, double variation_tol,
                                          std::size_t min_samples) {
  if (traj.size() == 0) return std::nullopt;
  Populations lo = populations(traj.states.back());
  Populations hi = lo;
  std::size_t first = traj.size() - 1;
  for (std::size_t k = traj.size() - 1; k-- > 0;) {
    const Populations p = populations(traj.states[k]);
    bool ok = true;
    Populations nlo = lo;
    Populations nhi = hi;
    for (std::size_t i = 0; i < 3; ++i) {
      nlo[i] = std::min(lo[i], p[i]);
      nhi[i] = std::max(hi[i], p[i]);
      ok = ok && nhi[i] - nlo[i] <= variation_tol;
    }
    if (!ok) break;
    lo = nlo;
    hi = nhi;
    first = k;
  }
  const std::size_t count = traj.size() - first;
  if (count < std::max<std::size_t>(min_samples, 1)) return std::nullopt;
  return TimeWindow{traj.times[first], traj.times.back(), first, traj.size() - 1};
}

double population_variation(const Trajectory& traj, double t0, double t1) {
  Populations lo{1e300, 1e300, 1e300};
  Populations hi{-1e300, -1e300, -1e300};
  bool any = false;
  for (std::size_t k = 0; k < traj.size(); ++k) {
    if (traj.times[k] < t0 - 1e-12 || traj.times[k] > t1 + 1e-12) continue;
    any = true;
    const Populations p = populations(traj.states[k]);
    for (std::size_t i = 0; i < 3; ++i) {
      lo[i] = std::min(lo[i], p[i]);
      hi[i] = std::max(hi[i], p[i]);
    }
  }
  if (!any) return 0.0;
  double worst = 0.0;
  for (std::size_t i = 0; i < 3; ++i) worst = std::max(worst, hi[i] - lo[i]);
  return worst;
}

double QBConfig::f1(double t) const {
  if (t < t_charge) return charge_level * sigmoid_f(t, t_charge, default_gradient(t_charge));
  if (t < store_end()) return charge_level;
  const double u = t - store_end();
  return charge_level -
         (charge_level - residual_level) * sigmoid_f(u, t_discharge, default_gradient(t_discharge));
}

double QBConfig::f1_dot(double t) const {
  if (t < t_charge) {
    return charge_level * sigmoid_derivative(t, t_charge, default_gradient(t_charge));
  }
  if (t < store_end()) return 0.0;
  const double u = t - store_end();
  return -(charge_level - residual_level) *
         sigmoid_derivative(u, t_discharge, default_gradient(t_discharge));
}

void validate(const QBConfig& cfg) {
  auto positive = [](double x) { return x > 0.0 && std::isfinite(x); };
  if (!positive(cfg.t_charge) || !positive(cfg.t_store) || !positive(cfg.t_discharge)) {
    throw Error(ErrorCode::InvalidArgument, "QBConfig: durations must be positive");
  }
  if (!(cfg.charge_level > 0.0 && cfg.charge_level <= 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "QBConfig: charge_level must be in (0, 1]");
  }
  if (!(cfg.residual_level >= 0.0 && cfg.residual_level <= cfg.charge_level)) {
    throw Error(ErrorCode::InvalidArgument,
                "QBConfig: residual_level must be in [0, charge_level]");
  }
  if (!std::isfinite(cfg.omega10)) {
    throw Error(ErrorCode::InvalidArgument, "QBConfig: omega10 must be finite");
  }
  validate(cfg.rates());
}

namespace {

struct BatteryModel {
  const QBConfig& cfg;
  DecoherenceRates rates;

  Drive drive(double t, const detail::Vec<1>& h3) const {
    return {two_level_drive(cfg.f1(t), h3[0], cfg.f1_dot(t), rates), 0.0};
  }

  detail::Vec<1> derivative(double t, const detail::Vec<1>& h3, Drive d) const {
    return {two_level_h3_derivative(cfg.f1(t), h3[0], d.omega01, rates)};
  }
};

}  // namespace

QBResult try_qb_scenario(const QBConfig& cfg, const DesignOptions& options) {
  validate(cfg);
  const BatteryModel model{cfg, cfg.rates()};
  const double duration = cfg.duration();
  const double delta = options.delta_fraction * cfg.t_charge;
  const double startup_end = options.startup_multiple * delta;

  const double f1 = cfg.f1(delta);
  const detail::Vec<1> seed{std::sqrt(f1 * (1.0 - f1))};
  const auto run = detail::integrate_on_grid<1>(model, duration, options.dt, delta, seed,
                                                options.omega_cap, startup_end);

  QBResult out;
  out.pulses = detail::to_schedule(run.drives, options.dt);
  out.h3.reserve(run.states.size());
  for (const auto& s : run.states) out.h3.push_back(s[0]);

  DesignReport& report = out.report;
  report.delta = delta;
  if (run.diverged) {
    report.reason = Infeasibility::cap;
    std::ostringstream msg;
    msg << "drive diverges at t = " << run.diverged_at << " us";
    report.detail = msg.str();
  }
  detail::assess_cap(run.drives, options.dt, startup_end, options, report);

  report.min_eigenvalue = 1.0;
  for (std::size_t k = 0; k < out.h3.size(); ++k) {
    const double t = k == 0 ? delta : static_cast<double>(k) * options.dt;
    const DensityParams p{cfg.f1(t), 0.0, 0.0, 0.0, out.h3[k]};
    report.min_eigenvalue = std::min(report.min_eigenvalue, min_eigenvalue(params_to_matrix(p)));
  }
  if (report.reason == Infeasibility::none && report.min_eigenvalue < -options.positivity_tol) {
    report.reason = Infeasibility::unphysical;
    std::ostringstream msg;
    msg << "designed state min eigenvalue " << report.min_eigenvalue;
    report.detail = msg.str();
  }

  if (report.reason != Infeasibility::none) return out;

  try {
    out.trajectory = evolve(ground_state(), out.pulses, cfg.rates(), options.dt, 1);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::UnphysicalState) throw;
    report.reason = Infeasibility::unphysical;
    report.detail = e.what();
    return out;
  }
  report.verified = true;
  out.energy.reserve(out.trajectory.size());
  double worst = 0.0;
  for (std::size_t k = 0; k < out.trajectory.size(); ++k) {
    const double t = out.trajectory.times[k];
    const Populations p = populations(out.trajectory.states[k]);
    worst = std::max({worst, std::abs(p[1] - cfg.f1(t)), std::abs(p[2])});
    out.energy.push_back({t, p[1], cfg.omega10 * p[1]});
  }
  report.closed_loop_error = worst;
  if (worst > options.tracking_tol) {
    report.reason = Infeasibility::tracking;
    std::ostringstream msg;
    msg << "closed-loop P1 error " << worst;
    report.detail = msg.str();
  }
  return out;
}

QBResult qb_scenario(const QBConfig& cfg, const DesignOptions& options) {
  QBResult out = try_qb_scenario(cfg, options);
  if (!out.report.feasible()) {
    std::ostringstream msg;
    msg << "battery profile (charge " << cfg.charge_level << ", hold " << cfg.t_store
        << " us) infeasible [" << to_string(out.report.reason) << "]: " << out.report.detail;
    throw Error(ErrorCode::InfeasibleTarget, msg.str());
  }
  return out;
}

Trajectory qb_undriven_storage(const QBConfig& cfg, const PulseSchedule& designed, double dt) {
  validate(cfg);
  std::vector<double> w01 = designed.omega01();
  for (std::size_t k = 0; k < w01.size(); ++k) {
    const double t = designed.time(k);
    if (t >= cfg.store_begin() - 1e-12 && t <= cfg.store_end() + 1e-12) w01[k] = 0.0;
  }
  const PulseSchedule pulses(designed.step(), std::move(w01), designed.omega12());
  return evolve(ground_state(), pulses, cfg.rates(), dt, 1);
}

double qb_free_storage_retention(const QBConfig& cfg) {
  return std::exp(-cfg.Gamma1 * cfg.t_store);
}

}  // namespace pulseforge
