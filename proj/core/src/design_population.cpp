#include "pulseforge/design_population.hpp"

#include "pulseforge/errors.hpp"
#include "pulseforge/family_dynamics.hpp"

#include "design_detail.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace pulseforge {

namespace {

// Coherences (h1, h2, h3) are the integrated state; f1, f2 are prescribed.
struct PopulationModel {
  const PopulationTarget& target;
  const DecoherenceRates& rates;
  LogisticRamp ramp;

  DensityParams params(double t, const detail::Vec<3>& h) const {
    const double f = ramp.value(t);
    return {f * target.p1_final, f * target.p2_final, h[0], h[1], h[2]};
  }

  Drive drive(double t, const detail::Vec<3>& h) const {
    const double df = ramp.derivative(t);
    return population_drive(params(t, h), df * target.p1_final, df * target.p2_final, rates);
  }

  detail::Vec<3> derivative(double t, const detail::Vec<3>& h, Drive d) const {
    const DensityParams dp = family_derivative(params(t, h), d, rates);
    return {dp.h1, dp.h2, dp.h3};
  }
};

}  // namespace

Populations PopulationTarget::populations(double t) const {
  const double a = f1(t);
  const double b = f2(t);
  return {1.0 - a - b, a, b};
}

bool within_constraints(const PopulationTarget& target) noexcept {
  const double p1 = target.p1_final;
  const double p2 = target.p2_final;
  return std::isfinite(p1) && std::isfinite(p2) && p1 >= 0.0 && p2 >= 0.0 &&
         p1 + p2 <= 1.0 + 1e-12;
}

void validate(const PopulationTarget& target) {
  if (!(target.t_f > 0.0) || !std::isfinite(target.t_f) || target.a < 0.0) {
    throw Error(ErrorCode::InvalidArgument, "PopulationTarget: t_f must be positive");
  }
  if (!within_constraints(target)) {
    std::ostringstream msg;
    msg << "population target (" << target.p1_final << ", " << target.p2_final
        << ") violates p1, p2 >= 0, p1 + p2 <= 1";
    throw Error(ErrorCode::InfeasibleTarget, msg.str());
  }
}

double population_tracking_error(const PopulationTarget& target, const Trajectory& traj) {
  double worst = 0.0;
  for (std::size_t k = 0; k < traj.size(); ++k) {
    const Populations sim = populations(traj.states[k]);
    const Populations want = target.populations(traj.times[k]);
    for (std::size_t i = 0; i < 3; ++i) worst = std::max(worst, std::abs(sim[i] - want[i]));
  }
  return worst;
}

PopulationDesign try_design_population(const PopulationTarget& target,
                                       const DecoherenceRates& rates,
                                       const DesignOptions& options) {
  if (!(target.t_f > 0.0) || !std::isfinite(target.t_f)) {
    throw Error(ErrorCode::InvalidArgument, "PopulationTarget: t_f must be positive");
  }
  validate(rates);
  const std::size_t n = detail::grid_intervals(target.t_f, options.dt);

  PopulationDesign out;
  out.target = target;
  out.report.delta = options.delta_fraction * target.t_f;

  if (!within_constraints(target)) {
    out.pulses = PulseSchedule::zero(target.t_f, options.dt);
    out.designed.assign(n + 1, DensityParams{});
    out.report.reason = Infeasibility::constraint;
    out.report.detail = "p1, p2 >= 0 and p1 + p2 <= 1 required";
    return out;
  }

  const PopulationModel model{target, rates, target.ramp()};
  const double delta = out.report.delta;
  const double startup_end = options.startup_multiple * delta;

  // Pure state with the prescribed populations at delta.
  const double f1 = model.ramp.value(delta) * target.p1_final;
  const double f2 = model.ramp.value(delta) * target.p2_final;
  const double p0 = 1.0 - f1 - f2;
  const detail::Vec<3> seed{std::sqrt(f1 * f2), -std::sqrt(f2 * p0), std::sqrt(f1 * p0)};

  const auto run = detail::integrate_on_grid<3>(model, target.t_f, options.dt, delta, seed,
                                                options.omega_cap, startup_end);
  out.pulses = detail::to_schedule(run.drives, options.dt);
  out.designed.resize(n + 1);
  for (std::size_t k = 0; k <= n; ++k) {
    const double t = k == 0 ? delta : static_cast<double>(k) * options.dt;
    out.designed[k] = model.params(t, run.states[k]);
  }

  DesignReport& report = out.report;
  if (run.diverged) {
    report.reason = Infeasibility::cap;
    std::ostringstream msg;
    msg << "drive diverges at t = " << run.diverged_at << " us";
    report.detail = msg.str();
  }
  detail::assess_cap(run.drives, options.dt, startup_end, options, report);

  report.min_eigenvalue = 1.0;
  for (const auto& p : out.designed) {
    report.min_eigenvalue = std::min(report.min_eigenvalue, min_eigenvalue(params_to_matrix(p)));
  }
  if (report.reason == Infeasibility::none && report.min_eigenvalue < -options.positivity_tol) {
    report.reason = Infeasibility::unphysical;
    std::ostringstream msg;
    msg << "designed state min eigenvalue " << report.min_eigenvalue;
    report.detail = msg.str();
  }

  if (options.verify && report.reason == Infeasibility::none) {
    try {
      const Trajectory traj = evolve(ground_state(), out.pulses, rates, options.dt, 1);
      report.closed_loop_error = population_tracking_error(target, traj);
      report.verified = true;
      if (report.closed_loop_error > options.tracking_tol) {
        report.reason = Infeasibility::tracking;
        std::ostringstream msg;
        msg << "closed-loop population error " << report.closed_loop_error;
        report.detail = msg.str();
      }
    } catch (const Error& e) {
      if (e.code() != ErrorCode::UnphysicalState) throw;
      report.reason = Infeasibility::unphysical;
      report.detail = e.what();
    }
  }
  return out;
}

PopulationDesign design_population_pulses(const PopulationTarget& target,
                                          const DecoherenceRates& rates,
                                          const DesignOptions& options) {
  validate(target);
  PopulationDesign out = try_design_population(target, rates, options);
  if (!out.report.feasible()) {
    std::ostringstream msg;
    msg << "population target (" << target.p1_final << ", " << target.p2_final
        << ") infeasible [" << to_string(out.report.reason) << "]: " << out.report.detail;
    throw Error(ErrorCode::InfeasibleTarget, msg.str());
  }
  return out;
}

}  // namespace pulseforge
