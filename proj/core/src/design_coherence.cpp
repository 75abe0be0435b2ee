#include "pulseforge/design_coherence.hpp"

#include "pulseforge/errors.hpp"
#include "pulseforge/family_dynamics.hpp"

#include "design_detail.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace pulseforge {

namespace {

constexpr double kCollapse = 1e-12;

// Integrated state is (h1, f1, f2); h2, h3 are prescribed.
struct CoherenceModel {
  const CoherenceTarget& target;
  const DecoherenceRates& rates;
  LogisticRamp ramp;

  DensityParams params(double t, const detail::Vec<3>& y) const {
    const double f = ramp.value(t);
    return {y[1], y[2], y[0], f * target.h2_final, f * target.h3_final};
  }

  CoherenceDrive solve(double t, const detail::Vec<3>& y) const {
    const double df = ramp.derivative(t);
    return coherence_drive(params(t, y), df * target.h2_final, df * target.h3_final, rates);
  }

  Drive drive(double t, const detail::Vec<3>& y) const { return solve(t, y).drive; }

  detail::Vec<3> derivative(double t, const detail::Vec<3>& y, Drive d) const {
    const DensityParams dp = family_derivative(params(t, y), d, rates);
    return {dp.h1, dp.f1, dp.f2};
  }
};

}  // namespace

double denominator_collapse_threshold() noexcept { return kCollapse; }

bool within_constraints(const CoherenceTarget& target) noexcept {
  const double a = target.h2_final;
  const double b = target.h3_final;
  return std::isfinite(a) && std::isfinite(b) && std::abs(a) <= 0.5 && std::abs(b) <= 0.5 &&
         a * a + b * b <= 1.0 / 3.0 + 1e-12;
}

void validate(const CoherenceTarget& target) {
  if (!(target.t_f > 0.0) || !std::isfinite(target.t_f) || target.a < 0.0) {
    throw Error(ErrorCode::InvalidArgument, "CoherenceTarget: t_f must be positive");
  }
  if (!within_constraints(target)) {
    std::ostringstream msg;
    msg << "coherence target (" << target.h2_final << ", " << target.h3_final
        << ") violates |h2|, |h3| <= 0.5, h2^2 + h3^2 <= 1/3";
    throw Error(ErrorCode::InfeasibleTarget, msg.str());
  }
}

double purity_margin(const DensityParams& p) {
  const double p0 = p.p0();
  return 1.0 - p.f1 * p.f1 - p.f2 * p.f2 - p0 * p0 -
         2.0 * (p.h1 * p.h1 + p.h2 * p.h2 + p.h3 * p.h3);
}

CoherenceDesign try_design_coherence(const CoherenceTarget& target,
                                     const DecoherenceRates& rates,
                                     const DesignOptions& options) {
  if (!(target.t_f > 0.0) || !std::isfinite(target.t_f)) {
    throw Error(ErrorCode::InvalidArgument, "CoherenceTarget: t_f must be positive");
  }
  validate(rates);
  const std::size_t n = detail::grid_intervals(target.t_f, options.dt);

  CoherenceDesign out;
  out.target = target;
  out.report.delta = options.delta_fraction * target.t_f;

  if (!within_constraints(target)) {
    out.pulses = PulseSchedule::zero(target.t_f, options.dt);
    out.designed.assign(n + 1, DensityParams{});
    out.report.reason = Infeasibility::constraint;
    out.report.detail = "|h2|, |h3| <= 0.5 and h2^2 + h3^2 <= 1/3 required";
    return out;
  }

  const CoherenceModel model{target, rates, target.ramp()};
  const double delta = out.report.delta;
  const double startup_end = options.startup_multiple * delta;

  // Pure state c0 |0> - i h3/c0 |1> + h2/c0 |2> carrying the prescribed
  // coherences at delta.
  const double h2 = model.ramp.value(delta) * target.h2_final;
  const double h3 = model.ramp.value(delta) * target.h3_final;
  const double p0 = 0.5 * (1.0 + std::sqrt(1.0 - 4.0 * (h2 * h2 + h3 * h3)));
  const detail::Vec<3> seed{-h2 * h3 / p0, h3 * h3 / p0, h2 * h2 / p0};

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
    report.reason = Infeasibility::singular;
    std::ostringstream msg;
    msg << "drive diverges at t = " << run.diverged_at << " us";
    report.detail = msg.str();
  }

  // Collapse: |D| small relative to the ramp, or a sign change of D, past
  // the startup window. D scales with f(t), so the test is relative to it.
  const bool zero_target = target.h2_final == 0.0 && target.h3_final == 0.0;
  double previous = 0.0;
  for (std::size_t k = 0; k <= n && report.reason == Infeasibility::none && !zero_target; ++k) {
    const double t = k == 0 ? delta : static_cast<double>(k) * options.dt;
    const double den = model.solve(t, run.states[k]).denominator;
    if (t >= startup_end) {
      const bool tiny = std::abs(den) < kCollapse * model.ramp.value(t);
      const bool flipped = previous != 0.0 && std::signbit(den) != std::signbit(previous);
      if (tiny || flipped) {
        report.reason = Infeasibility::singular;
        std::ostringstream msg;
        msg << "denominator 2 h1 h2 - 2 h3 (2 f1 + f2 - 1) collapses at t = " << t << " us";
        report.detail = msg.str();
      }
    }
    previous = den;
  }

  detail::assess_cap(run.drives, options.dt, startup_end, options, report);

  report.min_eigenvalue = 1.0;
  out.min_purity_margin = 1.0;
  for (const auto& p : out.designed) {
    report.min_eigenvalue = std::min(report.min_eigenvalue, min_eigenvalue(params_to_matrix(p)));
    out.min_purity_margin = std::min(out.min_purity_margin, purity_margin(p));
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
      double h_err = 0.0;
      double h1_err = 0.0;
      for (std::size_t k = 0; k < traj.size(); ++k) {
        const DensityMatrix& rho = traj.states[k];
        const double t = traj.times[k];
        h_err = std::max(h_err, std::abs(rho(0, 2).real() - target.h2(t)));
        h_err = std::max(h_err, std::abs(rho(2, 1).imag() - target.h3(t)));
        h1_err = std::max(h1_err, std::abs(rho(1, 0).imag() - out.designed[k].h1));
      }
      report.closed_loop_error = h_err;
      report.verified = true;
      out.h1_prediction_error = h1_err;
      if (h_err > options.tracking_tol || h1_err > options.tracking_tol) {
        report.reason = Infeasibility::tracking;
        std::ostringstream msg;
        msg << "closed-loop coherence error " << h_err << ", h1 prediction error " << h1_err;
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

CoherenceDesign design_coherence_pulses(const CoherenceTarget& target,
                                        const DecoherenceRates& rates,
                                        const DesignOptions& options) {
  validate(target);
  CoherenceDesign out = try_design_coherence(target, rates, options);
  if (out.report.reason == Infeasibility::singular) {
    throw Error(ErrorCode::DenominatorCollapse, out.report.detail);
  }
  if (!out.report.feasible()) {
    std::ostringstream msg;
    msg << "coherence target (" << target.h2_final << ", " << target.h3_final
        << ") infeasible [" << to_string(out.report.reason) << "]: " << out.report.detail;
    throw Error(ErrorCode::InfeasibleTarget, msg.str());
  }
  return out;
}

}  // namespace pulseforge
