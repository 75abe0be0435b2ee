#pragma once

#include "pulseforge/density.hpp"
#include "pulseforge/design.hpp"
#include "pulseforge/lindblad.hpp"
#include "pulseforge/pulse.hpp"
#include "pulseforge/rates.hpp"

#include <array>
#include <cstddef>
#include <numbers>
#include <optional>
#include <vector>

namespace pulseforge {

// sqrt(sum_i (ideal_i - measured_i)^2 / 3) over (P0, P1, P2).
double population_error(const Populations& ideal, const Populations& measured);

// sqrt(sum_m (ideal_m - measured_m)^2 / 2) over (h2, h3).
double coherence_error(const std::array<double, 2>& ideal,
                       const std::array<double, 2>& measured);

struct TimeWindow {
  double t_start = 0.0;
  double t_end = 0.0;
  std::size_t first = 0;  // sample indices, inclusive
  std::size_t last = 0;
};

// Longest suffix of the trajectory over which each of P0, P1, P2 stays
// within variation_tol (max - min). nullopt if fewer than min_samples
// samples qualify.
std::optional<TimeWindow> freezing_window(const Trajectory& traj,
                                          double variation_tol = 0.01,
                                          std::size_t min_samples = 10);

// Largest max - min of any population over samples with t in [t0, t1].
double population_variation(const Trajectory& traj, double t0, double t1);

// Charge / store / discharge of the |0>-|1> transition. The target f1(t)
// rises logistically to charge_level over t_charge, holds for t_store, and
// falls logistically to residual_level over t_discharge. Each segment uses
// its own gradient 50 / duration.
struct QBConfig {
  double omega10 = 2.0 * std::numbers::pi * 5.96e3;  // 1/us
  double charge_level = 0.8;
  double residual_level = 0.3;
  double t_charge = 1.0;     // us
  double t_store = 1.2;      // us
  double t_discharge = 1.0;  // us
  double Gamma1 = 1.0 / 9.5;
  double gamma1 = 2.0 / 6.0 - 1.0 / 9.5;

  double duration() const { return t_charge + t_store + t_discharge; }
  double store_begin() const { return t_charge; }
  double store_end() const { return t_charge + t_store; }
  DecoherenceRates rates() const { return {Gamma1, 0.0, gamma1, 0.0}; }

  // Prescribed P1 and its derivative.
  double f1(double t) const;
  double f1_dot(double t) const;
};

// Throws Error(InvalidArgument) for non-positive durations, levels outside
// (0, 1], residual_level above charge_level, or negative rates.
void validate(const QBConfig& cfg);

struct EnergySample {
  double t = 0.0;
  double p1 = 0.0;
  double epsilon = 0.0;  // omega10 * P1, 1/us
};

struct QBResult {
  PulseSchedule pulses;         // omega12 identically zero
  std::vector<double> h3;       // designed coherence on the pulse grid
  Trajectory trajectory;        // master-equation verification
  std::vector<EnergySample> energy;
  DesignReport report;
};

QBResult try_qb_scenario(const QBConfig& cfg, const DesignOptions& options = {});

// Throws Error(InfeasibleTarget) when the profile cannot be realized.
QBResult qb_scenario(const QBConfig& cfg, const DesignOptions& options = {});

// Same charge pulses, but no drive during the storage window.
Trajectory qb_undriven_storage(const QBConfig& cfg, const PulseSchedule& designed,
                               double dt = 1e-3);

// exp(-Gamma1 t_store): fraction of P1 left after an undriven hold.
double qb_free_storage_retention(const QBConfig& cfg);

}  // namespace pulseforge
