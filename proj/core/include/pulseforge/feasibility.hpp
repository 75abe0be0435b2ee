#pragma once

#include "pulseforge/design.hpp"
#include "pulseforge/rates.hpp"

#include <cstddef>
#include <optional>
#include <vector>

namespace pulseforge {

enum class ControlMode { population, coherence };

struct FeasibilityCell {
  int i = 0;  // grid index along the first axis (p1 or h2)
  int j = 0;  // grid index along the second axis (p2 or h3)
  double x = 0.0;
  double y = 0.0;
  Infeasibility reason = Infeasibility::constraint;
  double closed_loop_error = 0.0;
  double max_omega = 0.0;

  bool feasible() const noexcept { return reason == Infeasibility::none; }
};

// Square grid of targets. Population maps cover [0, 1]^2, coherence maps
// [-0.5, 0.5]^2; cells outside the physical region are recorded with
// reason = constraint and never designed.
struct FeasibilityMap {
  ControlMode mode = ControlMode::population;
  double t_f = 0.0;
  double grid_step = 0.0;
  int min_index = 0;
  int max_index = 0;
  std::vector<FeasibilityCell> cells;  // row-major over (j, i)

  int extent() const noexcept { return max_index - min_index + 1; }
  const FeasibilityCell* find(int i, int j) const noexcept;
  const FeasibilityCell* nearest(double x, double y) const noexcept;
  std::size_t feasible_count() const noexcept;
};

struct ScanOptions {
  double grid_step = 0.02;
  DesignOptions design;
  unsigned threads = 0;  // 0: PULSEFORGE_THREADS or hardware concurrency
};

// Worker count used by the scans: PULSEFORGE_THREADS when set to a positive
// integer, otherwise std::thread::hardware_concurrency() (at least 1).
unsigned scan_threads(unsigned requested = 0);

FeasibilityCell classify_population(double p1, double p2, double t_f,
                                    const DecoherenceRates& rates,
                                    const DesignOptions& options = {});
FeasibilityCell classify_coherence(double h2, double h3, double t_f,
                                   const DecoherenceRates& rates,
                                   const DesignOptions& options = {});

// Throws Error(InvalidArgument) unless grid_step is in (0, 0.5].
FeasibilityMap population_feasible_region(double t_f, const DecoherenceRates& rates,
                                          const ScanOptions& options = {});
FeasibilityMap coherence_feasible_region(double t_f, const DecoherenceRates& rates,
                                         const ScanOptions& options = {});

// Cells feasible in `inner` but not in `outer`. The maps must share mode
// and grid. Empty result means inner is a cell-wise subset of outer.
std::vector<FeasibilityCell> inclusion_violations(const FeasibilityMap& inner,
                                                  const FeasibilityMap& outer);

}  // namespace pulseforge
