#include "pulseforge/feasibility.hpp"

#include "pulseforge/design_coherence.hpp"
#include "pulseforge/design_population.hpp"
#include "pulseforge/errors.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>

namespace pulseforge {

namespace {

FeasibilityCell from_report(double x, double y, const DesignReport& report) {
  FeasibilityCell cell;
  cell.x = x;
  cell.y = y;
  cell.reason = report.reason;
  cell.closed_loop_error = report.closed_loop_error;
  cell.max_omega = report.max_omega();
  return cell;
}

template <class Classify>
void run_cells(std::vector<FeasibilityCell>& cells, unsigned threads, Classify classify) {
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (;;) {
      const std::size_t k = next.fetch_add(1);
      if (k >= cells.size()) return;
      try {
        classify(cells[k]);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = cells.size();
        return;
      }
    }
  };
  const unsigned n = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(cells.size())));
  if (n == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(n);
    for (unsigned i = 0; i < n; ++i) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);
}

void check_grid_step(double step) {
  if (!(step > 0.0) || step > 0.5) {
    throw Error(ErrorCode::InvalidArgument, "feasibility scan: grid_step must be in (0, 0.5]");
  }
}

int index_bound(double extent, double step) {
  return static_cast<int>(std::floor(extent / step + 1e-9));
}

}  // namespace

const FeasibilityCell* FeasibilityMap::find(int i, int j) const noexcept {
  if (i < min_index || i > max_index || j < min_index || j > max_index) return nullptr;
  const auto row = static_cast<std::size_t>(j - min_index);
  const auto col = static_cast<std::size_t>(i - min_index);
  return &cells[row * static_cast<std::size_t>(extent()) + col];
}

const FeasibilityCell* FeasibilityMap::nearest(double x, double y) const noexcept {
  return find(static_cast<int>(std::lround(x / grid_step)),
              static_cast<int>(std::lround(y / grid_step)));
}

std::size_t FeasibilityMap::feasible_count() const noexcept {
  return static_cast<std::size_t>(
      std::count_if(cells.begin(), cells.end(), [](const auto& c) { return c.feasible(); }));
}

unsigned scan_threads(unsigned requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("PULSEFORGE_THREADS")) {
    try {
      const long v = std::stol(env);
      if (v > 0) return static_cast<unsigned>(v);
    } catch (const std::exception&) {
    }
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

FeasibilityCell classify_population(double p1, double p2, double t_f,
                                    const DecoherenceRates& rates,
                                    const DesignOptions& options) {
  PopulationTarget target{p1, p2, t_f, 0.0};
  const auto design = try_design_population(target, rates, options);
  return from_report(p1, p2, design.report);
}

FeasibilityCell classify_coherence(double h2, double h3, double t_f,
                                   const DecoherenceRates& rates,
                                   const DesignOptions& options) {
  CoherenceTarget target{h2, h3, t_f, 0.0};
  const auto design = try_design_coherence(target, rates, options);
  return from_report(h2, h3, design.report);
}

namespace {

FeasibilityMap scan(ControlMode mode, double t_f, const DecoherenceRates& rates,
                    const ScanOptions& options) {
  check_grid_step(options.grid_step);
  validate(rates);
  FeasibilityMap map;
  map.mode = mode;
  map.t_f = t_f;
  map.grid_step = options.grid_step;
  if (mode == ControlMode::population) {
    map.min_index = 0;
    map.max_index = index_bound(1.0, options.grid_step);
  } else {
    map.max_index = index_bound(0.5, options.grid_step);
    map.min_index = -map.max_index;
  }
  const auto n = static_cast<std::size_t>(map.extent());
  map.cells.resize(n * n);
  for (int j = map.min_index; j <= map.max_index; ++j) {
    for (int i = map.min_index; i <= map.max_index; ++i) {
      auto& cell = map.cells[static_cast<std::size_t>(j - map.min_index) * n +
                             static_cast<std::size_t>(i - map.min_index)];
      cell.i = i;
      cell.j = j;
      cell.x = i * options.grid_step;
      cell.y = j * options.grid_step;
    }
  }

  DesignOptions design = options.design;
  design.verify = true;
  run_cells(map.cells, scan_threads(options.threads), [&](FeasibilityCell& cell) {
    const int i = cell.i;
    const int j = cell.j;
    FeasibilityCell result = mode == ControlMode::population
                                 ? classify_population(cell.x, cell.y, t_f, rates, design)
                                 : classify_coherence(cell.x, cell.y, t_f, rates, design);
    result.i = i;
    result.j = j;
    cell = result;
  });
  return map;
}

}  // namespace

FeasibilityMap population_feasible_region(double t_f, const DecoherenceRates& rates,
                                          const ScanOptions& options) {
  return scan(ControlMode::population, t_f, rates, options);
}

FeasibilityMap coherence_feasible_region(double t_f, const DecoherenceRates& rates,
                                         const ScanOptions& options) {
  return scan(ControlMode::coherence, t_f, rates, options);
}

std::vector<FeasibilityCell> inclusion_violations(const FeasibilityMap& inner,
                                                  const FeasibilityMap& outer) {
  if (inner.mode != outer.mode || inner.min_index != outer.min_index ||
      inner.max_index != outer.max_index ||
      std::abs(inner.grid_step - outer.grid_step) > 1e-15) {
    throw Error(ErrorCode::InvalidArgument, "inclusion_violations: maps use different grids");
  }
  std::vector<FeasibilityCell> out;
  for (std::size_t k = 0; k < inner.cells.size(); ++k) {
    if (inner.cells[k].feasible() && !outer.cells[k].feasible()) out.push_back(inner.cells[k]);
  }
  return out;
}

}  // namespace pulseforge
