#pragma once

// Internal: RK4 integration of an inverse-design ODE on the pulse grid.

#include "pulseforge/design.hpp"
#include "pulseforge/errors.hpp"
#include "pulseforge/pulse.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <vector>

namespace pulseforge::detail {

template <std::size_t N>
using Vec = std::array<double, N>;

template <std::size_t N>
Vec<N> axpy(const Vec<N>& y, double s, const Vec<N>& k) {
  Vec<N> out;
  for (std::size_t i = 0; i < N; ++i) out[i] = y[i] + s * k[i];
  return out;
}

template <std::size_t N>
bool all_finite(const Vec<N>& y) {
  return std::all_of(y.begin(), y.end(), [](double x) { return std::isfinite(x); });
}

inline bool finite(Drive d) { return std::isfinite(d.omega01) && std::isfinite(d.omega12); }

inline Drive clamp(Drive d, double cap) {
  return {std::clamp(d.omega01, -cap, cap), std::clamp(d.omega12, -cap, cap)};
}

inline std::size_t grid_intervals(double t_f, double dt) {
  if (!(t_f > 0.0) || !std::isfinite(t_f)) {
    throw Error(ErrorCode::InvalidArgument, "design: t_f must be positive");
  }
  if (!(dt > 0.0) || dt > t_f) {
    throw Error(ErrorCode::InvalidArgument, "design: dt must be in (0, t_f]");
  }
  const auto n = static_cast<std::size_t>(std::llround(t_f / dt));
  if (std::abs(static_cast<double>(n) * dt - t_f) > 1e-9 * t_f) {
    throw Error(ErrorCode::InvalidArgument, "design: dt does not tile t_f");
  }
  return n;
}

template <std::size_t N>
struct GridRun {
  std::vector<Vec<N>> states;  // one per grid point
  std::vector<Drive> drives;   // one per grid point
  bool diverged = false;
  double diverged_at = 0.0;
};

// Integrates y' = model.derivative(t, y, model.drive(t, y)) from t = delta to
// t_f. The state recorded at grid point 0 is the seed at delta. Drives are
// clamped to +-cap while t < startup_end. Stops at the first non-finite drive
// or state, leaving zero drives and the last finite state behind.
template <std::size_t N, class Model>
GridRun<N> integrate_on_grid(const Model& model, double t_f, double dt, double delta,
                             const Vec<N>& seed, double cap, double startup_end) {
  const std::size_t n = grid_intervals(t_f, dt);
  GridRun<N> run;
  run.states.assign(n + 1, seed);
  run.drives.assign(n + 1, Drive{});

  auto drive_at = [&](double t, const Vec<N>& y) {
    Drive d = model.drive(t, y);
    if (t < startup_end && finite(d)) d = clamp(d, cap);
    return d;
  };

  Vec<N> y = seed;
  double t = delta;
  Drive d = drive_at(t, y);
  if (!finite(d)) {
    run.diverged = true;
    run.diverged_at = t;
    return run;
  }
  run.drives[0] = d;

  for (std::size_t k = 1; k <= n; ++k) {
    const double t_next = static_cast<double>(k) * dt;
    const double h = t_next - t;
    const Drive d1 = d;
    const Vec<N> k1 = model.derivative(t, y, d1);
    const Vec<N> y2 = axpy(y, 0.5 * h, k1);
    const Vec<N> k2 = model.derivative(t + 0.5 * h, y2, drive_at(t + 0.5 * h, y2));
    const Vec<N> y3 = axpy(y, 0.5 * h, k2);
    const Vec<N> k3 = model.derivative(t + 0.5 * h, y3, drive_at(t + 0.5 * h, y3));
    const Vec<N> y4 = axpy(y, h, k3);
    const Vec<N> k4 = model.derivative(t_next, y4, drive_at(t_next, y4));
    Vec<N> next;
    for (std::size_t i = 0; i < N; ++i) {
      next[i] = y[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    const bool ok = all_finite(next);
    const Drive d_next = ok ? drive_at(t_next, next) : Drive{};
    if (!ok || !finite(d_next)) {
      run.diverged = true;
      run.diverged_at = t_next;
      for (std::size_t j = k; j <= n; ++j) run.states[j] = y;
      return run;
    }
    y = next;
    t = t_next;
    d = d_next;
    run.states[k] = y;
    run.drives[k] = d;
  }
  return run;
}

// Fills max amplitudes and the cap verdict. Points with t < startup_end are
// excluded from the cap count.
void assess_cap(const std::vector<Drive>& drives, double dt, double startup_end,
                const DesignOptions& options, DesignReport& report);

PulseSchedule to_schedule(const std::vector<Drive>& drives, double dt);

}  // namespace pulseforge::detail
