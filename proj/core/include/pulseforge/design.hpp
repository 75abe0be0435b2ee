#pragma once

#include <cstddef>
#include <string>
#include <string_view>

namespace pulseforge {

// Why a target could not be realized. `none` means feasible.
enum class Infeasibility {
  none,
  constraint,  // target outside the physical region
  cap,         // drive exceeds omega_cap (or diverges) past the startup window
  unphysical,  // designed state loses positivity
  singular,    // coherence-design denominator collapsed
  tracking,    // master-equation verification misses the prescribed path
};

std::string_view to_string(Infeasibility reason) noexcept;

struct DesignOptions {
  double dt = 1e-3;              // design grid step, us
  double omega_cap = 100.0;      // 1/us
  double cap_fraction = 0.01;    // allowed fraction of capped grid points
  double delta_fraction = 1e-4;  // start offset delta = delta_fraction * t_f
  double startup_multiple = 100; // startup window is [0, startup_multiple * delta)
  double positivity_tol = 1e-7;  // for designed family states
  double tracking_tol = 1e-3;    // closed-loop verification threshold
  bool verify = true;            // run the master-equation verification
};

struct DesignReport {
  Infeasibility reason = Infeasibility::none;
  std::string detail;
  double delta = 0.0;
  double max_omega01 = 0.0;
  double max_omega12 = 0.0;
  std::size_t capped_points = 0;
  double min_eigenvalue = 0.0;      // over designed family states
  double closed_loop_error = 0.0;   // max deviation from the prescribed path
  bool verified = false;

  bool feasible() const noexcept { return reason == Infeasibility::none; }
  double max_omega() const noexcept {
    return max_omega01 > max_omega12 ? max_omega01 : max_omega12;
  }
};

}  // namespace pulseforge
