#include "pulseforge/design.hpp"

#include "design_detail.hpp"

#include <sstream>

namespace pulseforge {

std::string_view to_string(Infeasibility reason) noexcept {
  switch (reason) {
    case Infeasibility::none: return "none";
    case Infeasibility::constraint: return "constraint";
    case Infeasibility::cap: return "cap";
    case Infeasibility::unphysical: return "unphysical";
    case Infeasibility::singular: return "singular";
    case Infeasibility::tracking: return "tracking";
  }
  return "unknown";
}

namespace detail {

void assess_cap(const std::vector<Drive>& drives, double dt, double startup_end,
                const DesignOptions& options, DesignReport& report) {
  std::size_t considered = 0;
  std::size_t capped = 0;
  for (std::size_t k = 0; k < drives.size(); ++k) {
    const double a01 = std::abs(drives[k].omega01);
    const double a12 = std::abs(drives[k].omega12);
    report.max_omega01 = std::max(report.max_omega01, a01);
    report.max_omega12 = std::max(report.max_omega12, a12);
    if (static_cast<double>(k) * dt < startup_end) continue;
    ++considered;
    if (a01 > options.omega_cap || a12 > options.omega_cap) ++capped;
  }
  report.capped_points = capped;
  if (report.reason == Infeasibility::none && considered > 0 &&
      static_cast<double>(capped) > options.cap_fraction * static_cast<double>(considered)) {
    report.reason = Infeasibility::cap;
    std::ostringstream msg;
    msg << capped << " of " << considered << " grid points exceed omega_cap = "
        << options.omega_cap << " /us";
    report.detail = msg.str();
  }
}

PulseSchedule to_schedule(const std::vector<Drive>& drives, double dt) {
  std::vector<double> w01(drives.size());
  std::vector<double> w12(drives.size());
  for (std::size_t k = 0; k < drives.size(); ++k) {
    w01[k] = drives[k].omega01;
    w12[k] = drives[k].omega12;
  }
  return PulseSchedule(dt, std::move(w01), std::move(w12));
}

}  // namespace detail
}  // namespace pulseforge
