#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace pulseforge {

struct Drive {
  double omega01 = 0.0;
  double omega12 = 0.0;
};

// Rabi frequencies (1/us) sampled on the uniform grid t_k = k * step,
// k = 0..size()-1, read back by piecewise-linear interpolation.
class PulseSchedule {
 public:
  PulseSchedule() = default;

  // Throws Error(InvalidArgument) on unequal lengths, fewer than two samples,
  // a non-positive step, or non-finite samples.
  PulseSchedule(double step, std::vector<double> omega01, std::vector<double> omega12);

  // Constant drive over [0, duration].
  static PulseSchedule constant(double duration, double step, Drive drive);
  static PulseSchedule zero(double duration, double step) {
    return constant(duration, step, {});
  }

  // Builds a schedule from explicit sample times, which must start at 0 and
  // be uniformly spaced (relative tolerance 1e-9).
  static PulseSchedule from_samples(std::span<const double> times,
                                    std::vector<double> omega01,
                                    std::vector<double> omega12);

  std::size_t size() const noexcept { return omega01_.size(); }
  double step() const noexcept { return step_; }
  double duration() const noexcept { return step_ * static_cast<double>(size() - 1); }
  double time(std::size_t k) const noexcept { return step_ * static_cast<double>(k); }

  const std::vector<double>& omega01() const noexcept { return omega01_; }
  const std::vector<double>& omega12() const noexcept { return omega12_; }

  // Linear interpolation; clamps to the end samples outside [0, duration].
  Drive at(double t) const noexcept;

  double max_abs_omega01() const noexcept;
  double max_abs_omega12() const noexcept;

 private:
  double step_ = 0.0;
  std::vector<double> omega01_;
  std::vector<double> omega12_;
};

}  // namespace pulseforge
