#include "pulseforge/pulse.hpp"

#include "pulseforge/errors.hpp"

#include <algorithm>
#include <cmath>

namespace pulseforge {

namespace {

double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace

PulseSchedule::PulseSchedule(double step, std::vector<double> omega01,
                             std::vector<double> omega12)
    : step_(step), omega01_(std::move(omega01)), omega12_(std::move(omega12)) {
  if (!(step_ > 0.0) || !std::isfinite(step_)) {
    throw Error(ErrorCode::InvalidArgument, "PulseSchedule: step must be positive");
  }
  if (omega01_.size() != omega12_.size()) {
    throw Error(ErrorCode::InvalidArgument, "PulseSchedule: sample lists differ in length");
  }
  if (omega01_.size() < 2) {
    throw Error(ErrorCode::InvalidArgument, "PulseSchedule: need at least two samples");
  }
  auto finite = [](double x) { return std::isfinite(x); };
  if (!std::all_of(omega01_.begin(), omega01_.end(), finite) ||
      !std::all_of(omega12_.begin(), omega12_.end(), finite)) {
    throw Error(ErrorCode::InvalidArgument, "PulseSchedule: non-finite sample");
  }
}

PulseSchedule PulseSchedule::constant(double duration, double step, Drive drive) {
  const auto n = static_cast<std::size_t>(std::llround(duration / step));
  if (n == 0 || std::abs(static_cast<double>(n) * step - duration) > 1e-9 * duration) {
    throw Error(ErrorCode::InvalidArgument, "PulseSchedule: step does not tile duration");
  }
  return PulseSchedule(step, std::vector<double>(n + 1, drive.omega01),
                       std::vector<double>(n + 1, drive.omega12));
}

PulseSchedule PulseSchedule::from_samples(std::span<const double> times,
                                          std::vector<double> omega01,
                                          std::vector<double> omega12) {
  if (times.size() < 2 || times.size() != omega01.size()) {
    throw Error(ErrorCode::InvalidArgument, "PulseSchedule: need matching sample times");
  }
  if (std::abs(times.front()) > 1e-12) {
    throw Error(ErrorCode::InvalidArgument, "PulseSchedule: grid must start at t = 0");
  }
  const double step = (times.back() - times.front()) / static_cast<double>(times.size() - 1);
  for (std::size_t k = 0; k < times.size(); ++k) {
    if (std::abs(times[k] - step * static_cast<double>(k)) > 1e-9 * std::max(1.0, times.back())) {
      throw Error(ErrorCode::InvalidArgument, "PulseSchedule: grid is not uniform");
    }
  }
  return PulseSchedule(step, std::move(omega01), std::move(omega12));
}

Drive PulseSchedule::at(double t) const noexcept {
  if (t <= 0.0) return {omega01_.front(), omega12_.front()};
  const double u = t / step_;
  const auto last = size() - 1;
  if (u >= static_cast<double>(last)) return {omega01_.back(), omega12_.back()};
  auto k = static_cast<std::size_t>(u);
  if (k >= last) k = last - 1;
  const double w = u - static_cast<double>(k);
  return {omega01_[k] + w * (omega01_[k + 1] - omega01_[k]),
          omega12_[k] + w * (omega12_[k + 1] - omega12_[k])};
}

double PulseSchedule::max_abs_omega01() const noexcept { return max_abs(omega01_); }
double PulseSchedule::max_abs_omega12() const noexcept { return max_abs(omega12_); }

}  // namespace pulseforge
