#include "pulseforge/lindblad.hpp"

#include "pulseforge/errors.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <sstream>

namespace pulseforge {

namespace {

using cd = std::complex<double>;

Eigen::Matrix3cd transition(int to, int from) {
  Eigen::Matrix3cd m = Eigen::Matrix3cd::Zero();
  m(row_of(to), row_of(from)) = 1.0;
  return m;
}

std::size_t step_count(double duration, double dt) {
  if (!(dt > 0.0) || !std::isfinite(dt)) {
    throw Error(ErrorCode::InvalidArgument, "evolve: dt must be positive");
  }
  const auto n = static_cast<std::size_t>(std::llround(duration / dt));
  if (n == 0 || std::abs(static_cast<double>(n) * dt - duration) > 1e-9 * duration) {
    std::ostringstream msg;
    msg << "evolve: dt = " << dt << " does not tile the pulse duration " << duration;
    throw Error(ErrorCode::InvalidArgument, msg.str());
  }
  return n;
}

DensityMatrix rk4_step(const MasterEquation& eq, const PulseSchedule& pulses,
                       const DensityMatrix& rho, double t, double dt) {
  const Drive d0 = pulses.at(t);
  const Drive dm = pulses.at(t + 0.5 * dt);
  const Drive d1 = pulses.at(t + dt);
  const DensityMatrix k1 = eq.rhs(rho, d0);
  const DensityMatrix k2 = eq.rhs(rho + (0.5 * dt) * k1, dm);
  const DensityMatrix k3 = eq.rhs(rho + (0.5 * dt) * k2, dm);
  const DensityMatrix k4 = eq.rhs(rho + dt * k3, d1);
  return rho + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

}  // namespace

MasterEquation::MasterEquation(const DecoherenceRates& rates) : rates_(rates) {
  validate(rates_);
  jumps_[0] = std::sqrt(rates_.gamma1) * transition(1, 1);
  jumps_[1] = std::sqrt(rates_.gamma2) * transition(2, 2);
  jumps_[2] = std::sqrt(rates_.Gamma1) * transition(0, 1);
  jumps_[3] = std::sqrt(rates_.Gamma2) * transition(1, 2);
  decay_.setZero();
  for (std::size_t j = 0; j < jumps_.size(); ++j) {
    jumps_dag_[j] = jumps_[j].adjoint();
    decay_ += jumps_dag_[j] * jumps_[j];
  }
}

DensityMatrix MasterEquation::rhs(const DensityMatrix& rho, Drive drive) const {
  const Eigen::Matrix3cd h = drive_hamiltonian(drive);
  const cd minus_i{0.0, -1.0};
  DensityMatrix out = minus_i * (h * rho - rho * h);
  for (std::size_t j = 0; j < jumps_.size(); ++j) {
    out.noalias() += jumps_[j] * rho * jumps_dag_[j];
  }
  out.noalias() -= 0.5 * (decay_ * rho + rho * decay_);
  return out;
}

Eigen::Matrix3cd drive_hamiltonian(Drive drive) {
  Eigen::Matrix3cd h = drive.omega01 * transition(0, 1) + drive.omega12 * transition(1, 2);
  return h + h.adjoint().eval();
}

DensityMatrix lindblad_rhs(const DensityMatrix& m, double omega01, double omega12,
                           const DecoherenceRates& r) {
  return MasterEquation(r).rhs(m, {omega01, omega12});
}

std::optional<std::vector<DensityParams>> Trajectory::params(double tol) const {
  std::vector<DensityParams> out;
  out.reserve(states.size());
  try {
    for (const auto& s : states) out.push_back(matrix_to_params(s, tol));
  } catch (const Error&) {
    return std::nullopt;
  }
  return out;
}

Trajectory evolve(const DensityMatrix& rho0, const PulseSchedule& pulses,
                  const DecoherenceRates& r, const EvolveOptions& options) {
  const std::size_t n = step_count(pulses.duration(), options.dt);
  const std::size_t every = std::max<std::size_t>(options.sample_every, 1);
  const MasterEquation eq(r);

  Trajectory traj;
  const std::size_t kept = n / every + 2;
  traj.times.reserve(kept);
  traj.states.reserve(kept);
  traj.trace_dev.reserve(kept);
  traj.min_eig.reserve(kept);

  auto record = [&](std::size_t k, const DensityMatrix& rho) {
    const double t = static_cast<double>(k) * options.dt;
    const double lowest = min_eigenvalue(rho);
    if (lowest < -options.unphysical_tol) {
      std::ostringstream msg;
      msg << "evolve: min eigenvalue " << lowest << " at t = " << t << " us";
      throw Error(ErrorCode::UnphysicalState, msg.str());
    }
    traj.times.push_back(t);
    traj.states.push_back(rho);
    traj.trace_dev.push_back(trace_deviation(rho));
    traj.min_eig.push_back(lowest);
    traj.herm_dev_max = std::max(traj.herm_dev_max, hermiticity_deviation(rho));
  };

  DensityMatrix rho = rho0;
  record(0, rho);
  for (std::size_t k = 0; k < n; ++k) {
    rho = rk4_step(eq, pulses, rho, static_cast<double>(k) * options.dt, options.dt);
    if ((k + 1) % every == 0 || k + 1 == n) record(k + 1, rho);
  }
  return traj;
}

Trajectory evolve(const DensityMatrix& rho0, const PulseSchedule& pulses,
                  const DecoherenceRates& r, double dt, std::size_t sample_every) {
  return evolve(rho0, pulses, r, EvolveOptions{dt, sample_every});
}

DensityMatrix evolve_final(const DensityMatrix& rho0, const PulseSchedule& pulses,
                           const DecoherenceRates& r, double dt) {
  const std::size_t n = step_count(pulses.duration(), dt);
  const MasterEquation eq(r);
  DensityMatrix rho = rho0;
  for (std::size_t k = 0; k < n; ++k) {
    rho = rk4_step(eq, pulses, rho, static_cast<double>(k) * dt, dt);
  }
  return rho;
}

double step_doubling_error(const DensityMatrix& rho0, const PulseSchedule& pulses,
                           const DecoherenceRates& r, double dt) {
  const DensityMatrix coarse = evolve_final(rho0, pulses, r, dt);
  const DensityMatrix fine = evolve_final(rho0, pulses, r, 0.5 * dt);
  return (coarse - fine).cwiseAbs().maxCoeff();
}

}  // namespace pulseforge
