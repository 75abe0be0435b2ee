#pragma once

#include "pulseforge/density.hpp"
#include "pulseforge/pulse.hpp"
#include "pulseforge/rates.hpp"

#include <array>
#include <optional>
#include <vector>

namespace pulseforge {

// Markovian master equation for the driven qutrit in the interaction picture:
//
//   H = O01 |0><1| + O12 |1><2| + h.c.
//   L1 = sqrt(gamma1) |1><1|,  L2 = sqrt(gamma2) |2><2|,
//   L3 = sqrt(Gamma1) |0><1|,  L4 = sqrt(Gamma2) |1><2|
//
//   drho/dt = -i[H, rho] + sum_j (L_j rho L_j^+ - {L_j^+ L_j, rho}/2)
class MasterEquation {
 public:
  explicit MasterEquation(const DecoherenceRates& rates);

  DensityMatrix rhs(const DensityMatrix& rho, Drive drive) const;

  const DecoherenceRates& rates() const noexcept { return rates_; }

 private:
  DecoherenceRates rates_;
  std::array<Eigen::Matrix3cd, 4> jumps_;
  std::array<Eigen::Matrix3cd, 4> jumps_dag_;
  Eigen::Matrix3cd decay_;  // sum_j L_j^+ L_j
};

DensityMatrix lindblad_rhs(const DensityMatrix& m, double omega01, double omega12,
                           const DecoherenceRates& r);

// Hamiltonian of the drive in the {|2>, |1>, |0>} basis.
Eigen::Matrix3cd drive_hamiltonian(Drive drive);

struct Trajectory {
  std::vector<double> times;
  std::vector<DensityMatrix> states;
  std::vector<double> trace_dev;
  std::vector<double> min_eig;
  double herm_dev_max = 0.0;

  std::size_t size() const noexcept { return times.size(); }

  // Family parameters of every sample, or nullopt if a state has left the
  // five-parameter family at tolerance tol.
  std::optional<std::vector<DensityParams>> params(double tol = 1e-7) const;
};

struct EvolveOptions {
  double dt = 1e-3;              // us
  std::size_t sample_every = 1;  // keep every n-th step (first and last always kept)
  double unphysical_tol = 1e-6;  // UnphysicalState below -unphysical_tol
};

// Fixed-step classical RK4 from t = 0 to pulses.duration(). Pulses are
// interpolated linearly at the stage times. States are never renormalized.
// Throws Error(InvalidArgument) if dt does not tile the duration and
// Error(UnphysicalState) if a kept sample has an eigenvalue below
// -unphysical_tol.
Trajectory evolve(const DensityMatrix& rho0, const PulseSchedule& pulses,
                  const DecoherenceRates& r, const EvolveOptions& options = {});

Trajectory evolve(const DensityMatrix& rho0, const PulseSchedule& pulses,
                  const DecoherenceRates& r, double dt, std::size_t sample_every);

// End state only, without per-sample checks. Used by convergence studies and
// the step-doubling estimate.
DensityMatrix evolve_final(const DensityMatrix& rho0, const PulseSchedule& pulses,
                           const DecoherenceRates& r, double dt);

// Max-element difference between the end states at dt and dt/2.
double step_doubling_error(const DensityMatrix& rho0, const PulseSchedule& pulses,
                           const DecoherenceRates& r, double dt);

}  // namespace pulseforge
