#pragma once

#include "pulseforge/analysis.hpp"
#include "pulseforge/density.hpp"
#include "pulseforge/feasibility.hpp"
#include "pulseforge/lindblad.hpp"
#include "pulseforge/pulse.hpp"
#include "pulseforge/tomography.hpp"

#include <iosfwd>
#include <span>
#include <string>

namespace pulseforge::csv {

// Shortest decimal that round-trips to the same double.
std::string shortest(double value);

// 12 significant digits ("%.12g"), used for trajectories.
std::string sig12(double value);

// t_us,P0,P1,P2,h1,h2,h3,trace_dev,min_eig
void write_trajectory(std::ostream& os, const Trajectory& traj);

// t_us,omega01_inv_us,omega12_inv_us
void write_pulses(std::ostream& os, const PulseSchedule& pulses);

// Throws Error(IoError) on a malformed header or row.
PulseSchedule read_pulses(std::istream& is);

// t_us,h1,h2,h3 (population designs) or t_us,f1,f2,h1 (coherence designs).
void write_design_aux(std::ostream& os, const PulseSchedule& grid,
                      std::span<const DensityParams> designed, ControlMode mode);

// p1,p2,... or h2,h3,... followed by feasible,reason,closed_loop_error,max_omega
void write_feasibility(std::ostream& os, const FeasibilityMap& map);

// t_us,P1,epsilon_inv_us
void write_energy(std::ostream& os, std::span<const EnergySample> energy);

// Three lines of three whitespace-separated decimals, row i = measured |i>,
// column i' = prepared |i'>; '#' starts a comment.
void write_calibration(std::ostream& os, const CalibrationMatrix& f);
CalibrationMatrix read_calibration(std::istream& is);

// setting,P0,P1,P2 with settings U1..U4.
void write_reads(std::ostream& os, const DiagonalReads& reads);
DiagonalReads read_reads(std::istream& is);

}  // namespace pulseforge::csv
