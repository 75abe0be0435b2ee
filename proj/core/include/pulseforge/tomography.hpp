#pragma once

#include "pulseforge/density.hpp"

#include <Eigen/Dense>

#include <array>
#include <cstdint>

namespace pulseforge {

// Diagonal populations (indexed by state label) after each of the four
// rotation settings U1 = I, U2 = (X/2)_01, U3 = (X/2)_12, U4 = U3 U2.
struct DiagonalReads {
  std::array<Populations, 4> setting{};

  // Population of |level> after rotation setting p (1-based, as U1..U4).
  double read(int p, int level) const { return setting.at(p - 1).at(level); }
};

struct Coherences {
  double h1 = 0.0;
  double h2 = 0.0;
  double h3 = 0.0;
};

// exp(-i pi/4 (|a><b| + |b><a|)), identity on the third level.
Eigen::Matrix3cd x_half(int level_a, int level_b);

// U_p for p = 1..4.
Eigen::Matrix3cd tomography_rotation(int p);

DiagonalReads tomo_rotations(const DensityMatrix& m);

// Exact inversion on noiseless family reads:
//   h1 = rho3(2) - (rho1(2) + rho1(1))/2
//   h3 = rho2(1) - (1 - rho1(2))/2
//   h2 = -(rho1(2) - 2 sqrt2 h1 + 2 h3 + 1 - 4 rho4(1)) / (2 sqrt2)
Coherences reconstruct_coherences(const DiagonalReads& reads);

// F(i, i') = probability of measuring |i> when |i'> was prepared; columns
// sum to one.
class CalibrationMatrix {
 public:
  // Throws Error(InvalidArgument) unless entries lie in [0, 1] and columns
  // sum to 1 within 1e-9, and Error(SingularMatrix) if F is not invertible.
  explicit CalibrationMatrix(const Eigen::Matrix3d& f);

  static CalibrationMatrix identity();
  // Readout matrix reported for the reference device.
  static CalibrationMatrix reference();

  const Eigen::Matrix3d& matrix() const noexcept { return f_; }
  const Eigen::Matrix3d& inverse() const noexcept { return f_inv_; }
  double condition_number() const;

  // Measured probabilities for true populations: P^m = F P^c.
  Populations apply(const Populations& actual) const;

 private:
  Eigen::Matrix3d f_;
  Eigen::Matrix3d f_inv_;
};

// P^c = F^-1 P^m. Entries may leave [0, 1]; pass clip = true to clamp and
// renormalize.
Populations calibrate(const Populations& measured, const CalibrationMatrix& f,
                      bool clip = false);
DiagonalReads calibrate(const DiagonalReads& measured, const CalibrationMatrix& f,
                        bool clip = false);

using CountMatrix = std::array<std::array<std::int64_t, 3>, 3>;

// F(i, i') = counts[i][i'] / shots. Throws Error(ColumnSumMismatch) if a
// column does not sum to shots.
CalibrationMatrix calibration_from_counts(const CountMatrix& counts, std::int64_t shots);

}  // namespace pulseforge
