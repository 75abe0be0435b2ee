#pragma once

#include <Eigen/Dense>

#include <array>

namespace pulseforge {

// 3x3 density matrix in the basis order {|2>, |1>, |0>}: row/column 0 is |2>.
using DensityMatrix = Eigen::Matrix3cd;

// Matrix row holding the state label |level>. This is the only place the
// label <-> row mapping lives.
constexpr Eigen::Index row_of(int level) noexcept { return 2 - level; }

// Populations indexed by state label: {P0, P1, P2}.
using Populations = std::array<double, 3>;

inline constexpr double kAlgebraicTol = 1e-12;
inline constexpr double kPositivityTol = 1e-9;

// Five-parameter qutrit family:
//
//   | f2     -i h1   h2      |
//   | i h1    f1    -i h3    |
//   | h2      i h3   1-f1-f2 |
struct DensityParams {
  double f1 = 0.0;  // population of |1>
  double f2 = 0.0;  // population of |2>
  double h1 = 0.0;  // Im-coherence |2>,|1>
  double h2 = 0.0;  // Re-coherence |2>,|0>
  double h3 = 0.0;  // Im-coherence |1>,|0>

  double p0() const noexcept { return 1.0 - f1 - f2; }
  Populations populations() const noexcept { return {p0(), f1, f2}; }

  friend bool operator==(const DensityParams&, const DensityParams&) = default;
};

DensityMatrix params_to_matrix(const DensityParams& p);

// Reads the family parameters back from the matrix entries. Throws
// Error(OutsideFamily) when an entry that the family fixes to zero exceeds
// tol, and Error(InvalidArgument) when the matrix is not Hermitian with unit
// trace within tol.
DensityParams matrix_to_params(const DensityMatrix& m, double tol = kAlgebraicTol);

DensityMatrix ground_state();
DensityMatrix basis_state(int level);

Populations populations(const DensityMatrix& m);

double min_eigenvalue(const DensityMatrix& m);
double hermiticity_deviation(const DensityMatrix& m);
double trace_deviation(const DensityMatrix& m);

struct PhysicalityReport {
  double trace_dev = 0.0;
  double herm_dev = 0.0;
  double min_eig = 0.0;
  bool ok = false;
};

PhysicalityReport physicality_check(const DensityMatrix& m, double tol = kPositivityTol);

}  // namespace pulseforge
