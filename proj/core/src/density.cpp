#include "pulseforge/density.hpp"

#include "pulseforge/errors.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <sstream>

namespace pulseforge {

using cd = std::complex<double>;

DensityMatrix params_to_matrix(const DensityParams& p) {
  const cd i{0.0, 1.0};
  DensityMatrix m;
  m << p.f2, -i * p.h1, p.h2,
       i * p.h1, p.f1, -i * p.h3,
       p.h2, i * p.h3, 1.0 - p.f1 - p.f2;
  return m;
}

DensityParams matrix_to_params(const DensityMatrix& m, double tol) {
  if (hermiticity_deviation(m) > tol || trace_deviation(m) > tol) {
    std::ostringstream msg;
    msg << "matrix_to_params: not Hermitian with unit trace (herm dev "
        << hermiticity_deviation(m) << ", trace dev " << trace_deviation(m) << ")";
    throw Error(ErrorCode::InvalidArgument, msg.str());
  }
  const double offending = std::max({std::abs(m(0, 2).imag()), std::abs(m(2, 0).imag()),
                                     std::abs(m(0, 1).real()), std::abs(m(1, 0).real()),
                                     std::abs(m(1, 2).real()), std::abs(m(2, 1).real()),
                                     std::abs(m(0, 0).imag()), std::abs(m(1, 1).imag())});
  if (offending > tol) {
    std::ostringstream msg;
    msg << "matrix_to_params: state left the five-parameter family (entry deviation "
        << offending << " > " << tol << ")";
    throw Error(ErrorCode::OutsideFamily, msg.str());
  }
  DensityParams p;
  p.f2 = m(0, 0).real();
  p.f1 = m(1, 1).real();
  p.h1 = m(1, 0).imag();
  p.h2 = m(0, 2).real();
  p.h3 = m(2, 1).imag();
  return p;
}

DensityMatrix ground_state() { return basis_state(0); }

DensityMatrix basis_state(int level) {
  if (level < 0 || level > 2) {
    throw Error(ErrorCode::InvalidArgument, "basis_state: level must be 0, 1 or 2");
  }
  DensityMatrix m = DensityMatrix::Zero();
  m(row_of(level), row_of(level)) = 1.0;
  return m;
}

Populations populations(const DensityMatrix& m) {
  return {m(row_of(0), row_of(0)).real(), m(row_of(1), row_of(1)).real(),
          m(row_of(2), row_of(2)).real()};
}

double min_eigenvalue(const DensityMatrix& m) {
  const Eigen::Matrix3cd herm = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3cd> solver(herm, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

double hermiticity_deviation(const DensityMatrix& m) {
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

double trace_deviation(const DensityMatrix& m) { return std::abs(m.trace() - cd{1.0, 0.0}); }

PhysicalityReport physicality_check(const DensityMatrix& m, double tol) {
  PhysicalityReport r;
  r.trace_dev = trace_deviation(m);
  r.herm_dev = hermiticity_deviation(m);
  r.min_eig = min_eigenvalue(m);
  r.ok = r.trace_dev <= tol && r.herm_dev <= tol && r.min_eig >= -tol;
  return r;
}

}  // namespace pulseforge
