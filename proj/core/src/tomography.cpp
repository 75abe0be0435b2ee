#include "pulseforge/tomography.hpp"

#include "pulseforge/errors.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <sstream>

namespace pulseforge {

Eigen::Matrix3cd x_half(int level_a, int level_b) {
  if (level_a == level_b || level_a < 0 || level_a > 2 || level_b < 0 || level_b > 2) {
    throw Error(ErrorCode::InvalidArgument, "x_half: need two distinct levels");
  }
  const double c = std::cos(std::numbers::pi / 4.0);
  const std::complex<double> s{0.0, -std::sin(std::numbers::pi / 4.0)};
  Eigen::Matrix3cd u = Eigen::Matrix3cd::Identity();
  const auto a = row_of(level_a);
  const auto b = row_of(level_b);
  u(a, a) = c;
  u(b, b) = c;
  u(a, b) = s;
  u(b, a) = s;
  return u;
}

Eigen::Matrix3cd tomography_rotation(int p) {
  switch (p) {
    case 1: return Eigen::Matrix3cd::Identity();
    case 2: return x_half(0, 1);
    case 3: return x_half(1, 2);
    case 4: return x_half(1, 2) * x_half(0, 1);
    default: throw Error(ErrorCode::InvalidArgument, "tomography_rotation: p must be 1..4");
  }
}

DiagonalReads tomo_rotations(const DensityMatrix& m) {
  DiagonalReads reads;
  for (int p = 1; p <= 4; ++p) {
    const Eigen::Matrix3cd u = tomography_rotation(p);
    reads.setting[static_cast<std::size_t>(p - 1)] = populations(u * m * u.adjoint());
  }
  return reads;
}

Coherences reconstruct_coherences(const DiagonalReads& r) {
  const double sqrt2 = std::numbers::sqrt2;
  const double rho1_2 = r.read(1, 2);
  const double rho1_1 = r.read(1, 1);
  Coherences c;
  c.h1 = r.read(3, 2) - 0.5 * (rho1_2 + rho1_1);
  c.h3 = r.read(2, 1) - 0.5 * (1.0 - rho1_2);
  c.h2 = -(rho1_2 - 2.0 * sqrt2 * c.h1 + 2.0 * c.h3 + 1.0 - 4.0 * r.read(4, 1)) / (2.0 * sqrt2);
  return c;
}

CalibrationMatrix::CalibrationMatrix(const Eigen::Matrix3d& f) : f_(f) {
  if (!f_.allFinite() || f_.minCoeff() < 0.0 || f_.maxCoeff() > 1.0) {
    throw Error(ErrorCode::InvalidArgument, "CalibrationMatrix: entries must lie in [0, 1]");
  }
  for (int c = 0; c < 3; ++c) {
    if (std::abs(f_.col(c).sum() - 1.0) > 1e-9) {
      std::ostringstream msg;
      msg << "CalibrationMatrix: column " << c << " sums to " << f_.col(c).sum();
      throw Error(ErrorCode::InvalidArgument, msg.str());
    }
  }
  Eigen::FullPivLU<Eigen::Matrix3d> lu(f_);
  if (!lu.isInvertible() || condition_number() > 1e12) {
    throw Error(ErrorCode::SingularMatrix, "CalibrationMatrix: matrix is singular");
  }
  f_inv_ = lu.inverse();
}

CalibrationMatrix CalibrationMatrix::identity() {
  return CalibrationMatrix(Eigen::Matrix3d::Identity());
}

CalibrationMatrix CalibrationMatrix::reference() {
  Eigen::Matrix3d f;
  f << 0.974, 0.102, 0.041,
       0.017, 0.885, 0.141,
       0.009, 0.013, 0.818;
  return CalibrationMatrix(f);
}

double CalibrationMatrix::condition_number() const {
  Eigen::JacobiSVD<Eigen::Matrix3d> svd(f_);
  const auto& s = svd.singularValues();
  return s(2) > 0.0 ? s(0) / s(2) : std::numeric_limits<double>::infinity();
}

Populations CalibrationMatrix::apply(const Populations& actual) const {
  const Eigen::Vector3d v = f_ * Eigen::Vector3d(actual[0], actual[1], actual[2]);
  return {v(0), v(1), v(2)};
}

Populations calibrate(const Populations& measured, const CalibrationMatrix& f, bool clip) {
  const Eigen::Vector3d v = f.inverse() * Eigen::Vector3d(measured[0], measured[1], measured[2]);
  Populations out{v(0), v(1), v(2)};
  if (clip) {
    double total = 0.0;
    for (double& x : out) {
      x = std::clamp(x, 0.0, 1.0);
      total += x;
    }
    if (total > 0.0) {
      for (double& x : out) x /= total;
    }
  }
  return out;
}

DiagonalReads calibrate(const DiagonalReads& measured, const CalibrationMatrix& f, bool clip) {
  DiagonalReads out;
  for (std::size_t p = 0; p < out.setting.size(); ++p) {
    out.setting[p] = calibrate(measured.setting[p], f, clip);
  }
  return out;
}

CalibrationMatrix calibration_from_counts(const CountMatrix& counts, std::int64_t shots) {
  if (shots <= 0) {
    throw Error(ErrorCode::InvalidArgument, "calibration_from_counts: shots must be positive");
  }
  Eigen::Matrix3d f;
  for (int c = 0; c < 3; ++c) {
    std::int64_t total = 0;
    for (int r = 0; r < 3; ++r) {
      const auto n = counts[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
      if (n < 0) {
        throw Error(ErrorCode::InvalidArgument, "calibration_from_counts: negative count");
      }
      total += n;
      f(r, c) = static_cast<double>(n) / static_cast<double>(shots);
    }
    if (total != shots) {
      std::ostringstream msg;
      msg << "calibration_from_counts: column " << c << " sums to " << total << ", expected "
          << shots;
      throw Error(ErrorCode::ColumnSumMismatch, msg.str());
    }
  }
  return CalibrationMatrix(f);
}

}  // namespace pulseforge
