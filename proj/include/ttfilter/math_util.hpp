#pragma once

#include <cmath>

#include "ttfilter/types.hpp"

namespace ttfilter {

inline constexpr double kSoftplusFloor = 1e-6;

// [x]+ = log(1 + e^x) + 1e-6, overflow-safe. Above the cutoff log1p(e^x)
// equals x to well below 1e-12.
inline double softplus_eps(double x) {
  if (x > 30.0) return x + kSoftplusFloor;
  return std::log1p(std::exp(x)) + kSoftplusFloor;
}

inline double softplus_derivative(double x) {
  if (x > 30.0) return 1.0;
  if (x < -30.0) return std::exp(x);
  return 1.0 / (1.0 + std::exp(-x));
}

// Inverse of softplus_eps: returns x such that softplus_eps(x) = y.
inline double inv_softplus_eps(double y) {
  const double t = y - kSoftplusFloor;
  if (t > 30.0) return t;
  return std::log(std::expm1(t));
}

template <typename Derived>
Eigen::Matrix<double, Derived::RowsAtCompileTime, 1> softplus_eps(
    const Eigen::MatrixBase<Derived>& x) {
  Eigen::Matrix<double, Derived::RowsAtCompileTime, 1> out(x.rows());
  for (Eigen::Index i = 0; i < x.rows(); ++i) out(i) = softplus_eps(x(i));
  return out;
}

template <typename Derived>
Eigen::Matrix<double, Derived::RowsAtCompileTime, 1> inv_softplus_eps(
    const Eigen::MatrixBase<Derived>& y) {
  Eigen::Matrix<double, Derived::RowsAtCompileTime, 1> out(y.rows());
  for (Eigen::Index i = 0; i < y.rows(); ++i) out(i) = inv_softplus_eps(y(i));
  return out;
}

inline Mat3 skew(const Vec3& a) {
  Mat3 S;
  S << 0.0, -a.z(), a.y(),
       a.z(), 0.0, -a.x(),
       -a.y(), a.x(), 0.0;
  return S;
}

inline Mat3 rotation_z(double angle) {
  const double c = std::cos(angle), s = std::sin(angle);
  Mat3 R;
  R << c, -s, 0.0,
       s, c, 0.0,
       0.0, 0.0, 1.0;
  return R;
}

inline Mat3 rotation_y(double angle) {
  const double c = std::cos(angle), s = std::sin(angle);
  Mat3 R;
  R << c, 0.0, s,
       0.0, 1.0, 0.0,
       -s, 0.0, c;
  return R;
}

}  // namespace ttfilter
