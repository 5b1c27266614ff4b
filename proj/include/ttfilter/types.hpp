#pragma once

#include <Eigen/Dense>

namespace ttfilter {

using Vec3 = Eigen::Vector3d;
using Vec6 = Eigen::Matrix<double, 6, 1>;
using Vec11 = Eigen::Matrix<double, 11, 1>;
using Mat3 = Eigen::Matrix3d;
using Mat6 = Eigen::Matrix<double, 6, 6>;
using Mat11 = Eigen::Matrix<double, 11, 11>;

// Ball state, stored flat as (p, v, omega, a_d, a_m).
// k_d = a_d^2 + eps and k_m = a_m^2 + eps are derived, not stored.
struct State {
  Vec11 z = Vec11::Zero();

  auto p() { return z.segment<3>(0); }
  auto p() const { return z.segment<3>(0); }
  auto v() { return z.segment<3>(3); }
  auto v() const { return z.segment<3>(3); }
  auto omega() { return z.segment<3>(6); }
  auto omega() const { return z.segment<3>(6); }
  double& a_d() { return z(9); }
  double a_d() const { return z(9); }
  double& a_m() { return z(10); }
  double a_m() const { return z(10); }

  static State make(const Vec3& p, const Vec3& v, const Vec3& omega,
                    double a_d, double a_m) {
    State s;
    s.p() = p;
    s.v() = v;
    s.omega() = omega;
    s.a_d() = a_d;
    s.a_m() = a_m;
    return s;
  }
};

struct PhysicalConstants {
  double g_z = -9.802;      // gravitational acceleration z-component [m/s^2]
  double r = 0.02;          // ball radius [m]
  double z_table = 0.0;     // table surface height [m]
  double dt = 1.0 / 180.0;  // camera sampling period [s]
  double eps = 0.05;        // coefficient floor for k_d, k_m

  Vec3 gravity() const { return Vec3(0.0, 0.0, g_z); }
};

// 6x6 linear map from pre-impact (v, omega) to post-impact (v, omega).
struct ImpactMap {
  Mat6 C = flip_matrix();

  // Lifted 11x11 form blockdiag(I3, C, 1, 1): position and the drag/Magnus
  // parameters pass through unchanged.
  Mat11 lifted() const {
    Mat11 L = Mat11::Identity();
    L.block<6, 6>(3, 3) = C;
    return L;
  }

  // Identity except that the z-velocity flips sign.
  static Mat6 flip_matrix() {
    Mat6 C = Mat6::Identity();
    C(2, 2) = -1.0;
    return C;
  }
};

}  // namespace ttfilter
