#pragma once

#include <optional>
#include <utility>

#include "ttfilter/math_util.hpp"
#include "ttfilter/types.hpp"

namespace ttfilter {

// Two-head single-hidden-layer network (no biases) producing the canonical
// spin mean and the raw diagonal of its covariance for a launch along +x.
struct SpinNetParams {
  Eigen::MatrixXd W1;  // hidden x 3
  Eigen::MatrixXd W2;  // 6 x hidden

  int hidden() const { return static_cast<int>(W1.rows()); }
};

// Launcher-side conditioning data for one ball launch.
struct LaunchInfo {
  double phi_f = 0.0;    // frame azimuth [rad]
  double phi_l = 0.0;    // head azimuth [rad]
  double theta_l = 0.0;  // head elevation [rad]
  Vec3 s_m = Vec3::Zero();  // motor actuations (top-left, top-right, bottom), in [0,1]
  bool after_impact = false;

  double phi_total() const { return phi_f + phi_l; }
};

struct CanonicalSpin {
  Vec3 omega;      // canonical spin mean [rad/s]
  Vec3 sigma_raw;  // raw (pre-softplus) diagonal of the spin covariance
};

inline CanonicalSpin canonical_spin(const Vec3& s_m, const SpinNetParams& psi) {
  const Eigen::VectorXd hidden = (psi.W1 * s_m).cwiseMax(0.0);
  const Vec6 out = psi.W2 * hidden;
  return {out.head<3>(), out.tail<3>()};
}

// Rotation taking the canonical +x launch direction to the commanded
// azimuth/elevation: elevate about y first (negative sign so a positive
// elevation pitches +x upward), then rotate about z.
inline Mat3 launch_rotation(double phi_total, double theta_l) {
  return rotation_z(phi_total) * rotation_y(-theta_l);
}

// Initial spin belief. Launcher conditioning applies only before the first
// table impact; afterwards (or without launch info) the mean is zero and the
// covariance comes from the corresponding learned raw vector.
inline std::pair<Vec3, Mat3> initial_spin(const std::optional<LaunchInfo>& launch,
                                          const SpinNetParams& psi,
                                          const Vec3& sigma_omega_raw,
                                          const Vec3& sigma_omega_ai_raw) {
  if (!launch.has_value()) {
    return {Vec3::Zero(), softplus_eps(sigma_omega_raw).asDiagonal().toDenseMatrix()};
  }
  if (launch->after_impact) {
    return {Vec3::Zero(), softplus_eps(sigma_omega_ai_raw).asDiagonal().toDenseMatrix()};
  }
  const CanonicalSpin cs = canonical_spin(launch->s_m, psi);
  const Mat3 R = launch_rotation(launch->phi_total(), launch->theta_l);
  const Mat3 cov = R * softplus_eps(cs.sigma_raw).asDiagonal() * R.transpose();
  return {R * cs.omega, cov};
}

}  // namespace ttfilter
