#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

#include "ttfilter/math_util.hpp"
#include "ttfilter/types.hpp"

namespace ttfilter {

// Thrown when impact handling is invoked on a step whose constant-gravity
// impact-time discriminant is negative, i.e. the caller asked for an impact
// on a non-penetrating step.
struct NegativeDiscriminant : std::runtime_error {
  NegativeDiscriminant() : std::runtime_error("impact-time discriminant is negative") {}
};

inline std::pair<double, double> coefficients(double a_d, double a_m, double eps) {
  return {a_d * a_d + eps, a_m * a_m + eps};
}

// One explicit Euler step of the free-flight ODE
//   dv/dt = -k_d ||v|| v + k_m (omega x v) + g
// over an arbitrary timespan dt. Spin and the drag/Magnus parameters are
// held constant.
inline State free_flight_step(const State& z, double dt, const PhysicalConstants& c) {
  const auto [k_d, k_m] = coefficients(z.a_d(), z.a_m(), c.eps);
  const Vec3 v = z.v();
  const Vec3 acc = -k_d * v.norm() * v + k_m * z.omega().cross(v) + c.gravity();
  State out = z;
  out.p() = z.p() + dt * v;
  out.v() = v + dt * acc;
  return out;
}

// Vector field of the flight ODE lifted to the 11-dim state; this is also
// the derivative of free_flight_step with respect to the timespan.
inline Vec11 flight_field(const State& z, const PhysicalConstants& c) {
  const auto [k_d, k_m] = coefficients(z.a_d(), z.a_m(), c.eps);
  const Vec3 v = z.v();
  Vec11 f = Vec11::Zero();
  f.segment<3>(0) = v;
  f.segment<3>(3) = -k_d * v.norm() * v + k_m * z.omega().cross(v) + c.gravity();
  return f;
}

// Constant-gravity approximation of the time at which the ball's lower edge
// reaches the table surface, clamped into [0, dt]. Drag and Magnus terms are
// ignored within the step. Throws NegativeDiscriminant when the vertical
// motion cannot reach the table under that approximation.
inline double impact_time(const State& z, const PhysicalConstants& c) {
  const double v_z = z.v()(2);
  const double h = -((z.p()(2) - c.r) - c.z_table);
  const double disc = v_z * v_z + 2.0 * c.g_z * h;
  if (disc < 0.0) throw NegativeDiscriminant();
  const double t = -(v_z + std::sqrt(disc)) / c.g_z;
  return std::clamp(t, 0.0, c.dt);
}

// Whether the analytic impact time would be produced by the clamp rather
// than the root itself. The Jacobian of the clamped map is zero there.
inline bool impact_time_clamped(const State& z, const PhysicalConstants& c) {
  const double v_z = z.v()(2);
  const double h = -((z.p()(2) - c.r) - c.z_table);
  const double disc = v_z * v_z + 2.0 * c.g_z * h;
  if (disc < 0.0) throw NegativeDiscriminant();
  const double t = -(v_z + std::sqrt(disc)) / c.g_z;
  return t <= 0.0 || t >= c.dt;
}

// z+ = C' z-: velocity and spin mapped through C; position, a_d, a_m kept.
inline State apply_impact(const State& z, const ImpactMap& impact) {
  State out = z;
  out.z.segment<6>(3) = impact.C * z.z.segment<6>(3);
  return out;
}

struct ImpactEvent {
  bool occurred = false;
  double t_impact = 0.0;
  bool repenetrated = false;  // post-impact sub-step ended below the table
};

// One camera-rate forward step: free flight over dt, or, when the free
// flight would end with the ball below the table, free flight to the impact
// time, the impact map, and free flight over the remaining time. At most one
// impact per step is handled.
inline State forward_step(const State& z, const ImpactMap& impact,
                          const PhysicalConstants& c, ImpactEvent* event = nullptr) {
  const State free_end = free_flight_step(z, c.dt, c);
  if (free_end.p()(2) - c.r >= c.z_table) {
    if (event) *event = ImpactEvent{};
    return free_end;
  }
  const double t_imp = impact_time(z, c);
  const State pre = free_flight_step(z, t_imp, c);
  const State post = apply_impact(pre, impact);
  const State out = free_flight_step(post, c.dt - t_imp, c);
  if (event) {
    event->occurred = true;
    event->t_impact = t_imp;
    event->repenetrated = out.p()(2) - c.r < c.z_table;
  }
  return out;
}

// d(||v|| v)/dv = ||v|| I + v v^T / ||v||, defined as zero at v = 0 (the
// limit of both terms).
inline Mat3 speed_weighted_velocity_jacobian(const Vec3& v) {
  const double n = v.norm();
  if (n == 0.0) return Mat3::Zero();
  return n * Mat3::Identity() + v * v.transpose() / n;
}

// Jacobian of free_flight_step with respect to the state, for an arbitrary
// timespan dt.
inline Mat11 jac_state(const State& z, double dt, const PhysicalConstants& c) {
  const auto [k_d, k_m] = coefficients(z.a_d(), z.a_m(), c.eps);
  const Vec3 v = z.v();
  Mat11 J = Mat11::Identity();
  J.block<3, 3>(0, 3) = dt * Mat3::Identity();
  J.block<3, 3>(3, 3) = Mat3::Identity() - dt * k_d * speed_weighted_velocity_jacobian(v) +
                        dt * k_m * skew(z.omega());
  J.block<3, 3>(3, 6) = -dt * k_m * skew(v);
  J.block<3, 1>(3, 9) = -2.0 * dt * z.a_d() * v.norm() * v;
  J.block<3, 1>(3, 10) = 2.0 * dt * z.a_m() * z.omega().cross(v);
  return J;
}

// Derivative of free_flight_step with respect to the timespan. Under the
// Euler discretization this is the flight vector field at z, independent of
// dt itself.
inline Vec11 jac_time(const State& z, double /*dt*/, const PhysicalConstants& c) {
  return flight_field(z, c);
}

// Row vector d(impact time)/dz: nonzero only in the p_z and v_z slots.
// Zero when the clamp is active.
inline Eigen::Matrix<double, 1, 11> impact_time_gradient(const State& z,
                                                         const PhysicalConstants& c) {
  Eigen::Matrix<double, 1, 11> g = Eigen::Matrix<double, 1, 11>::Zero();
  if (impact_time_clamped(z, c)) return g;
  const double v_z = z.v()(2);
  const double h = -((z.p()(2) - c.r) - c.z_table);
  const double sq = std::sqrt(v_z * v_z + 2.0 * c.g_z * h);
  g(0, 2) = 1.0 / sq;
  g(0, 5) = -(1.0 + v_z / sq) / c.g_z;
  return g;
}

// Jacobian of forward_step. On the impact branch the chain rule across the
// event time is
//   dz_{n+1}/dz_n = J1 (C' (J2.2.1 + J2.2.2 J2.2.3)) + J3 J4
// with J1 = jac_state(z+, dt_rem), J2.2.1 = jac_state(z, t_imp),
// J2.2.2 = jac_time(z, t_imp), J2.2.3 = d t_imp/dz, J3 = jac_time(z+, dt_rem)
// and J4 = -J2.2.3.
inline Mat11 jac_forward(const State& z, const ImpactMap& impact,
                         const PhysicalConstants& c) {
  const State free_end = free_flight_step(z, c.dt, c);
  if (free_end.p()(2) - c.r >= c.z_table) {
    return jac_state(z, c.dt, c);
  }
  const double t_imp = impact_time(z, c);
  const double t_rem = c.dt - t_imp;
  const State pre = free_flight_step(z, t_imp, c);
  const State post = apply_impact(pre, impact);
  const Mat11 lifted = impact.lifted();

  const Eigen::Matrix<double, 1, 11> dt_imp = impact_time_gradient(z, c);
  const Mat11 inner = jac_state(z, t_imp, c) + jac_time(z, t_imp, c) * dt_imp;
  return jac_state(post, t_rem, c) * (lifted * inner) -
         jac_time(post, t_rem, c) * dt_imp;
}

}  // namespace ttfilter
