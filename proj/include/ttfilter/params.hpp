#pragma once

#include <cmath>
#include <random>
#include <stdexcept>

#include "ttfilter/math_util.hpp"
#include "ttfilter/spin_net.hpp"
#include "ttfilter/types.hpp"

namespace ttfilter {

// All learnable quantities: the impact matrix, raw noise vectors, the spin
// network weights, and the initial drag/Magnus means and raw variances.
// Variance-like entries are stored raw; the softplus floor maps them to
// strictly positive values.
struct ParameterSet {
  Mat6 C = ImpactMap::flip_matrix();
  Vec11 sigma_q_raw = Vec11::Zero();
  Vec3 sigma_r_raw = Vec3::Zero();
  Vec3 sigma_p_raw = Vec3::Zero();
  Vec3 sigma_v_raw = Vec3::Zero();
  SpinNetParams psi_f;
  Vec3 sigma_omega_raw = Vec3::Zero();
  Vec3 sigma_omega_ai_raw = Vec3::Zero();
  double a_d = 0.0;
  double a_m = 0.0;
  double sigma_a_d_raw = 0.0;
  double sigma_a_m_raw = 0.0;

  ImpactMap impact_map() const { return ImpactMap{C}; }

  int flat_size() const {
    return 36 + 11 + 3 + 3 + 3 + static_cast<int>(psi_f.W1.size() + psi_f.W2.size()) +
           3 + 3 + 4;
  }
};

// Stable flattening order: C (row-major), sigma_q, sigma_r, sigma_p, sigma_v,
// W1 (row-major), W2 (row-major), sigma_omega, sigma_omega_ai, a_d, a_m,
// sigma_a_d, sigma_a_m. The optimizer and all gradient code rely on it.
inline Eigen::VectorXd flatten(const ParameterSet& p) {
  Eigen::VectorXd out(p.flat_size());
  int k = 0;
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j) out(k++) = p.C(i, j);
  out.segment<11>(k) = p.sigma_q_raw;
  k += 11;
  out.segment<3>(k) = p.sigma_r_raw;
  k += 3;
  out.segment<3>(k) = p.sigma_p_raw;
  k += 3;
  out.segment<3>(k) = p.sigma_v_raw;
  k += 3;
  for (Eigen::Index i = 0; i < p.psi_f.W1.rows(); ++i)
    for (Eigen::Index j = 0; j < p.psi_f.W1.cols(); ++j) out(k++) = p.psi_f.W1(i, j);
  for (Eigen::Index i = 0; i < p.psi_f.W2.rows(); ++i)
    for (Eigen::Index j = 0; j < p.psi_f.W2.cols(); ++j) out(k++) = p.psi_f.W2(i, j);
  out.segment<3>(k) = p.sigma_omega_raw;
  k += 3;
  out.segment<3>(k) = p.sigma_omega_ai_raw;
  k += 3;
  out(k++) = p.a_d;
  out(k++) = p.a_m;
  out(k++) = p.sigma_a_d_raw;
  out(k++) = p.sigma_a_m_raw;
  return out;
}

// Inverse of flatten; `like` supplies the network shapes.
inline ParameterSet unflatten(const Eigen::VectorXd& v, const ParameterSet& like) {
  ParameterSet p = like;
  if (v.size() != like.flat_size()) throw std::invalid_argument("flat vector size mismatch");
  int k = 0;
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j) p.C(i, j) = v(k++);
  p.sigma_q_raw = v.segment<11>(k);
  k += 11;
  p.sigma_r_raw = v.segment<3>(k);
  k += 3;
  p.sigma_p_raw = v.segment<3>(k);
  k += 3;
  p.sigma_v_raw = v.segment<3>(k);
  k += 3;
  for (Eigen::Index i = 0; i < p.psi_f.W1.rows(); ++i)
    for (Eigen::Index j = 0; j < p.psi_f.W1.cols(); ++j) p.psi_f.W1(i, j) = v(k++);
  for (Eigen::Index i = 0; i < p.psi_f.W2.rows(); ++i)
    for (Eigen::Index j = 0; j < p.psi_f.W2.cols(); ++j) p.psi_f.W2(i, j) = v(k++);
  p.sigma_omega_raw = v.segment<3>(k);
  k += 3;
  p.sigma_omega_ai_raw = v.segment<3>(k);
  k += 3;
  p.a_d = v(k++);
  p.a_m = v(k++);
  p.sigma_a_d_raw = v(k++);
  p.sigma_a_m_raw = v(k++);
  return p;
}

// Initial parameter values: the impact matrix is identity with a flipped
// z-velocity, variances start at fixed targets through the inverse softplus,
// the drag/Magnus means at sqrt(0.1), and the network weights uniform in
// +-1/sqrt(fan_in).
inline ParameterSet init_parameters(std::uint64_t seed, int hidden = 256) {
  ParameterSet p;
  p.C = ImpactMap::flip_matrix();

  p.sigma_p_raw.setConstant(inv_softplus_eps(1e-4));
  p.sigma_v_raw.setConstant(inv_softplus_eps(1e-2));
  p.sigma_omega_raw.setConstant(inv_softplus_eps(1.0));
  p.sigma_omega_ai_raw.setConstant(inv_softplus_eps(1.0));
  p.sigma_a_d_raw = inv_softplus_eps(1e-2);
  p.sigma_a_m_raw = inv_softplus_eps(1e-2);
  p.sigma_r_raw.setConstant(inv_softplus_eps(1e-3));
  p.sigma_q_raw.segment<3>(0).setConstant(inv_softplus_eps(1e-4));
  p.sigma_q_raw.segment<3>(3).setConstant(inv_softplus_eps(1e-2));
  p.sigma_q_raw.segment<3>(6).setConstant(inv_softplus_eps(1e-3));
  p.sigma_q_raw(9) = inv_softplus_eps(1e-2);
  p.sigma_q_raw(10) = inv_softplus_eps(1e-2);

  p.a_d = std::sqrt(0.1);
  p.a_m = std::sqrt(0.1);

  std::mt19937_64 rng(seed);
  const double a1 = 1.0 / std::sqrt(3.0);
  const double a2 = 1.0 / std::sqrt(static_cast<double>(hidden));
  std::uniform_real_distribution<double> u1(-a1, a1), u2(-a2, a2);
  p.psi_f.W1.resize(hidden, 3);
  p.psi_f.W2.resize(6, hidden);
  for (Eigen::Index i = 0; i < p.psi_f.W1.rows(); ++i)
    for (Eigen::Index j = 0; j < p.psi_f.W1.cols(); ++j) p.psi_f.W1(i, j) = u1(rng);
  for (Eigen::Index i = 0; i < p.psi_f.W2.rows(); ++i)
    for (Eigen::Index j = 0; j < p.psi_f.W2.cols(); ++j) p.psi_f.W2(i, j) = u2(rng);
  return p;
}

}  // namespace ttfilter
