#pragma once

#include <cmath>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <vector>

#include "ttfilter/ballistics.hpp"
#include "ttfilter/params.hpp"
#include "ttfilter/trajectory.hpp"

namespace ttfilter {

struct InvalidPair : std::runtime_error {
  InvalidPair() : std::runtime_error("initialization needs two distinct available measurements") {}
};
struct SingularInnovation : std::runtime_error {
  SingularInnovation() : std::runtime_error("innovation covariance is not positive definite") {}
};
struct TooFewMeasurements : std::runtime_error {
  TooFewMeasurements() : std::runtime_error("filtering needs at least two available measurements") {}
};
struct DegenerateDisplacement : std::runtime_error {
  DegenerateDisplacement() : std::runtime_error("xy displacement too small to infer an azimuth") {}
};

// Gaussian state belief.
struct Belief {
  Vec11 mu = Vec11::Zero();
  Mat11 sigma = Mat11::Zero();
};

inline Mat11 symmetrize(const Mat11& m) { return 0.5 * (m + m.transpose()); }

// Total azimuthal launch angle inferred from the first two measurements.
inline double azimuth_from_measurements(const Measurement& m1, const Measurement& m2) {
  const double dx = m2.position.x() - m1.position.x();
  const double dy = m2.position.y() - m1.position.y();
  if (std::hypot(dx, dy) < 1e-9) throw DegenerateDisplacement();
  return std::atan2(dy, dx);
}

// Where the total azimuth for the spin rotation comes from: the launch
// metadata (training on data of known orientation) or the first two
// measurements (evaluation).
enum class AzimuthMode { kFromLaunch, kFromMeasurements };

inline Belief initialize_belief(const Measurement& m1, const Measurement& m2,
                                const std::optional<LaunchInfo>& launch,
                                const ParameterSet& params, const PhysicalConstants& consts,
                                AzimuthMode azimuth_mode = AzimuthMode::kFromLaunch) {
  if (m1.index >= m2.index || !m1.available || !m2.available) throw InvalidPair();

  std::optional<LaunchInfo> effective = launch;
  if (launch.has_value() && azimuth_mode == AzimuthMode::kFromMeasurements &&
      !launch->after_impact) {
    effective->phi_f = azimuth_from_measurements(m1, m2);
    effective->phi_l = 0.0;
  }
  const auto [omega, sigma_omega] =
      initial_spin(effective, params.psi_f, params.sigma_omega_raw, params.sigma_omega_ai_raw);

  Belief b;
  b.mu.segment<3>(0) = m2.position;
  b.mu.segment<3>(3) =
      (m2.position - m1.position) / (consts.dt * static_cast<double>(m2.index - m1.index));
  b.mu.segment<3>(6) = omega;
  b.mu(9) = params.a_d;
  b.mu(10) = params.a_m;

  b.sigma.setZero();
  b.sigma.block<3, 3>(0, 0) = softplus_eps(params.sigma_p_raw).asDiagonal();
  b.sigma.block<3, 3>(3, 3) = softplus_eps(params.sigma_v_raw).asDiagonal();
  b.sigma.block<3, 3>(6, 6) = sigma_omega;
  b.sigma(9, 9) = softplus_eps(params.sigma_a_d_raw);
  b.sigma(10, 10) = softplus_eps(params.sigma_a_m_raw);
  return b;
}

inline Belief predict(const Belief& b, const ParameterSet& params,
                      const PhysicalConstants& consts) {
  const ImpactMap impact = params.impact_map();
  State z;
  z.z = b.mu;
  const Mat11 J = jac_forward(z, impact, consts);
  Belief out;
  out.mu = forward_step(z, impact, consts).z;
  Mat11 sigma = J * b.sigma * J.transpose();
  sigma.diagonal() += softplus_eps(params.sigma_q_raw);
  out.sigma = symmetrize(sigma);
  return out;
}

struct Correction {
  Belief belief;
  double loglik = 0.0;
};

// Standard EKF update with H = [I3 | 0]. The innovation covariance is
// factorized once by Cholesky; its failure means the covariance was already
// corrupted upstream, since the softplus floor keeps R positive definite.
inline Correction correct(const Belief& b, const Measurement& m, const ParameterSet& params) {
  const Mat3 S = Mat3(b.sigma.block<3, 3>(0, 0)) +
                 Mat3(softplus_eps(params.sigma_r_raw).asDiagonal());
  const Eigen::LLT<Mat3> llt(S);
  if (llt.info() != Eigen::Success) throw SingularInnovation();

  const Vec3 residual = m.position - b.mu.segment<3>(0);
  const Eigen::Matrix<double, 11, 3> sigma_ht = b.sigma.block<11, 3>(0, 0);
  const Eigen::Matrix<double, 11, 3> gain = llt.solve(sigma_ht.transpose()).transpose();

  Correction out;
  out.belief.mu = b.mu + gain * residual;
  out.belief.sigma = symmetrize(b.sigma - gain * b.sigma.block<3, 11>(0, 0));

  const Mat3 L = llt.matrixL();
  const double logdet = 2.0 * L.diagonal().array().log().sum();
  const double quad = residual.dot(llt.solve(residual));
  out.loglik = -0.5 * (3.0 * std::log(2.0 * std::numbers::pi) + logdet + quad);
  return out;
}

// Filtered beliefs for sample indices first_index..(first_index + size - 1).
struct FilterResult {
  int first_index = 0;
  std::vector<Belief> beliefs;
  double total_loglik = 0.0;

  const Belief& at(int sample_index) const { return beliefs.at(sample_index - first_index); }
  int last_index() const { return first_index + static_cast<int>(beliefs.size()) - 1; }
};

// Runs the filter over a measurement sequence: initialize from the first two
// available measurements, then predict each step and correct when a
// measurement is available. The log-likelihood sums the per-correction terms
// from the third available measurement on.
inline FilterResult filter_trajectory(const std::vector<Measurement>& meas,
                                      const std::optional<LaunchInfo>& launch,
                                      const ParameterSet& params,
                                      const PhysicalConstants& consts,
                                      AzimuthMode azimuth_mode = AzimuthMode::kFromLaunch) {
  int i1 = -1, i2 = -1;
  for (int i = 0; i < static_cast<int>(meas.size()); ++i) {
    if (!meas[i].available) continue;
    if (i1 < 0) {
      i1 = i;
    } else {
      i2 = i;
      break;
    }
  }
  if (i2 < 0) throw TooFewMeasurements();

  FilterResult result;
  result.first_index = meas[i2].index;
  Belief b = initialize_belief(meas[i1], meas[i2], launch, params, consts, azimuth_mode);
  result.beliefs.push_back(b);

  int prev_index = meas[i2].index;
  for (int i = i2 + 1; i < static_cast<int>(meas.size()); ++i) {
    for (int idx = prev_index + 1; idx <= meas[i].index; ++idx) {
      b = predict(b, params, consts);
      if (idx == meas[i].index && meas[i].available) {
        Correction c = correct(b, meas[i], params);
        b = c.belief;
        result.total_loglik += c.loglik;
      }
      result.beliefs.push_back(b);
    }
    prev_index = meas[i].index;
  }
  return result;
}

// Open-loop prediction: repeated predict steps without correction.
inline std::vector<Belief> predict_horizon(const Belief& b, int steps,
                                           const ParameterSet& params,
                                           const PhysicalConstants& consts) {
  std::vector<Belief> out;
  out.reserve(steps);
  Belief cur = b;
  for (int i = 0; i < steps; ++i) {
    cur = predict(cur, params, consts);
    out.push_back(cur);
  }
  return out;
}

}  // namespace ttfilter
