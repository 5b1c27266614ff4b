#pragma once

#include <functional>
#include <random>

#include "ttfilter/ballistics.hpp"
#include "ttfilter/types.hpp"

namespace ttfilter::testing {

inline std::mt19937_64 make_rng(std::uint64_t seed) { return std::mt19937_64(seed); }

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline Vec3 random_vec3(std::mt19937_64& rng, double lo, double hi) {
  return Vec3(uniform(rng, lo, hi), uniform(rng, lo, hi), uniform(rng, lo, hi));
}

// A generic in-flight state, well above the table.
inline State random_flight_state(std::mt19937_64& rng) {
  return State::make(Vec3(uniform(rng, -1, 1), uniform(rng, -1, 1), uniform(rng, 0.5, 2.0)),
                     random_vec3(rng, -6, 6), random_vec3(rng, -40, 40),
                     uniform(rng, -0.6, 0.6), uniform(rng, -0.6, 0.6));
}

// A state whose free flight over consts.dt crosses the table mid-step, with
// at least `margin_s` seconds between the impact time and both step ends.
inline State random_penetrating_state(std::mt19937_64& rng, const PhysicalConstants& c,
                                      double margin_s = 1e-4) {
  for (;;) {
    State z = random_flight_state(rng);
    const double frac = uniform(rng, 0.15, 0.85);
    const double v_z = uniform(rng, -6.0, -1.0);
    const double t_cross = frac * c.dt;
    // Place p_z so the constant-gravity drop reaches the table at t_cross.
    z.v()(2) = v_z;
    z.p()(2) = c.z_table + c.r - v_z * t_cross - 0.5 * c.g_z * t_cross * t_cross;
    const State end = free_flight_step(z, c.dt, c);
    if (end.p()(2) - c.r >= c.z_table) continue;  // drag/Magnus undid the crossing
    const double t_imp = impact_time(z, c);
    if (t_imp < margin_s || t_imp > c.dt - margin_s) continue;
    return z;
  }
}

// Central finite differences of an R^11 -> R^11 map.
inline Mat11 fd_jacobian(const std::function<Vec11(const Vec11&)>& f, const Vec11& x,
                         double h = 1e-6) {
  Mat11 J;
  for (int i = 0; i < 11; ++i) {
    Vec11 xp = x, xm = x;
    xp(i) += h;
    xm(i) -= h;
    J.col(i) = (f(xp) - f(xm)) / (2.0 * h);
  }
  return J;
}

// Max entrywise error with a unit floor on the denominator.
template <typename A, typename B>
double max_rel_error(const A& a, const B& b) {
  double worst = 0.0;
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      const double denom = std::max({std::abs(a(i, j)), std::abs(b(i, j)), 1.0});
      worst = std::max(worst, std::abs(a(i, j) - b(i, j)) / denom);
    }
  return worst;
}

}  // namespace ttfilter::testing
