#pragma once

#include <array>

#include "fadetrig/state.hpp"

namespace fadetrig {

/// Leader-follower alpha-L formation. The leader moves with
/// v1 = v_gain * L + n1 and omega1 = w_gain * alpha + n2, |n_i| <= noise_bound.
struct PlantParams {
  double k_l = 1.0;
  double k_alpha = 1.0;
  double l_d = 4.0;                    // m
  double alpha_d = deg_to_rad(20.0);   // rad
  double d = 0.2;                      // m, follower center-to-front
  double v_gain = 0.8;
  double w_gain = 2.2;
  double noise_bound = 0.0;

  void validate() const;
  StateVec setpoint() const { return {l_d, alpha_d}; }
};

/// True formation state plus the follower's bearing predictor.
struct SimState {
  StateVec x;
  double alpha_hat = 0.0;

  friend bool operator==(const SimState&, const SimState&) = default;
};

struct SimStateDot {
  double l = 0.0;
  double alpha = 0.0;
  double alpha_hat = 0.0;
};

struct Noise {
  double n1 = 0.0;
  double n2 = 0.0;
};

/// Reduced closed loop over one transmission interval:
///   L'      = K_L (L_d - L) + (g_v(L) + n1)(cos a - cos a_hat)
///   a'      = ((g_v(L) + n1)/L)(sin a_hat - sin a) + K_a (a_d - a_hat)
///             + g_w(a) + n2 - g_w(a_hat)
///   a_hat'  = K_a (a_d - a_hat)
SimStateDot closed_loop_rhs(const SimState& s, double n1, double n2,
                            const PlantParams& p);

struct FollowerCommand {
  double v2 = 0.0;
  double omega2 = 0.0;
};

/// Feedback-linearizing follower law given the follower's knowledge of the
/// leader inputs (v1, omega1). Requires L > 0 and d > 0.
FollowerCommand controller_outputs(double l, double phi, double alpha_hat,
                                   double v1, double omega1,
                                   const PlantParams& p);

struct FormationRates {
  double l_dot = 0.0;
  double alpha_dot = 0.0;
};

/// Open-loop alpha-L kinematics for arbitrary leader and follower inputs.
FormationRates formation_kinematics(double l, double alpha, double phi,
                                    double v1, double omega1, double v2,
                                    double omega2, double d);

/// Analytic predictor flow: a_d + (a_hat0 - a_d) e^{-K_a t}.
double flow_map(double alpha_hat0, double t, const PlantParams& p);

/// The same flow in tracking-error coordinates: c e^{-K_a t}.
double tracking_flow(double center, double t, const PlantParams& p);

/// Classical RK4 for any vector type supporting + and scalar *.
template <typename Vec, typename Rhs>
Vec rk4(const Vec& y, double dt, Rhs&& f) {
  const Vec k1 = f(y);
  const Vec k2 = f(y + (0.5 * dt) * k1);
  const Vec k3 = f(y + (0.5 * dt) * k2);
  const Vec k4 = f(y + dt * k3);
  return y + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

/// One RK4 step of closed_loop_rhs with the noise held constant.
SimState rk4_step(const SimState& s, double dt, Noise noise, const PlantParams& p);

}  // namespace fadetrig
