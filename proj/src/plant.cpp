#include "fadetrig/plant.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace fadetrig {

namespace {

struct Vec3 {
  double l, alpha, alpha_hat;
};

Vec3 operator+(const Vec3& a, const Vec3& b) {
  return {a.l + b.l, a.alpha + b.alpha, a.alpha_hat + b.alpha_hat};
}

Vec3 operator*(double k, const Vec3& a) {
  return {k * a.l, k * a.alpha, k * a.alpha_hat};
}

}  // namespace

void PlantParams::validate() const {
  if (!(k_l > 0.0)) throw std::invalid_argument("k_l must be > 0");
  if (!(k_alpha > 0.0)) throw std::invalid_argument("k_alpha must be > 0");
  if (!(l_d > 0.0)) throw std::invalid_argument("l_d must be > 0");
  if (!(d > 0.0)) throw std::invalid_argument("d must be > 0");
  if (!(noise_bound >= 0.0)) throw std::invalid_argument("noise_bound must be >= 0");
  if (!std::isfinite(alpha_d)) throw std::invalid_argument("alpha_d must be finite");
}

SimStateDot closed_loop_rhs(const SimState& s, double n1, double n2,
                            const PlantParams& p) {
  const double l = s.x.l;
  const double a = s.x.alpha;
  const double ah = s.alpha_hat;
  if (!(l > 0.0)) {
    throw DomainError("closed_loop_rhs: separation L must be > 0, got " +
                      std::to_string(l));
  }
  const double v1 = p.v_gain * l + n1;
  const double predictor = p.k_alpha * (p.alpha_d - ah);
  SimStateDot out;
  out.l = p.k_l * (p.l_d - l) + v1 * (std::cos(a) - std::cos(ah));
  out.alpha = v1 / l * (std::sin(ah) - std::sin(a)) + predictor +
              p.w_gain * a + n2 - p.w_gain * ah;
  out.alpha_hat = predictor;
  return out;
}

FollowerCommand controller_outputs(double l, double phi, double alpha_hat,
                                   double v1, double omega1,
                                   const PlantParams& p) {
  if (!(l > 0.0)) throw DomainError("controller_outputs: L must be > 0");
  if (!(p.d > 0.0)) throw DomainError("controller_outputs: d must be > 0");
  const double z1 = p.k_l * (p.l_d - l) - std::cos(alpha_hat) * v1;
  const double z2 = p.k_alpha * (p.alpha_d - alpha_hat) +
                    std::sin(alpha_hat) / l * v1 - omega1;
  const double c = std::cos(phi);
  const double s = std::sin(phi);
  return {-c * z1 - l * s * z2, -s / p.d * z1 + l / p.d * c * z2};
}

FormationRates formation_kinematics(double l, double alpha, double phi,
                                    double v1, double omega1, double v2,
                                    double omega2, double d) {
  return {v1 * std::cos(alpha) - v2 * std::cos(phi) - d * omega2 * std::sin(phi),
          (-v1 * std::sin(alpha) - v2 * std::sin(phi) + d * omega2 * std::cos(phi)) / l +
              omega1};
}

double flow_map(double alpha_hat0, double t, const PlantParams& p) {
  return p.alpha_d + tracking_flow(alpha_hat0 - p.alpha_d, t, p);
}

double tracking_flow(double center, double t, const PlantParams& p) {
  if (!(t >= 0.0)) throw std::invalid_argument("flow: t must be >= 0");
  return center * std::exp(-p.k_alpha * t);
}

SimState rk4_step(const SimState& s, double dt, Noise noise, const PlantParams& p) {
  if (!(dt > 0.0)) throw std::invalid_argument("rk4_step: dt must be > 0");
  const Vec3 y{s.x.l, s.x.alpha, s.alpha_hat};
  const Vec3 next = rk4(y, dt, [&](const Vec3& v) {
    const SimStateDot d = closed_loop_rhs({{v.l, v.alpha}, v.alpha_hat}, noise.n1,
                                          noise.n2, p);
    return Vec3{d.l, d.alpha, d.alpha_hat};
  });
  return {{next.l, next.alpha}, next.alpha_hat};
}

}  // namespace fadetrig
