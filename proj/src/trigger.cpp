#include "fadetrig/trigger.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace fadetrig {

void TriggerParams::validate() const {
  if (!(l_e > 0.0)) throw std::invalid_argument("l_e must be > 0");
  if (!(l_x >= 0.0)) throw std::invalid_argument("l_x must be >= 0");
  if (!(l_w >= 0.0)) throw std::invalid_argument("l_w must be >= 0");
  if (!(w1 > 0.0)) throw std::invalid_argument("w1 must be > 0");
  if (!(w2 >= w1)) throw std::invalid_argument("w2 must be >= w1");
  if (!(chi1_bar > 0.0)) throw std::invalid_argument("chi1_bar must be > 0");
  if (!(c1 > 0.0)) throw std::invalid_argument("c1 must be > 0");
  if (!(c_chi >= 0.0)) throw std::invalid_argument("c_chi must be >= 0");
  if (!(m_bound >= 0.0)) throw std::invalid_argument("m_bound must be >= 0");
}

double self_trigger_interval(double g_val, const TriggerParams& params) {
  const double scaled = params.ratio() * g_val;
  if (!(scaled < 1.0)) {
    throw OutsideOmegaError("state outside communication region: (w2/w1)G = " +
                            std::to_string(scaled));
  }
  const double coupling = params.l_x * params.chi1_bar / (params.l_e * params.w1);
  const double denom = scaled + coupling;
  if (denom == 0.0) {
    // G underflowed to zero with no cross coupling: the interval is unbounded.
    throw DomainError("self_trigger_interval: zero denominator (G = 0 and L_x = 0)");
  }
  return std::log1p((1.0 - scaled) / denom) / params.l_e;
}

double eta_of(double interval, const TriggerParams& params) {
  return 1.0 - params.l_x * params.chi1_bar / (params.w1 * params.l_e) *
                   std::expm1(params.l_e * interval);
}

bool omega_x_member(const StateVec& x, const TriggerParams& params,
                    const ChannelConfig& chan_cfg) {
  return g_value(x, chan_cfg) < params.w1 / params.w2;
}

bool event_trigger_fired(double est_error, const StateVec& tracking_error,
                         const EventThreshold& thr, double scale_l,
                         double scale_alpha) {
  return std::abs(est_error) >
         thr.coeff * tracking_error.inf_norm(scale_l, scale_alpha);
}

}  // namespace fadetrig
