#pragma once

#include "fadetrig/channel.hpp"
#include "fadetrig/state.hpp"

namespace fadetrig {

/// Constants of the error-growth and ISS bounds. The same struct parameterizes
/// the self-trigger rule and the quantizer half-width recursion, though a run
/// may use different instances for the two (see EngineConfig).
struct TriggerParams {
  double l_e = 120.0;    // error growth rate, 1/s
  double l_x = 0.0;      // cross gain from tracking error
  double l_w = 1.0;      // disturbance gain
  double w1 = 1.0;       // w1 |e| <= W(e) <= w2 |e|
  double w2 = 1.0;
  double chi1_bar = 1.0; // linear ISS gain e -> tracking error
  double c1 = 1.0;       // beta(s, 0) = c1 s
  double c_chi = 0.0;    // chi2(s) = c_chi s
  double m_bound = 0.0;  // disturbance sup-norm bound M

  void validate() const;
  double ratio() const { return w2 / w1; }
};

struct EventThreshold {
  double coeff = 0.1591;
};

/// T = (1/L_e) ln(1 + (1 - (w2/w1) G) / ((w2/w1) G + L_x chi1 / (L_e w1))).
/// Throws OutsideOmegaError when (w2/w1) G >= 1.
double self_trigger_interval(double g_val, const TriggerParams& params);

/// eta(T) = 1 - (L_x chi1 / (w1 L_e)) (e^{L_e T} - 1).
double eta_of(double interval, const TriggerParams& params);

bool omega_x_member(const StateVec& x, const TriggerParams& params,
                    const ChannelConfig& chan_cfg);

/// Fires when |e| > coeff * |tracking error|_inf.
bool event_trigger_fired(double est_error, const StateVec& tracking_error,
                         const EventThreshold& thr, double scale_l = 1.0,
                         double scale_alpha = 1.0);

}  // namespace fadetrig
