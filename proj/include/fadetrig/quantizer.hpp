#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "fadetrig/plant.hpp"
#include "fadetrig/trigger.hpp"

namespace fadetrig {

/// Synchronized box (center, half-width) shared by encoder and decoder. The
/// center lives in tracking-error coordinates, one entry per quantized
/// dimension.
struct QuantizerState {
  std::vector<double> center;
  double half_width = 1.0;

  friend bool operator==(const QuantizerState&, const QuantizerState&) = default;
};

/// One block: a bit per quantized dimension, most significant block first.
struct BitBlock {
  std::vector<std::uint8_t> bits;

  friend bool operator==(const BitBlock&, const BitBlock&) = default;
};

/// 1 -> +1, 0 -> -1.
std::vector<double> q_map(const BitBlock& block);

/// r_k rounds of per-dimension bisection of the pre-jump box around `x_true`.
/// Throws ContainmentError if `x_true` is outside the box.
std::vector<BitBlock> encode(std::span<const double> x_true,
                             const QuantizerState& pre_jump, int r_k);

/// center = predicted + U * sum_j 2^{-j} q(b_j), half-width = 2^{-R} U.
QuantizerState decode(std::span<const BitBlock> blocks,
                      std::span<const double> predicted_center,
                      double pre_jump_half_width);

/// Pre-jump half-width at the next transmission after `t_interval` seconds:
///   (1/eta) [ (w2/w1) e^{L_e T} U+ +
///             (e^{L_e T} - 1)/(w1 L_e) (L_x c1 (|c+| + U+) + L_w M + L_x c_chi M) ]
/// Throws TriggerViolation if eta <= 0.
double propagate_half_width(const QuantizerState& post_jump, double t_interval,
                            const TriggerParams& params);

/// Center propagated through the nominal predictor flow for `t_interval`
/// seconds. Encoder and decoder both call this.
std::vector<double> predict_center(std::span<const double> center_post,
                                   double t_interval, const PlantParams& plant);

/// Largest deviation of `x` from the box center, in the inf-norm.
double box_deviation(std::span<const double> x, const QuantizerState& box);

}  // namespace fadetrig
