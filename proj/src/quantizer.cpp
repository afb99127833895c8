#include "fadetrig/quantizer.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace fadetrig {

std::vector<double> q_map(const BitBlock& block) {
  std::vector<double> out;
  out.reserve(block.bits.size());
  for (auto b : block.bits) out.push_back(b ? 1.0 : -1.0);
  return out;
}

double box_deviation(std::span<const double> x, const QuantizerState& box) {
  if (x.size() != box.center.size()) {
    throw std::invalid_argument("box_deviation: dimension mismatch");
  }
  double dev = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    dev = std::max(dev, std::abs(x[i] - box.center[i]));
  }
  return dev;
}

// Encoder and decoder accumulate the center with the same sequence of
// floating-point operations, so both sides agree bit for bit.

std::vector<BitBlock> encode(std::span<const double> x_true,
                             const QuantizerState& pre_jump, int r_k) {
  if (r_k < 0) throw std::invalid_argument("encode: r_k must be >= 0");
  const double dev = box_deviation(x_true, pre_jump);
  if (!(dev <= pre_jump.half_width)) {
    std::ostringstream msg;
    msg << "encode: signal outside quantizer box (deviation " << dev
        << " > half-width " << pre_jump.half_width << ")";
    throw ContainmentError(msg.str());
  }

  std::vector<double> center = pre_jump.center;
  std::vector<BitBlock> blocks;
  blocks.reserve(static_cast<std::size_t>(r_k));
  for (int j = 1; j <= r_k; ++j) {
    const double step = std::ldexp(pre_jump.half_width, -j);
    BitBlock block;
    block.bits.reserve(center.size());
    for (std::size_t i = 0; i < center.size(); ++i) {
      const bool upper = x_true[i] >= center[i];
      block.bits.push_back(upper ? 1 : 0);
      center[i] += (upper ? 1.0 : -1.0) * step;
    }
    blocks.push_back(std::move(block));
  }
  return blocks;
}

QuantizerState decode(std::span<const BitBlock> blocks,
                      std::span<const double> predicted_center,
                      double pre_jump_half_width) {
  if (!(pre_jump_half_width > 0.0)) {
    throw std::invalid_argument("decode: half-width must be > 0");
  }
  QuantizerState out{{predicted_center.begin(), predicted_center.end()},
                     pre_jump_half_width};
  int j = 0;
  for (const BitBlock& block : blocks) {
    ++j;
    if (block.bits.size() != out.center.size()) {
      throw std::invalid_argument("decode: block width does not match dimension");
    }
    const double step = std::ldexp(pre_jump_half_width, -j);
    const auto signs = q_map(block);
    for (std::size_t i = 0; i < out.center.size(); ++i) {
      out.center[i] += signs[i] * step;
    }
  }
  out.half_width = std::ldexp(pre_jump_half_width, -j);
  return out;
}

double propagate_half_width(const QuantizerState& post_jump, double t_interval,
                            const TriggerParams& params) {
  if (!(t_interval >= 0.0)) {
    throw std::invalid_argument("propagate_half_width: interval must be >= 0");
  }
  const double eta = eta_of(t_interval, params);
  if (!(eta > 0.0)) {
    std::ostringstream msg;
    msg << "propagate_half_width: eta = " << eta << " <= 0 at T = " << t_interval;
    throw TriggerViolation(msg.str());
  }
  const double growth = std::exp(params.l_e * t_interval);
  double center_norm = 0.0;
  for (double c : post_jump.center) center_norm = std::max(center_norm, std::abs(c));

  const double drive = params.l_x * params.c1 * (center_norm + post_jump.half_width) +
                       params.l_w * params.m_bound +
                       params.l_x * params.c_chi * params.m_bound;
  const double bracket = params.ratio() * growth * post_jump.half_width +
                         std::expm1(params.l_e * t_interval) /
                             (params.w1 * params.l_e) * drive;
  return bracket / eta;
}

std::vector<double> predict_center(std::span<const double> center_post,
                                   double t_interval, const PlantParams& plant) {
  std::vector<double> out;
  out.reserve(center_post.size());
  for (double c : center_post) out.push_back(tracking_flow(c, t_interval, plant));
  return out;
}

}  // namespace fadetrig
