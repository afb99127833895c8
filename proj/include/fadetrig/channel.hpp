#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "fadetrig/state.hpp"

namespace fadetrig {

using Rng = std::mt19937_64;

/// Bursty V2V link parameters. h and gamma are the state-dependent burstiness
/// functions of the leader-follower instance:
///   h(alpha, L)     = h_coeff * r_bar * exp(-h_rate * L / (p cos alpha))
///   gamma(alpha, L) = gamma_coeff * p cos alpha / L
struct ChannelConfig {
  int r_bar = 4;           // blocks per transmission
  double p = 8.0;          // transmission power
  int bits_per_block = 1;  // one bit per quantized dimension
  double h_coeff = 0.8;
  double h_rate = 0.25;
  double gamma_coeff = 8.0;

  void validate() const;
};

/// Per-bit Gilbert-Elliott chain state. Persists across transmissions.
struct MarkovChannelState {
  bool good = true;
};

struct TransitionProbs {
  double p12 = 0.0;  // good -> bad
  double p21 = 0.0;  // bad -> good
};

struct Reception {
  int r_k = 0;
  MarkovChannelState chan;
};

double h_of(const StateVec& x, const ChannelConfig& cfg);
double gamma_of(const StateVec& x, const ChannelConfig& cfg);

/// G(y) = e^{-y}(1 + y) for y = h * gamma >= 0.
double g_from_product(double y);
double g_value(const StateVec& x, const ChannelConfig& cfg);

/// r = L / (p cos alpha); +inf outside the antenna radiation range.
double normalized_range(const StateVec& x, const ChannelConfig& cfg);

TransitionProbs transition_probs(const StateVec& x, const ChannelConfig& cfg);

/// Probability of the good state under the chain's stationary distribution.
double stationary_good(const TransitionProbs& tp);

/// Draw a chain state from the stationary distribution at `x`.
MarkovChannelState stationary_chain(const StateVec& x, const ChannelConfig& cfg,
                                    Rng& rng);

/// One transmission of r_bar blocks, MSB block first. The chain advances once
/// per bit; a block counts only if all its bits land in the good state, and
/// r_k is the length of the delivered prefix. `forced_fade` zeroes r_k while
/// still clocking the chain.
Reception sample_reception(const StateVec& x, MarkovChannelState chan,
                           const ChannelConfig& cfg, Rng& rng,
                           bool forced_fade = false);

struct EbbRow {
  double sigma = 0.0;
  double empirical = 0.0;  // Pr{R <= h - sigma}
  double std_err = 0.0;
  double bound = 0.0;      // e^{-gamma sigma}
};

/// Monte Carlo tail frequencies against the exponential burstiness bound. Each
/// trial restarts the chain from its stationary law. An empty `sigmas` uses
/// five evenly spaced points on [0, h].
std::vector<EbbRow> empirical_ebb_check(const StateVec& x,
                                        const ChannelConfig& cfg,
                                        std::int64_t n_trials, Rng& rng,
                                        std::vector<double> sigmas = {});

struct MeanEstimate {
  double mean = 0.0;
  double std_err = 0.0;
};

/// Monte Carlo estimate of E[2^{-R}] with a stationary chain.
MeanEstimate empirical_resolution_loss(const StateVec& x,
                                       const ChannelConfig& cfg,
                                       std::int64_t n_trials, Rng& rng);

}  // namespace fadetrig
