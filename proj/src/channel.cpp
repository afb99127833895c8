#include "fadetrig/channel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace fadetrig {

namespace {

bool in_radiation_range(const StateVec& x) {
  return std::abs(x.alpha) < kPi / 2.0 && std::cos(x.alpha) > 0.0;
}

void require_positive_range(const StateVec& x, const char* who) {
  if (!(x.l > 0.0)) {
    throw DomainError(std::string(who) + ": separation L must be > 0, got " +
                      std::to_string(x.l));
  }
}

double clamp01(double v) {
  if (std::isnan(v)) return 1.0;
  return std::clamp(v, 0.0, 1.0);
}

bool draw(double prob, Rng& rng) {
  return std::uniform_real_distribution<double>(0.0, 1.0)(rng) < prob;
}

MarkovChannelState step_chain(MarkovChannelState s, const TransitionProbs& tp,
                              Rng& rng) {
  if (s.good) {
    if (draw(tp.p12, rng)) s.good = false;
  } else {
    if (draw(tp.p21, rng)) s.good = true;
  }
  return s;
}

int delivered_prefix(MarkovChannelState& chan, const TransitionProbs& tp,
                     const ChannelConfig& cfg, Rng& rng) {
  int prefix = 0;
  bool broken = false;
  for (int block = 0; block < cfg.r_bar; ++block) {
    bool ok = true;
    for (int bit = 0; bit < cfg.bits_per_block; ++bit) {
      chan = step_chain(chan, tp, rng);
      ok = ok && chan.good;
    }
    if (!broken && ok) {
      ++prefix;
    } else {
      broken = true;
    }
  }
  return prefix;
}

}  // namespace

void ChannelConfig::validate() const {
  if (r_bar < 1) throw std::invalid_argument("r_bar must be >= 1");
  if (!(p > 0.0)) throw std::invalid_argument("p must be > 0");
  if (bits_per_block < 1) throw std::invalid_argument("bits_per_block must be >= 1");
  if (!(h_coeff >= 0.0)) throw std::invalid_argument("h_coeff must be >= 0");
  if (!(h_rate >= 0.0)) throw std::invalid_argument("h_rate must be >= 0");
  if (!(gamma_coeff >= 0.0)) throw std::invalid_argument("gamma_coeff must be >= 0");
}

double h_of(const StateVec& x, const ChannelConfig& cfg) {
  require_positive_range(x, "h_of");
  if (!in_radiation_range(x)) return 0.0;
  return cfg.h_coeff * cfg.r_bar *
         std::exp(-cfg.h_rate * x.l / (cfg.p * std::cos(x.alpha)));
}

double gamma_of(const StateVec& x, const ChannelConfig& cfg) {
  require_positive_range(x, "gamma_of");
  if (!in_radiation_range(x)) return 0.0;
  return cfg.gamma_coeff * cfg.p * std::cos(x.alpha) / x.l;
}

double g_from_product(double y) {
  if (std::isinf(y)) return 0.0;
  return std::exp(-y) * (1.0 + y);
}

double g_value(const StateVec& x, const ChannelConfig& cfg) {
  return g_from_product(h_of(x, cfg) * gamma_of(x, cfg));
}

double normalized_range(const StateVec& x, const ChannelConfig& cfg) {
  require_positive_range(x, "normalized_range");
  if (!in_radiation_range(x)) return std::numeric_limits<double>::infinity();
  return x.l / (cfg.p * std::cos(x.alpha));
}

TransitionProbs transition_probs(const StateVec& x, const ChannelConfig& cfg) {
  const double r = normalized_range(x, cfg);
  if (std::isinf(r)) return {1.0, 0.0};
  const double p12 = 0.08 * std::sqrt(kPi * r / 2.0);
  // expm1 keeps the small-r denominator accurate; r -> 0 sends p21 -> inf.
  const double p21 = 0.08 * std::sqrt(kPi / 2.0) * std::sqrt(r) / std::expm1(0.25 * r);
  return {clamp01(p12), clamp01(p21)};
}

double stationary_good(const TransitionProbs& tp) {
  const double total = tp.p12 + tp.p21;
  if (total <= 0.0) return 1.0;  // frozen chain; treat as good
  return tp.p21 / total;
}

MarkovChannelState stationary_chain(const StateVec& x, const ChannelConfig& cfg,
                                    Rng& rng) {
  return {draw(stationary_good(transition_probs(x, cfg)), rng)};
}

Reception sample_reception(const StateVec& x, MarkovChannelState chan,
                           const ChannelConfig& cfg, Rng& rng,
                           bool forced_fade) {
  const TransitionProbs tp = transition_probs(x, cfg);
  const int prefix = delivered_prefix(chan, tp, cfg, rng);
  return {forced_fade ? 0 : prefix, chan};
}

std::vector<EbbRow> empirical_ebb_check(const StateVec& x,
                                        const ChannelConfig& cfg,
                                        std::int64_t n_trials, Rng& rng,
                                        std::vector<double> sigmas) {
  if (n_trials < 1) throw std::invalid_argument("n_trials must be >= 1");
  const double h = h_of(x, cfg);
  const double gamma = gamma_of(x, cfg);
  if (sigmas.empty()) {
    for (int i = 0; i <= 4; ++i) sigmas.push_back(h * i / 4.0);
  }

  std::vector<int> samples;
  samples.reserve(static_cast<std::size_t>(n_trials));
  for (std::int64_t i = 0; i < n_trials; ++i) {
    samples.push_back(sample_reception(x, stationary_chain(x, cfg, rng), cfg, rng).r_k);
  }

  std::vector<EbbRow> rows;
  rows.reserve(sigmas.size());
  const double n = static_cast<double>(n_trials);
  for (double sigma : sigmas) {
    const double level = h - sigma;
    const auto hits = std::count_if(samples.begin(), samples.end(),
                                    [level](int r) { return r <= level; });
    const double freq = static_cast<double>(hits) / n;
    rows.push_back({sigma, freq, std::sqrt(freq * (1.0 - freq) / n),
                    std::exp(-gamma * sigma)});
  }
  return rows;
}

MeanEstimate empirical_resolution_loss(const StateVec& x,
                                       const ChannelConfig& cfg,
                                       std::int64_t n_trials, Rng& rng) {
  if (n_trials < 2) throw std::invalid_argument("n_trials must be >= 2");
  double sum = 0.0;
  double sum_sq = 0.0;
  for (std::int64_t i = 0; i < n_trials; ++i) {
    const int r = sample_reception(x, stationary_chain(x, cfg, rng), cfg, rng).r_k;
    const double v = std::ldexp(1.0, -r);
    sum += v;
    sum_sq += v * v;
  }
  const double n = static_cast<double>(n_trials);
  const double mean = sum / n;
  const double var = std::max(0.0, (sum_sq - n * mean * mean) / (n - 1.0));
  return {mean, std::sqrt(var / n)};
}

}  // namespace fadetrig
