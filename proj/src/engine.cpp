#include "fadetrig/engine.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <thread>

namespace fadetrig {

const char* scheme_name(Scheme s) {
  return s == Scheme::kSelf ? "self" : "event";
}

const char* failure_name(FailureKind k) {
  switch (k) {
    case FailureKind::kContainment: return "containment";
    case FailureKind::kEta: return "eta";
    case FailureKind::kOmegaExit: return "omega_exit";
    case FailureKind::kDomain: return "domain";
  }
  return "unknown";
}

TriggerParams default_growth_bound(const PlantParams& plant, double l_floor) {
  TriggerParams g;
  g.l_e = std::abs(plant.v_gain) + std::abs(plant.w_gain) + plant.noise_bound / l_floor;
  g.l_x = 0.0;
  g.l_w = 1.0;
  g.w1 = 1.0;
  g.w2 = 1.0;
  g.m_bound = plant.noise_bound;
  return g;
}

TriggerParams default_trigger_params() {
  TriggerParams t;
  t.l_e = 120.0;
  t.l_x = 0.0;
  t.w1 = 1.0;
  t.w2 = 1.0;
  return t;
}

void EngineConfig::validate() const {
  channel.validate();
  plant.validate();
  trigger.validate();
  growth.validate();
  if (!(event.coeff > 0.0)) throw std::invalid_argument("event coeff must be > 0");
  if (!(horizon_s > 0.0)) throw std::invalid_argument("horizon must be > 0");
  if (!(dt_s > 0.0)) throw std::invalid_argument("dt must be > 0");
  if (!(x0.l > 0.0)) throw std::invalid_argument("initial L must be > 0");
  if (!(u0 > 0.0)) throw std::invalid_argument("initial half-width must be > 0");
  if (!(u_floor > 0.0)) throw std::invalid_argument("u_floor must be > 0");
  if (!(l_floor > 0.0)) throw std::invalid_argument("l_floor must be > 0");
  if (!(fade_duration_s >= 0.0)) throw std::invalid_argument("fade duration must be >= 0");
  if (!(scale_l > 0.0) || !(scale_alpha > 0.0)) {
    throw std::invalid_argument("norm scales must be > 0");
  }
  const double n = horizon_s / dt_s;
  if (std::abs(n - std::round(n)) > 1e-6 * std::max(1.0, n)) {
    throw std::invalid_argument("horizon must be a whole number of dt steps");
  }
}

std::int64_t EngineConfig::steps() const {
  return std::llround(horizon_s / dt_s);
}

namespace {

class PathSimulator {
 public:
  PathSimulator(const EngineConfig& cfg, std::uint64_t seed)
      : cfg_(cfg),
        chan_rng_(make_rng(seed, 1)),
        noise_rng_(make_rng(seed, 2)),
        noise_dist_(-cfg.plant.noise_bound, cfg.plant.noise_bound) {
    path_.seed = seed;
    path_.scheme = cfg.scheme;
  }

  SamplePath run() {
    const auto n_steps = cfg_.steps();
    path_.trace.reserve(static_cast<std::size_t>(n_steps) + 1);
    try {
      simulate(n_steps);
    } catch (const ContainmentError& e) {
      fail(FailureKind::kContainment, e.what());
    } catch (const TriggerViolation& e) {
      fail(FailureKind::kEta, e.what());
    } catch (const OutsideOmegaError& e) {
      fail(FailureKind::kOmegaExit, e.what());
    } catch (const DomainError& e) {
      fail(FailureKind::kDomain, e.what());
    }
    finish_metrics();
    return std::move(path_);
  }

 private:
  static Rng make_rng(std::uint64_t seed, std::uint32_t stream) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed & 0xffffffffu),
                      static_cast<std::uint32_t>(seed >> 32), stream};
    return Rng(seq);
  }

  double tracking_signal() const { return state_.x.alpha - cfg_.plant.alpha_d; }
  double est_error() const { return std::abs(state_.x.alpha - state_.alpha_hat); }

  void fail(FailureKind kind, const char* what) {
    path_.failure = PathFailure{kind, now_, what};
  }

  void simulate(std::int64_t n_steps) {
    state_ = {cfg_.x0, cfg_.plant.alpha_d + cfg_.center0};
    pre_jump_ = {{cfg_.center0}, cfg_.u0};
    chan_ = stationary_chain(cfg_.x0, cfg_.channel, chan_rng_);
    now_ = 0.0;
    visit();

    transmit(0.0);
    schedule_next();
    record_point(0.0);

    for (std::int64_t i = 0; i < n_steps; ++i) {
      const double grid_end = static_cast<double>(i + 1) * cfg_.dt_s;
      const Noise noise = draw_noise();
      // Self-triggered jumps can land inside a grid step; split the step there.
      while (cfg_.scheme == Scheme::kSelf && next_t_ < grid_end) {
        advance(next_t_, noise);
        transmit(next_t_ - last_t_);
        schedule_next();
      }
      advance(grid_end, noise);
      if (cfg_.scheme == Scheme::kSelf && next_t_ == grid_end && i + 1 < n_steps) {
        transmit(next_t_ - last_t_);
        schedule_next();
      } else if (cfg_.scheme == Scheme::kEvent && i + 1 < n_steps &&
                 event_trigger_fired(est_error(), state_.x - cfg_.plant.setpoint(),
                                     cfg_.event, cfg_.scale_l, cfg_.scale_alpha)) {
        transmit(grid_end - last_t_);
      }
      record_point(grid_end);
    }
  }

  Noise draw_noise() {
    if (cfg_.plant.noise_bound == 0.0) return {};
    const double n1 = noise_dist_(noise_rng_);
    const double n2 = noise_dist_(noise_rng_);
    return {n1, n2};
  }

  void advance(double t_end, Noise noise) {
    if (t_end > now_) {
      state_ = rk4_step(state_, t_end - now_, noise, cfg_.plant);
      now_ = t_end;
    }
    if (!(state_.x.l >= cfg_.l_floor) || !std::isfinite(state_.x.alpha)) {
      throw DomainError("separation fell below l_floor = " +
                        std::to_string(cfg_.l_floor) + " (L = " +
                        std::to_string(state_.x.l) + ")");
    }
    visit();
  }

  void visit() {
    path_.l_max = std::max(path_.l_max, state_.x.l);
    path_.abs_alpha_max = std::max(path_.abs_alpha_max, std::abs(state_.x.alpha));
  }

  /// Bound on the estimation error `elapsed` seconds after the last jump.
  double current_bound(double elapsed) const {
    return std::max(propagate_half_width(post_jump_, elapsed, cfg_.growth), cfg_.u_floor);
  }

  void transmit(double interval) {
    if (!path_.transmissions.empty()) {
      // Advance the synchronized box from the previous jump to now.
      pre_jump_.center = predict_center(post_jump_.center, interval, cfg_.plant);
      pre_jump_.half_width = current_bound(interval);
    }
    const double signal = tracking_signal();
    const std::array<double, 1> x_bar{signal};
    const double dev = box_deviation(x_bar, pre_jump_);
    path_.max_containment_ratio =
        std::max(path_.max_containment_ratio, dev / pre_jump_.half_width);

    const Reception rec = sample_reception(state_.x, chan_, cfg_.channel, chan_rng_,
                                           cfg_.in_fade(now_));
    chan_ = rec.chan;
    const auto blocks = encode(x_bar, pre_jump_, rec.r_k);
    post_jump_ = decode(blocks, pre_jump_.center, pre_jump_.half_width);
    if (!(box_deviation(x_bar, post_jump_) <= post_jump_.half_width)) {
      throw ContainmentError("post-jump box does not contain the signal");
    }
    state_.alpha_hat = post_jump_.center[0] + cfg_.plant.alpha_d;

    TransmissionRecord r;
    r.k = static_cast<std::int64_t>(path_.transmissions.size());
    r.t_k = now_;
    r.interval = r.k == 0 ? 0.0 : interval;
    r.r_k = rec.r_k;
    r.u_post = post_jump_.half_width;
    r.est_error_post = est_error();
    path_.transmissions.push_back(r);
    last_t_ = now_;
  }

  void schedule_next() {
    if (cfg_.scheme != Scheme::kSelf) return;
    const double g = g_value(state_.x, cfg_.channel);
    const double interval = self_trigger_interval(g, cfg_.trigger);
    if (!(interval > 0.0)) {
      throw OutsideOmegaError("self-trigger produced a non-positive interval");
    }
    path_.min_trigger_eta = std::min(path_.min_trigger_eta, eta_of(interval, cfg_.trigger));
    next_t_ = now_ + interval;
  }

  void record_point(double t) {
    path_.trace.push_back({t, state_.x.l, state_.x.alpha, state_.alpha_hat,
                           est_error(), current_bound(now_ - last_t_)});
  }

  void finish_metrics() {
    const auto& tr = path_.trace;
    if (tr.size() < 2) return;
    const PlantParams& p = cfg_.plant;
    double il = 0.0, ia = 0.0, in = 0.0;
    for (std::size_t i = 1; i < tr.size(); ++i) {
      const double h = tr[i].t - tr[i - 1].t;
      auto dev = [&](const TracePoint& q) {
        return StateVec{q.l - p.l_d, q.alpha - p.alpha_d};
      };
      const StateVec a = dev(tr[i - 1]);
      const StateVec b = dev(tr[i]);
      il += 0.5 * h * (std::abs(a.l) + std::abs(b.l));
      ia += 0.5 * h * (std::abs(a.alpha) + std::abs(b.alpha));
      in += 0.5 * h * (a.inf_norm(cfg_.scale_l, cfg_.scale_alpha) +
                       b.inf_norm(cfg_.scale_l, cfg_.scale_alpha));
    }
    const double span = tr.back().t - tr.front().t;
    path_.err_l = il / span;
    path_.err_alpha = ia / span;
    path_.err_norm = in / span;
  }

  const EngineConfig& cfg_;
  Rng chan_rng_;
  Rng noise_rng_;
  std::uniform_real_distribution<double> noise_dist_;

  SamplePath path_;
  SimState state_;
  QuantizerState pre_jump_;
  QuantizerState post_jump_;
  MarkovChannelState chan_;
  double now_ = 0.0;
  double last_t_ = 0.0;
  double next_t_ = std::numeric_limits<double>::infinity();
};

}  // namespace

SamplePath run_sample_path(const EngineConfig& cfg, std::uint64_t seed) {
  cfg.validate();
  if (cfg.scheme == Scheme::kSelf && !omega_x_member(cfg.x0, cfg.trigger, cfg.channel)) {
    throw std::invalid_argument("initial state outside the communication region");
  }
  return PathSimulator(cfg, seed).run();
}

int McSummary::total_violations() const {
  int n = 0;
  for (int v : violations) n += v;
  return n;
}

int interval_bin(double interval) {
  const double pos = interval / kHistWidth + 1e-9;
  if (pos >= kHistBins) return kHistBins;
  return std::max(0, static_cast<int>(std::floor(pos)));
}

McSummary summarize(const std::vector<SamplePath>& paths, std::uint64_t base_seed,
                    Scheme scheme) {
  McSummary s;
  s.n_runs = static_cast<int>(paths.size());
  s.base_seed = base_seed;
  s.scheme = scheme;

  std::vector<const SamplePath*> good;
  for (const auto& p : paths) {
    if (p.failure) {
      ++s.violations[static_cast<std::size_t>(p.failure->kind)];
    } else {
      good.push_back(&p);
    }
  }
  s.n_ok = static_cast<int>(good.size());

  double pooled_sum = 0.0;
  s.pooled_min_interval = std::numeric_limits<double>::infinity();
  std::array<std::int64_t, kHistBins + 1> counts{};
  for (const SamplePath* p : good) {
    double mn = std::numeric_limits<double>::infinity();
    double sum = 0.0;
    std::int64_t n = 0;
    for (const auto& r : p->transmissions) {
      if (r.k == 0) continue;
      mn = std::min(mn, r.interval);
      sum += r.interval;
      ++n;
      ++counts[static_cast<std::size_t>(interval_bin(r.interval))];
    }
    s.run_min_interval.push_back(mn);
    s.run_mean_interval.push_back(n > 0 ? sum / static_cast<double>(n)
                                        : std::numeric_limits<double>::quiet_NaN());
    s.pooled_min_interval = std::min(s.pooled_min_interval, mn);
    pooled_sum += sum;
    s.n_intervals += n;
    s.run_err_l.push_back(p->err_l);
    s.run_err_alpha.push_back(p->err_alpha);
    s.run_err_norm.push_back(p->err_norm);
  }
  if (s.n_intervals > 0) {
    s.pooled_mean_interval = pooled_sum / static_cast<double>(s.n_intervals);
    for (std::size_t b = 0; b < counts.size(); ++b) {
      s.hist[b] = static_cast<double>(counts[b]) / static_cast<double>(s.n_intervals);
    }
  }
  if (!good.empty()) {
    const double n = static_cast<double>(good.size());
    for (std::size_t i = 0; i < good.size(); ++i) {
      s.mean_err_l += s.run_err_l[i] / n;
      s.mean_err_alpha += s.run_err_alpha[i] / n;
      s.mean_err_norm += s.run_err_norm[i] / n;
    }

    Envelope& env = s.envelope;
    const std::size_t len = good.front()->trace.size();
    for (std::size_t j = 0; j < len; ++j) {
      double lmin = std::numeric_limits<double>::infinity(), lmax = -lmin, lsum = 0.0;
      double amin = lmin, amax = -lmin, asum = 0.0;
      for (const SamplePath* p : good) {
        const TracePoint& q = p->trace[j];
        lmin = std::min(lmin, q.l);
        lmax = std::max(lmax, q.l);
        lsum += q.l;
        amin = std::min(amin, q.alpha);
        amax = std::max(amax, q.alpha);
        asum += q.alpha;
      }
      env.t.push_back(good.front()->trace[j].t);
      env.l_min.push_back(lmin);
      env.l_max.push_back(lmax);
      // Clamp into [min, max] so float summation cannot break the ordering.
      env.l_mean.push_back(std::clamp(lsum / n, lmin, lmax));
      env.alpha_min.push_back(amin);
      env.alpha_max.push_back(amax);
      env.alpha_mean.push_back(std::clamp(asum / n, amin, amax));
    }
  } else {
    s.pooled_min_interval = std::numeric_limits<double>::quiet_NaN();
  }
  return s;
}

MonteCarloResult run_monte_carlo(const EngineConfig& cfg, std::uint64_t base_seed,
                                 int n_runs, int keep_paths, unsigned threads) {
  if (n_runs < 1) throw std::invalid_argument("n_runs must be >= 1");
  cfg.validate();
  if (cfg.scheme == Scheme::kSelf && !omega_x_member(cfg.x0, cfg.trigger, cfg.channel)) {
    throw std::invalid_argument("initial state outside the communication region");
  }

  std::vector<SamplePath> paths(static_cast<std::size_t>(n_runs));
  std::atomic<int> next{0};
  auto worker = [&] {
    for (int i = next++; i < n_runs; i = next++) {
      paths[static_cast<std::size_t>(i)] =
          PathSimulator(cfg, base_seed + static_cast<std::uint64_t>(i)).run();
    }
  };
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(n_runs));
  std::vector<std::thread> pool;
  for (unsigned w = 1; w < threads; ++w) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();

  MonteCarloResult out;
  out.summary = summarize(paths, base_seed, cfg.scheme);
  keep_paths = std::clamp(keep_paths, 0, n_runs);
  paths.resize(static_cast<std::size_t>(keep_paths));
  out.paths = std::move(paths);
  return out;
}

EngineConfig inject_deep_fade(EngineConfig cfg, double start, double duration) {
  if (!(start >= 0.0) || !(duration >= 0.0) || start + duration > cfg.horizon_s) {
    throw std::invalid_argument("fade window must lie within [0, horizon]");
  }
  cfg.fade_start_s = start;
  cfg.fade_duration_s = duration;
  return cfg;
}

std::vector<FormationRow> sweep_formations(const EngineConfig& cfg,
                                           const std::vector<double>& alpha_d_list,
                                           std::uint64_t base_seed, int n_runs,
                                           unsigned threads,
                                           const std::vector<Scheme>& schemes) {
  std::vector<FormationRow> rows;
  for (double alpha_d : alpha_d_list) {
    for (Scheme scheme : schemes) {
      EngineConfig c = cfg;
      c.plant.alpha_d = alpha_d;
      c.scheme = scheme;
      const McSummary s = run_monte_carlo(c, base_seed, n_runs, 0, threads).summary;
      rows.push_back({alpha_d, scheme, s.pooled_min_interval, s.pooled_mean_interval,
                      s.mean_err_l, s.mean_err_alpha, s.total_violations()});
    }
  }
  return rows;
}

double zeno_lower_bound(double l_max, double abs_alpha_max, const ChannelConfig& chan,
                        const TriggerParams& trig) {
  return self_trigger_interval(g_value({l_max, abs_alpha_max}, chan), trig);
}

}  // namespace fadetrig
