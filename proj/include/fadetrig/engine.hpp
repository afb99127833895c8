#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fadetrig/channel.hpp"
#include "fadetrig/plant.hpp"
#include "fadetrig/quantizer.hpp"
#include "fadetrig/trigger.hpp"

namespace fadetrig {

enum class Scheme { kSelf, kEvent };

const char* scheme_name(Scheme s);

/// A valid error-growth bound for the predictor error e = alpha - alpha_hat:
/// |e|' <= (|v_gain| + |w_gain| + M / l_floor)|e| + M while L >= l_floor.
TriggerParams default_growth_bound(const PlantParams& plant, double l_floor);

/// Calibrated self-trigger constants: w1 = w2 = 1, L_x = 0 and L_e chosen so
/// the interval at the nominal alpha_d = 20 deg formation is about 0.32 s and
/// the interval at the initial state is about 0.04 s.
TriggerParams default_trigger_params();

/// Everything one sample path needs. Angles in radians.
struct EngineConfig {
  ChannelConfig channel;
  PlantParams plant;
  TriggerParams trigger = default_trigger_params();  // self-trigger rule
  // Quantizer half-width recursion. Kept separate from `trigger`: the trigger's
  // L_e is a scheduling knob, while this one must bound the actual error growth.
  TriggerParams growth = default_growth_bound(PlantParams{}, 1.0);
  EventThreshold event;
  Scheme scheme = Scheme::kSelf;

  double horizon_s = 10.0;
  double dt_s = 1e-3;
  StateVec x0{15.0, deg_to_rad(-30.0)};

  // Initial quantizer box, tracking-error coordinates (alpha - alpha_d).
  double center0 = 0.0;
  double u0 = kPi / 2.0;
  // Lower limit on the pre-jump half-width. Keeps the box well above the
  // integrator's round-off so containment is a statement about the model.
  double u_floor = 1e-9;
  // Smallest separation for which `growth.l_e` bounds the error dynamics.
  double l_floor = 1.0;

  double fade_start_s = 3.0;
  double fade_duration_s = 0.0;

  double scale_l = 1.0;
  double scale_alpha = 1.0;

  void validate() const;
  std::int64_t steps() const;
  bool in_fade(double t) const {
    return fade_duration_s > 0.0 && t >= fade_start_s &&
           t < fade_start_s + fade_duration_s;
  }
};

struct TransmissionRecord {
  std::int64_t k = 0;
  double t_k = 0.0;
  double interval = 0.0;  // t_k - t_{k-1}; 0 for the initial transmission
  int r_k = 0;
  double u_post = 0.0;
  double est_error_post = 0.0;

  friend bool operator==(const TransmissionRecord&, const TransmissionRecord&) = default;
};

struct TracePoint {
  double t = 0.0;
  double l = 0.0;
  double alpha = 0.0;
  double alpha_hat = 0.0;
  double est_error = 0.0;  // |alpha - alpha_hat|
  double u = 0.0;          // current bound on est_error

  friend bool operator==(const TracePoint&, const TracePoint&) = default;
};

enum class FailureKind { kContainment, kEta, kOmegaExit, kDomain };

const char* failure_name(FailureKind k);

struct PathFailure {
  FailureKind kind;
  double t = 0.0;
  std::string message;

  friend bool operator==(const PathFailure&, const PathFailure&) = default;
};

struct SamplePath {
  std::uint64_t seed = 0;
  Scheme scheme = Scheme::kSelf;
  std::vector<TracePoint> trace;  // one point per grid step, post-jump values
  std::vector<TransmissionRecord> transmissions;
  std::optional<PathFailure> failure;

  // Time averages (1/T) int |x - x_d| dt, trapezoid rule on the grid.
  double err_l = 0.0;
  double err_alpha = 0.0;
  double err_norm = 0.0;

  // Bounding box of the visited states, for the Zeno bound.
  double l_max = 0.0;
  double abs_alpha_max = 0.0;
  // Smallest trigger-side eta over all self-triggered intervals.
  double min_trigger_eta = 1.0;
  // Largest |signal - center| / half-width seen before any jump.
  double max_containment_ratio = 0.0;

  bool ok() const { return !failure.has_value(); }
  friend bool operator==(const SamplePath&, const SamplePath&) = default;
};

SamplePath run_sample_path(const EngineConfig& cfg, std::uint64_t seed);

constexpr int kHistBins = 10;
constexpr double kHistWidth = 0.01;

struct Envelope {
  std::vector<double> t;
  std::vector<double> l_min, l_max, l_mean;
  std::vector<double> alpha_min, alpha_max, alpha_mean;
};

struct McSummary {
  int n_runs = 0;
  int n_ok = 0;
  std::uint64_t base_seed = 0;
  Scheme scheme = Scheme::kSelf;

  Envelope envelope;

  // Indexed by run (path index); transmissions with k >= 1 only.
  std::vector<double> run_min_interval;
  std::vector<double> run_mean_interval;
  std::vector<double> run_err_l;
  std::vector<double> run_err_alpha;
  std::vector<double> run_err_norm;

  double pooled_min_interval = 0.0;
  double pooled_mean_interval = 0.0;
  std::int64_t n_intervals = 0;
  // kHistBins bins of width kHistWidth, then one overflow bin.
  std::array<double, kHistBins + 1> hist{};

  double mean_err_l = 0.0;
  double mean_err_alpha = 0.0;
  double mean_err_norm = 0.0;

  std::array<int, 4> violations{};  // indexed by FailureKind
  int total_violations() const;
};

/// Histogram bin of an interval; intervals within 1e-9 of a bin edge count
/// toward the upper bin.
int interval_bin(double interval);

struct MonteCarloResult {
  McSummary summary;
  std::vector<SamplePath> paths;  // first `keep_paths` paths, in seed order
};

/// Runs seeds base..base+n_runs-1 in parallel and folds them in seed order.
MonteCarloResult run_monte_carlo(const EngineConfig& cfg, std::uint64_t base_seed,
                                 int n_runs, int keep_paths = 0,
                                 unsigned threads = 0);

McSummary summarize(const std::vector<SamplePath>& paths, std::uint64_t base_seed,
                    Scheme scheme);

EngineConfig inject_deep_fade(EngineConfig cfg, double start, double duration);

struct FormationRow {
  double alpha_d = 0.0;  // rad
  Scheme scheme = Scheme::kSelf;
  double min_interval = 0.0;
  double mean_interval = 0.0;
  double err_l = 0.0;
  double err_alpha = 0.0;
  int violations = 0;
};

/// Each scheme at each formation bearing, `n_runs` paths each.
std::vector<FormationRow> sweep_formations(
    const EngineConfig& cfg, const std::vector<double>& alpha_d_list,
    std::uint64_t base_seed, int n_runs, unsigned threads = 0,
    const std::vector<Scheme>& schemes = {Scheme::kSelf, Scheme::kEvent});

/// Smallest self-triggered interval anywhere in the box L <= l_max,
/// |alpha| <= abs_alpha_max. G is non-decreasing in L and |alpha|, so the
/// corner gives the bound.
double zeno_lower_bound(double l_max, double abs_alpha_max,
                        const ChannelConfig& chan, const TriggerParams& trig);

}  // namespace fadetrig
