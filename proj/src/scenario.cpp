#include "fadetrig/scenario.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <ostream>
#include <sstream>

#include "fadetrig/output.hpp"

namespace fadetrig {

const char* scenario_name(ScenarioKind k) {
  switch (k) {
    case ScenarioKind::kConverge: return "converge";
    case ScenarioKind::kCompare: return "compare";
    case ScenarioKind::kDistribution: return "distribution";
    case ScenarioKind::kDeepFade: return "deepfade";
  }
  return "unknown";
}

std::vector<Scheme> ScenarioConfig::scheme_list() const {
  switch (schemes) {
    case SchemeSelection::kSelf: return {Scheme::kSelf};
    case SchemeSelection::kEvent: return {Scheme::kEvent};
    case SchemeSelection::kBoth: break;
  }
  return {Scheme::kSelf, Scheme::kEvent};
}

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

double parse_real(const std::string& key, const std::string& v) {
  double out = 0.0;
  const char* end = v.data() + v.size();
  auto [ptr, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc() || ptr != end || !std::isfinite(out)) {
    throw UsageError(key, key + ": expected a finite number, got '" + v + "'");
  }
  return out;
}

template <typename Int>
Int parse_int(const std::string& key, const std::string& v) {
  Int out = 0;
  const char* end = v.data() + v.size();
  auto [ptr, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc() || ptr != end) {
    throw UsageError(key, key + ": expected an integer, got '" + v + "'");
  }
  return out;
}

ScenarioKind parse_scenario(const std::string& v) {
  if (v == "converge") return ScenarioKind::kConverge;
  if (v == "compare") return ScenarioKind::kCompare;
  if (v == "distribution") return ScenarioKind::kDistribution;
  if (v == "deepfade") return ScenarioKind::kDeepFade;
  throw UsageError("scenario", "scenario: expected converge|compare|distribution|deepfade, got '" +
                                   v + "'");
}

SchemeSelection parse_scheme(const std::string& v) {
  if (v == "self") return SchemeSelection::kSelf;
  if (v == "event") return SchemeSelection::kEvent;
  if (v == "both") return SchemeSelection::kBoth;
  throw UsageError("scheme", "scheme: expected self|event|both, got '" + v + "'");
}

enum class Bound { kAny, kPositive, kNonNegative };

void check(const std::string& key, double v, Bound b) {
  if (b == Bound::kPositive && !(v > 0.0)) throw UsageError(key, key + " must be > 0");
  if (b == Bound::kNonNegative && !(v >= 0.0)) throw UsageError(key, key + " must be >= 0");
}

// Mutable view used while applying keys.
struct Builder {
  ScenarioConfig cfg;
  bool seed_set = false;
  bool m_bound_set = false;
  std::vector<std::pair<double TriggerParams::*, double>> growth_overrides;
};

using Setter = std::function<void(Builder&, const std::string&, const std::string&)>;

Setter real_field(std::function<double&(Builder&)> field, Bound b) {
  return [field, b](Builder& s, const std::string& key, const std::string& v) {
    const double x = parse_real(key, v);
    check(key, x, b);
    field(s) = x;
  };
}

Setter degree_field(std::function<double&(Builder&)> field) {
  return [field](Builder& s, const std::string& key, const std::string& v) {
    field(s) = deg_to_rad(parse_real(key, v));
  };
}

Setter growth_field(double TriggerParams::*member, Bound b) {
  return [member, b](Builder& s, const std::string& key, const std::string& v) {
    const double x = parse_real(key, v);
    check(key, x, b);
    s.growth_overrides.emplace_back(member, x);
  };
}

Setter positive_int(std::function<int&(Builder&)> field) {
  return [field](Builder& s, const std::string& key, const std::string& v) {
    const int x = parse_int<int>(key, v);
    if (x < 1) throw UsageError(key, key + " must be >= 1");
    field(s) = x;
  };
}

const std::map<std::string, Setter>& setters() {
  using B = Builder;
  static const std::map<std::string, Setter> table = {
      {"scenario", [](B& s, const std::string&, const std::string& v) {
         s.cfg.scenario = parse_scenario(v);
       }},
      {"scheme", [](B& s, const std::string&, const std::string& v) {
         s.cfg.schemes = parse_scheme(v);
       }},
      {"runs", positive_int([](B& s) -> int& { return s.cfg.runs; })},
      {"seed", [](B& s, const std::string& key, const std::string& v) {
         s.cfg.seed = parse_int<std::uint64_t>(key, v);
         s.seed_set = true;
       }},
      {"out_dir", [](B& s, const std::string& key, const std::string& v) {
         if (v.empty()) throw UsageError(key, "out_dir must not be empty");
         s.cfg.out_dir = v;
       }},
      {"max_path_files", [](B& s, const std::string& key, const std::string& v) {
         const int x = parse_int<int>(key, v);
         if (x < 0) throw UsageError(key, key + " must be >= 0");
         s.cfg.max_path_files = x;
       }},
      {"threads", [](B& s, const std::string& key, const std::string& v) {
         s.cfg.threads = parse_int<unsigned>(key, v);
       }},
      {"sweep_alpha_d_deg", [](B& s, const std::string& key, const std::string& v) {
         std::vector<double> list;
         std::stringstream ss(v);
         std::string item;
         while (std::getline(ss, item, ',')) list.push_back(deg_to_rad(parse_real(key, trim(item))));
         if (list.empty()) throw UsageError(key, key + " must list at least one angle");
         s.cfg.sweep_alpha_d = list;
       }},

      {"horizon_s", real_field([](B& s) -> double& { return s.cfg.engine.horizon_s; }, Bound::kPositive)},
      {"dt_s", real_field([](B& s) -> double& { return s.cfg.engine.dt_s; }, Bound::kPositive)},
      {"fade_start_s", real_field([](B& s) -> double& { return s.cfg.engine.fade_start_s; }, Bound::kNonNegative)},
      {"fade_duration_s", real_field([](B& s) -> double& { return s.cfg.engine.fade_duration_s; }, Bound::kNonNegative)},

      {"r_bar", positive_int([](B& s) -> int& { return s.cfg.engine.channel.r_bar; })},
      {"bits_per_block", positive_int([](B& s) -> int& { return s.cfg.engine.channel.bits_per_block; })},
      {"p", real_field([](B& s) -> double& { return s.cfg.engine.channel.p; }, Bound::kPositive)},
      {"h_coeff", real_field([](B& s) -> double& { return s.cfg.engine.channel.h_coeff; }, Bound::kNonNegative)},
      {"h_rate", real_field([](B& s) -> double& { return s.cfg.engine.channel.h_rate; }, Bound::kNonNegative)},
      {"gamma_coeff", real_field([](B& s) -> double& { return s.cfg.engine.channel.gamma_coeff; }, Bound::kNonNegative)},

      {"k_l", real_field([](B& s) -> double& { return s.cfg.engine.plant.k_l; }, Bound::kPositive)},
      {"k_alpha", real_field([](B& s) -> double& { return s.cfg.engine.plant.k_alpha; }, Bound::kPositive)},
      {"l_d", real_field([](B& s) -> double& { return s.cfg.engine.plant.l_d; }, Bound::kPositive)},
      {"alpha_d_deg", degree_field([](B& s) -> double& { return s.cfg.engine.plant.alpha_d; })},
      {"d", real_field([](B& s) -> double& { return s.cfg.engine.plant.d; }, Bound::kPositive)},
      {"v_gain", real_field([](B& s) -> double& { return s.cfg.engine.plant.v_gain; }, Bound::kAny)},
      {"w_gain", real_field([](B& s) -> double& { return s.cfg.engine.plant.w_gain; }, Bound::kAny)},
      {"noise_bound", real_field([](B& s) -> double& { return s.cfg.engine.plant.noise_bound; }, Bound::kNonNegative)},

      {"l_e", real_field([](B& s) -> double& { return s.cfg.engine.trigger.l_e; }, Bound::kPositive)},
      {"l_x", real_field([](B& s) -> double& { return s.cfg.engine.trigger.l_x; }, Bound::kNonNegative)},
      {"l_w", real_field([](B& s) -> double& { return s.cfg.engine.trigger.l_w; }, Bound::kNonNegative)},
      {"w1", real_field([](B& s) -> double& { return s.cfg.engine.trigger.w1; }, Bound::kPositive)},
      {"w2", real_field([](B& s) -> double& { return s.cfg.engine.trigger.w2; }, Bound::kPositive)},
      {"chi1_bar", real_field([](B& s) -> double& { return s.cfg.engine.trigger.chi1_bar; }, Bound::kPositive)},
      {"c1", real_field([](B& s) -> double& { return s.cfg.engine.trigger.c1; }, Bound::kPositive)},
      {"c_chi", real_field([](B& s) -> double& { return s.cfg.engine.trigger.c_chi; }, Bound::kNonNegative)},
      {"m_bound", [](B& s, const std::string& key, const std::string& v) {
         const double x = parse_real(key, v);
         check(key, x, Bound::kNonNegative);
         s.cfg.engine.trigger.m_bound = x;
         s.m_bound_set = true;
       }},

      {"growth_l_e", growth_field(&TriggerParams::l_e, Bound::kPositive)},
      {"growth_l_x", growth_field(&TriggerParams::l_x, Bound::kNonNegative)},
      {"growth_l_w", growth_field(&TriggerParams::l_w, Bound::kNonNegative)},
      {"growth_w1", growth_field(&TriggerParams::w1, Bound::kPositive)},
      {"growth_w2", growth_field(&TriggerParams::w2, Bound::kPositive)},
      {"growth_chi1_bar", growth_field(&TriggerParams::chi1_bar, Bound::kPositive)},
      {"growth_c1", growth_field(&TriggerParams::c1, Bound::kPositive)},
      {"growth_c_chi", growth_field(&TriggerParams::c_chi, Bound::kNonNegative)},
      {"growth_m_bound", growth_field(&TriggerParams::m_bound, Bound::kNonNegative)},

      {"event_coeff", real_field([](B& s) -> double& { return s.cfg.engine.event.coeff; }, Bound::kPositive)},
      {"l0", real_field([](B& s) -> double& { return s.cfg.engine.x0.l; }, Bound::kPositive)},
      {"alpha0_deg", degree_field([](B& s) -> double& { return s.cfg.engine.x0.alpha; })},
      {"center0", real_field([](B& s) -> double& { return s.cfg.engine.center0; }, Bound::kAny)},
      {"u0", real_field([](B& s) -> double& { return s.cfg.engine.u0; }, Bound::kPositive)},
      {"u_floor", real_field([](B& s) -> double& { return s.cfg.engine.u_floor; }, Bound::kPositive)},
      {"l_floor", real_field([](B& s) -> double& { return s.cfg.engine.l_floor; }, Bound::kPositive)},
      {"scale_l", real_field([](B& s) -> double& { return s.cfg.engine.scale_l; }, Bound::kPositive)},
      {"scale_alpha", real_field([](B& s) -> double& { return s.cfg.engine.scale_alpha; }, Bound::kPositive)},
  };
  return table;
}

void apply_preset(ScenarioConfig& cfg) {
  EngineConfig& e = cfg.engine;
  switch (cfg.scenario) {
    case ScenarioKind::kConverge:
      cfg.schemes = SchemeSelection::kSelf;
      e.plant.alpha_d = deg_to_rad(20.0);
      break;
    case ScenarioKind::kCompare:
      cfg.schemes = SchemeSelection::kBoth;
      cfg.sweep_alpha_d.clear();
      for (int deg = 0; deg <= 50; deg += 10) cfg.sweep_alpha_d.push_back(deg_to_rad(deg));
      break;
    case ScenarioKind::kDistribution:
      cfg.schemes = SchemeSelection::kBoth;
      e.plant.alpha_d = 0.0;
      break;
    case ScenarioKind::kDeepFade:
      cfg.schemes = SchemeSelection::kBoth;
      e.plant.alpha_d = deg_to_rad(20.0);
      e.fade_start_s = 3.0;
      e.fade_duration_s = 0.6;
      break;
  }
}

std::optional<std::string> last_value(const KeyValues& kv, std::string_view key) {
  std::optional<std::string> out;
  for (const auto& [k, v] : kv) {
    if (k == key) out = v;
  }
  return out;
}

void cross_checks(const ScenarioConfig& cfg) {
  const EngineConfig& e = cfg.engine;
  if (!(e.trigger.w2 >= e.trigger.w1)) throw UsageError("w2", "w2 must be >= w1");
  if (!(e.growth.w2 >= e.growth.w1)) throw UsageError("growth_w2", "growth_w2 must be >= growth_w1");
  const double n = e.horizon_s / e.dt_s;
  if (std::abs(n - std::round(n)) > 1e-6 * std::max(1.0, n)) {
    throw UsageError("dt_s", "horizon_s must be a whole number of dt_s steps");
  }
  if (e.fade_duration_s > 0.0 && e.fade_start_s + e.fade_duration_s > e.horizon_s) {
    throw UsageError("fade_start_s", "fade window must end within horizon_s");
  }
  if (!(e.l_floor < e.x0.l)) throw UsageError("l_floor", "l_floor must be below l0");
  if (!omega_x_member(e.x0, e.trigger, e.channel)) {
    throw UsageError("l0", "initial state is outside the communication region");
  }
  try {
    e.validate();
  } catch (const std::invalid_argument& ex) {
    throw UsageError("", ex.what());
  }
}

}  // namespace

KeyValues parse_key_values(std::string_view text) {
  KeyValues out;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? text.npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    const std::string body = trim(line);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) {
      throw UsageError("", "line " + std::to_string(line_no) + ": expected key=value");
    }
    std::string key = trim(std::string_view(body).substr(0, eq));
    if (key.empty()) {
      throw UsageError("", "line " + std::to_string(line_no) + ": empty key");
    }
    out.emplace_back(std::move(key), trim(std::string_view(body).substr(eq + 1)));
  }
  return out;
}

KeyValues read_key_values(const std::filesystem::path& file) {
  std::ifstream is(file, std::ios::binary);
  if (!is) throw UsageError("", "cannot read config file " + file.string());
  std::stringstream ss;
  ss << is.rdbuf();
  return parse_key_values(ss.str());
}

std::vector<std::string> config_keys() {
  std::vector<std::string> keys;
  for (const auto& [k, _] : setters()) keys.push_back(k);
  return keys;
}

ScenarioConfig build_config(const KeyValues& file, const KeyValues& overrides,
                            std::optional<std::string> env_seed) {
  Builder b;
  auto scenario = last_value(overrides, "scenario");
  if (!scenario) scenario = last_value(file, "scenario");
  if (scenario) b.cfg.scenario = parse_scenario(*scenario);
  apply_preset(b.cfg);

  const auto& table = setters();
  for (const KeyValues* kv : {&file, &overrides}) {
    for (const auto& [key, value] : *kv) {
      const auto it = table.find(key);
      if (it == table.end()) throw UsageError(key, "unknown key '" + key + "'");
      it->second(b, key, value);
    }
  }
  if (!b.seed_set && env_seed && !env_seed->empty()) {
    b.cfg.seed = parse_int<std::uint64_t>("FADETRIG_SEED", *env_seed);
  }

  EngineConfig& e = b.cfg.engine;
  if (!b.m_bound_set) e.trigger.m_bound = e.plant.noise_bound;
  e.growth = default_growth_bound(e.plant, e.l_floor);
  for (const auto& [member, value] : b.growth_overrides) e.growth.*member = value;

  cross_checks(b.cfg);
  return b.cfg;
}

ScenarioResult run_scenario(const ScenarioConfig& cfg, std::ostream& log) {
  ScenarioResult result;
  const auto schemes = cfg.scheme_list();
  const bool split = schemes.size() > 1;
  char line[256];

  log << "scenario " << scenario_name(cfg.scenario) << ", runs " << cfg.runs
      << ", seed " << cfg.seed << "\n";

  if (cfg.scenario == ScenarioKind::kCompare) {
    result.compare_rows = sweep_formations(cfg.engine, cfg.sweep_alpha_d, cfg.seed,
                                           cfg.runs, cfg.threads, schemes);
    const auto f = cfg.out_dir / "compare.csv";
    write_text_file(f, compare_csv(result.compare_rows));
    result.files.push_back(f);
    for (const FormationRow& r : result.compare_rows) {
      std::snprintf(line, sizeof line,
                    "  alpha_d %5.1f deg  %-5s  min %.4f s  mean %.4f s  err_L %.4f  "
                    "err_alpha %.4f  violations %d\n",
                    rad_to_deg(r.alpha_d), scheme_name(r.scheme), r.min_interval,
                    r.mean_interval, r.err_l, r.err_alpha, r.violations);
      log << line;
      result.total_violations += r.violations;
    }
    return result;
  }

  for (Scheme scheme : schemes) {
    EngineConfig e = cfg.engine;
    e.scheme = scheme;
    const int keep = std::min(cfg.max_path_files, cfg.runs);
    const MonteCarloResult mc = run_monte_carlo(e, cfg.seed, cfg.runs, keep, cfg.threads);
    const auto dir = split ? cfg.out_dir / scheme_name(scheme) : cfg.out_dir;
    const auto files = emit_outputs(mc.summary, mc.paths, dir);
    result.files.insert(result.files.end(), files.begin(), files.end());

    const McSummary& s = mc.summary;
    std::snprintf(line, sizeof line,
                  "  %-5s  ok %d/%d  min %.4f s  mean %.4f s  <0.01 s %.3f  err %.4f  "
                  "violations %d\n",
                  scheme_name(scheme), s.n_ok, s.n_runs, s.pooled_min_interval,
                  s.pooled_mean_interval, s.hist[0], s.mean_err_norm, s.total_violations());
    log << line;
    for (int k = 0; k < 4; ++k) {
      if (s.violations[k] > 0) {
        log << "    " << failure_name(static_cast<FailureKind>(k)) << ": "
            << s.violations[k] << "\n";
      }
    }
    result.total_violations += s.total_violations();
    result.outcomes.push_back({scheme, s});
  }
  return result;
}

}  // namespace fadetrig
