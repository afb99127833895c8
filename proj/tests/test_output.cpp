#include <cmath>
#include <limits>

#include "doctest.h"
#include "fadetrig/output.hpp"
#include "fadetrig/scenario.hpp"
#include "support.hpp"

using namespace fadetrig;
using testing_support::num;
using testing_support::parse_csv;
using testing_support::slurp;

namespace {

double at_precision(double v) { return num(format_real(v)); }

}  // namespace

TEST_CASE("reals are written with 12 significant digits") {
  CHECK(format_real(0.1) == "0.1");
  CHECK(format_real(1.0 / 3.0) == "0.333333333333");
  CHECK(format_real(123456789.123456789) == "123456789.123");
  CHECK(format_real(-2.5e-17) == "-2.5e-17");
  CHECK(format_real(0.0) == "0");
  CHECK(format_real(std::numeric_limits<double>::infinity()) == "inf");
}

TEST_CASE("path and event files parse back to the in-memory values") {
  EngineConfig c;
  c.horizon_s = 2.0;
  const SamplePath p = run_sample_path(c, 21);

  const auto path = parse_csv(path_csv(p));
  CHECK(path.header == std::vector<std::string>{"t", "L", "alpha", "alpha_hat", "est_error", "U"});
  REQUIRE(path.rows.size() == p.trace.size());
  for (std::size_t i = 0; i < p.trace.size(); ++i) {
    const auto& r = path.rows[i];
    const TracePoint& t = p.trace[i];
    REQUIRE(r.size() == 6);
    CHECK(num(r[0]) == at_precision(t.t));
    CHECK(num(r[1]) == at_precision(t.l));
    CHECK(num(r[2]) == at_precision(t.alpha));
    CHECK(num(r[3]) == at_precision(t.alpha_hat));
    CHECK(num(r[4]) == at_precision(t.est_error));
    CHECK(num(r[5]) == at_precision(t.u));
    CHECK(std::abs(num(r[1]) - t.l) <= 1e-11 * std::abs(t.l));
  }

  const auto ev = parse_csv(events_csv(p));
  CHECK(ev.header == std::vector<std::string>{"k", "t_k", "interval", "r_k", "u_post"});
  REQUIRE(ev.rows.size() == p.transmissions.size());
  for (std::size_t i = 0; i < ev.rows.size(); ++i) {
    const TransmissionRecord& t = p.transmissions[i];
    CHECK(std::stoll(ev.rows[i][0]) == t.k);
    CHECK(num(ev.rows[i][1]) == at_precision(t.t_k));
    CHECK(num(ev.rows[i][2]) == at_precision(t.interval));
    CHECK(std::stoi(ev.rows[i][3]) == t.r_k);
    CHECK(num(ev.rows[i][4]) == at_precision(t.u_post));
  }
}

TEST_CASE("summary files parse back to the in-memory values") {
  EngineConfig c;
  c.horizon_s = 1.0;
  c.scheme = Scheme::kEvent;
  const McSummary s = run_monte_carlo(c, 3, 4).summary;

  const auto env = parse_csv(envelope_csv(s));
  CHECK(env.header == std::vector<std::string>{"t", "L_min", "L_max", "L_mean", "alpha_min",
                                               "alpha_max", "alpha_mean"});
  REQUIRE(env.rows.size() == s.envelope.t.size());
  for (std::size_t i = 0; i < env.rows.size(); ++i) {
    CHECK(num(env.rows[i][1]) == at_precision(s.envelope.l_min[i]));
    CHECK(num(env.rows[i][5]) == at_precision(s.envelope.alpha_max[i]));
    CHECK(num(env.rows[i][6]) == at_precision(s.envelope.alpha_mean[i]));
  }

  const auto hist = parse_csv(intervals_hist_csv(s));
  CHECK(hist.header == std::vector<std::string>{"bin_lo", "bin_hi", "fraction"});
  REQUIRE(hist.rows.size() == kHistBins + 1);
  CHECK(num(hist.rows[0][0]) == 0.0);
  CHECK(num(hist.rows[0][1]) == 0.01);
  CHECK(std::isinf(num(hist.rows.back()[1])));
  for (int i = 0; i <= kHistBins; ++i) CHECK(num(hist.rows[i][2]) == at_precision(s.hist[i]));
}

TEST_CASE("compare rows parse back") {
  const std::vector<FormationRow> rows{{deg_to_rad(10.0), Scheme::kSelf, 0.04, 0.2, 1.1, 0.05, 0},
                                       {deg_to_rad(10.0), Scheme::kEvent, 0.001, 0.5, 1.05, 0.11, 0}};
  const auto csv = parse_csv(compare_csv(rows));
  CHECK(csv.header == std::vector<std::string>{"alpha_d", "scheme", "min_interval",
                                               "mean_interval", "err_L", "err_alpha"});
  REQUIRE(csv.rows.size() == 2);
  CHECK(num(csv.rows[0][0]) == 10.0);
  CHECK(csv.rows[1][1] == "event");
  CHECK(num(csv.rows[1][2]) == 0.001);
  CHECK(num(csv.rows[1][5]) == 0.11);
}

TEST_CASE("every file ends with a newline") {
  EngineConfig c;
  c.horizon_s = 0.5;
  const SamplePath p = run_sample_path(c, 1);
  const McSummary s = run_monte_carlo(c, 1, 1).summary;
  for (const std::string& text :
       {path_csv(p), events_csv(p), envelope_csv(s), intervals_hist_csv(s), compare_csv({})}) {
    REQUIRE_FALSE(text.empty());
    CHECK(text.back() == '\n');
  }
}

TEST_CASE("identical config and seed give byte-identical files") {
  testing_support::TempDir a("det_a"), b("det_b");
  for (const auto* dir : {&a, &b}) {
    ScenarioConfig c = build_config({{"scenario", "deepfade"},
                                     {"runs", "3"},
                                     {"seed", "11"},
                                     {"out_dir", dir->path().string()}},
                                    {});
    if (dir == &b) c.threads = 1;
    std::ostringstream log;
    run_scenario(c, log);
  }
  int compared = 0;
  for (const auto& entry : std::filesystem::recursive_directory_iterator(a.path())) {
    if (!entry.is_regular_file()) continue;
    const auto rel = std::filesystem::relative(entry.path(), a.path());
    CHECK(slurp(entry.path()) == slurp(b.path() / rel));
    ++compared;
  }
  CHECK(compared == 16);
}

TEST_CASE("write failures name the file") {
  testing_support::TempDir dir("io");
  const auto blocker = dir.path() / "blocker";
  write_text_file(blocker, "x\n");
  try {
    write_text_file(blocker / "inner.csv", "y\n");
    FAIL("expected an I/O error");
  } catch (const std::runtime_error& e) {
    CHECK(std::string(e.what()).find("blocker") != std::string::npos);
  }
}
