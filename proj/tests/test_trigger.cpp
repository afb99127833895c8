#include <cmath>
#include <random>

#include "doctest.h"
#include "fadetrig/channel.hpp"
#include "fadetrig/engine.hpp"
#include "fadetrig/trigger.hpp"

using namespace fadetrig;

TEST_CASE("self-trigger interval reduces to ln(1/G)/L_e") {
  TriggerParams p;
  p.l_e = 1.0;
  CHECK(self_trigger_interval(std::exp(-1.0), p) == doctest::Approx(1.0).epsilon(1e-15));
  p.l_e = 120.0;
  for (double g : {1e-12, 1e-6, 0.01, 0.3, 0.9}) {
    CHECK(self_trigger_interval(g, p) ==
          doctest::Approx(std::log(1.0 / g) / 120.0).epsilon(1e-13));
  }
}

TEST_CASE("calibrated intervals at the initial and formation states") {
  const TriggerParams p = default_trigger_params();
  const ChannelConfig c;
  const double t0 = self_trigger_interval(g_value({15.0, deg_to_rad(-30.0)}, c), p);
  const double td = self_trigger_interval(g_value({4.0, deg_to_rad(20.0)}, c), p);
  CHECK(t0 == doctest::Approx(0.040143523856786126).epsilon(1e-11));
  CHECK(td == doctest::Approx(0.3196307566200788).epsilon(1e-11));
}

TEST_CASE("G at or above w1/w2 leaves the communication region") {
  TriggerParams p;
  CHECK_THROWS_AS(self_trigger_interval(1.0, p), OutsideOmegaError);
  p.w2 = 2.0;
  CHECK_THROWS_AS(self_trigger_interval(0.5, p), OutsideOmegaError);
  CHECK(self_trigger_interval(0.4999, p) > 0.0);
}

TEST_CASE("G = 0 without cross gain has no finite interval") {
  TriggerParams p;
  CHECK_THROWS_AS(self_trigger_interval(0.0, p), DomainError);
  p.l_x = 0.5;
  CHECK(std::isfinite(self_trigger_interval(0.0, p)));
}

TEST_CASE("interval decreases strictly in G") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int set = 0; set < 50; ++set) {
    TriggerParams p;
    p.l_e = 0.5 + 100.0 * u(rng);
    p.l_x = 2.0 * u(rng);
    p.w1 = 0.5 + u(rng);
    p.w2 = p.w1 * (1.0 + u(rng));
    p.chi1_bar = 0.1 + u(rng);
    const double g_max = p.w1 / p.w2;
    double prev = INFINITY;
    for (int i = 1; i < 200; ++i) {
      const double g = g_max * i / 200.0;
      const double t = self_trigger_interval(g, p);
      CHECK(t > 0.0);
      CHECK(t < prev);
      prev = t;
    }
  }
}

TEST_CASE("eta stays positive for every self-triggered interval") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 20000; ++i) {
    TriggerParams p;
    p.l_e = 0.1 + 50.0 * u(rng);
    p.l_x = 5.0 * u(rng);
    p.w1 = 0.2 + u(rng);
    p.w2 = p.w1 * (1.0 + 3.0 * u(rng));
    p.chi1_bar = 0.05 + 3.0 * u(rng);
    const double g = (p.w1 / p.w2) * u(rng) * 0.999999;
    if (g == 0.0 && p.l_x == 0.0) continue;
    const double t = self_trigger_interval(g, p);
    CHECK(eta_of(t, p) > -1e-12);
  }
}

TEST_CASE("intervals are bounded below on compact state sets") {
  const TriggerParams p = default_trigger_params();
  const ChannelConfig c;
  for (double l_max : {5.0, 10.0, 20.0}) {
    for (double a_max : {20.0, 45.0, 70.0}) {
      const double bound = zeno_lower_bound(l_max, deg_to_rad(a_max), c, p);
      CHECK(bound > 0.0);
      for (double l = 0.5; l <= l_max; l += 0.5) {
        for (double a = -a_max; a <= a_max; a += 5.0) {
          CHECK(self_trigger_interval(g_value({l, deg_to_rad(a)}, c), p) >=
                bound * (1.0 - 1e-12));
        }
      }
    }
  }
}

TEST_CASE("communication region membership") {
  const ChannelConfig c;
  TriggerParams p;
  CHECK(omega_x_member({15.0, deg_to_rad(-30.0)}, p, c));
  CHECK(omega_x_member({4.0, 0.0}, p, c));
  CHECK_FALSE(omega_x_member({4.0, deg_to_rad(90.0)}, p, c));
  CHECK_FALSE(omega_x_member({4.0, deg_to_rad(135.0)}, p, c));
}

TEST_CASE("eta special values") {
  TriggerParams p;
  CHECK(eta_of(0.0, p) == 1.0);
  CHECK(eta_of(5.0, p) == 1.0);
  p.l_x = 1.0;
  p.l_e = 1.0;
  CHECK(eta_of(std::log(2.0), p) == doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("event trigger threshold") {
  const EventThreshold thr;
  CHECK_FALSE(event_trigger_fired(0.0, {0.0, 0.0}, thr));
  CHECK(event_trigger_fired(1.0, {0.0, 0.0}, thr));
  CHECK_FALSE(event_trigger_fired(0.1, {1.0, 0.2}, thr));
  CHECK_FALSE(event_trigger_fired(-0.1, {-0.3, 1.0}, thr));
  CHECK(event_trigger_fired(0.16, {1.0, 0.2}, thr));
  CHECK_FALSE(event_trigger_fired(0.1591, {1.0, 0.0}, thr));
  CHECK(event_trigger_fired(0.1, {1.0, 0.2}, thr, 0.1, 1.0));
}

TEST_CASE("parameter validation") {
  TriggerParams p;
  CHECK_NOTHROW(p.validate());
  p.w2 = 0.5;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p = {};
  p.l_e = 0.0;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p = {};
  p.m_bound = -1.0;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
}
