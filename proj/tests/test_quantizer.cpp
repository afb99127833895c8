#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "fadetrig/quantizer.hpp"

using namespace fadetrig;

namespace {

QuantizerState box(std::vector<double> center, double u) { return {std::move(center), u}; }

// Shared edges may differ by rounding, hence the slack.
bool contains(const QuantizerState& outer, const QuantizerState& inner) {
  const double eps = 1e-12 * (1.0 + outer.half_width);
  for (std::size_t i = 0; i < outer.center.size(); ++i) {
    if (inner.center[i] - inner.half_width < outer.center[i] - outer.half_width - eps) return false;
    if (inner.center[i] + inner.half_width > outer.center[i] + outer.half_width + eps) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("q_map sends bits to signs") {
  CHECK(q_map({{1, 1}}) == std::vector<double>{1.0, 1.0});
  CHECK(q_map({{0, 0}}) == std::vector<double>{-1.0, -1.0});
  CHECK(q_map({{1, 0}}) == std::vector<double>{1.0, -1.0});
}

TEST_CASE("encode bisects toward the signal") {
  const std::vector<double> a{0.6};
  auto blocks = encode(a, box({0.0}, 1.0), 1);
  REQUIRE(blocks.size() == 1);
  CHECK(blocks[0].bits == std::vector<std::uint8_t>{1});

  const std::vector<double> b{0.8};
  blocks = encode(b, box({0.0}, 1.0), 2);
  REQUIRE(blocks.size() == 2);
  CHECK(blocks[0].bits == std::vector<std::uint8_t>{1});
  CHECK(blocks[1].bits == std::vector<std::uint8_t>{1});

  CHECK(encode(b, box({0.0}, 1.0), 0).empty());
}

TEST_CASE("encode rejects a signal outside the box") {
  const std::vector<double> x{1.5};
  CHECK_THROWS_AS(encode(x, box({0.0}, 1.0), 2), ContainmentError);
  const std::vector<double> y{0.2, -1.01};
  CHECK_THROWS_AS(encode(y, box({0.0, 0.0}, 1.0), 1), ContainmentError);
  CHECK_THROWS_AS(encode(std::vector<double>{0.0}, box({0.0}, 1.0), -1),
                  std::invalid_argument);
}

TEST_CASE("decode reconstructs the refined box") {
  const std::vector<BitBlock> one{{{1}}};
  const std::vector<double> zero{0.0};
  QuantizerState q = decode(one, zero, 1.0);
  CHECK(q.center[0] == 0.5);
  CHECK(q.half_width == 0.5);

  q = decode(std::vector<BitBlock>{}, std::vector<double>{0.3}, 0.7);
  CHECK(q.center[0] == 0.3);
  CHECK(q.half_width == 0.7);

  const std::vector<BitBlock> two{{{1, 1}}, {{0, 0}}};
  q = decode(two, std::vector<double>{0.0, 0.0}, 1.0);
  CHECK(q.center == std::vector<double>{0.25, 0.25});
  CHECK(q.half_width == 0.25);

  CHECK_THROWS_AS(decode(one, zero, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(decode(two, zero, 1.0), std::invalid_argument);
}

TEST_CASE("round trip: the decoded box contains the signal") {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::uniform_int_distribution<int> bits(0, 12);
  for (int trial = 0; trial < 5000; ++trial) {
    const int dim = 1 + trial % 3;
    const double u = std::ldexp(1.0 + 0.5 * unit(rng), bits(rng) - 6);
    QuantizerState pre{std::vector<double>(dim), u};
    std::vector<double> x(dim);
    for (int i = 0; i < dim; ++i) {
      pre.center[i] = 3.0 * unit(rng);
      x[i] = pre.center[i] + u * unit(rng);
    }
    const int r = bits(rng);
    const auto blocks = encode(x, pre, r);
    const QuantizerState post = decode(blocks, pre.center, pre.half_width);
    CHECK(post.half_width == std::ldexp(u, -r));
    CHECK(box_deviation(x, post) <= post.half_width);
  }
}

TEST_CASE("prefix refinement: shorter prefixes give enclosing boxes") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  for (int trial = 0; trial < 1000; ++trial) {
    const QuantizerState pre{{unit(rng), unit(rng)}, 1.0 + unit(rng) * 0.5};
    const std::vector<double> x{pre.center[0] + pre.half_width * unit(rng),
                                pre.center[1] + pre.half_width * unit(rng)};
    const auto blocks = encode(x, pre, 8);
    const QuantizerState full = decode(blocks, pre.center, pre.half_width);
    for (int j = 0; j < 8; ++j) {
      const std::span<const BitBlock> prefix(blocks.data(), static_cast<std::size_t>(j));
      const QuantizerState part = decode(prefix, pre.center, pre.half_width);
      CHECK(contains(part, full));
    }
  }
}

TEST_CASE("encoder and decoder stay bit-identical over a transmission sequence") {
  const PlantParams plant;
  TriggerParams growth;
  growth.l_e = 3.0;
  std::mt19937_64 rng(99);
  std::uniform_int_distribution<int> r_dist(0, 4);
  std::uniform_real_distribution<double> t_dist(0.01, 0.4);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);

  QuantizerState enc{{0.0}, 1.5};
  QuantizerState dec = enc;
  for (int k = 0; k < 200; ++k) {
    const double t = t_dist(rng);
    const QuantizerState enc_pre{predict_center(enc.center, t, plant),
                                 propagate_half_width(enc, t, growth)};
    const QuantizerState dec_pre{predict_center(dec.center, t, plant),
                                 propagate_half_width(dec, t, growth)};
    const std::vector<double> x{enc_pre.center[0] + enc_pre.half_width * unit(rng)};
    const int r = r_dist(rng);
    const auto blocks = encode(x, enc_pre, r);
    enc = decode(blocks, enc_pre.center, enc_pre.half_width);
    dec = decode(blocks, dec_pre.center, dec_pre.half_width);
    REQUIRE(enc == dec);
  }
}

TEST_CASE("half-width propagation special cases") {
  TriggerParams p;
  p.l_e = 3.0;
  p.w1 = 1.0;
  p.w2 = 2.0;
  const QuantizerState post{{0.4}, 0.5};
  CHECK(propagate_half_width(post, 0.0, p) == doctest::Approx(1.0).epsilon(1e-15));

  p.w2 = 1.0;
  CHECK(propagate_half_width(post, 0.1, p) ==
        doctest::Approx(0.5 * 1.3498588075760031).epsilon(1e-14));

  p.m_bound = 0.2;
  p.l_w = 1.0;
  CHECK(propagate_half_width(post, 0.1, p) ==
        doctest::Approx(0.69825332429306843).epsilon(1e-14));
}

TEST_CASE("half-width propagation with cross gain") {
  TriggerParams p;
  p.l_e = 2.0;
  p.l_x = 0.5;
  p.chi1_bar = 1.0;
  p.c1 = 1.5;
  p.c_chi = 0.3;
  p.m_bound = 0.1;
  p.l_w = 0.7;
  const QuantizerState post{{-0.4, 0.1}, 0.25};
  const double t = 0.2;
  const double g = std::exp(p.l_e * t);
  const double eta = 1.0 - (p.l_x * p.chi1_bar / (p.w1 * p.l_e)) * (g - 1.0);
  const double expected =
      (g * 0.25 + (g - 1.0) / (p.w1 * p.l_e) *
                      (p.l_x * p.c1 * (0.4 + 0.25) + p.l_w * p.m_bound +
                       p.l_x * p.c_chi * p.m_bound)) /
      eta;
  CHECK(propagate_half_width(post, t, p) == doctest::Approx(expected).epsilon(1e-13));
}

TEST_CASE("non-positive eta is a trigger violation") {
  TriggerParams p;
  p.l_e = 1.0;
  p.l_x = 1.0;
  p.chi1_bar = 1.0;
  // eta = 1 - (e^T - 1) <= 0 once T >= ln 2.
  CHECK_THROWS_AS(propagate_half_width({{0.0}, 1.0}, 0.7, p), TriggerViolation);
  CHECK_NOTHROW(propagate_half_width({{0.0}, 1.0}, 0.6, p));
  CHECK_THROWS_AS(propagate_half_width({{0.0}, 1.0}, -0.1, p), std::invalid_argument);
}

TEST_CASE("center prediction follows the predictor flow") {
  const PlantParams plant;
  const std::vector<double> c{0.3, -0.2};
  CHECK(predict_center(c, 0.0, plant) == c);
  const auto out = predict_center(c, 1.0, plant);
  CHECK(out[0] == doctest::Approx(0.3 * std::exp(-1.0)).epsilon(1e-15));
  CHECK(out[1] == doctest::Approx(-0.2 * std::exp(-1.0)).epsilon(1e-15));
}
