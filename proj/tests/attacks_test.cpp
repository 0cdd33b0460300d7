#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include "trustcons/attacks.hpp"

using namespace trustcons;

namespace {

Topology small(std::size_t n_mal) {
  Adjacency a{{false, true}, {true, false}};
  return build_topology(2, n_mal, a, fully_connected_malicious(n_mal, 2));
}

}  // namespace

TEST(Attacks, Names) {
  EXPECT_EQ(attack_name(MaxDeviation{}), "max_deviation");
  EXPECT_EQ(attack_name(Drift{}), "drift");
  EXPECT_EQ(attack_name(ConstantVector{}), "constant");
  EXPECT_EQ(attack_name(Silent{}), "silent");
}

TEST(MaxDeviation, OpposesNegativeNominal) {
  auto topo = small(3);
  std::vector<double> x0{-1.0, -2.0};
  Adversary adv(MaxDeviation{}, topo, 5.0, 0, -1.5, x0, {}, 1);
  for (long t = -1; t < 20; ++t) EXPECT_EQ(adv.inputs(t, x0), (std::vector<double>{5.0, 5.0, 5.0}));
}

TEST(MaxDeviation, OpposesPositiveNominalAndExplicitSign) {
  auto topo = small(2);
  std::vector<double> x0{1.0, 2.0};
  Adversary pos(MaxDeviation{}, topo, 5.0, 3, 1.5, x0, {}, 1);
  EXPECT_EQ(pos.inputs(2, x0), (std::vector<double>{-5.0, -5.0}));
  Adversary fixed(MaxDeviation{1}, topo, 2.0, 3, 1.5, x0, {}, 1);
  EXPECT_EQ(fixed.inputs(2, x0), (std::vector<double>{2.0, 2.0}));
}

TEST(Drift, HandValue) {
  // d_M = 5 · 0.75^(0.05·20) · 0.4 = 1.5 pushed upward from a negative start.
  EXPECT_NEAR(drift_value(-1.0, -0.3, 5.0, 20, 0.4), -0.775, 1e-12);
  EXPECT_NEAR(drift_value(-1.0, 0.3, 5.0, 20, 0.4), -1.225, 1e-12);
}

TEST(Drift, DecayIsMonotone) {
  double prev = std::abs(drift_value(0.0, -1.0, 5.0, 0, 1.0));
  EXPECT_NEAR(prev, 0.15 * 5.0, 1e-15);
  for (long s = 1; s < 500; ++s) {
    const double cur = std::abs(drift_value(0.0, -1.0, 5.0, s, 1.0));
    EXPECT_LE(cur, prev);
    prev = cur;
  }
}

TEST(Drift, StartValueWindow) {
  auto topo = small(4);
  std::vector<double> x0{0.5, 1.5};
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    Adversary adv(Drift{}, topo, 5.0, 10, 1.0, x0, {}, seed);
    for (double x : adv.inputs(9, x0)) {
      EXPECT_GE(x, -0.75);
      EXPECT_LE(x, 0.75);
    }
  }
}

TEST(Drift, OverflowRedrawAndMirror) {
  auto topo = small(5);
  std::vector<double> neg{-1.0, -1.0}, pos{1.0, 1.0};
  std::vector<double> top{5.0, 5.0}, bottom{-5.0, -5.0};
  Adversary up(Drift{}, topo, 5.0, 0, 0.0, neg, {}, 3);
  Adversary down(Drift{}, topo, 5.0, 0, 0.0, pos, {}, 3);
  up.inputs(-1, neg);
  down.inputs(-1, pos);
  for (long t = 0; t < 30; ++t) {
    for (double x : up.inputs(t, top)) {
      EXPECT_GE(x, 4.95);
      EXPECT_LE(x, 5.0);
    }
    for (double x : down.inputs(t, bottom)) {
      EXPECT_GE(x, -5.0);
      EXPECT_LE(x, -4.95);
    }
  }
}

TEST(Drift, TracksLegitMean) {
  // Partial connectivity: each malicious agent tracks its own neighbors.
  Adjacency a(3, std::vector<bool>(3, false));
  a[0][1] = a[1][0] = a[1][2] = a[2][1] = true;
  auto topo = build_topology(3, 2, a, {{0}, {1, 2}});
  std::vector<double> x0{-1.0, -1.0, -1.0};
  Adversary adv(Drift{0.0, 0.75, 0.05}, topo, 5.0, 0, -1.0, x0, {}, 9);
  adv.inputs(-1, x0);
  auto out = adv.inputs(0, std::vector<double>{1.0, 2.0, 4.0});
  EXPECT_DOUBLE_EQ(out[0], 1.0);
  EXPECT_DOUBLE_EQ(out[1], 3.0);
}

TEST(Silent, RepeatsInitialValue) {
  auto topo = small(2);
  std::vector<double> x0{0.0, 0.0};
  Adversary adv(Silent{}, topo, 5.0, 0, 0.0, x0, {2.0, -7.0}, 1);
  for (long t = -1; t < 10; ++t) EXPECT_EQ(adv.inputs(t, x0), (std::vector<double>{2.0, -5.0}));
  Adversary zeros(Silent{}, topo, 5.0, 0, 0.0, x0, {}, 1);
  EXPECT_EQ(zeros.inputs(-1, x0), (std::vector<double>{0.0, 0.0}));
}

TEST(ConstantVector, ClampsToEta) {
  auto topo = small(3);
  std::vector<double> x0{0.0, 0.0};
  Adversary adv(ConstantVector{{1.0, 9.0, -9.0}}, topo, 5.0, 0, 0.0, x0, {}, 1);
  EXPECT_EQ(adv.inputs(-1, x0), (std::vector<double>{1.0, 5.0, -5.0}));
}

TEST(Adversary, Rejects) {
  auto topo = small(2);
  std::vector<double> x0{0.0, 0.0};
  EXPECT_THROW(Adversary(MaxDeviation{}, topo, 0.0, 0, 0.0, x0, {}, 1), std::invalid_argument);
  EXPECT_THROW(Adversary(MaxDeviation{2}, topo, 5.0, 0, 0.0, x0, {}, 1), std::invalid_argument);
  EXPECT_THROW(Adversary(ConstantVector{{1.0}}, topo, 5.0, 0, 0.0, x0, {}, 1), std::invalid_argument);
  EXPECT_THROW(Adversary(Silent{}, topo, 5.0, 0, 0.0, x0, {1.0}, 1), std::invalid_argument);
  EXPECT_THROW(Adversary(Silent{}, topo, 5.0, 0, 0.0, std::vector<double>{0.0}, {}, 1), std::invalid_argument);
  Adversary adv(MaxDeviation{}, topo, 5.0, 10, 0.0, x0, {}, 1);
  EXPECT_THROW(adv.inputs(8, x0), std::invalid_argument);
}

TEST(AttacksProperty, ClampedAndDeterministic) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> value(-5.0, 5.0);
  auto topo = paper_topology(6);
  const std::vector<AttackModel> models{MaxDeviation{}, MaxDeviation{-1}, Drift{}, Drift{0.9, 0.5, 0.5},
                                        ConstantVector{{-30, -6, 0, 1, 6, 30}}, Silent{}};
  for (const auto& model : models) {
    for (double eta : {0.5, 5.0}) {
      std::vector<double> x0(15);
      for (auto& x : x0) x = std::clamp(value(rng), -eta, eta);
      std::vector<double> init(6);
      for (auto& x : init) x = 3 * value(rng);
      Adversary a(model, topo, eta, 2, 0.3, x0, init, 77);
      Adversary b(model, topo, eta, 2, 0.3, x0, init, 77);
      std::vector<double> x = x0;
      for (long t = 1; t < 200; ++t) {
        auto out = a.inputs(t, x);
        ASSERT_EQ(out.size(), 6u);
        ASSERT_EQ(out, b.inputs(t, x));
        for (double v : out) {
          ASSERT_GE(v, -eta);
          ASSERT_LE(v, eta);
        }
        if (std::holds_alternative<MaxDeviation>(model)) {
          for (double v : out) ASSERT_EQ(v, out.front());
        }
        for (auto& xi : x) xi = std::clamp(xi + 0.1 * value(rng), -eta, eta);
      }
    }
  }
}
