#include <gtest/gtest.h>

#include <map>
#include <random>

#include "entrofuse/emr.hpp"
#include "entrofuse/rules.hpp"
#include "support/instances.hpp"

using namespace entrofuse;
using entrofuse::testing::bba;
using entrofuse::testing::binary_frame;
using entrofuse::testing::free_abc;
using entrofuse::testing::make_algebra;
using entrofuse::testing::powerset;
using entrofuse::testing::random_bba;
using entrofuse::testing::small_algebras;

namespace {

// Pairwise enumeration kept independent of the library's sparse bookkeeping.
std::map<Proposition, double> brute_conjunctive(const Bba& x, const Bba& y) {
  std::map<Proposition, double> out;
  for (const auto& f : x.focals())
    for (const auto& g : y.focals()) out[meet(f.prop, g.prop)] += f.mass * g.mass;
  return out;
}

void expect_masses(const Bba& b, const std::map<Proposition, double>& expected, double tol) {
  for (const auto& [p, m] : expected) EXPECT_NEAR(b.mass(p), m, tol) << b.space().label(p);
  for (const auto& f : b.focals()) EXPECT_TRUE(expected.count(f.prop)) << b.space().label(f.prop);
}

}  // namespace

TEST(Conjunctive, SharedFocusExample) {
  auto alg = binary_frame();
  const auto m = bba(alg, {{"a", 0.5}, {"top", 0.5}});
  const auto img = conjunctive(m, m);
  EXPECT_NEAR(img.mu.mass(alg->parse("a")), 0.75, 1e-12);
  EXPECT_NEAR(img.mu.mass(alg->top()), 0.25, 1e-12);
  EXPECT_EQ(img.conflict, 0.0);
  EXPECT_FALSE(img.mu.coherent());
}

TEST(Conjunctive, NeutralElement) {
  std::mt19937_64 rng(5);
  for (const auto& alg : small_algebras()) {
    const auto b = random_bba(alg, rng, 5);
    const auto img = conjunctive(b, total_ignorance(alg));
    EXPECT_EQ(img.conflict, 0.0);
    for (const auto& f : b.focals()) EXPECT_DOUBLE_EQ(img.mu.mass(f.prop), f.mass);
    EXPECT_EQ(img.mu.focals().size(), b.focals().size());
  }
}

TEST(Conjunctive, ZadehConflict) {
  auto ps = powerset_abc();
  const auto [m1, m2] = zadeh_family_sources(ps, {0.99, 0.01, 0.99, 0.01});
  const auto img = conjunctive(m1, m2);
  EXPECT_NEAR(img.mu.mass(ps->parse("c")), 1e-4, 1e-15);
  EXPECT_NEAR(img.conflict, 0.9999, 1e-12);
  EXPECT_NEAR(img.mu.mass(ps->bottom()), img.conflict, 0.0);
}

TEST(Conjunctive, MatchesPairEnumeration) {
  std::mt19937_64 rng(17);
  for (const auto& alg : small_algebras()) {
    for (int t = 0; t < 30; ++t) {
      const auto x = random_bba(alg, rng, 6), y = random_bba(alg, rng, 6);
      const auto img = conjunctive(x, y);
      const auto expected = brute_conjunctive(x, y);
      expect_masses(img.mu, expected, 1e-14);
      EXPECT_NEAR(img.mu.total(), 1.0, 1e-12);
      EXPECT_NEAR(img.conflict, expected.count(alg->bottom()) ? expected.at(alg->bottom()) : 0.0, 1e-14);
    }
  }
}

TEST(Conjunctive, CommutativeAndAssociative) {
  std::mt19937_64 rng(23);
  for (const auto& alg : small_algebras()) {
    for (int t = 0; t < 30; ++t) {
      const auto x = random_bba(alg, rng), y = random_bba(alg, rng), z = random_bba(alg, rng);
      const auto xy = conjunctive(x, y).mu, yx = conjunctive(y, x).mu;
      const auto left = tbm_fuse(tbm_fuse(x, y), z);
      const auto right = tbm_fuse(x, tbm_fuse(y, z));
      for (const auto& p : alg->lattice()) {
        EXPECT_NEAR(xy.mass(p), yx.mass(p), 1e-12);
        EXPECT_NEAR(left.mass(p), right.mass(p), 1e-12);
      }
    }
  }
}

TEST(Tbm, KeepsBottomMass) {
  auto ps = powerset({"a", "b"});
  const auto t = tbm_fuse(bba(ps, {{"a", 1.0}}), bba(ps, {{"b", 1.0}}));
  EXPECT_DOUBLE_EQ(t.mass(ps->bottom()), 1.0);
  EXPECT_FALSE(t.coherent());
  EXPECT_TRUE(validate(t).valid());
}

TEST(Free, Examples) {
  auto ab = make_algebra({"a", "b"});
  const auto m = free_dsmt_fuse(bba(ab, {{"a", 1.0}}), bba(ab, {{"b", 1.0}}));
  EXPECT_DOUBLE_EQ(m.mass(ab->parse("a&b")), 1.0);
  EXPECT_TRUE(m.coherent());

  auto alg = free_abc();
  const auto x = bba(alg, {{"a", 0.2}, {"a|b", 0.2}, {"a|c", 0.2}, {"b|c", 0.2}, {"top", 0.2}});
  const auto fused = free_dsmt_fuse(x, x);
  EXPECT_EQ(fused.mass(alg->bottom()), 0.0);
  expect_masses(fused, brute_conjunctive(x, x), 1e-14);

  auto ps = powerset({"a", "b", "c"});
  EXPECT_THROW(free_dsmt_fuse(bba(ps, {{"a", 1.0}}), bba(ps, {{"b", 1.0}})), FusionError);
}

TEST(Free, ConflictFreeOnInsulatedAlgebras) {
  std::mt19937_64 rng(29);
  for (const auto& alg : small_algebras()) {
    if (!alg->insulated()) continue;
    for (int t = 0; t < 30; ++t) {
      const auto fused = free_dsmt_fuse(random_bba(alg, rng), random_bba(alg, rng));
      EXPECT_EQ(fused.mass(alg->bottom()), 0.0);
      EXPECT_TRUE(validate(fused).valid());
    }
  }
}

TEST(Redistribution, Validation) {
  auto alg = free_abc();
  EXPECT_THROW(Redistribution(alg, {{alg->bottom(), 0.5}, {alg->top(), 0.5}}), std::invalid_argument);
  EXPECT_THROW(Redistribution(alg, {{alg->atom(0), -0.5}, {alg->top(), 1.5}}), std::invalid_argument);
  EXPECT_THROW(Redistribution(alg, {{alg->top(), 0.5}}), std::invalid_argument);
  EXPECT_NO_THROW(Redistribution(alg, {{alg->atom(0), 0.25}, {alg->top(), 0.75}}));
}

TEST(Redistribution, NoConflictLeavesMuUnchanged) {
  auto alg = binary_frame();
  const auto m = bba(alg, {{"a", 0.5}, {"top", 0.5}});
  const auto img = conjunctive(m, m);
  const auto out = redistribute(img, Redistribution::to_top(alg));
  EXPECT_DOUBLE_EQ(out.mass(alg->parse("a")), 0.75);
  EXPECT_DOUBLE_EQ(out.mass(alg->top()), 0.25);
}

TEST(Redistribution, ToTopAddsConflictToTop) {
  std::mt19937_64 rng(31);
  auto ps = powerset({"a", "b", "c"});
  for (int t = 0; t < 50; ++t) {
    const auto img = conjunctive(random_bba(ps, rng), random_bba(ps, rng));
    const auto out = redistribute(img, Redistribution::to_top(ps));
    EXPECT_NEAR(out.mass(ps->top()), img.mu.mass(ps->top()) + img.conflict, 1e-14);
    EXPECT_EQ(out.mass(ps->bottom()), 0.0);
    EXPECT_TRUE(out.coherent());
  }
}

TEST(Redistribution, ProportionalIsDempster) {
  std::mt19937_64 rng(37);
  auto ps = powerset({"a", "b", "c"});
  for (int t = 0; t < 50; ++t) {
    const auto x = random_bba(ps, rng), y = random_bba(ps, rng);
    const auto img = conjunctive(x, y);
    if (img.conflict > 1.0 - 1e-9) continue;
    const auto a = redistribute(img, Redistribution::proportional(img));
    const auto b = dempster_fuse(x, y);
    for (const auto& p : ps->lattice()) EXPECT_NEAR(a.mass(p), b.mass(p), 1e-12);
  }
}

TEST(Dempster, SingleConflictExample) {
  auto alg = binary_frame();
  const auto m1 = bba(alg, {{"a", 0.5}, {"na", 0.5}});
  const auto m2 = bba(alg, {{"a", 0.5}, {"top", 0.5}});
  const auto m = dempster_fuse(m1, m2);
  EXPECT_NEAR(m.mass(alg->parse("a")), 2.0 / 3.0, 1e-12);
  EXPECT_NEAR(m.mass(alg->parse("na")), 1.0 / 3.0, 1e-12);
}

TEST(Dempster, NormalizedConjunctiveOracle) {
  std::mt19937_64 rng(41);
  for (const auto& alg : small_algebras()) {
    for (int t = 0; t < 30; ++t) {
      const auto x = random_bba(alg, rng, 5), y = random_bba(alg, rng, 5);
      auto expected = brute_conjunctive(x, y);
      const double k = expected.count(alg->bottom()) ? expected[alg->bottom()] : 0.0;
      if (k > 1.0 - 1e-9) {
        EXPECT_THROW(dempster_fuse(x, y), FusionError);
        continue;
      }
      expected.erase(alg->bottom());
      for (auto& [p, m] : expected) m /= (1.0 - k);
      const auto fused = dempster_fuse(x, y);
      expect_masses(fused, expected, 1e-12);
      EXPECT_TRUE(validate(fused).valid());
    }
  }
}

TEST(Dempster, ComparisonInstance) {
  // Hand enumeration of the 25 focal pairs gives mu(a) = 0.36, conflict 0.08.
  auto ps = powerset({"a", "b", "c"});
  const auto m = bba(ps, {{"a", 0.2}, {"a|b", 0.2}, {"a|c", 0.2}, {"b|c", 0.2}, {"top", 0.2}});
  const auto img = conjunctive(m, m);
  EXPECT_NEAR(img.conflict, 0.08, 1e-12);
  const auto fused = dempster_fuse(m, m);
  EXPECT_NEAR(fused.mass(ps->parse("a")), 0.36 / 0.92, 1e-12);
  EXPECT_NEAR(fused.mass(ps->parse("b")), 0.08 / 0.92, 1e-12);
  EXPECT_NEAR(fused.mass(ps->parse("a|b")), 0.12 / 0.92, 1e-12);
  EXPECT_NEAR(fused.mass(ps->parse("b|c")), 0.12 / 0.92, 1e-12);
  EXPECT_NEAR(fused.mass(ps->top()), 0.04 / 0.92, 1e-12);
}

TEST(Dempster, NeutralAndTotalConflict) {
  auto ps = powerset({"a", "b"});
  const auto b = bba(ps, {{"a", 0.4}, {"top", 0.6}});
  const auto n = dempster_fuse(b, total_ignorance(ps));
  EXPECT_DOUBLE_EQ(n.mass(ps->parse("a")), 0.4);
  EXPECT_DOUBLE_EQ(n.mass(ps->top()), 0.6);
  EXPECT_THROW(dempster_fuse(bba(ps, {{"a", 1.0}}), bba(ps, {{"b", 1.0}})), FusionError);
}

TEST(Rules, MixedAlgebrasRejected) {
  auto x = powerset({"a", "b"});
  auto y = powerset({"a", "b"});
  EXPECT_THROW(conjunctive(total_ignorance(x), total_ignorance(y)), AlgebraError);
}
