#include <gtest/gtest.h>

#include <array>
#include <random>

#include "entrofuse/emr.hpp"
#include "entrofuse/rules.hpp"
#include "support/instances.hpp"

using namespace entrofuse;
using entrofuse::testing::bba;
using entrofuse::testing::binary_frame;
using entrofuse::testing::free_abc;
using entrofuse::testing::powerset;
using entrofuse::testing::random_bba;
using entrofuse::testing::small_algebras;

namespace {

void expect_same_masses(const Bba& x, const Bba& y, double tol) {
  for (const auto& p : x.space().lattice()) EXPECT_NEAR(x.mass(p), y.mass(p), tol) << x.space().label(p);
}

struct Row {
  ZadehFamily params;
  double a, b, c, top;
};

// Reference rows for the generalized Zadeh family.
const Row kTable[] = {
    {{0.499, 0.0, 0.499, 0.0}, 0.499, 0.499, 0.0, 0.002},
    {{0.3, 0.1, 0.3, 0.1}, 0.3, 0.3, 0.175, 0.225},
    {{0.3, 0.05, 0.3, 0.05}, 0.3, 0.3, 0.09375, 0.30625},
    {{0.3, 0.01, 0.3, 0.01}, 0.3, 0.3, 0.01975, 0.38025},
};

Bba comparison_source(const AlgebraPtr& ps) {
  return bba(ps, {{"a", 0.2}, {"a|b", 0.2}, {"a|c", 0.2}, {"b|c", 0.2}, {"top", 0.2}});
}

}  // namespace

TEST(Emr, ZadehFamilyTable) {
  auto ps = powerset_abc();
  for (const auto& row : kTable) {
    const auto [m1, m2] = zadeh_family_sources(ps, row.params);
    const auto out = emr_fuse(m1, m2);
    ASSERT_TRUE(out.fused());
    const auto& m = out.bba();
    EXPECT_NEAR(m.mass(ps->parse("a")), row.a, 1e-3);
    EXPECT_NEAR(m.mass(ps->parse("b")), row.b, 1e-3);
    EXPECT_NEAR(m.mass(ps->parse("c")), row.c, 1e-3);
    EXPECT_NEAR(m.mass(ps->top()), row.top, 1e-3);
    EXPECT_TRUE(out.diagnostics.certified);
    expect_same_masses(m, zadeh_family_oracle(ps, row.params).bba(), 1e-5);
  }
}

TEST(Emr, RejectsBarelyConflictingRow) {
  auto ps = powerset_abc();
  const auto [m1, m2] = zadeh_family_sources(ps, {0.501, 0.0, 0.501, 0.0});
  const auto out = emr_fuse(m1, m2);
  ASSERT_FALSE(out.fused());
  EXPECT_NEAR(out.rejection().phase1_residual, 0.004, 1e-9);
  ASSERT_TRUE(out.rejection().violation.has_value());
  EXPECT_NEAR(out.rejection().violation->bound, 1.002, 1e-12);
  EXPECT_FALSE(zadeh_family_oracle(ps, {0.501, 0.0, 0.501, 0.0}).fused());
}

TEST(Emr, Feasibility) {
  auto ps = powerset_abc();
  const auto [z1, z2] = zadeh_family_sources(ps, {0.99, 0.01, 0.99, 0.01});
  const std::array<Bba, 2> zadeh{z1, z2};
  const auto classic = emr_feasible(zadeh);
  EXPECT_FALSE(classic.feasible);
  EXPECT_GT(classic.phase1_residual, 1.0);
  ASSERT_TRUE(classic.violation.has_value());
  EXPECT_FALSE(emr_fuse(z1, z2).fused());

  // Masses scaled by rho = 0.9 leave 0.1 on top for each source.
  const double rho = 0.9, eps = 0.01;
  const auto [w1, w2] = zadeh_family_sources(ps, {rho * eps, rho * (1 - eps), rho * eps, rho * (1 - eps)});
  const std::array<Bba, 2> weakened{w1, w2};
  EXPECT_TRUE(emr_feasible(weakened).feasible);
  EXPECT_TRUE(emr_fuse(w1, w2).fused());

  std::mt19937_64 rng(1);
  for (const auto& alg : small_algebras()) {
    const std::array<Bba, 2> with_neutral{random_bba(alg, rng), total_ignorance(alg)};
    EXPECT_TRUE(emr_feasible(with_neutral).feasible);
  }
}

TEST(Emr, NeutralElement) {
  std::mt19937_64 rng(43);
  for (const auto& alg : small_algebras()) {
    for (int t = 0; t < 10; ++t) {
      const auto b = random_bba(alg, rng, 6);
      const auto out = emr_fuse(b, total_ignorance(alg));
      ASSERT_TRUE(out.fused());
      expect_same_masses(out.bba(), b, 1e-9);
      const auto approx = emr_fuse_approx(b, total_ignorance(alg));
      ASSERT_TRUE(approx.fused());
      expect_same_masses(approx.bba(), b, 1e-9);
      const std::array<Bba, 3> three{b, total_ignorance(alg), total_ignorance(alg)};
      expect_same_masses(emr_fuse_n(three).bba(), b, 1e-9);
    }
  }
}

TEST(Emr, ComparisonInstance) {
  auto ps = powerset({"a", "b", "c"});
  const auto m = comparison_source(ps);
  const auto out = emr_fuse(m, m);
  ASSERT_TRUE(out.fused());
  const auto& f = out.bba();
  EXPECT_NEAR(f.mass(ps->parse("a")), 0.411, 2e-3);
  EXPECT_NEAR(f.mass(ps->parse("b")), 0.093, 2e-3);
  EXPECT_NEAR(f.mass(ps->parse("c")), 0.093, 2e-3);
  EXPECT_NEAR(f.mass(ps->parse("a|b")), 0.107, 2e-3);
  EXPECT_NEAR(f.mass(ps->parse("a|c")), 0.107, 2e-3);
  EXPECT_NEAR(f.mass(ps->parse("b|c")), 0.153, 2e-3);
  EXPECT_NEAR(f.mass(ps->top()), 0.036, 2e-3);

  const std::array<Bba, 2> pair{m, m};
  const auto ipf = ipf_oracle(pair);
  ASSERT_TRUE(ipf.converged);
  EXPECT_GE(optim::entropy(ipf.joint.values), out.diagnostics.entropy - 1e-6);
  EXPECT_NEAR(optim::entropy(ipf.joint.values), out.diagnostics.entropy, 1e-6);
}

TEST(Emr, JointInvariants) {
  auto ps = powerset_abc();
  const auto [m1, m2] = zadeh_family_sources(ps, {0.3, 0.1, 0.3, 0.1});
  const auto out = emr_fuse(m1, m2);
  ASSERT_TRUE(out.joint.has_value());
  const auto& j = *out.joint;
  EXPECT_EQ(j.cells.size(), 6u);
  EXPECT_EQ(j.forbidden.size(), 3u);
  for (const auto& t : j.forbidden) EXPECT_EQ(j.value(t), 0.0);
  EXPECT_LE(j.max_marginal_residual(), 1e-10);
  const std::array<std::size_t, 2> cc{1, 1};  // (c, c)
  EXPECT_NEAR(j.value(cc), 0.025, 1e-6);
}

TEST(Emr, IncoherentInputRejected) {
  auto ps = powerset({"a", "b"});
  const auto t = bba(ps, {{"bot", 0.1}, {"top", 0.9}}, false);
  EXPECT_THROW(emr_fuse(t, total_ignorance(ps)), FusionError);
  const auto invalid = bba(ps, {{"a", 0.3}});
  EXPECT_THROW(emr_fuse(invalid, total_ignorance(ps)), std::invalid_argument);
}

TEST(Emr, ResourceCap) {
  auto alg = free_abc();
  std::vector<Focal> focals;
  for (const auto& p : alg->lattice())
    if (!p.none()) focals.push_back({p, 1.0 / 19.0});
  const Bba wide(alg, focals);
  EmrOptions tight;
  tight.max_cells = 300;
  EXPECT_THROW(emr_fuse(wide, wide, tight), ResourceError);
  const std::array<Bba, 2> pair{wide, wide};
  EXPECT_THROW(build_joint(pair, 300), ResourceError);
  EXPECT_NO_THROW(build_joint(pair, 361));
}

TEST(Emr, IdempotentOnPreciseBbas) {
  auto ps = powerset({"a", "b", "c"});
  const auto b = bba(ps, {{"a", 0.5}, {"b", 0.3}, {"c", 0.2}});
  const auto out = emr_fuse(b, b);
  ASSERT_TRUE(out.fused());
  expect_same_masses(out.bba(), b, 1e-12);
}

TEST(Emr, NaryOfTwoMatchesBinary) {
  std::mt19937_64 rng(47);
  for (const auto& alg : small_algebras()) {
    for (int t = 0; t < 5; ++t) {
      const auto x = random_bba(alg, rng), y = random_bba(alg, rng);
      const std::array<Bba, 2> pair{x, y};
      const auto a = emr_fuse(x, y), b = emr_fuse_n(pair);
      ASSERT_EQ(a.fused(), b.fused());
      if (a.fused()) expect_same_masses(a.bba(), b.bba(), 1e-9);
    }
  }
}

TEST(Emr, SequentialFusionIsNotAssociative) {
  auto alg = binary_frame();
  const auto m1 = bba(alg, {{"a", 0.5}, {"top", 0.5}});
  const auto m2 = m1;
  const auto m3 = bba(alg, {{"na", 0.5}, {"top", 0.5}});

  const auto m12 = emr_fuse(m1, m2);
  ASSERT_TRUE(m12.fused());
  EXPECT_NEAR(m12.bba().mass(alg->parse("a")), 0.75, 1e-9);
  const auto left = emr_fuse(m12.bba(), m3);
  EXPECT_FALSE(left.fused());
  ASSERT_TRUE(left.rejection().violation.has_value());
  EXPECT_NEAR(left.rejection().violation->bound, 1.25, 1e-9);

  const auto m23 = emr_fuse(m2, m3);
  ASSERT_TRUE(m23.fused());
  const auto right = emr_fuse(m1, m23.bba());
  ASSERT_TRUE(right.fused());
  EXPECT_NEAR(right.bba().mass(alg->parse("a")), 0.5, 1e-6);
  EXPECT_NEAR(right.bba().mass(alg->parse("na")), 0.5, 1e-6);

  // The three-way joint is pinned to a single point; it agrees with IPF.
  const std::array<Bba, 3> all{m1, m2, m3};
  const auto joint = emr_fuse_n(all);
  ASSERT_TRUE(joint.fused());
  EXPECT_NEAR(joint.bba().mass(alg->parse("a")), 0.5, 1e-6);
  EXPECT_NEAR(joint.bba().mass(alg->parse("na")), 0.5, 1e-6);
  const auto ipf = ipf_oracle(all);
  expect_same_masses(joint.bba(), fused_masses(alg, ipf.joint), 1e-6);
}

TEST(EmrApprox, ZadehFamily) {
  auto ps = powerset_abc();
  const ZadehFamily params{0.3, 0.1, 0.3, 0.1};
  const auto [m1, m2] = zadeh_family_sources(ps, params);
  const auto approx = emr_fuse_approx(m1, m2);
  ASSERT_TRUE(approx.fused());
  expect_same_masses(approx.bba(), emr_fuse(m1, m2).bba(), 0.05);
  // theta minimizes theta^2 + (g1-theta)^2 + (g2-theta)^2 + (R+theta)^2 on [0, 0.1]
  // with R = 0.2, so it sits at the left end.
  EXPECT_NEAR(approx.bba().mass(ps->parse("c")), 0.2, 1e-7);
  EXPECT_NEAR(approx.bba().mass(ps->top()), 0.2, 1e-7);

  const auto [z1, z2] = zadeh_family_sources(ps, {0.99, 0.01, 0.99, 0.01});
  const auto rejected = emr_fuse_approx(z1, z2);
  ASSERT_FALSE(rejected.fused());
  EXPECT_NEAR(rejected.rejection().phase1_residual, emr_fuse(z1, z2).rejection().phase1_residual, 1e-12);
}

TEST(Oracles, ZadehClosedForm) {
  const auto s = zadeh_family_solution({0.3, 0.1, 0.3, 0.1});
  ASSERT_TRUE(s.feasible);
  EXPECT_DOUBLE_EQ(s.theta, 0.025);
  EXPECT_FALSE(zadeh_family_solution({0.99, 0.01, 0.99, 0.01}).feasible);
  const auto edge = zadeh_family_solution({0.5, 0.0, 0.5, 0.0});
  ASSERT_TRUE(edge.feasible);
  EXPECT_EQ(edge.theta, 0.0);
  EXPECT_THROW(zadeh_family_solution({0.8, 0.3, 0.0, 0.0}), std::invalid_argument);
  EXPECT_THROW(zadeh_family_solution({-0.1, 0.0, 0.0, 0.0}), std::invalid_argument);
}

TEST(Oracles, IpfForcedAndClosedForm) {
  auto ps = powerset_abc();
  const auto [m1, m2] = zadeh_family_sources(ps, {0.3, 0.1, 0.3, 0.1});
  const std::array<Bba, 2> pair{m1, m2};
  const auto ipf = ipf_oracle(pair);
  ASSERT_TRUE(ipf.converged);
  const std::array<std::size_t, 2> cc{1, 1};
  EXPECT_NEAR(ipf.joint.value(cc), 0.025, 1e-8);

  const auto b = bba(ps, {{"a", 0.2}, {"a|b", 0.5}, {"top", 0.3}});
  const std::array<Bba, 2> with_neutral{b, total_ignorance(ps)};
  const auto forced = ipf_oracle(with_neutral);
  ASSERT_TRUE(forced.converged);
  for (std::size_t i = 0; i < b.focals().size(); ++i) {
    const std::array<std::size_t, 2> t{i, 0};
    EXPECT_NEAR(forced.joint.value(t), b.focals()[i].mass, 1e-12);
  }
}

TEST(EmrProperties, RandomInstances) {
  std::mt19937_64 rng(53);
  int feasible = 0;
  for (const auto& alg : small_algebras()) {
    for (int t = 0; t < 15; ++t) {
      const auto x = random_bba(alg, rng), y = random_bba(alg, rng);
      const auto xy = emr_fuse(x, y);
      const auto yx = emr_fuse(y, x);
      ASSERT_EQ(xy.fused(), yx.fused());
      if (!xy.fused()) continue;
      ++feasible;
      const auto& m = xy.bba();
      EXPECT_EQ(m.mass(alg->bottom()), 0.0);
      EXPECT_LE(xy.diagnostics.max_marginal_residual, 1e-8);
      EXPECT_LE(xy.diagnostics.optimality_certificate, 1e-7);
      expect_same_masses(m, yx.bba(), 1e-6);
      for (const auto& phi : alg->lattice())
        EXPECT_GE(belief(m, phi), std::max(belief(x, phi), belief(y, phi)) - 1e-8);
    }
  }
  EXPECT_GT(feasible, 40);
}
