#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "helpers.hpp"
#include "linfdc/spaces.hpp"
#include "oracles.hpp"

using namespace linfdc;
using th::c;
using th::t;
using th::tp;

namespace {

MetricProfile tadic() { return MetricProfile({NormSpec::t_adic()}); }
MetricProfile degree() { return MetricProfile({NormSpec::degree()}); }

FinSpace points_on_line(const std::vector<std::int64_t>& xs) {
  return FinSpace::from_function(xs.size(), [&](std::size_t i, std::size_t j) { return ExtInt(std::abs(xs[i] - xs[j])); });
}

/// Blocks of diameter <= 3 glued at infinity.
FinSpace glued_blocks() {
  const std::vector<std::int64_t> xs = {0, 1, 3, 10, 12};
  const std::vector<int> block = {0, 0, 0, 1, 1};
  return FinSpace::from_function(xs.size(), [&](std::size_t i, std::size_t j) {
    return block[i] == block[j] ? ExtInt(std::abs(xs[i] - xs[j])) : ExtInt::infinity();
  });
}

std::vector<std::vector<GroupElement>> u3_subgroups() {
  const std::uint64_t p = 2;
  const RatFunc o = c(p, 0);
  const RatFunc l = c(p, 1);
  const auto e = GroupElement::identity(p, 3);
  const auto gens = th::u3_generators();
  const auto z = th::elem(p, {{l, o, l}, {o, l, o}, {o, o, l}});
  const auto zt = th::elem(p, {{l, o, t(p)}, {o, l, o}, {o, o, l}});
  return {{e, gens[0]}, {e, gens[1]}, {e, z}, {e, z, zt, z * zt}};
}

}  // namespace

TEST(FinSpace, RejectsMalformedMatrices) {
  EXPECT_THROW(FinSpace(2, {0, 1, 2, 0}), SpaceError);
  EXPECT_THROW(FinSpace(2, {1, 1, 1, 0}), SpaceError);
  EXPECT_THROW(FinSpace(2, {0, -1, -1, 0}), SpaceError);
  EXPECT_THROW(FinSpace(2, {0, 1, 1}), SpaceError);
  const FinSpace bad(3, {0, 1, 5, 1, 0, 1, 5, 1, 0});
  EXPECT_TRUE(bad.triangle_violation().has_value());
  EXPECT_FALSE(glued_blocks().triangle_violation().has_value());
}

TEST(BallSpace, InvolutionOverF2) {
  const auto w = ball_space({th::elem(2, {{c(2, 1), c(2, 1)}, {c(2, 0), c(2, 1)}})}, 3, tadic());
  EXPECT_EQ(w.space.size(), 2U);
  EXPECT_EQ(w.word_length, (std::vector<long>{0, 1}));
}

TEST(BallSpace, DiagonalLine) {
  const std::uint64_t p = 3;
  const auto w = ball_space({th::elem(p, {{t(p), c(p, 0)}, {c(p, 0), t(p).inverse()}})}, 3, tadic());
  ASSERT_EQ(w.space.size(), 7U);
  // d(g_k, g_m) = l(diag(t^{m-k}, t^{k-m})) = |k - m|
  std::vector<long> exps;
  for (const auto& g : w.elements) exps.push_back(valuation(g.mat()(0, 0), NormSpec::t_adic()).value());
  std::vector<long> sorted = exps;
  std::sort(sorted.begin(), sorted.end());
  EXPECT_EQ(sorted, (std::vector<long>{-3, -2, -1, 0, 1, 2, 3}));
  for (std::size_t i = 0; i < 7; ++i) {
    EXPECT_EQ(w.word_length[i], std::abs(exps[i]));
    for (std::size_t j = 0; j < 7; ++j) EXPECT_EQ(w.space.d(i, j), ExtInt(std::abs(exps[i] - exps[j])));
  }
}

TEST(BallSpace, RadiusZeroAndCap) {
  const auto w = ball_space(th::u3_generators(), 0, degree());
  ASSERT_EQ(w.space.size(), 1U);
  EXPECT_TRUE(w.elements.front().is_identity());
  EXPECT_THROW(ball_space(th::u3_generators(), 4, degree(), 10), WindowCapExceeded);
  EXPECT_THROW(ball_space({}, 1, degree()), SpaceError);
}

TEST(Quotient, TrivialActionIsIsometricCopy) {
  const FinSpace s = points_on_line({0, 2, 3, 9});
  const auto q = quotient(s, GroupAction::trivial(s));
  ASSERT_EQ(q.space.size(), 4U);
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = 0; j < 4; ++j) EXPECT_EQ(q.space.d(i, j), s.d(i, j));
  }
}

TEST(Quotient, ReflectionOfInterval) {
  const FinSpace s = FinSpace::integer_interval(-2, 2);
  const GroupAction flip(s, {{0, 1, 2, 3, 4}, {4, 3, 2, 1, 0}});
  const auto q = quotient(s, flip);
  ASSERT_EQ(q.space.size(), 3U);
  EXPECT_EQ(q.orbits, (std::vector<PointSet>{{0, 4}, {1, 3}, {2}}));
  EXPECT_EQ(q.space.labels(), (std::vector<std::string>{"[-2]", "[-1]", "[0]"}));
  EXPECT_EQ(q.space.d(0, 1), ExtInt(1));  // d([2],[1])
  EXPECT_EQ(q.space.d(1, 2), ExtInt(1));
  EXPECT_EQ(q.space.d(0, 2), ExtInt(2));
}

TEST(Quotient, InvalidActionsRejected) {
  const FinSpace s = FinSpace::integer_interval(0, 3);
  EXPECT_THROW(GroupAction(s, {{0, 1, 2, 3}, {1, 0, 2, 3}}), SpaceError);  // not an isometry
  EXPECT_THROW(GroupAction(s, {{3, 2, 1, 0}}), SpaceError);                // identity missing from closure
  EXPECT_THROW(GroupAction(s, {{0, 1, 2}}), SpaceError);
}

TEST(Quotient, PermutationSubgroupOnGL2Ball) {
  const std::uint64_t p = 2;
  const auto prof = MetricProfile({NormSpec::t_adic(), NormSpec::degree()});
  const GroupElement swap = th::elem(p, {{c(p, 0), c(p, 1)}, {c(p, 1), c(p, 0)}});
  const std::vector<GroupElement> gens = {th::elem(p, {{c(p, 1), t(p)}, {c(p, 0), c(p, 1)}}),
                                          th::elem(p, {{t(p), c(p, 0)}, {c(p, 0), c(p, 1)}}), swap};
  const std::vector<GroupElement> F = {GroupElement::identity(p, 2), swap};
  const auto w = left_saturate(ball_space(gens, 2, prof), F, prof);
  const auto action = left_multiplication_action(w, F);
  const auto q = quotient(w.space, action);
  EXPECT_FALSE(q.space.triangle_violation().has_value());
  for (std::size_t x = 0; x < w.elements.size(); ++x) {
    for (std::size_t y = 0; y < w.elements.size(); ++y) {
      const ExtInt dq = q.space.d(q.orbit_of[x], q.orbit_of[y]);
      EXPECT_LE(dq, w.space.d(x, y));
      // left-invariant metric: orbit-pair min is min over f of d(x, f y)
      std::int64_t brute = std::numeric_limits<std::int64_t>::max();
      for (const auto& f : F) brute = std::min(brute, pseudometric(w.elements[x], f * w.elements[y], prof));
      EXPECT_EQ(dq, ExtInt(brute));
    }
  }
}

TEST(RComponents, Examples) {
  const FinSpace s = points_on_line({0, 1, 5, 6});
  const auto part = r_components(s, 2);
  EXPECT_EQ(part.blocks, (std::vector<PointSet>{{0, 1}, {2, 3}}));
  EXPECT_EQ(part.max_diameter, ExtInt(1));
  EXPECT_EQ(r_components(s, 6).blocks.size(), 1U);
  EXPECT_THROW(r_components(s, -1), SpaceError);
  const auto glued = r_components(glued_blocks(), 100);
  EXPECT_EQ(glued.blocks.size(), 2U);
  EXPECT_EQ(glued.max_diameter, ExtInt(3));
}

TEST(RComponents, QuotientOfUnitriangularBall) {
  const auto prof = degree();
  const auto base = ball_space(th::u3_generators(), 4, prof);
  for (const auto& F : u3_subgroups()) {
    const auto w = left_saturate(base, F, prof);
    const auto q = quotient(w.space, left_multiplication_action(w, F));
    for (std::int64_t R : {0, 1, 2}) {
      const auto total = r_components(w.space, R);
      const auto quot = r_components(q.space, R);
      EXPECT_LE(quot.max_diameter, total.max_diameter);
      // the image of every block upstairs is a whole block of the quotient
      for (const auto& block : total.blocks) {
        std::set<std::size_t> image;
        for (auto x : block) image.insert(q.orbit_of[x]);
        const PointSet img(image.begin(), image.end());
        EXPECT_NE(std::find(quot.blocks.begin(), quot.blocks.end(), img), quot.blocks.end());
      }
      if (R == 1) {
        EXPECT_EQ(quot.max_diameter, total.max_diameter);
      }
    }
  }
}

TEST(RComponents, UnionFindAgreesWithBfs) {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 60; ++trial) {
    const FinSpace s = oracle::random_graph_space(rng, 3 + rng() % 14, 25, 6);
    for (std::int64_t R = 0; R <= 7; ++R) {
      auto expected = oracle::bfs_components(s, R);
      std::sort(expected.begin(), expected.end());
      auto got = r_components(s, R).blocks;
      std::sort(got.begin(), got.end());
      EXPECT_EQ(got, expected);
    }
  }
}

TEST(Disjointness, Examples) {
  const FinSpace s = points_on_line({0, 1, 5, 6});
  EXPECT_TRUE(is_r_disjoint({{0, 1}, {2, 3}}, s, 3).ok);
  EXPECT_FALSE(is_r_disjoint({{0, 1}, {2, 3}}, s, 4).ok);
  const auto overlap = is_r_disjoint({{0, 1}, {1, 2}}, s, 0);
  EXPECT_FALSE(overlap.ok);
  EXPECT_NE(overlap.diagnostic.find("overlap"), std::string::npos);
  const FinSpace far = FinSpace::from_function(3, [](std::size_t, std::size_t) { return ExtInt::infinity(); });
  EXPECT_TRUE(is_r_disjoint({{0}, {1}, {2}}, far, 1000000).ok);
  EXPECT_FALSE(is_r_disjoint({{0}, {7}}, far, 1).ok);
}

TEST(Bounds, UniformBound) {
  EXPECT_EQ(uniform_bound(MetricFamily("singletons", {FinSpace(1, {0}), FinSpace(1, {0})})), ExtInt(0));
  EXPECT_EQ(uniform_bound(MetricFamily("intervals", {FinSpace::integer_interval(0, 5), FinSpace::integer_interval(0, 9)})),
            ExtInt(9));
  EXPECT_TRUE(uniform_bound(MetricFamily("glued", {glued_blocks()})).is_infinite());
  EXPECT_THROW(MetricFamily("empty", {}), SpaceError);
}

TEST(Bounds, SemiBounded) {
  EXPECT_EQ(semi_bounded(MetricFamily("bounded", {FinSpace::integer_interval(0, 5)})), 6);
  EXPECT_EQ(semi_bounded(MetricFamily("glued", {glued_blocks()})), 4);
  const FinSpace doubling = points_on_line({0, 1, 3, 7, 15});
  EXPECT_EQ(semi_bounded(MetricFamily("doubling", {doubling})), 16);
  EXPECT_EQ(semi_bounded(MetricFamily("doubling", {doubling}), 10), std::nullopt);
}

TEST(Conjugation, Examples) {
  const std::uint64_t p = 3;
  const auto prof = MetricProfile({NormSpec::t_adic(), NormSpec::degree()});
  const std::vector<GroupElement> gens = {th::elem(p, {{c(p, 1), t(p)}, {c(p, 0), c(p, 1)}}),
                                          th::elem(p, {{t(p), c(p, 0)}, {c(p, 0), c(p, 1)}})};
  const auto w = ball_space(gens, 2, prof);
  const std::vector<GroupElement> F = {GroupElement::identity(p, 2),
                                       th::elem(p, {{c(p, 1), c(p, 1)}, {c(p, 0), c(p, 1)}}),
                                       th::elem(p, {{c(p, 1), c(p, 2)}, {c(p, 0), c(p, 1)}})};
  const auto id = conjugation_isometry_check(w.elements, GroupElement::identity(p, 2), F, prof);
  EXPECT_TRUE(id.ok) << id.diagnostic;
  const GroupElement perm = th::elem(p, {{c(p, 0), c(p, 1)}, {c(p, 1), c(p, 0)}});
  const auto rep = conjugation_isometry_check(w.elements, perm, F, prof);
  EXPECT_TRUE(rep.ok) << rep.diagnostic;
  EXPECT_EQ(rep.pairs_checked, w.elements.size() * (w.elements.size() - 1) / 2);
  EXPECT_THROW(conjugation_isometry_check(w.elements, th::elem(p, {{t(p), c(p, 0)}, {c(p, 0), c(p, 1)}}), F, prof),
               SpaceError);
}

TEST(Metricize, SpaceLevel) {
  const FinSpace s(3, {0, 0, 4, 0, 0, 4, 4, 4, 0});
  const FinSpace m = metricize(s);
  EXPECT_EQ(m.d(0, 1), ExtInt(1));
  EXPECT_EQ(m.d(0, 2), ExtInt(4));
  EXPECT_EQ(m.d(1, 1), ExtInt(0));
  EXPECT_FALSE(m.triangle_violation().has_value());
}

TEST(Windows, SubgroupClosure) {
  const auto subs = u3_subgroups();
  for (const auto& F : subs) EXPECT_FALSE(subgroup_closure_error(F).has_value());
  EXPECT_TRUE(subgroup_closure_error({th::u3_generators()[0]}).has_value());
  EXPECT_TRUE(subgroup_closure_error({GroupElement::identity(2, 3), th::u3_generators()[0], th::u3_generators()[1]}).has_value());
}
