#include <gtest/gtest.h>

#include <random>
#include <unordered_set>

#include "helpers.hpp"
#include "linfdc/structure.hpp"
#include "oracles.hpp"

using namespace linfdc;
using th::c;
using th::mat;
using th::t;
using th::tp;

namespace {

std::vector<NormSpec> discrete_norms(std::uint64_t p) {
  // first irreducible t^2 + t + a
  Poly place = th::poly(p, {0, 1, 1});
  for (std::uint64_t a = 1; !is_irreducible(place); ++a) place = th::poly(p, {a, 1, 1});
  return {NormSpec::t_adic(), NormSpec::degree(), NormSpec::finite_place(place)};
}

/// Closure of a generating set under products.
std::vector<GroupElement> generated(const std::vector<GroupElement>& gens) {
  std::vector<GroupElement> out = {GroupElement::identity(gens.front().characteristic(), gens.front().dim())};
  std::unordered_set<GroupElement> seen(out.begin(), out.end());
  for (std::size_t head = 0; head < out.size(); ++head) {
    for (const auto& g : gens) {
      GroupElement x = out[head] * g;
      if (seen.insert(x).second) out.push_back(std::move(x));
    }
  }
  return out;
}

GroupWindow window_of(std::vector<GroupElement> elems, const MetricProfile& prof) {
  std::vector<long> len(elems.size(), 0);
  GroupWindow w{std::move(elems), std::move(len), {}};
  w.space = window_space(w.elements, prof);
  return w;
}

void expect_unitriangular(const Matrix& m) {
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      if (i == j) {
        EXPECT_TRUE(m(i, j).is_one()) << m.to_string();
      } else {
        EXPECT_TRUE(m(i, j).is_zero()) << m.to_string();
      }
    }
  }
}

NormalSeries series(std::vector<SeriesFactor> f) { return NormalSeries{std::move(f)}; }

}  // namespace

TEST(THFactorize, AlreadyTriangular) {
  const std::uint64_t p = 3;
  const GroupElement g = th::elem(p, {{tp(p, -1), c(p, 0)}, {c(p, 0), c(p, 1)}}) *
                         th::elem(p, {{c(p, 1), t(p)}, {c(p, 0), c(p, 1)}});
  const auto f = th_factorize(g, NormSpec::t_adic());
  EXPECT_EQ(f.t, g);
  EXPECT_TRUE(f.h.is_identity());
  EXPECT_EQ(f.exponents, (std::vector<std::int64_t>{-1, 0}));
}

TEST(THFactorize, PermutationIsIntegral) {
  const std::uint64_t p = 5;
  const RatFunc o = c(p, 0), l = c(p, 1);
  const GroupElement g = th::elem(p, {{o, l, o}, {o, o, l}, {l, o, o}});
  for (const auto& spec : discrete_norms(p)) {
    const auto f = th_factorize(g, spec);
    EXPECT_TRUE(f.t.is_identity());
    EXPECT_EQ(f.h, g);
    EXPECT_EQ(length_coordinate(f.h, spec), 0);
  }
}

TEST(THFactorize, LowerUnipotent) {
  const std::uint64_t p = 3;
  const GroupElement g = th::elem(p, {{c(p, 1), c(p, 0)}, {t(p).inverse(), c(p, 1)}});
  const auto f = th_factorize(g, NormSpec::t_adic());
  EXPECT_FALSE(th_check(f, NormSpec::t_adic()).has_value());
  EXPECT_EQ(f.t * f.h, g);
  EXPECT_EQ(pseudometric(g, f.t, MetricProfile({NormSpec::t_adic()})), 0);
  EXPECT_EQ(f.exponents, (std::vector<std::int64_t>{1, -1}));
}

TEST(THFactorize, CheckCatchesTampering) {
  const std::uint64_t p = 3;
  const GroupElement g = th::elem(p, {{c(p, 1), c(p, 0)}, {t(p).inverse(), c(p, 1)}});
  auto f = th_factorize(g, NormSpec::t_adic());
  f.h = f.h * th::elem(p, {{c(p, 1), t(p).inverse()}, {c(p, 0), c(p, 1)}});
  ASSERT_TRUE(th_check(f, NormSpec::t_adic()).has_value());
  auto f2 = th_factorize(g, NormSpec::t_adic());
  f2.exponents[0] += 1;
  EXPECT_TRUE(th_check(f2, NormSpec::t_adic()).has_value());
}

TEST(THFactorize, RandomizedOverF3) {
  const std::uint64_t p = 3;
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 100; ++trial) {
    const GroupElement g = th::random_element(rng, p, 3, 3);
    for (const auto& spec : discrete_norms(p)) {
      const auto f = th_factorize(g, spec);
      const auto err = th_check(f, spec);
      EXPECT_FALSE(err.has_value()) << *err;
      EXPECT_EQ(pseudometric(g, f.t, MetricProfile({spec})), 0);
      for (std::size_t i = 0; i < 3; ++i) {
        EXPECT_EQ(valuation(f.t.mat()(i, i), spec), ExtInt(f.exponents[i]));
      }
    }
  }
}

TEST(THFactorize, QuotientOfTEmbedsIsometrically) {
  // F finite inside T; the windows F g_i and F t_i have equal quotient metrics
  const std::uint64_t p = 3;
  const NormSpec spec = NormSpec::t_adic();
  const MetricProfile prof({spec});
  const RatFunc o = c(p, 0), l = c(p, 1);
  const auto F = generated({th::elem(p, {{l, l, o}, {o, l, o}, {o, o, l}}), th::elem(p, {{l, o, l}, {o, l, o}, {o, o, l}})});
  ASSERT_EQ(F.size(), 9U);
  std::mt19937_64 rng(37);
  std::vector<GroupElement> gs, ts;
  for (int i = 0; i < 8; ++i) {
    gs.push_back(th::random_element(rng, p, 3, 2));
    ts.push_back(th_factorize(gs.back(), spec).t);
  }
  const auto wg = left_saturate(window_of(gs, prof), F, prof);
  const auto wt = left_saturate(window_of(ts, prof), F, prof);
  const auto qg = quotient(wg.space, left_multiplication_action(wg, F));
  const auto qt = quotient(wt.space, left_multiplication_action(wt, F));
  for (std::size_t i = 0; i < gs.size(); ++i) {
    for (std::size_t j = 0; j < gs.size(); ++j) {
      EXPECT_EQ(qg.space.d(qg.orbit_of[i], qg.orbit_of[j]), qt.space.d(qt.orbit_of[i], qt.orbit_of[j]))
          << i << "," << j;
    }
  }
}

TEST(Triangularize, Examples) {
  const std::uint64_t p = 2;
  const RatFunc o = c(p, 0), l = c(p, 1);
  const auto e = GroupElement::identity(p, 2);

  const auto upper = triangularize_unipotent({e, th::elem(p, {{l, l}, {o, l}})});
  ASSERT_TRUE(upper.conjugator);
  EXPECT_TRUE(upper.conjugator->is_identity());

  const auto swap = th::elem(p, {{o, l}, {l, o}});
  const auto res = triangularize_unipotent({e, swap});
  ASSERT_TRUE(res.conjugator);
  const Matrix& P = *res.conjugator;
  EXPECT_EQ(P, mat(p, {{l, o}, {l, l}}));
  EXPECT_EQ(inverse(P) * swap.mat() * P, mat(p, {{l, l}, {o, l}}));
}

TEST(Triangularize, Failures) {
  const std::uint64_t p = 5;
  const auto e = GroupElement::identity(p, 2);
  const auto d = th::elem(p, {{t(p), c(p, 0)}, {c(p, 0), t(p).inverse()}});
  const auto bad = triangularize_unipotent({e, d});
  EXPECT_FALSE(bad.conjugator);
  ASSERT_TRUE(bad.offending);
  EXPECT_EQ(*bad.offending, 1U);
  EXPECT_NE(bad.diagnostic.find("not unipotent"), std::string::npos);
  // unipotent but not closed
  EXPECT_THROW(triangularize_unipotent({e, th::elem(p, {{c(p, 1), t(p)}, {c(p, 0), c(p, 1)}})}), SpaceError);
  EXPECT_THROW(triangularize_unipotent({}), SpaceError);
}

TEST(Triangularize, ConjugatedUnitriangularGroups) {
  std::mt19937_64 rng(41);
  for (std::uint64_t p : {2ULL, 3ULL}) {
    const RatFunc o = c(p, 0), l = c(p, 1);
    for (int trial = 0; trial < 10; ++trial) {
      const GroupElement q = th::random_element(rng, p, 3, 1);
      std::vector<GroupElement> gens;
      const std::vector<GroupElement> pool = {th::elem(p, {{l, l, o}, {o, l, o}, {o, o, l}}),
                                              th::elem(p, {{l, o, o}, {o, l, l}, {o, o, l}}),
                                              th::elem(p, {{l, o, t(p)}, {o, l, o}, {o, o, l}})};
      for (const auto& g : pool) {
        if (rng() % 2) gens.push_back(q * g * q.inverse());
      }
      if (gens.empty()) gens.push_back(q * pool[2] * q.inverse());
      const auto F = generated(gens);
      const auto res = triangularize_unipotent(F);
      ASSERT_TRUE(res.conjugator);
      EXPECT_FALSE(triangularization_error(F, *res.conjugator).has_value());
      const Matrix P_inv = inverse(*res.conjugator);
      for (const auto& f : F) expect_unitriangular(P_inv * f.mat() * *res.conjugator);
    }
  }
}

TEST(Hirsch, Examples) {
  EXPECT_EQ(hirsch_rank(series({{2, {}}, {1, {}}})), 3U);
  EXPECT_EQ(hirsch_rank(series({{2, {{2, 0}}}})), 1U);
  EXPECT_EQ(hirsch_rank(series({{2, {{3, 0}, {0, 5}}}, {1, {{7}}}})), 0U);
  EXPECT_EQ(hirsch_rank(series({})), 0U);
  EXPECT_THROW(hirsch_rank(series({{2, {{1}}}})), std::invalid_argument);
}

TEST(Hirsch, AgreesWithRationalRank) {
  std::mt19937_64 rng(43);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t cols = 1 + rng() % 5;
    const std::size_t rows = rng() % 6;
    std::vector<std::vector<std::int64_t>> rel(rows, std::vector<std::int64_t>(cols));
    for (auto& r : rel) {
      for (auto& x : r) x = static_cast<std::int64_t>(rng() % 7) - 3;
    }
    // make dependent rows common
    if (rows >= 2 && rng() % 2) {
      for (std::size_t j = 0; j < cols; ++j) rel[1][j] = 2 * rel[0][j];
    }
    EXPECT_EQ(integer_rank(rel, cols), oracle::rational_rank(rel, cols));
    EXPECT_EQ(hirsch_rank(series({{cols, rel}})), cols - oracle::rational_rank(rel, cols));
  }
}

TEST(Hirsch, AdditiveAndInvariantUnderRowOperations) {
  std::mt19937_64 rng(47);
  const auto random_factor = [&] {
    SeriesFactor f;
    f.generators = 1 + rng() % 4;
    const std::size_t rows = rng() % 4;
    for (std::size_t r = 0; r < rows; ++r) {
      std::vector<std::int64_t> row(f.generators);
      for (auto& x : row) x = static_cast<std::int64_t>(rng() % 9) - 4;
      f.relations.push_back(row);
    }
    return f;
  };
  for (int trial = 0; trial < 100; ++trial) {
    const NormalSeries a = series({random_factor(), random_factor()});
    const NormalSeries b = series({random_factor()});
    NormalSeries ab = a;
    ab.factors.insert(ab.factors.end(), b.factors.begin(), b.factors.end());
    EXPECT_EQ(hirsch_rank(ab), hirsch_rank(a) + hirsch_rank(b));

    NormalSeries moved = a;
    auto& rel = moved.factors[0].relations;
    if (rel.size() >= 2) {
      const std::int64_t k = static_cast<std::int64_t>(rng() % 5) - 2;
      for (std::size_t j = 0; j < rel[0].size(); ++j) rel[1][j] += k * rel[0][j];
      std::swap(rel[0], rel[1]);
      for (auto& x : rel[0]) x = -x;
    }
    EXPECT_EQ(hirsch_rank(moved), hirsch_rank(a));
  }
}

TEST(SolvableProbe, Examples) {
  const std::uint64_t p = 2;
  const RatFunc o = c(p, 0), l = c(p, 1);
  const SolvableCandidate heis{"heisenberg",
                               {th::elem(p, {{l, o, t(p)}, {o, l, o}, {o, o, l}}),
                                th::elem(p, {{l, t(p), o}, {o, l, o}, {o, o, l}}),
                                th::elem(p, {{l, o, o}, {o, l, t(p)}, {o, o, l}})},
                               series({{1, {}}, {2, {}}})};
  const auto ok = solvable_bound_probe({heis}, 3);
  ASSERT_EQ(ok.candidates.size(), 1U);
  EXPECT_EQ(ok.candidates[0].rank, 3U);
  EXPECT_TRUE(ok.pass());
  const auto tight = solvable_bound_probe({heis}, 2);
  EXPECT_FALSE(tight.pass());
  EXPECT_FALSE(tight.candidates[0].pass);
  EXPECT_TRUE(solvable_bound_probe({}, 0).pass());

  SolvableCandidate short_gens = heis;
  short_gens.generators.pop_back();
  EXPECT_THROW(solvable_bound_probe({short_gens}, 3), std::invalid_argument);
}
