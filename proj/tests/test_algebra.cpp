#include <gtest/gtest.h>

#include <random>

#include "helpers.hpp"
#include "linfdc/algebra/matrix.hpp"
#include "oracles.hpp"

using namespace linfdc;
using th::c;
using th::mat;
using th::poly;
using th::t;

TEST(PrimeField, Examples) {
  EXPECT_EQ((Fp(5, 3) + Fp(5, 4)).value(), 2U);
  EXPECT_EQ(Fp(5, 2).inverse().value(), 3U);
  EXPECT_EQ((Fp(2, 1) + Fp(2, 1)).value(), 0U);
}

TEST(PrimeField, Errors) {
  EXPECT_THROW(Fp(6, 1), AlgebraError);
  EXPECT_THROW(Fp(5, 1) + Fp(7, 1), AlgebraError);
  EXPECT_THROW(Fp(5, 0).inverse(), AlgebraError);
}

TEST(PrimeField, PrimalityAgreesWithTrialDivision) {
  for (std::uint64_t n = 0; n < 2000; ++n) {
    bool prime = n >= 2;
    for (std::uint64_t d = 2; d * d <= n && prime; ++d) prime = n % d != 0;
    EXPECT_EQ(is_prime(n), prime) << n;
  }
  EXPECT_TRUE(is_prime(4294967291ULL));
  EXPECT_TRUE(is_prime(18446744073709551557ULL));
  EXPECT_FALSE(is_prime(4294967297ULL));  // 641 * 6700417
}

TEST(PrimeField, InverseAcrossField) {
  for (std::uint64_t p : {2ULL, 3ULL, 7ULL, 101ULL}) {
    for (std::uint64_t a = 1; a < p; ++a) EXPECT_EQ((Fp(p, a) * Fp(p, a).inverse()).value(), 1U);
  }
}

TEST(RatFunc, Examples) {
  const RatFunc x = t(2) + c(2, 1);
  EXPECT_EQ(x * x, RatFunc(poly(2, {1, 0, 1})));

  const RatFunc q = t(3) / (t(3) + c(3, 1));
  EXPECT_EQ(q.inverse(), (t(3) + c(3, 1)) / t(3));
  EXPECT_EQ(q.inverse().num(), poly(3, {1, 1}));
  EXPECT_EQ(q.inverse().den(), poly(3, {0, 1}));

  const RatFunc r(poly(5, {0, 1}), poly(5, {0, 0, 1}));
  EXPECT_EQ(r.num(), poly(5, {1}));
  EXPECT_EQ(r.den(), poly(5, {0, 1}));
}

TEST(RatFunc, CanonicalForm) {
  // 2t/(2t^2+2) over F_3 is t/(t^2+1)
  const RatFunc a(poly(3, {0, 2}), poly(3, {2, 0, 2}));
  EXPECT_EQ(a.num(), poly(3, {0, 1}));
  EXPECT_EQ(a.den(), poly(3, {1, 0, 1}));
  EXPECT_TRUE(a.den().is_monic());
  const RatFunc zero(poly(7, {}), poly(7, {3, 4}));
  EXPECT_TRUE(zero.is_zero());
  EXPECT_TRUE(zero.den().is_one());
  EXPECT_THROW(RatFunc(poly(5, {1}), poly(5, {})), AlgebraError);
  EXPECT_THROW(RatFunc::zero(5).inverse(), AlgebraError);
}

TEST(RatFunc, RingAxiomsRandomized) {
  std::mt19937_64 rng(7);
  for (std::uint64_t p : {2ULL, 3ULL, 5ULL}) {
    for (int trial = 0; trial < 150; ++trial) {
      const RatFunc a = th::random_ratfunc(rng, p, 3);
      const RatFunc b = th::random_ratfunc(rng, p, 3);
      const RatFunc d = th::random_ratfunc(rng, p, 3);
      EXPECT_EQ((a + b) + d, a + (b + d));
      EXPECT_EQ((a * b) * d, a * (b * d));
      EXPECT_EQ(a * (b + d), a * b + a * d);
      EXPECT_EQ(a + b, b + a);
      EXPECT_EQ(a * b, b * a);
      EXPECT_TRUE((a - a).is_zero());
      if (!a.is_zero()) {
        EXPECT_TRUE((a * a.inverse()).is_one());
      }
    }
  }
}

TEST(RatFunc, EqualityIsCrossMultiplication) {
  // equal as functions iff n1 d2 = n2 d1; canonical forms make this bitwise
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 300; ++trial) {
    const Poly n1 = th::random_poly(rng, 3, 2);
    const Poly d1 = th::random_poly(rng, 3, 2);
    const Poly k = th::random_poly(rng, 3, 2);
    if (d1.is_zero() || k.is_zero()) continue;
    const RatFunc a(n1, d1);
    const RatFunc b(n1 * k, d1 * k);
    EXPECT_EQ(a, b);
    EXPECT_EQ(a.hash(), b.hash());
    const RatFunc e = th::random_ratfunc(rng, 3, 2);
    EXPECT_EQ(a == e, a.num() * e.den() == e.num() * a.den());
  }
}

TEST(Poly, IrreducibilityMatchesProductOracle) {
  for (std::uint64_t p : {2ULL, 3ULL}) {
    const std::size_t max_deg = p == 2 ? 5 : 4;
    for (std::size_t deg = 1; deg <= max_deg; ++deg) {
      std::vector<std::uint64_t> co(deg + 1, 0);
      co[deg] = 1;
      while (true) {
        const Poly f(p, co);
        EXPECT_EQ(is_irreducible(f), oracle::irreducible_by_products(f)) << f.to_string();
        std::size_t i = 0;
        while (i < deg && ++co[i] == p) co[i++] = 0;
        if (i == deg) break;
      }
    }
  }
}

TEST(Matrix, ProductExamples) {
  const GroupElement u = th::elem(3, {{c(3, 1), t(3)}, {c(3, 0), c(3, 1)}});
  EXPECT_EQ((u * u).mat(), mat(3, {{c(3, 1), t(3) + t(3)}, {c(3, 0), c(3, 1)}}));
  EXPECT_TRUE((u * u.inverse()).is_identity());

  const GroupElement u2 = th::elem(2, {{c(2, 1), t(2)}, {c(2, 0), c(2, 1)}});
  EXPECT_TRUE((u2 * u2).is_identity());
}

TEST(Matrix, ProductInverseBookkeepingRandomized) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const GroupElement a = th::random_element(rng, 3, 3, 2);
    const GroupElement b = th::random_element(rng, 3, 3, 2);
    const GroupElement ab = a * b;
    EXPECT_TRUE((ab.inv() * ab.mat()).is_identity());
    EXPECT_TRUE((ab.mat() * ab.inv()).is_identity());
    EXPECT_EQ(ab.inv(), b.inv() * a.inv());
  }
}

TEST(Matrix, DimensionMismatch) {
  EXPECT_THROW(GroupElement::identity(3, 2) * GroupElement::identity(3, 3), AlgebraError);
}

TEST(Matrix, InverseExamples) {
  EXPECT_EQ(inverse(mat(5, {{c(5, 1), t(5)}, {c(5, 0), c(5, 1)}})),
            mat(5, {{c(5, 1), -t(5)}, {c(5, 0), c(5, 1)}}));
  EXPECT_EQ(inverse(mat(5, {{t(5), c(5, 0)}, {c(5, 0), t(5).inverse()}})),
            mat(5, {{t(5).inverse(), c(5, 0)}, {c(5, 0), t(5)}}));
  EXPECT_THROW(inverse(mat(5, {{c(5, 1), c(5, 1)}, {c(5, 1), c(5, 1)}})), SingularMatrix);
  EXPECT_THROW(GroupElement(mat(2, {{t(2), t(2)}, {c(2, 1), c(2, 1)}})), SingularMatrix);
}

TEST(Matrix, InverseAgreesWithCofactorDeterminant) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 40; ++trial) {
    const Matrix m = th::random_matrix(rng, 2, 3, 1);
    const bool singular = oracle::determinant(m).is_zero();
    if (singular) {
      EXPECT_THROW(inverse(m), SingularMatrix);
    } else {
      EXPECT_TRUE((m * inverse(m)).is_identity());
      EXPECT_TRUE((inverse(m) * m).is_identity());
    }
  }
}

TEST(Matrix, FromPairRejectsWrongInverse) {
  const Matrix m = mat(3, {{c(3, 1), t(3)}, {c(3, 0), c(3, 1)}});
  EXPECT_NO_THROW(GroupElement::from_pair(m, inverse(m)));
  EXPECT_THROW(GroupElement::from_pair(m, m), AlgebraError);
}

TEST(Matrix, Unipotence) {
  EXPECT_TRUE(is_unipotent(mat(5, {{c(5, 1), c(5, 1)}, {c(5, 0), c(5, 1)}})));
  EXPECT_FALSE(is_unipotent(mat(5, {{t(5), c(5, 0)}, {c(5, 0), t(5).inverse()}})));
  EXPECT_TRUE(is_unipotent(mat(2, {{c(2, 0), c(2, 1)}, {c(2, 1), c(2, 0)}})));
  EXPECT_FALSE(is_unipotent(mat(3, {{c(3, 0), c(3, 1)}, {c(3, 1), c(3, 0)}})));
  // nilpotency index 3 needs the full power n
  EXPECT_TRUE(is_unipotent(mat(7, {{c(7, 1), t(7), c(7, 0)}, {c(7, 0), c(7, 1), t(7)}, {c(7, 0), c(7, 0), c(7, 1)}})));
}
