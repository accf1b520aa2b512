#pragma once

// Structural algorithms on matrix groups over F_p(t): the factorization
// GL_n(K) = T H over the valuation ring of a discrete norm, simultaneous
// triangularization of finite unipotent groups, and Hirsch rank of a supplied
// normal series.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "linfdc/algebra/matrix.hpp"
#include "linfdc/norms.hpp"
#include "linfdc/spaces.hpp"

namespace linfdc {

/// g = t h with t upper triangular (diagonal entries powers of the
/// uniformizer) and h, h^{-1} integral; t = d u with d diagonal, u unipotent.
struct THFactorization {
  GroupElement g;
  GroupElement t;
  GroupElement h;
  GroupElement d;
  GroupElement u;
  std::vector<std::int64_t> exponents;  ///< diagonal of t is pi^exponents[i]
};

/// Every entry has valuation >= 0.
inline bool is_integral(const Matrix& m, const NormSpec& spec) {
  for (const auto& x : m.entries()) {
    if (valuation(x, spec) < ExtInt(0)) return false;
  }
  return true;
}

/// First failed invariant of a factorization, if any.
inline std::optional<std::string> th_check(const THFactorization& f, const NormSpec& spec) {
  const std::size_t n = f.g.dim();
  const std::uint64_t p = f.g.characteristic();
  if (!(f.t * f.h == f.g)) return "g != t h";
  if (!is_integral(f.h.mat(), spec) || !is_integral(f.h.inv(), spec)) return "h or h^-1 is not integral";
  const RatFunc pi = spec.uniformizer(p);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (!f.t.mat()(i, j).is_zero()) return "t is not upper triangular";
    }
    if (f.t.mat()(i, i) != pi.pow(f.exponents[i])) return "diagonal entry of t is not a power of the uniformizer";
    if (f.d.mat()(i, i) != f.t.mat()(i, i)) return "d is not the diagonal of t";
  }
  if (!(f.d * f.u == f.t)) return "t != d u";
  if (!is_unipotent(f.u)) return "u is not unipotent";
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j && !f.d.mat()(i, j).is_zero()) return "d is not diagonal";
      if (j < i && !f.u.mat()(i, j).is_zero()) return "u is not upper triangular";
    }
  }
  if (length_coordinate(f.h, spec) != 0) return "h has nonzero length";
  if (pseudometric(f.g, f.t, MetricProfile({spec})) != 0) return "d(g, t) != 0";
  return std::nullopt;
}

/// Column reduction of g by integral elementary, permutation and unit-diagonal
/// matrices from the right, rows processed bottom-up. In row i the pivot is the
/// entry of minimal valuation among columns 0..i (smallest column on ties); it
/// is moved to column i, scaled to pi^v, and used to clear row i to its left.
inline THFactorization th_factorize(const GroupElement& g, const NormSpec& spec) {
  const std::size_t n = g.dim();
  const std::uint64_t p = g.characteristic();
  const RatFunc pi = spec.uniformizer(p);
  Matrix a = g.mat();
  Matrix k = Matrix::identity(p, n);      // a = g k throughout
  Matrix k_inv = Matrix::identity(p, n);  // k^{-1}
  std::vector<std::int64_t> exps(n, 0);
  for (std::size_t step = 0; step < n; ++step) {
    const std::size_t i = n - 1 - step;
    std::size_t piv = n;
    ExtInt best = ExtInt::infinity();
    for (std::size_t j = 0; j <= i; ++j) {
      const ExtInt v = valuation(a(i, j), spec);
      if (v < best) {
        best = v;
        piv = j;
      }
    }
    if (piv == n) throw SingularMatrix("th_factorize: matrix is singular");
    if (piv != i) {
      // right-multiply by the transposition (piv i): swap columns of a, k; swap rows of k^{-1}
      for (std::size_t r = 0; r < n; ++r) {
        std::swap(a(r, piv), a(r, i));
        std::swap(k(r, piv), k(r, i));
        std::swap(k_inv(piv, r), k_inv(i, r));
      }
    }
    const std::int64_t v = best.value();
    exps[i] = v;
    const RatFunc unit = a(i, i) / pi.pow(v);  // valuation 0
    const RatFunc unit_inv = unit.inverse();
    // column i *= unit^{-1}; row i of k^{-1} *= unit
    for (std::size_t r = 0; r < n; ++r) {
      a(r, i) = a(r, i) * unit_inv;
      k(r, i) = k(r, i) * unit_inv;
      k_inv(i, r) = k_inv(i, r) * unit;
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (a(i, j).is_zero()) continue;
      const RatFunc c = a(i, j) / a(i, i);  // valuation >= 0
      // column j -= c * column i; row i of k^{-1} += c * row j
      for (std::size_t r = 0; r < n; ++r) {
        if (!a(r, i).is_zero()) a(r, j) = a(r, j) - c * a(r, i);
        if (!k(r, i).is_zero()) k(r, j) = k(r, j) - c * k(r, i);
        if (!k_inv(j, r).is_zero()) k_inv(i, r) = k_inv(i, r) + c * k_inv(j, r);
      }
    }
  }
  GroupElement t = GroupElement::from_pair(a, k_inv * g.inv());
  GroupElement h = GroupElement::from_pair(k_inv, k);
  std::vector<RatFunc> diag;
  std::vector<RatFunc> diag_inv;
  for (std::size_t i = 0; i < n; ++i) {
    diag.push_back(a(i, i));
    diag_inv.push_back(a(i, i).inverse());
  }
  GroupElement d = GroupElement::from_pair(Matrix::diagonal(diag), Matrix::diagonal(diag_inv));
  GroupElement u = d.inverse() * t;
  THFactorization f{g, std::move(t), std::move(h), std::move(d), std::move(u), std::move(exps)};
  if (auto err = th_check(f, spec)) throw std::logic_error("th_factorize produced an invalid factorization: " + *err);
  return f;
}

struct TriangularizeResult {
  std::optional<Matrix> conjugator;  ///< P with P^{-1} f P upper unitriangular
  std::optional<std::size_t> offending;  ///< index of a non-unipotent element
  std::string diagnostic;
};

/// First element f (index) for which P^{-1} f P is not upper unitriangular.
inline std::optional<std::size_t> triangularization_error(const std::vector<GroupElement>& F, const Matrix& P) {
  const Matrix P_inv = inverse(P);
  for (std::size_t k = 0; k < F.size(); ++k) {
    const Matrix c = P_inv * F[k].mat() * P;
    for (std::size_t i = 0; i < c.rows(); ++i) {
      if (!c(i, i).is_one()) return k;
      for (std::size_t j = 0; j < i; ++j) {
        if (!c(i, j).is_zero()) return k;
      }
    }
  }
  return std::nullopt;
}

namespace detail {

inline Matrix triangularize_blocks(const std::vector<Matrix>& mats, std::uint64_t p, std::size_t n) {
  if (n <= 1) return Matrix::identity(p, n);
  // common fixed vector: kernel of the stacked (f - I)
  Matrix stacked(p, mats.size() * n, n);
  const Matrix I = Matrix::identity(p, n);
  for (std::size_t k = 0; k < mats.size(); ++k) {
    const Matrix d = mats[k] - I;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) stacked(k * n + i, j) = d(i, j);
    }
  }
  const auto kernel = null_space(stacked);
  if (kernel.empty()) throw std::logic_error("unipotent set without a common fixed vector");
  std::vector<RatFunc> v = kernel.front();
  std::size_t lead = 0;
  while (v[lead].is_zero()) ++lead;
  const RatFunc scale = v[lead].inverse();
  for (auto& x : v) x = x * scale;
  // basis: v, then e_j for j != lead
  Matrix P1(p, n, n);
  for (std::size_t i = 0; i < n; ++i) P1(i, 0) = v[i];
  std::size_t col = 1;
  for (std::size_t j = 0; j < n; ++j) {
    if (j == lead) continue;
    P1(j, col++) = RatFunc::one(p);
  }
  const Matrix P1_inv = inverse(P1);
  std::vector<Matrix> lower;
  for (const auto& f : mats) {
    const Matrix c = P1_inv * f * P1;
    Matrix b(p, n - 1, n - 1);
    for (std::size_t i = 1; i < n; ++i) {
      for (std::size_t j = 1; j < n; ++j) b(i - 1, j - 1) = c(i, j);
    }
    lower.push_back(std::move(b));
  }
  const Matrix Q = triangularize_blocks(lower, p, n - 1);
  Matrix block(p, n, n);
  block(0, 0) = RatFunc::one(p);
  for (std::size_t i = 1; i < n; ++i) {
    for (std::size_t j = 1; j < n; ++j) block(i, j) = Q(i - 1, j - 1);
  }
  return P1 * block;
}

}  // namespace detail

/// Conjugator P into upper unitriangular matrices for a finite unipotent
/// group, built from common fixed vectors. A non-unipotent element is reported
/// before closure is checked; a unipotent but non-closed F throws.
inline TriangularizeResult triangularize_unipotent(const std::vector<GroupElement>& F) {
  if (F.empty()) throw SpaceError("triangularize: empty subgroup");
  TriangularizeResult res;
  for (std::size_t k = 0; k < F.size(); ++k) {
    if (!is_unipotent(F[k])) {
      res.offending = k;
      res.diagnostic = "element " + std::to_string(k) + " " + F[k].mat().to_string() + " is not unipotent";
      return res;
    }
  }
  if (auto err = subgroup_closure_error(F)) throw SpaceError("triangularize: " + *err);
  std::vector<Matrix> mats;
  for (const auto& f : F) mats.push_back(f.mat());
  Matrix P = detail::triangularize_blocks(mats, F.front().characteristic(), F.front().dim());
  if (auto bad = triangularization_error(F, P)) {
    throw std::logic_error("triangularization failed on element " + std::to_string(*bad));
  }
  res.conjugator = std::move(P);
  return res;
}

using BigInt = boost::multiprecision::cpp_int;

/// One abelian factor: generators and integer relation rows.
struct SeriesFactor {
  std::size_t generators = 0;
  std::vector<std::vector<std::int64_t>> relations;

  bool operator==(const SeriesFactor&) const = default;
};

struct NormalSeries {
  std::vector<SeriesFactor> factors;

  bool operator==(const NormalSeries&) const = default;
};

/// Rank over Z (= over Q) by Euclidean row elimination on exact integers.
inline std::size_t integer_rank(const std::vector<std::vector<std::int64_t>>& rows, std::size_t cols) {
  std::vector<std::vector<BigInt>> m;
  for (const auto& r : rows) {
    if (r.size() != cols) throw std::invalid_argument("relation row has " + std::to_string(r.size()) + " entries, expected " + std::to_string(cols));
    m.emplace_back(r.begin(), r.end());
  }
  std::size_t rank = 0;
  for (std::size_t c = 0; c < cols && rank < m.size(); ++c) {
    while (true) {
      // smallest nonzero |entry| in column c at or below `rank`
      std::size_t piv = m.size();
      for (std::size_t r = rank; r < m.size(); ++r) {
        if (m[r][c] != 0 && (piv == m.size() || abs(m[r][c]) < abs(m[piv][c]))) piv = r;
      }
      if (piv == m.size()) break;
      std::swap(m[rank], m[piv]);
      bool cleared = true;
      for (std::size_t r = rank + 1; r < m.size(); ++r) {
        if (m[r][c] == 0) continue;
        const BigInt q = m[r][c] / m[rank][c];
        for (std::size_t j = c; j < cols; ++j) m[r][j] -= q * m[rank][j];
        if (m[r][c] != 0) cleared = false;
      }
      if (cleared) {
        ++rank;
        break;
      }
    }
  }
  return rank;
}

inline std::size_t factor_rank(const SeriesFactor& f) {
  return f.generators - integer_rank(f.relations, f.generators);
}

/// Sum over factors of generators minus relation rank.
inline std::size_t hirsch_rank(const NormalSeries& series) {
  std::size_t total = 0;
  for (const auto& f : series.factors) total += factor_rank(f);
  return total;
}

struct SolvableCandidate {
  std::string name;
  std::vector<GroupElement> generators;  ///< one per series generator, factor by factor
  NormalSeries series;
};

struct CandidateResult {
  std::string name;
  std::size_t rank = 0;
  bool pass = true;
};

struct SolvableProbeReport {
  std::size_t bound = 0;
  std::vector<CandidateResult> candidates;

  bool pass() const {
    return std::all_of(candidates.begin(), candidates.end(), [](const CandidateResult& c) { return c.pass; });
  }
};

/// Hirsch rank of each user-declared series against the bound N.
inline SolvableProbeReport solvable_bound_probe(const std::vector<SolvableCandidate>& candidates, std::size_t N) {
  SolvableProbeReport rep;
  rep.bound = N;
  for (const auto& c : candidates) {
    std::size_t gens = 0;
    for (const auto& f : c.series.factors) gens += f.generators;
    if (!c.generators.empty() && gens != c.generators.size()) {
      throw std::invalid_argument("candidate " + c.name + ": series declares " + std::to_string(gens) +
                                  " generators but " + std::to_string(c.generators.size()) + " were supplied");
    }
    const std::size_t r = hirsch_rank(c.series);
    rep.candidates.push_back({c.name, r, r <= N});
  }
  return rep;
}

}  // namespace linfdc
