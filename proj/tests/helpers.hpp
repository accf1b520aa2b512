#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <string>
#include <vector>

#include "linfdc/algebra/matrix.hpp"

namespace th {

using linfdc::GroupElement;
using linfdc::Matrix;
using linfdc::Poly;
using linfdc::RatFunc;

inline Poly poly(std::uint64_t p, std::vector<std::uint64_t> c) { return Poly(p, std::move(c)); }

inline RatFunc t(std::uint64_t p) { return RatFunc::t(p); }
inline RatFunc c(std::uint64_t p, std::uint64_t v) { return RatFunc::constant(p, v); }
inline RatFunc tp(std::uint64_t p, long e) { return RatFunc::t(p).pow(e); }

inline Matrix mat(std::uint64_t p, std::initializer_list<std::initializer_list<RatFunc>> rows) {
  std::vector<RatFunc> entries;
  std::size_t n = 0;
  std::size_t m = 0;
  for (const auto& r : rows) {
    m = r.size();
    entries.insert(entries.end(), r.begin(), r.end());
    ++n;
  }
  return Matrix(p, n, m, std::move(entries));
}

inline GroupElement elem(std::uint64_t p, std::initializer_list<std::initializer_list<RatFunc>> rows) {
  return GroupElement(mat(p, rows));
}

inline Poly random_poly(std::mt19937_64& rng, std::uint64_t p, std::size_t max_degree) {
  std::vector<std::uint64_t> c(rng() % (max_degree + 1) + 1);
  for (auto& x : c) x = rng() % p;
  return Poly(p, std::move(c));
}

inline RatFunc random_ratfunc(std::mt19937_64& rng, std::uint64_t p, std::size_t max_degree) {
  Poly den = random_poly(rng, p, max_degree);
  while (den.is_zero()) den = random_poly(rng, p, max_degree);
  return RatFunc(random_poly(rng, p, max_degree), den);
}

inline Matrix random_matrix(std::mt19937_64& rng, std::uint64_t p, std::size_t n, std::size_t max_degree) {
  Matrix m(p, n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) m(i, j) = random_ratfunc(rng, p, max_degree);
  }
  return m;
}

/// Random invertible matrix; retries until the inverse exists.
inline GroupElement random_element(std::mt19937_64& rng, std::uint64_t p, std::size_t n, std::size_t max_degree) {
  while (true) {
    try {
      return GroupElement(random_matrix(rng, p, n, max_degree));
    } catch (const linfdc::SingularMatrix&) {
    }
  }
}

/// Generators of U_3 over F_2[t]: elementary matrices with entries 1 and t.
inline std::vector<GroupElement> u3_generators() {
  const std::uint64_t p = 2;
  const RatFunc o = c(p, 0), l = c(p, 1);
  return {elem(p, {{l, l, o}, {o, l, o}, {o, o, l}}), elem(p, {{l, o, o}, {o, l, l}, {o, o, l}}),
          elem(p, {{l, t(p), o}, {o, l, o}, {o, o, l}}), elem(p, {{l, o, o}, {o, l, t(p)}, {o, o, l}})};
}

/// A finite subgroup acting on a word ball by left multiplication.
struct WindowCase {
  std::string name;
  std::uint64_t p;
  std::vector<GroupElement> gens;
  std::vector<GroupElement> subgroup;
  std::size_t radius;
};

/// Actions of orders 2, 3 and 4: a swap in GL_2(F_3(t)), the unipotent
/// [[1,1],[0,1]] in GL_2(F_3(t)), and a Klein group of central elements of U_3
/// over F_2[t].
inline std::vector<WindowCase> window_cases() {
  std::vector<WindowCase> out;
  {
    const std::uint64_t p = 3;
    const RatFunc o = c(p, 0), l = c(p, 1);
    const auto swap = elem(p, {{o, l}, {l, o}});
    out.push_back({"order2", p,
                   {swap, elem(p, {{l, t(p)}, {o, l}}), elem(p, {{t(p), o}, {o, l}})},
                   {GroupElement::identity(p, 2), swap}, 2});
  }
  {
    const std::uint64_t p = 3;
    const RatFunc o = c(p, 0), l = c(p, 1);
    const auto u = elem(p, {{l, l}, {o, l}});
    out.push_back({"order3", p,
                   {elem(p, {{l, t(p)}, {o, l}}), elem(p, {{l, o}, {t(p), l}}), elem(p, {{t(p), o}, {o, l}})},
                   {GroupElement::identity(p, 2), u, u * u}, 2});
  }
  {
    const std::uint64_t p = 2;
    const RatFunc o = c(p, 0), l = c(p, 1);
    const auto z = elem(p, {{l, o, l}, {o, l, o}, {o, o, l}});
    const auto zt = elem(p, {{l, o, t(p)}, {o, l, o}, {o, o, l}});
    out.push_back({"order4", p, u3_generators(), {GroupElement::identity(p, 3), z, zt, z * zt}, 2});
  }
  return out;
}

}  // namespace th
