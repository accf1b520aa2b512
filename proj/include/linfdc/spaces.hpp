#pragma once

// Finite pseudometric spaces with extended-integer distances, families of
// them, finite isometric group actions, quotients and R-connected components.
// Infinite groups are observed through finite windows (word balls).

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "linfdc/algebra/matrix.hpp"
#include "linfdc/ext_int.hpp"
#include "linfdc/norms.hpp"
#include "linfdc/parallel.hpp"
#include "linfdc/union_find.hpp"

namespace linfdc {

struct SpaceError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct WindowCapExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

using PointSet = std::vector<std::size_t>;
using Perm = std::vector<std::size_t>;

/// Finite pseudometric space: symmetric, zero diagonal, nonnegative, possibly
/// infinite distances. The triangle inequality is checked on demand.
class FinSpace {
 public:
  FinSpace() = default;

  FinSpace(std::size_t n, std::vector<ExtInt> dist, std::vector<std::string> labels = {})
      : n_(n), d_(std::move(dist)), labels_(std::move(labels)) {
    if (d_.size() != n_ * n_) throw SpaceError("distance matrix has wrong size");
    if (!labels_.empty() && labels_.size() != n_) throw SpaceError("label count does not match point count");
    for (std::size_t i = 0; i < n_; ++i) {
      if (d(i, i) != ExtInt(0)) throw SpaceError("nonzero diagonal at point " + std::to_string(i));
      for (std::size_t j = 0; j < i; ++j) {
        if (d(i, j) != d(j, i)) throw SpaceError("asymmetric distance between " + std::to_string(i) + " and " + std::to_string(j));
        if (d(i, j) < ExtInt(0)) throw SpaceError("negative distance");
      }
    }
  }

  template <class Fn>
  static FinSpace from_function(std::size_t n, Fn&& fn, std::vector<std::string> labels = {}) {
    std::vector<ExtInt> dist(n * n, ExtInt(0));
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < i; ++j) {
        const ExtInt v = fn(i, j);
        dist[i * n + j] = v;
        dist[j * n + i] = v;
      }
    }
    return FinSpace(n, std::move(dist), std::move(labels));
  }

  /// The integer interval [lo, hi] with |x - y|; labels are the integers.
  static FinSpace integer_interval(std::int64_t lo, std::int64_t hi) {
    const auto n = static_cast<std::size_t>(hi - lo + 1);
    std::vector<std::string> labels;
    for (std::int64_t x = lo; x <= hi; ++x) labels.push_back(std::to_string(x));
    return from_function(
        n, [](std::size_t i, std::size_t j) { return ExtInt(static_cast<std::int64_t>(i > j ? i - j : j - i)); },
        std::move(labels));
  }

  std::size_t size() const { return n_; }
  ExtInt d(std::size_t i, std::size_t j) const { return d_[i * n_ + j]; }
  const std::vector<std::string>& labels() const { return labels_; }
  std::string label(std::size_t i) const { return labels_.empty() ? std::to_string(i) : labels_[i]; }

  /// First (x, y, z) with d(x, z) > d(x, y) + d(y, z), if any.
  std::optional<std::array<std::size_t, 3>> triangle_violation() const {
    for (std::size_t x = 0; x < n_; ++x) {
      for (std::size_t y = 0; y < n_; ++y) {
        const ExtInt dxy = d(x, y);
        if (dxy.is_infinite()) continue;
        for (std::size_t z = 0; z < n_; ++z) {
          if (d(x, z) > dxy + d(y, z)) return std::array<std::size_t, 3>{x, y, z};
        }
      }
    }
    return std::nullopt;
  }

  FinSpace induced(const PointSet& pts) const {
    std::vector<std::string> labels;
    if (!labels_.empty()) {
      for (auto i : pts) labels.push_back(labels_[i]);
    }
    return from_function(pts.size(), [&](std::size_t i, std::size_t j) { return d(pts[i], pts[j]); }, std::move(labels));
  }

  bool operator==(const FinSpace&) const = default;

 private:
  std::size_t n_ = 0;
  std::vector<ExtInt> d_;
  std::vector<std::string> labels_;
};

/// Max pairwise distance over a subset of any space with d(i, j).
template <class Space>
ExtInt diameter(const Space& s, const PointSet& pts) {
  ExtInt best = 0;
  for (std::size_t a = 0; a < pts.size(); ++a) {
    for (std::size_t b = 0; b < a; ++b) best = max(best, s.d(pts[a], pts[b]));
  }
  return best;
}

inline ExtInt diameter(const FinSpace& s) {
  ExtInt best = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) best = max(best, s.d(i, j));
  }
  return best;
}

/// min over cross pairs; infinity for an empty side.
template <class Space>
ExtInt set_distance(const Space& s, const PointSet& a, const PointSet& b) {
  ExtInt best = ExtInt::infinity();
  for (auto x : a) {
    for (auto y : b) best = min(best, s.d(x, y));
  }
  return best;
}

struct MetricFamily {
  std::string label;
  std::vector<FinSpace> members;

  MetricFamily() = default;
  MetricFamily(std::string l, std::vector<FinSpace> m) : label(std::move(l)), members(std::move(m)) {
    if (members.empty()) throw SpaceError("metric family must be nonempty");
  }

  std::size_t size() const { return members.size(); }
  bool operator==(const MetricFamily&) const = default;
};

/// sup of member diameters (infinite if any member has an infinite distance).
inline ExtInt uniform_bound(const MetricFamily& family) {
  ExtInt best = 0;
  for (const auto& m : family.members) best = max(best, diameter(m));
  return best;
}

/// Least R > 0 with d(x, y) < R or d(x, y) = inf for all members. Finite data
/// always yields a value; it certifies nothing about larger windows.
/// Returns nullopt if the required R exceeds `limit`.
inline std::optional<std::int64_t> semi_bounded(const MetricFamily& family,
                                                std::optional<std::int64_t> limit = std::nullopt) {
  std::int64_t max_finite = 0;
  for (const auto& m : family.members) {
    for (std::size_t i = 0; i < m.size(); ++i) {
      for (std::size_t j = 0; j < i; ++j) {
        if (m.d(i, j).is_finite()) max_finite = std::max(max_finite, m.d(i, j).value());
      }
    }
  }
  const std::int64_t r = max_finite + 1;
  if (limit && r > *limit) return std::nullopt;
  return r;
}

struct Partition {
  std::vector<PointSet> blocks;
  ExtInt max_diameter = 0;
};

/// Equivalence classes of the reflexive-transitive closure of {d <= R}.
template <class Space>
Partition r_components(const Space& s, std::int64_t R) {
  if (R < 0) throw SpaceError("component scale must be nonnegative");
  UnionFind uf(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (s.d(i, j) <= ExtInt(R)) uf.merge(i, j);
    }
  }
  Partition out;
  out.blocks = uf.blocks();
  for (const auto& b : out.blocks) out.max_diameter = max(out.max_diameter, diameter(s, b));
  return out;
}

struct DisjointnessReport {
  bool ok = true;
  std::string diagnostic;
};

/// Pairwise set distance > r (strict); overlapping pieces fail.
template <class Space>
DisjointnessReport is_r_disjoint(const std::vector<PointSet>& pieces, const Space& s, std::int64_t r) {
  std::vector<std::size_t> owner(s.size(), std::numeric_limits<std::size_t>::max());
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    for (auto x : pieces[i]) {
      if (x >= s.size()) return {false, "piece " + std::to_string(i) + " references unknown point " + std::to_string(x)};
      if (owner[x] != std::numeric_limits<std::size_t>::max() && owner[x] != i) {
        return {false, "pieces " + std::to_string(owner[x]) + " and " + std::to_string(i) + " overlap at point " +
                           std::to_string(x)};
      }
      owner[x] = i;
    }
  }
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      for (auto x : pieces[i]) {
        for (auto y : pieces[j]) {
          if (s.d(x, y) <= ExtInt(r)) {
            return {false, "pieces " + std::to_string(j) + " and " + std::to_string(i) + " are within " +
                               std::to_string(r) + ": d(" + std::to_string(y) + "," + std::to_string(x) +
                               ")=" + s.d(x, y).to_string()};
          }
        }
      }
    }
  }
  return {};
}

/// Finite group acting on the points of a space by isometric permutations.
class GroupAction {
 public:
  GroupAction(const FinSpace& space, std::vector<Perm> elements) : elements_(std::move(elements)) {
    if (auto err = check(space)) throw SpaceError("invalid group action: " + *err);
  }

  const std::vector<Perm>& elements() const { return elements_; }
  std::size_t order() const { return elements_.size(); }

  static Perm compose(const Perm& g, const Perm& h) {
    Perm r(h.size());
    for (std::size_t x = 0; x < h.size(); ++x) r[x] = g[h[x]];
    return r;
  }

  static Perm invert(const Perm& g) {
    Perm r(g.size());
    for (std::size_t x = 0; x < g.size(); ++x) r[g[x]] = x;
    return r;
  }

  std::size_t index_of(const Perm& g) const {
    for (std::size_t i = 0; i < elements_.size(); ++i) {
      if (elements_[i] == g) return i;
    }
    return elements_.size();
  }

  static GroupAction trivial(const FinSpace& space) {
    Perm id(space.size());
    std::iota(id.begin(), id.end(), 0);
    return GroupAction(space, {id});
  }

 private:
  std::optional<std::string> check(const FinSpace& space) const {
    if (elements_.empty()) return "no group elements";
    const std::size_t n = space.size();
    for (std::size_t k = 0; k < elements_.size(); ++k) {
      const Perm& g = elements_[k];
      if (g.size() != n) return "element " + std::to_string(k) + " has wrong length";
      std::vector<bool> hit(n, false);
      for (auto x : g) {
        if (x >= n || hit[x]) return "element " + std::to_string(k) + " is not a permutation";
        hit[x] = true;
      }
      for (std::size_t x = 0; x < n; ++x) {
        for (std::size_t y = 0; y < x; ++y) {
          if (space.d(g[x], g[y]) != space.d(x, y)) {
            return "element " + std::to_string(k) + " is not an isometry at (" + std::to_string(x) + "," +
                   std::to_string(y) + ")";
          }
        }
      }
    }
    for (std::size_t a = 0; a < elements_.size(); ++a) {
      if (index_of(invert(elements_[a])) == elements_.size()) return "not closed under inverse";
      for (std::size_t b = 0; b < elements_.size(); ++b) {
        if (index_of(compose(elements_[a], elements_[b])) == elements_.size()) return "not closed under composition";
      }
    }
    return std::nullopt;
  }

  std::vector<Perm> elements_;
};

struct QuotientSpace {
  FinSpace space;
  std::vector<PointSet> orbits;          ///< ordered by smallest member
  std::vector<std::size_t> orbit_of;     ///< point -> orbit index
};

/// Orbit space with d([x],[y]) = min over orbit pairs.
inline QuotientSpace quotient(const FinSpace& space, const GroupAction& action) {
  UnionFind uf(space.size());
  for (const auto& g : action.elements()) {
    for (std::size_t x = 0; x < space.size(); ++x) uf.merge(x, g[x]);
  }
  QuotientSpace q;
  q.orbits = uf.blocks();
  q.orbit_of.assign(space.size(), 0);
  for (std::size_t k = 0; k < q.orbits.size(); ++k) {
    for (auto x : q.orbits[k]) q.orbit_of[x] = k;
  }
  std::vector<std::string> labels;
  for (const auto& o : q.orbits) labels.push_back("[" + space.label(o.front()) + "]");
  q.space = FinSpace::from_function(
      q.orbits.size(), [&](std::size_t a, std::size_t b) { return set_distance(space, q.orbits[a], q.orbits[b]); },
      std::move(labels));
  return q;
}

// ---------------------------------------------------------------------------
// Windows onto (G, d)

struct GroupWindow {
  std::vector<GroupElement> elements;
  std::vector<long> word_length;  ///< -1 for elements added by saturation
  FinSpace space;
};

/// Distinct elements of word length <= radius over gens and their inverses,
/// in BFS discovery order (identity first).
inline std::pair<std::vector<GroupElement>, std::vector<long>> ball_elements(const std::vector<GroupElement>& gens,
                                                                            std::size_t radius, std::size_t cap) {
  if (gens.empty()) throw SpaceError("ball needs at least one generator");
  std::vector<GroupElement> steps;
  std::unordered_map<GroupElement, std::size_t> step_seen;
  for (const auto& g : gens) {
    for (const auto& s : {g, g.inverse()}) {
      if (step_seen.emplace(s, steps.size()).second) steps.push_back(s);
    }
  }
  std::vector<GroupElement> elems = {GroupElement::identity(gens.front().characteristic(), gens.front().dim())};
  std::vector<long> len = {0};
  std::unordered_map<GroupElement, std::size_t> index = {{elems.front(), 0}};
  std::size_t frontier_begin = 0;
  for (std::size_t r = 1; r <= radius; ++r) {
    const std::size_t frontier_end = elems.size();
    for (std::size_t i = frontier_begin; i < frontier_end; ++i) {
      for (const auto& s : steps) {
        GroupElement next = elems[i] * s;
        if (index.contains(next)) continue;
        if (elems.size() >= cap) {
          throw WindowCapExceeded("word ball exceeds cap of " + std::to_string(cap) + " points at radius " +
                                  std::to_string(r));
        }
        index.emplace(next, elems.size());
        elems.push_back(std::move(next));
        len.push_back(static_cast<long>(r));
      }
    }
    frontier_begin = frontier_end;
  }
  return {std::move(elems), std::move(len)};
}

/// Pairwise profile pseudometric on a list of group elements.
inline FinSpace window_space(const std::vector<GroupElement>& elems, const MetricProfile& profile) {
  const std::size_t n = elems.size();
  std::vector<ExtInt> dist(n * n, ExtInt(0));
  std::vector<GroupElement> inverses;
  inverses.reserve(n);
  for (const auto& g : elems) inverses.push_back(g.inverse());
  parallel_for(n, [&](std::size_t i) {
    for (std::size_t j = 0; j < i; ++j) {
      const std::int64_t v = length(inverses[i] * elems[j], profile).total();
      dist[i * n + j] = v;
      dist[j * n + i] = v;
    }
  });
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < n; ++i) labels.push_back("g" + std::to_string(i));
  return FinSpace(n, std::move(dist), std::move(labels));
}

inline GroupWindow ball_space(const std::vector<GroupElement>& gens, std::size_t radius, const MetricProfile& profile,
                              std::size_t cap = 20000) {
  auto [elems, len] = ball_elements(gens, radius, cap);
  GroupWindow w{std::move(elems), std::move(len), {}};
  w.space = window_space(w.elements, profile);
  return w;
}

/// Extends a window by left translates f*x for f in `subgroup`, so that the
/// subgroup acts on it by left multiplication.
inline GroupWindow left_saturate(const GroupWindow& w, const std::vector<GroupElement>& subgroup,
                                 const MetricProfile& profile, std::size_t cap = 20000) {
  std::vector<GroupElement> elems = w.elements;
  std::vector<long> len = w.word_length;
  std::unordered_map<GroupElement, std::size_t> index;
  for (std::size_t i = 0; i < elems.size(); ++i) index.emplace(elems[i], i);
  for (std::size_t i = 0; i < w.elements.size(); ++i) {
    for (const auto& f : subgroup) {
      GroupElement y = f * w.elements[i];
      if (index.contains(y)) continue;
      if (elems.size() >= cap) throw WindowCapExceeded("saturated window exceeds cap of " + std::to_string(cap));
      index.emplace(y, elems.size());
      elems.push_back(std::move(y));
      len.push_back(-1);
    }
  }
  GroupWindow out{std::move(elems), std::move(len), {}};
  out.space = window_space(out.elements, profile);
  return out;
}

/// Checks that `elems` is closed under products and contains the identity.
inline std::optional<std::string> subgroup_closure_error(const std::vector<GroupElement>& elems) {
  if (elems.empty()) return "empty subgroup";
  std::unordered_map<GroupElement, std::size_t> index;
  for (std::size_t i = 0; i < elems.size(); ++i) index.emplace(elems[i], i);
  if (!index.contains(GroupElement::identity(elems.front().characteristic(), elems.front().dim()))) {
    return "subgroup does not contain the identity";
  }
  for (std::size_t a = 0; a < elems.size(); ++a) {
    for (std::size_t b = 0; b < elems.size(); ++b) {
      if (!index.contains(elems[a] * elems[b])) {
        return "product of elements " + std::to_string(a) + " and " + std::to_string(b) + " leaves the subgroup";
      }
    }
  }
  return std::nullopt;
}

/// Left multiplication x -> f x as permutations of the window points.
inline GroupAction left_multiplication_action(const GroupWindow& w, const std::vector<GroupElement>& subgroup) {
  std::unordered_map<GroupElement, std::size_t> index;
  for (std::size_t i = 0; i < w.elements.size(); ++i) index.emplace(w.elements[i], i);
  std::vector<Perm> perms;
  for (const auto& f : subgroup) {
    Perm perm(w.elements.size());
    for (std::size_t i = 0; i < w.elements.size(); ++i) {
      auto it = index.find(f * w.elements[i]);
      if (it == index.end()) throw SpaceError("window is not closed under left multiplication by the subgroup");
      perm[i] = it->second;
    }
    perms.push_back(std::move(perm));
  }
  return GroupAction(w.space, std::move(perms));
}

struct ConjugationReport {
  bool ok = true;
  std::size_t pairs_checked = 0;
  std::string diagnostic;
};

/// For g of length 0, x -> g^{-1} x g is an isometry and induces an isometry
/// F'\G -> F\G with F' = g F g^{-1}. Checks both on all window pairs, with
/// quotient distances computed as min over the subgroup (left-invariant d).
inline ConjugationReport conjugation_isometry_check(const std::vector<GroupElement>& window, const GroupElement& g,
                                                    const std::vector<GroupElement>& subgroup,
                                                    const MetricProfile& profile) {
  if (length(g, profile).total() != 0) throw SpaceError("conjugating element must have length 0");
  const GroupElement gi = g.inverse();
  std::vector<GroupElement> conj_sub;  // F' = g F g^{-1}
  for (const auto& f : subgroup) conj_sub.push_back(g * f * gi);
  std::vector<GroupElement> image;  // g^{-1} x g
  for (const auto& x : window) image.push_back(gi * x * g);
  const auto orbit_min = [&](const GroupElement& x, const GroupElement& y, const std::vector<GroupElement>& sub) {
    std::int64_t best = std::numeric_limits<std::int64_t>::max();
    for (const auto& f : sub) best = std::min(best, pseudometric(x, f * y, profile));
    return best;
  };
  ConjugationReport rep;
  for (std::size_t i = 0; i < window.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      const auto d0 = pseudometric(window[i], window[j], profile);
      const auto d1 = pseudometric(image[i], image[j], profile);
      if (d0 != d1) {
        rep.ok = false;
        rep.diagnostic = "conjugation changes d at pair (" + std::to_string(i) + "," + std::to_string(j) + ")";
        return rep;
      }
      const auto q0 = orbit_min(window[i], window[j], conj_sub);
      const auto q1 = orbit_min(image[i], image[j], subgroup);
      if (q0 != q1) {
        rep.ok = false;
        rep.diagnostic = "induced quotient map changes d at pair (" + std::to_string(i) + "," + std::to_string(j) + ")";
        return rep;
      }
      ++rep.pairs_checked;
    }
  }
  return rep;
}

/// max(1, d) off the diagonal.
inline FinSpace metricize(const FinSpace& s) {
  return FinSpace::from_function(s.size(), [&](std::size_t i, std::size_t j) { return metricize(s.d(i, j), i == j); },
                                 s.labels());
}

}  // namespace linfdc
