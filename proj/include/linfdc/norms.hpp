#pragma once

// Discrete norms on F_p(t) and the length functions they induce on GL_n.
//
// Every norm is written gamma(x) = e^{-v(x)} for a discrete valuation v, so
// log-lengths are nonnegative integers ("valuation units"):
//   l_gamma(g) = max_{i,j} max(-v(g_ij), -v(g^ij))
// with g^ij the entries of g^{-1}. A profile of several norms gives the sum
// length l = l_1 + ... + l_q; the LengthValue keeps the coordinates.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "linfdc/algebra/matrix.hpp"
#include "linfdc/ext_int.hpp"

namespace linfdc {

enum class NormKind { t_adic, degree, finite_place };

class NormSpec {
 public:
  static NormSpec t_adic() { return NormSpec(NormKind::t_adic, std::nullopt); }
  static NormSpec degree() { return NormSpec(NormKind::degree, std::nullopt); }

  /// Valuation at the place of an irreducible polynomial; normalized monic.
  static NormSpec finite_place(const Poly& place) {
    if (!is_irreducible(place)) throw AlgebraError("place " + place.to_string() + " is not irreducible");
    return NormSpec(NormKind::finite_place, place.monic());
  }

  NormKind kind() const { return kind_; }
  const std::optional<Poly>& place() const { return place_; }

  /// Generator of the maximal ideal of the ring of integers.
  RatFunc uniformizer(std::uint64_t p) const {
    switch (kind_) {
      case NormKind::t_adic:
        return RatFunc::t(p);
      case NormKind::degree:
        return RatFunc::t(p).inverse();
      case NormKind::finite_place:
        if (place_->characteristic() != p) throw AlgebraError("place has wrong characteristic");
        return RatFunc(*place_);
    }
    return RatFunc::t(p);
  }

  std::string name() const {
    switch (kind_) {
      case NormKind::t_adic:
        return "t_adic";
      case NormKind::degree:
        return "degree";
      case NormKind::finite_place:
        return "place " + place_->to_string();
    }
    return "?";
  }

  bool operator==(const NormSpec& o) const = default;

 private:
  NormSpec(NormKind k, std::optional<Poly> place) : kind_(k), place_(std::move(place)) {}

  NormKind kind_;
  std::optional<Poly> place_;
};

namespace detail {

inline std::int64_t multiplicity(Poly f, const Poly& place) {
  std::int64_t k = 0;
  while (true) {
    auto [q, r] = Poly::divmod(f, place);
    if (!r.is_zero()) return k;
    f = std::move(q);
    ++k;
  }
}

}  // namespace detail

/// Valuation of a nonzero polynomial; +inf for zero.
inline ExtInt valuation(const Poly& f, const NormSpec& spec) {
  if (f.is_zero()) return ExtInt::infinity();
  switch (spec.kind()) {
    case NormKind::t_adic:
      return f.lowest_degree();
    case NormKind::degree:
      return -f.degree();
    case NormKind::finite_place:
      return detail::multiplicity(f, *spec.place());
  }
  return 0;
}

/// v(num) - v(den); valid on any (not necessarily reduced) fraction.
inline ExtInt valuation(const RatFunc& x, const NormSpec& spec) {
  if (x.is_zero()) return ExtInt::infinity();
  return valuation(x.num(), spec).value() - valuation(x.den(), spec).value();
}

struct NormAxiomReport {
  std::size_t pairs_checked = 0;
  std::optional<std::string> violation;
  bool ok() const { return !violation.has_value(); }
};

/// Checks v(x)=inf iff x=0, v(xy)=v(x)+v(y) and v(x+y) >= min(v(x),v(y)) on
/// every sampled pair; stops at the first violation.
inline NormAxiomReport norm_axiom_check(const NormSpec& spec, const std::vector<std::pair<RatFunc, RatFunc>>& samples) {
  NormAxiomReport rep;
  for (const auto& [x, y] : samples) {
    const ExtInt vx = valuation(x, spec);
    const ExtInt vy = valuation(y, spec);
    const auto describe = [&](const std::string& what) {
      return what + " fails for x=" + x.to_string() + ", y=" + y.to_string() + " under " + spec.name();
    };
    if (vx.is_infinite() != x.is_zero() || vy.is_infinite() != y.is_zero()) {
      rep.violation = describe("definiteness");
      return rep;
    }
    if (valuation(x * y, spec) != vx + vy) {
      rep.violation = describe("multiplicativity");
      return rep;
    }
    if (valuation(x + y, spec) < min(vx, vy)) {
      rep.violation = describe("ultrametric inequality");
      return rep;
    }
    ++rep.pairs_checked;
  }
  return rep;
}

/// Length in valuation units, one coordinate per norm of the profile.
struct LengthValue {
  std::vector<std::int64_t> units;

  std::int64_t total() const { return std::accumulate(units.begin(), units.end(), std::int64_t{0}); }
  bool operator==(const LengthValue&) const = default;
};

/// Nonempty, duplicate-free list of norms.
class MetricProfile {
 public:
  explicit MetricProfile(std::vector<NormSpec> norms) : norms_(std::move(norms)) {
    if (norms_.empty()) throw std::invalid_argument("metric profile needs at least one norm");
    for (std::size_t i = 0; i < norms_.size(); ++i) {
      for (std::size_t j = 0; j < i; ++j) {
        if (norms_[i] == norms_[j]) throw std::invalid_argument("duplicate norm in profile: " + norms_[i].name());
      }
    }
  }

  const std::vector<NormSpec>& norms() const { return norms_; }
  std::size_t size() const { return norms_.size(); }

  bool properness_certified() const { return proper_; }
  void set_properness_certified(bool v) { proper_ = v; }

 private:
  std::vector<NormSpec> norms_;
  bool proper_ = false;
};

/// max over entries of m of -v(entry); zero entries are skipped. Returns
/// nullopt for the zero matrix.
inline std::optional<std::int64_t> max_neg_valuation(const Matrix& m, const NormSpec& spec) {
  std::optional<std::int64_t> best;
  for (const auto& x : m.entries()) {
    if (x.is_zero()) continue;
    const std::int64_t nv = -valuation(x, spec).value();
    if (!best || nv > *best) best = nv;
  }
  return best;
}

inline std::int64_t length_coordinate(const GroupElement& g, const NormSpec& spec) {
  const auto a = max_neg_valuation(g.mat(), spec);
  const auto b = max_neg_valuation(g.inv(), spec);
  const std::int64_t l = std::max(*a, *b);
  // g g^{-1} = I forces some entry pair with gamma(g_ik) gamma(g^ki) >= 1
  if (l < 0) throw std::logic_error("negative length; inverse is inconsistent");
  return l;
}

inline LengthValue length(const GroupElement& g, const MetricProfile& profile) {
  LengthValue out;
  out.units.reserve(profile.size());
  for (const auto& spec : profile.norms()) out.units.push_back(length_coordinate(g, spec));
  return out;
}

/// d(g, h) = l(g^{-1} h), scalar sum over the profile. Always finite on a group.
inline std::int64_t pseudometric(const GroupElement& g, const GroupElement& h, const MetricProfile& profile) {
  if (g.dim() != h.dim()) throw AlgebraError("dimension mismatch in pseudometric");
  return length(g.inverse() * h, profile).total();
}

/// d'(x, y) = max(1, d(x, y)) for x != y; 0 on the diagonal.
inline ExtInt metricize(ExtInt d, bool same_point) {
  if (same_point) return 0;
  return max(ExtInt(1), d);
}

struct BallProbeResult {
  bool finite = false;          ///< false means the budget was exhausted
  std::size_t size = 0;         ///< elements found (closed set size when finite)
  std::vector<RatFunc> elements;
};

/// Closure of {0, 1} and gens under +, -, * inside
///   B(k) = { a : -v_gamma(a) <= k for every gamma in the profile },
/// where results leaving B(k) are discarded. If the closure saturates within
/// `budget` elements, reports its size; otherwise reports budget exhaustion.
/// Elements of B(k) reachable only through intermediates outside B(k) are not
/// found, so `size` is a lower bound on |B(k) cap A| in general.
inline BallProbeResult ball_finiteness_probe(const MetricProfile& profile, std::uint64_t p,
                                             const std::vector<RatFunc>& gens, std::int64_t k, std::size_t budget) {
  if (budget == 0) throw std::invalid_argument("ball probe budget must be positive");
  const auto inside = [&](const RatFunc& a) {
    for (const auto& spec : profile.norms()) {
      const ExtInt v = valuation(a, spec);
      if (v.is_finite() && -v.value() > k) return false;
    }
    return true;
  };
  BallProbeResult res;
  std::unordered_set<RatFunc> seen;
  std::vector<RatFunc> order;
  std::vector<RatFunc> seeds = {RatFunc::zero(p), RatFunc::one(p)};
  seeds.insert(seeds.end(), gens.begin(), gens.end());
  const auto add = [&](const RatFunc& a) {
    if (!inside(a) || !seen.insert(a).second) return true;
    order.push_back(a);
    return order.size() <= budget;
  };
  for (const auto& s : seeds) {
    if (!add(s)) {
      res.size = order.size();
      return res;
    }
  }
  // worklist: combine each new element with everything found before it
  for (std::size_t i = 0; i < order.size(); ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      const RatFunc a = order[i];
      const RatFunc b = order[j];
      if (!add(a + b) || !add(a - b) || !add(b - a) || !add(a * b)) {
        res.size = order.size();
        return res;
      }
    }
  }
  res.finite = true;
  res.size = order.size();
  res.elements = std::move(order);
  return res;
}

}  // namespace linfdc
