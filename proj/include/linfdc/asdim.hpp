#pragma once

// Asymptotic dimension at a fixed scale: an (n+1)-coloured cover of every
// member by pieces of diameter <= bound such that same-coloured pieces are
// r-disjoint (set distance strictly greater than r).

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "linfdc/ext_int.hpp"
#include "linfdc/norms.hpp"
#include "linfdc/spaces.hpp"

namespace linfdc {

struct MalformedCertificate : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// A located failure of a verifier.
struct Counterexample {
  std::string invariant;  ///< coverage, disjointness, bound, split, equivariance, structure
  std::string location;
  std::string detail;
};

struct Verdict {
  std::optional<Counterexample> failure;

  bool ok() const { return !failure.has_value(); }
  static Verdict fail(std::string invariant, std::string location, std::string detail) {
    return {Counterexample{std::move(invariant), std::move(location), std::move(detail)}};
  }
  std::string to_string() const {
    if (ok()) return "pass";
    return "fail [" + failure->invariant + "] at " + failure->location + ": " + failure->detail;
  }
};

struct AsdimPiece {
  std::size_t color = 0;
  PointSet points;

  bool operator==(const AsdimPiece&) const = default;
};

struct AsdimCertificate {
  std::size_t n = 0;
  std::int64_t r = 0;
  ExtInt bound = 0;
  std::vector<std::vector<AsdimPiece>> members;  ///< pieces per family member

  bool operator==(const AsdimCertificate&) const = default;
};

/// Coverage, per-colour r-disjointness and the diameter bound. A piece that
/// names a point outside its member is malformed and throws.
inline Verdict verify_asdim(const AsdimCertificate& cert, const MetricFamily& family) {
  if (cert.members.size() != family.size()) {
    throw MalformedCertificate("certificate has " + std::to_string(cert.members.size()) + " members, family has " +
                               std::to_string(family.size()));
  }
  for (std::size_t m = 0; m < family.size(); ++m) {
    const FinSpace& space = family.members[m];
    const auto& pieces = cert.members[m];
    for (std::size_t i = 0; i < pieces.size(); ++i) {
      for (auto x : pieces[i].points) {
        if (x >= space.size()) {
          throw MalformedCertificate("member " + std::to_string(m) + " piece " + std::to_string(i) +
                                     " references unknown point " + std::to_string(x));
        }
      }
    }
  }
  for (std::size_t m = 0; m < family.size(); ++m) {
    const FinSpace& space = family.members[m];
    const auto& pieces = cert.members[m];
    const std::string where = "member " + std::to_string(m);
    std::vector<bool> covered(space.size(), false);
    for (const auto& pc : pieces) {
      for (auto x : pc.points) covered[x] = true;
    }
    for (std::size_t x = 0; x < space.size(); ++x) {
      if (!covered[x]) return Verdict::fail("coverage", where, "point " + std::to_string(x) + " is in no piece");
    }
    for (std::size_t i = 0; i < pieces.size(); ++i) {
      if (pieces[i].color > cert.n) {
        return Verdict::fail("structure", where + " piece " + std::to_string(i),
                             "colour " + std::to_string(pieces[i].color) + " exceeds n=" + std::to_string(cert.n));
      }
      const ExtInt diam = diameter(space, pieces[i].points);
      if (diam > cert.bound) {
        return Verdict::fail("bound", where + " piece " + std::to_string(i),
                             "diameter " + diam.to_string() + " exceeds bound " + cert.bound.to_string());
      }
    }
    for (std::size_t i = 0; i < pieces.size(); ++i) {
      for (std::size_t j = 0; j < i; ++j) {
        if (pieces[i].color != pieces[j].color) continue;
        for (auto x : pieces[i].points) {
          for (auto y : pieces[j].points) {
            if (space.d(x, y) <= ExtInt(cert.r)) {
              return Verdict::fail("disjointness", where + " pieces " + std::to_string(j) + "," + std::to_string(i),
                                   "colour " + std::to_string(pieces[i].color) + ": d(" + std::to_string(y) + "," +
                                       std::to_string(x) + ")=" + space.d(x, y).to_string() +
                                       " is not > r=" + std::to_string(cert.r));
            }
          }
        }
      }
    }
  }
  return {};
}

/// Greedy coloured cover of one space. Colours are filled in order; within a
/// colour, pieces are seeded at the lowest available point and grown through
/// the graph {d <= r} while the diameter stays <= max_diameter. Points within r
/// of a finished piece are blocked for the rest of that colour.
inline std::optional<std::vector<AsdimPiece>> greedy_cover(const FinSpace& s, std::int64_t r, std::size_t n_max,
                                                           ExtInt max_diameter = ExtInt::infinity()) {
  const std::size_t n = s.size();
  std::vector<bool> covered(n, false);
  std::size_t remaining = n;
  std::vector<AsdimPiece> pieces;
  const ExtInt scale(r);
  for (std::size_t color = 0; color <= n_max && remaining > 0; ++color) {
    std::vector<bool> blocked(n, false);
    while (true) {
      std::size_t seed = n;
      for (std::size_t x = 0; x < n; ++x) {
        if (!covered[x] && !blocked[x]) {
          seed = x;
          break;
        }
      }
      if (seed == n) break;
      PointSet piece = {seed};
      std::vector<bool> in_piece(n, false);
      in_piece[seed] = true;
      std::vector<bool> rejected(n, false);
      for (std::size_t head = 0; head < piece.size(); ++head) {
        const std::size_t u = piece[head];
        for (std::size_t y = 0; y < n; ++y) {
          if (in_piece[y] || rejected[y] || covered[y] || blocked[y] || s.d(u, y) > scale) continue;
          ExtInt grown = 0;
          for (auto z : piece) grown = max(grown, s.d(y, z));
          if (grown > max_diameter) {
            rejected[y] = true;
            continue;
          }
          in_piece[y] = true;
          piece.push_back(y);
        }
      }
      std::sort(piece.begin(), piece.end());
      for (auto x : piece) {
        covered[x] = true;
        --remaining;
      }
      for (std::size_t y = 0; y < n; ++y) {
        if (covered[y] || blocked[y]) continue;
        for (auto x : piece) {
          if (s.d(x, y) <= scale) {
            blocked[y] = true;
            break;
          }
        }
      }
      pieces.push_back({color, std::move(piece)});
    }
  }
  if (remaining > 0) return std::nullopt;
  return pieces;
}

/// Greedy certificate for a whole family, or nullopt ("no certificate found at
/// budget"); failure says nothing about the true asymptotic dimension.
/// The certificate's n is the largest colour used, its bound the largest
/// piece diameter.
inline std::optional<AsdimCertificate> greedy_asdim(const MetricFamily& family, std::int64_t r, std::size_t n_max,
                                                    ExtInt max_diameter = ExtInt::infinity()) {
  if (r < 0) throw std::invalid_argument("scale must be nonnegative");
  AsdimCertificate cert;
  cert.r = r;
  for (const auto& space : family.members) {
    auto pieces = greedy_cover(space, r, n_max, max_diameter);
    if (!pieces) return std::nullopt;
    for (const auto& pc : *pieces) {
      cert.n = std::max(cert.n, pc.color);
      cert.bound = max(cert.bound, diameter(space, pc.points));
    }
    cert.members.push_back(std::move(*pieces));
  }
  if (!verify_asdim(cert, family).ok()) throw std::logic_error("greedy_asdim produced an invalid certificate");
  return cert;
}

namespace detail {

inline std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  const std::int64_t q = a / b;
  return (a % b != 0 && ((a < 0) != (b < 0))) ? q - 1 : q;
}

inline std::int64_t floor_mod(std::int64_t a, std::int64_t b) { return a - floor_div(a, b) * b; }

}  // namespace detail

/// Cover of a finite subset of Z^dim (points given by integer coordinates) by
/// dim+1 families of shifted cubes. With margin m = max(1, ceil(r/2)), shift
/// step s = 2m and cube side L = (dim+1)s, a point is assigned to the first
/// shift k whose cube contains it at depth >= m in every coordinate. Each
/// coordinate rules out exactly one shift, so some shift always works, and
/// deep points of distinct cubes differ by >= 2m+1 > r in some coordinate.
inline std::vector<AsdimPiece> brick_cover(const std::vector<std::vector<std::int64_t>>& coords, std::int64_t r) {
  const std::size_t dim = coords.empty() ? 0 : coords.front().size();
  const std::int64_t m = std::max<std::int64_t>(1, (r + 1) / 2);
  const std::int64_t step = 2 * m;
  const std::int64_t side = static_cast<std::int64_t>(dim + 1) * step;
  std::map<std::pair<std::size_t, std::vector<std::int64_t>>, PointSet> cubes;
  for (std::size_t x = 0; x < coords.size(); ++x) {
    if (coords[x].size() != dim) throw std::invalid_argument("inconsistent coordinate dimension");
    bool placed = false;
    for (std::size_t k = 0; k <= dim && !placed; ++k) {
      const std::int64_t shift = static_cast<std::int64_t>(k) * step;
      std::vector<std::int64_t> cube(dim);
      bool deep = true;
      for (std::size_t i = 0; i < dim; ++i) {
        const std::int64_t pos = detail::floor_mod(coords[x][i] - shift, side);
        if (pos < m || pos >= side - m) {
          deep = false;
          break;
        }
        cube[i] = detail::floor_div(coords[x][i] - shift, side);
      }
      if (!deep) continue;
      cubes[{k, cube}].push_back(x);
      placed = true;
    }
    if (!placed) throw std::logic_error("brick cover left a point unassigned");
  }
  std::vector<AsdimPiece> pieces;
  for (auto& [key, pts] : cubes) pieces.push_back({key.first, std::move(pts)});
  std::stable_sort(pieces.begin(), pieces.end(), [](const AsdimPiece& a, const AsdimPiece& b) {
    return a.points.front() < b.points.front();
  });
  return pieces;
}

/// Brick certificate for a family of lattice windows; bound is measured.
inline AsdimCertificate brick_asdim(const MetricFamily& family,
                                    const std::vector<std::vector<std::vector<std::int64_t>>>& coords, std::int64_t r) {
  if (coords.size() != family.size()) throw std::invalid_argument("one coordinate list per member required");
  AsdimCertificate cert;
  cert.r = r;
  for (std::size_t m = 0; m < family.size(); ++m) {
    if (coords[m].size() != family.members[m].size()) throw std::invalid_argument("one coordinate per point required");
    auto pieces = brick_cover(coords[m], r);
    for (const auto& pc : pieces) {
      cert.n = std::max(cert.n, pc.color);
      cert.bound = max(cert.bound, diameter(family.members[m], pc.points));
    }
    cert.members.push_back(std::move(pieces));
  }
  return cert;
}

/// Asdim-0 cover of the family of finite subgroups {F} at scale R: each F is
/// the R-disjoint union of the left cosets of S = <F cap B_R(e)>.
struct FiniteSubgroupCover {
  MetricFamily family;                       ///< each subgroup with the restricted pseudometric
  AsdimCertificate certificate;              ///< n = 0, scale R
  std::vector<std::size_t> short_orders;     ///< |S| per subgroup
  std::size_t k = 0;                         ///< max |S|
  std::int64_t chain_bound = 0;              ///< k * R; every coset diameter is <= (|S|-1) R
};

inline FiniteSubgroupCover finite_subgroup_family_asdim0(const std::vector<std::vector<GroupElement>>& subgroups,
                                                         const MetricProfile& profile, std::int64_t R) {
  if (subgroups.empty()) throw std::invalid_argument("no subgroups supplied");
  FiniteSubgroupCover out;
  std::vector<FinSpace> spaces;
  out.certificate.r = R;
  for (std::size_t s = 0; s < subgroups.size(); ++s) {
    const auto& F = subgroups[s];
    if (auto err = subgroup_closure_error(F)) throw SpaceError("subgroup " + std::to_string(s) + ": " + *err);
    const FinSpace space = window_space(F, profile);
    std::unordered_map<GroupElement, std::size_t> index;
    for (std::size_t i = 0; i < F.size(); ++i) index.emplace(F[i], i);
    const std::size_t e = index.at(GroupElement::identity(F.front().characteristic(), F.front().dim()));
    // S = closure of the short elements under products
    std::vector<bool> in_short(F.size(), false);
    std::vector<std::size_t> gens;
    for (std::size_t i = 0; i < F.size(); ++i) {
      if (space.d(e, i) <= ExtInt(R)) gens.push_back(i);
    }
    std::vector<std::size_t> short_elems = {e};
    in_short[e] = true;
    for (std::size_t head = 0; head < short_elems.size(); ++head) {
      for (auto g : gens) {
        const std::size_t prod = index.at(F[short_elems[head]] * F[g]);
        if (!in_short[prod]) {
          in_short[prod] = true;
          short_elems.push_back(prod);
        }
      }
    }
    out.short_orders.push_back(short_elems.size());
    out.k = std::max(out.k, short_elems.size());
    // left cosets f S, in order of first element
    std::vector<bool> assigned(F.size(), false);
    std::vector<AsdimPiece> pieces;
    for (std::size_t f = 0; f < F.size(); ++f) {
      if (assigned[f]) continue;
      PointSet coset;
      for (auto h : short_elems) {
        const std::size_t x = index.at(F[f] * F[h]);
        assigned[x] = true;
        coset.push_back(x);
      }
      std::sort(coset.begin(), coset.end());
      out.certificate.bound = max(out.certificate.bound, diameter(space, coset));
      pieces.push_back({0, std::move(coset)});
    }
    out.certificate.members.push_back(std::move(pieces));
    spaces.push_back(space);
  }
  out.family = MetricFamily("finite subgroups", std::move(spaces));
  out.chain_bound = static_cast<std::int64_t>(out.k) * R;
  if (!verify_asdim(out.certificate, out.family).ok()) throw std::logic_error("coset cover failed verification");
  return out;
}

}  // namespace linfdc
