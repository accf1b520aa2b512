#pragma once

// Finite witnesses for finite decomposition complexity at explicit scales.
//
// A DecompTree is rooted at a metric family. Every node carries a family whose
// members are subsets of root members (optionally glued as a coproduct: points
// with different block tags are at infinite distance). A split node records,
// per member, X = U cup V with r-disjoint piece lists for U and V; its two
// children carry the families of collected U- and V-pieces. Leaves certify a
// bounded family (every diameter <= bound) or a semi-bounded one (every finite
// distance < R). Transfinite levels are not represented: depth is finite.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "linfdc/asdim.hpp"
#include "linfdc/spaces.hpp"

namespace linfdc {

struct FdcError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Subset of a root member. `blocks` is empty or holds one tag per point.
struct Member {
  std::size_t space = 0;
  PointSet points;
  std::vector<std::size_t> blocks;

  bool operator==(const Member&) const = default;
  auto operator<=>(const Member&) const = default;
};

/// Distances of a member: the root metric, infinite across blocks.
class MemberView {
 public:
  MemberView(const FinSpace& s, const Member& m) : s_(s), m_(m) {}

  std::size_t size() const { return s_.size(); }

  ExtInt d(std::size_t x, std::size_t y) const {
    if (!m_.blocks.empty() && block(x) != block(y)) return ExtInt::infinity();
    return s_.d(x, y);
  }

  std::size_t block(std::size_t x) const {
    const auto it = std::lower_bound(m_.points.begin(), m_.points.end(), x);
    if (it == m_.points.end() || *it != x) throw FdcError("point " + std::to_string(x) + " is not in the member");
    return m_.blocks[static_cast<std::size_t>(it - m_.points.begin())];
  }

 private:
  const FinSpace& s_;
  const Member& m_;
};

/// Relabels block tags by order of first appearance; drops trivial blocks.
inline Member canonical(Member m) {
  if (m.blocks.empty()) return m;
  std::map<std::size_t, std::size_t> relabel;
  for (auto& b : m.blocks) b = relabel.emplace(b, relabel.size()).first->second;
  if (relabel.size() <= 1) m.blocks.clear();
  return m;
}

inline std::vector<Member> canonical_sorted(std::vector<Member> fam) {
  for (auto& m : fam) m = canonical(std::move(m));
  std::sort(fam.begin(), fam.end());
  return fam;
}

inline std::vector<Member> whole_family(const MetricFamily& root) {
  std::vector<Member> fam;
  for (std::size_t i = 0; i < root.size(); ++i) {
    Member m{i, PointSet(root.members[i].size()), {}};
    std::iota(m.points.begin(), m.points.end(), 0);
    fam.push_back(std::move(m));
  }
  return fam;
}

/// Restriction of a member to a subset of its points (blocks follow).
inline Member restrict_member(const Member& m, PointSet pts) {
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  Member out{m.space, pts, {}};
  if (!m.blocks.empty()) {
    for (auto x : pts) {
      const auto it = std::lower_bound(m.points.begin(), m.points.end(), x);
      out.blocks.push_back(m.blocks[static_cast<std::size_t>(it - m.points.begin())]);
    }
  }
  return out;
}

enum class LeafKind { bounded, semi_bounded };
enum class ChildStyle { flattened, coproduct };

struct LeafNode {
  LeafKind kind = LeafKind::bounded;
  std::int64_t bound = 0;  ///< bounded: diameter <= bound; semi_bounded: finite distances < bound

  bool operator==(const LeafNode&) const = default;
};

struct MemberSplit {
  std::vector<PointSet> u_pieces;
  std::vector<PointSet> v_pieces;

  bool operator==(const MemberSplit&) const = default;
};

struct SplitNode {
  std::int64_t scale = 0;
  ChildStyle style = ChildStyle::flattened;
  std::vector<MemberSplit> splits;  ///< parallel to the node family
  std::size_t u_child = 0;
  std::size_t v_child = 0;

  bool operator==(const SplitNode&) const = default;
};

struct DecompNode {
  std::vector<Member> family;
  std::variant<LeafNode, SplitNode> content;

  bool is_leaf() const { return std::holds_alternative<LeafNode>(content); }
  bool operator==(const DecompNode&) const = default;
};

/// Nodes of a (sub)tree; node 0 is its root, child indices are local.
using Subtree = std::vector<DecompNode>;

struct DecompTree {
  MetricFamily root;
  std::vector<DecompNode> nodes;

  std::size_t depth() const { return depth_from(0); }

  /// Scales of split nodes in node order.
  std::vector<std::int64_t> scales() const {
    std::vector<std::int64_t> out;
    for (const auto& n : nodes) {
      if (const auto* s = std::get_if<SplitNode>(&n.content)) out.push_back(s->scale);
    }
    return out;
  }

  bool operator==(const DecompTree&) const = default;

 private:
  std::size_t depth_from(std::size_t i) const {
    const auto* s = std::get_if<SplitNode>(&nodes.at(i).content);
    if (!s) return 0;
    return 1 + std::max(depth_from(s->u_child), depth_from(s->v_child));
  }
};

/// Families formed by the pieces of a split, in member-then-piece order.
inline std::vector<Member> collected_pieces(const std::vector<Member>& family, const std::vector<MemberSplit>& splits,
                                            bool take_u, ChildStyle style) {
  std::vector<Member> out;
  for (std::size_t a = 0; a < family.size(); ++a) {
    const auto& pieces = take_u ? splits[a].u_pieces : splits[a].v_pieces;
    if (pieces.empty()) continue;
    if (style == ChildStyle::flattened) {
      for (const auto& pc : pieces) out.push_back(restrict_member(family[a], pc));
      continue;
    }
    // coproduct: one member per parent, block tag = (piece, old block)
    std::map<std::size_t, std::size_t> tag_of;
    std::size_t max_old = 0;
    for (auto b : family[a].blocks) max_old = std::max(max_old, b);
    for (std::size_t i = 0; i < pieces.size(); ++i) {
      const Member part = restrict_member(family[a], pieces[i]);
      for (std::size_t k = 0; k < part.points.size(); ++k) {
        const std::size_t old = part.blocks.empty() ? 0 : part.blocks[k];
        tag_of[part.points[k]] = i * (max_old + 1) + old;
      }
    }
    Member m{family[a].space, {}, {}};
    for (auto& [x, tag] : tag_of) {
      m.points.push_back(x);
      m.blocks.push_back(tag);
    }
    out.push_back(std::move(m));
  }
  return out;
}

namespace detail {

inline std::string node_loc(std::size_t node) { return "node " + std::to_string(node); }

inline Verdict check_member_shape(const MetricFamily& root, const Member& m, const std::string& where) {
  if (m.space >= root.size()) return Verdict::fail("structure", where, "unknown root member " + std::to_string(m.space));
  const std::size_t n = root.members[m.space].size();
  for (std::size_t k = 0; k < m.points.size(); ++k) {
    if (m.points[k] >= n) return Verdict::fail("structure", where, "unknown point " + std::to_string(m.points[k]));
    if (k > 0 && m.points[k] <= m.points[k - 1]) return Verdict::fail("structure", where, "points not strictly sorted");
  }
  if (!m.blocks.empty() && m.blocks.size() != m.points.size()) {
    return Verdict::fail("structure", where, "block tags do not match points");
  }
  return {};
}

inline Verdict verify_node(const DecompTree& tree, std::size_t idx, std::vector<int>& visited) {
  if (idx >= tree.nodes.size()) return Verdict::fail("structure", node_loc(idx), "child index out of range");
  if (visited[idx] != 0) return Verdict::fail("structure", node_loc(idx), "node reached twice (not a tree)");
  visited[idx] = 1;
  const DecompNode& node = tree.nodes[idx];
  for (std::size_t a = 0; a < node.family.size(); ++a) {
    if (auto v = check_member_shape(tree.root, node.family[a], node_loc(idx) + " member " + std::to_string(a)); !v.ok())
      return v;
  }
  if (const auto* leaf = std::get_if<LeafNode>(&node.content)) {
    for (std::size_t a = 0; a < node.family.size(); ++a) {
      const Member& m = node.family[a];
      const MemberView view(tree.root.members[m.space], m);
      const std::string where = node_loc(idx) + " member " + std::to_string(a);
      for (std::size_t i = 0; i < m.points.size(); ++i) {
        for (std::size_t j = 0; j < i; ++j) {
          const ExtInt d = view.d(m.points[i], m.points[j]);
          if (leaf->kind == LeafKind::bounded && d > ExtInt(leaf->bound)) {
            return Verdict::fail("bound", where, "distance " + d.to_string() + " between points " +
                                                     std::to_string(m.points[j]) + "," + std::to_string(m.points[i]) +
                                                     " exceeds leaf bound " + std::to_string(leaf->bound));
          }
          if (leaf->kind == LeafKind::semi_bounded && d.is_finite() && d >= ExtInt(leaf->bound)) {
            return Verdict::fail("bound", where, "finite distance " + d.to_string() + " is not < " +
                                                     std::to_string(leaf->bound));
          }
        }
      }
    }
    return {};
  }
  const auto& split = std::get<SplitNode>(node.content);
  if (split.splits.size() != node.family.size()) {
    return Verdict::fail("structure", node_loc(idx), "split count does not match family size");
  }
  for (std::size_t a = 0; a < node.family.size(); ++a) {
    const Member& m = node.family[a];
    const MemberSplit& ms = split.splits[a];
    const MemberView view(tree.root.members[m.space], m);
    const std::string where = node_loc(idx) + " member " + std::to_string(a);
    std::set<std::size_t> seen;
    for (const auto* list : {&ms.u_pieces, &ms.v_pieces}) {
      for (std::size_t i = 0; i < list->size(); ++i) {
        const PointSet& pc = (*list)[i];
        if (pc.empty()) return Verdict::fail("structure", where, "empty piece");
        for (auto x : pc) {
          if (!std::binary_search(m.points.begin(), m.points.end(), x)) {
            return Verdict::fail("split", where, "piece point " + std::to_string(x) + " is not in the member");
          }
          seen.insert(x);
        }
      }
    }
    if (seen.size() != m.points.size()) {
      for (auto x : m.points) {
        if (!seen.contains(x)) {
          return Verdict::fail("split", where, "point " + std::to_string(x) + " lies in neither U nor V");
        }
      }
    }
    for (const auto& [name, list] : {std::pair{"U", &ms.u_pieces}, std::pair{"V", &ms.v_pieces}}) {
      const auto rep = is_r_disjoint(*list, view, split.scale);
      if (!rep.ok) return Verdict::fail("disjointness", where + " " + name, rep.diagnostic);
    }
  }
  for (bool take_u : {true, false}) {
    const std::size_t child = take_u ? split.u_child : split.v_child;
    if (child >= tree.nodes.size()) return Verdict::fail("structure", node_loc(idx), "child index out of range");
    const auto expected = canonical_sorted(collected_pieces(node.family, split.splits, take_u, split.style));
    const auto actual = canonical_sorted(tree.nodes[child].family);
    if (expected != actual) {
      return Verdict::fail("split", node_loc(idx),
                           std::string(take_u ? "U" : "V") + "-child " + node_loc(child) +
                               " family differs from the collected pieces (" + std::to_string(expected.size()) +
                               " expected members, " + std::to_string(actual.size()) + " present)");
    }
    if (auto v = verify_node(tree, child, visited); !v.ok()) return v;
  }
  return {};
}

}  // namespace detail

/// Recursive verification of every node; reports the first located failure.
inline Verdict verify_fdc(const DecompTree& tree) {
  if (tree.nodes.empty()) return Verdict::fail("structure", "tree", "no nodes");
  if (canonical_sorted(tree.nodes[0].family) != canonical_sorted(whole_family(tree.root))) {
    return Verdict::fail("structure", detail::node_loc(0), "root node family is not the root metric family");
  }
  std::vector<int> visited(tree.nodes.size(), 0);
  if (auto v = detail::verify_node(tree, 0, visited); !v.ok()) return v;
  for (std::size_t i = 0; i < visited.size(); ++i) {
    if (visited[i] == 0) return Verdict::fail("structure", detail::node_loc(i), "unreachable node");
  }
  return {};
}

/// Appends `sub` to `into`, shifting its child indices; returns its root index.
inline std::size_t graft(Subtree& into, Subtree sub) {
  const std::size_t offset = into.size();
  for (auto& n : sub) {
    if (auto* s = std::get_if<SplitNode>(&n.content)) {
      s->u_child += offset;
      s->v_child += offset;
    }
    into.push_back(std::move(n));
  }
  return offset;
}

/// Leaf with the measured bound: bounded when all distances are finite,
/// otherwise semi-bounded with R = max finite distance + 1.
inline DecompNode measured_leaf(const MetricFamily& root, std::vector<Member> fam) {
  ExtInt diam = 0;
  std::int64_t max_finite = 0;
  for (const auto& m : fam) {
    const MemberView view(root.members.at(m.space), m);
    for (std::size_t i = 0; i < m.points.size(); ++i) {
      for (std::size_t j = 0; j < i; ++j) {
        const ExtInt d = view.d(m.points[i], m.points[j]);
        diam = max(diam, d);
        if (d.is_finite()) max_finite = std::max(max_finite, d.value());
      }
    }
  }
  LeafNode leaf;
  if (diam.is_finite()) {
    leaf = {LeafKind::bounded, diam.value()};
  } else {
    leaf = {LeafKind::semi_bounded, max_finite + 1};
  }
  return DecompNode{std::move(fam), leaf};
}

/// Subtree for a family that is already bounded on the window.
inline Subtree bounded_leaf(const MetricFamily& root, const std::vector<Member>& fam) {
  return {measured_leaf(root, fam)};
}

using FiberStrategy = std::function<Subtree(const MetricFamily& root, const std::vector<Member>& family)>;

/// Converts an (n+1)-coloured cover of `fam` (pieces in root point ids, per
/// member) into a depth-max(n,1) subtree: node k splits off the colour-k
/// pieces as U and keeps the rest as one V piece; at the last node the V side
/// is the colour-n pieces themselves.
inline Subtree colored_cover_subtree(const MetricFamily& root, const std::vector<Member>& fam,
                                     const std::vector<std::vector<AsdimPiece>>& pieces, std::size_t n,
                                     std::int64_t r) {
  if (pieces.size() != fam.size()) throw FdcError("one piece list per member required");
  Subtree out;
  // members of the current node, with their surviving pieces
  std::vector<Member> cur = fam;
  std::vector<std::vector<AsdimPiece>> cur_pieces = pieces;
  std::size_t prev_split = 0;
  bool have_prev = false;
  const std::size_t levels = std::max<std::size_t>(n, 1);
  for (std::size_t k = 0; k < levels; ++k) {
    SplitNode split{r, ChildStyle::flattened, {}, 0, 0};
    std::vector<Member> next;
    std::vector<std::vector<AsdimPiece>> next_pieces;
    std::vector<Member> u_family;
    std::vector<Member> v_leaf_family;
    const bool last = k + 1 == levels;
    for (std::size_t a = 0; a < cur.size(); ++a) {
      MemberSplit ms;
      std::vector<AsdimPiece> rest;
      for (const auto& pc : cur_pieces[a]) {
        if (pc.color == k) {
          ms.u_pieces.push_back(pc.points);
        } else {
          rest.push_back(pc);
        }
      }
      if (last) {
        for (const auto& pc : rest) ms.v_pieces.push_back(pc.points);
      } else if (!rest.empty()) {
        // remaining points outside the colour-k pieces; overlaps stay in U
        std::set<std::size_t> u_pts;
        for (const auto& pc : ms.u_pieces) u_pts.insert(pc.begin(), pc.end());
        PointSet v;
        std::vector<AsdimPiece> kept;
        for (const auto& pc : rest) {
          AsdimPiece trimmed{pc.color, {}};
          for (auto x : pc.points) {
            if (!u_pts.contains(x)) trimmed.points.push_back(x);
          }
          if (trimmed.points.empty()) continue;
          v.insert(v.end(), trimmed.points.begin(), trimmed.points.end());
          kept.push_back(std::move(trimmed));
        }
        if (!v.empty()) {
          std::sort(v.begin(), v.end());
          v.erase(std::unique(v.begin(), v.end()), v.end());
          ms.v_pieces.push_back(v);
          next.push_back(restrict_member(cur[a], v));
          next_pieces.push_back(std::move(kept));
        }
      }
      split.splits.push_back(ms);
    }
    u_family = collected_pieces(cur, split.splits, true, ChildStyle::flattened);
    const std::size_t idx = out.size();
    out.push_back(DecompNode{cur, split});
    if (have_prev) std::get<SplitNode>(out[prev_split].content).v_child = idx;
    const std::size_t u_idx = out.size();
    out.push_back(measured_leaf(root, u_family));
    std::get<SplitNode>(out[idx].content).u_child = u_idx;
    if (last) {
      const std::size_t v_idx = out.size();
      out.push_back(measured_leaf(root, collected_pieces(cur, split.splits, false, ChildStyle::flattened)));
      std::get<SplitNode>(out[idx].content).v_child = v_idx;
    }
    prev_split = idx;
    have_prev = true;
    cur = std::move(next);
    cur_pieces = std::move(next_pieces);
  }
  return out;
}

/// Depth-max(n,1) tree from a verified asdim certificate; node scales equal the
/// certificate scale.
inline DecompTree asdim_to_fdc(const AsdimCertificate& cert, const MetricFamily& family) {
  if (!verify_asdim(cert, family).ok()) throw FdcError("asdim certificate does not verify");
  DecompTree tree{family, colored_cover_subtree(family, whole_family(family), cert.members, cert.n, cert.r)};
  if (const auto v = verify_fdc(tree); !v.ok()) throw std::logic_error("asdim_to_fdc: " + v.to_string());
  return tree;
}

/// Fiber strategy: greedy asdim cover of each member, converted to a subtree.
inline FiberStrategy greedy_strategy(std::int64_t r, std::size_t n_max, ExtInt max_diameter = ExtInt::infinity()) {
  return [=](const MetricFamily& root, const std::vector<Member>& fam) -> Subtree {
    if (fam.empty()) return bounded_leaf(root, fam);
    std::vector<std::vector<AsdimPiece>> pieces;
    std::size_t n = 0;
    for (const auto& m : fam) {
      const FinSpace local = FinSpace::from_function(m.points.size(), [&](std::size_t i, std::size_t j) {
        return MemberView(root.members[m.space], m).d(m.points[i], m.points[j]);
      });
      auto cover = greedy_cover(local, r, n_max, max_diameter);
      if (!cover) throw FdcError("fiber strategy found no certificate at budget");
      for (auto& pc : *cover) {
        for (auto& x : pc.points) x = m.points[x];
        n = std::max(n, pc.color);
      }
      pieces.push_back(std::move(*cover));
    }
    return colored_cover_subtree(root, fam, pieces, n, r);
  };
}

/// Fiber strategy: R-connected components (asdim 0 at scale r).
inline FiberStrategy components_strategy(std::int64_t r) { return greedy_strategy(r, 0); }

/// Per source member: the target member and the image of every point.
struct FamilyMap {
  std::vector<std::size_t> target;
  std::vector<std::vector<std::size_t>> points;
};

/// Observed modulus rho(s) = max { d_Y(p x, p y) : d_X(x, y) <= s } at s.
inline ExtInt expansion_modulus(const MetricFamily& source, const MetricFamily& target, const FamilyMap& map,
                                std::int64_t s) {
  ExtInt best = 0;
  for (std::size_t a = 0; a < source.size(); ++a) {
    const FinSpace& X = source.members[a];
    const FinSpace& Y = target.members.at(map.target.at(a));
    const auto& p = map.points.at(a);
    for (std::size_t x = 0; x < X.size(); ++x) {
      for (std::size_t y = 0; y < x; ++y) {
        if (X.d(x, y) <= ExtInt(s)) best = max(best, Y.d(p[x], p[y]));
      }
    }
  }
  return best;
}

struct FiberingResult {
  DecompTree tree;
  ExtInt modulus_at_scale;      ///< observed rho(r)
  std::size_t fiber_leaves = 0; ///< base leaves handed to the fiber strategy
};

/// Pulls a decomposition of the target family back along a uniformly
/// expansive map and decomposes the preimages of its bounded leaves with
/// `fiber`. Pulled-back nodes get scale r; this is sound when rho(r) is at most
/// every base node scale, which is checked on the window.
inline FiberingResult fibering_decompose(const MetricFamily& source, const FamilyMap& map, const DecompTree& base,
                                         std::int64_t r, const FiberStrategy& fiber) {
  if (auto v = verify_fdc(base); !v.ok()) throw FdcError("base tree does not verify: " + v.to_string());
  const MetricFamily& target = base.root;
  if (map.target.size() != source.size() || map.points.size() != source.size()) {
    throw FdcError("map must cover every source member");
  }
  for (std::size_t a = 0; a < source.size(); ++a) {
    if (map.target[a] >= target.size()) throw FdcError("map targets unknown member");
    if (map.points[a].size() != source.members[a].size()) throw FdcError("map must send every point");
    for (auto y : map.points[a]) {
      if (y >= target.members[map.target[a]].size()) throw FdcError("map sends a point outside its target");
    }
  }
  FiberingResult res;
  res.modulus_at_scale = expansion_modulus(source, target, map, r);
  for (const auto& n : base.nodes) {
    if (const auto* s = std::get_if<SplitNode>(&n.content)) {
      if (s->style != ChildStyle::flattened) throw FdcError("fibering needs a flattened base tree");
      if (res.modulus_at_scale > ExtInt(s->scale)) {
        throw FdcError("expansiveness violated on the window: rho(" + std::to_string(r) + ")=" +
                       res.modulus_at_scale.to_string() + " exceeds base scale " + std::to_string(s->scale));
      }
    }
    for (const auto& m : n.family) {
      if (!m.blocks.empty()) throw FdcError("fibering needs a base tree without coproduct members");
    }
  }
  const auto preimage = [&](std::size_t a, const PointSet& ys) {
    PointSet out;
    for (std::size_t x = 0; x < map.points[a].size(); ++x) {
      if (std::binary_search(ys.begin(), ys.end(), map.points[a][x])) out.push_back(x);
    }
    return out;
  };
  Subtree out;
  std::function<std::size_t(std::size_t)> pull = [&](std::size_t b_idx) -> std::size_t {
    const DecompNode& bnode = base.nodes[b_idx];
    std::vector<Member> fam;
    std::vector<std::pair<std::size_t, std::size_t>> origin;  // (base member, source member)
    for (std::size_t b = 0; b < bnode.family.size(); ++b) {
      for (std::size_t a = 0; a < source.size(); ++a) {
        if (map.target[a] != bnode.family[b].space) continue;
        PointSet pts = preimage(a, bnode.family[b].points);
        if (pts.empty()) continue;
        fam.push_back(Member{a, std::move(pts), {}});
        origin.emplace_back(b, a);
      }
    }
    if (bnode.is_leaf()) {
      ++res.fiber_leaves;
      return graft(out, fiber(source, fam));
    }
    const auto& bsplit = std::get<SplitNode>(bnode.content);
    SplitNode split{r, ChildStyle::flattened, {}, 0, 0};
    for (const auto& [b, a] : origin) {
      MemberSplit ms;
      for (const auto& pc : bsplit.splits[b].u_pieces) {
        if (auto pre = preimage(a, pc); !pre.empty()) ms.u_pieces.push_back(std::move(pre));
      }
      for (const auto& pc : bsplit.splits[b].v_pieces) {
        if (auto pre = preimage(a, pc); !pre.empty()) ms.v_pieces.push_back(std::move(pre));
      }
      split.splits.push_back(std::move(ms));
    }
    const std::size_t idx = out.size();
    out.push_back(DecompNode{std::move(fam), split});
    const std::size_t u = pull(bsplit.u_child);
    const std::size_t v = pull(bsplit.v_child);
    auto& s = std::get<SplitNode>(out[idx].content);
    s.u_child = u;
    s.v_child = v;
    return idx;
  };
  pull(0);
  res.tree = DecompTree{source, std::move(out)};
  if (auto v = verify_fdc(res.tree); !v.ok()) throw FdcError("fibered tree does not verify: " + v.to_string());
  return res;
}

struct UnionResult {
  Subtree nodes;
  std::size_t multiplicity = 0;  ///< max number of parts of a member
};

/// Reduces a family whose members are finite unions of parts to the families
/// of parts: a chain of splits peels off part j as the single U piece and
/// keeps the union of the later parts as the single V piece. Part families
/// are handed to `part_strategy`.
inline UnionResult union_decompose(const MetricFamily& root, const std::vector<Member>& family,
                                   const std::vector<std::vector<PointSet>>& parts, std::int64_t r,
                                   const FiberStrategy& part_strategy) {
  if (parts.size() != family.size()) throw FdcError("one part list per member required");
  UnionResult res;
  std::vector<std::vector<PointSet>> cleaned(family.size());
  for (std::size_t a = 0; a < family.size(); ++a) {
    std::set<std::size_t> cover;
    for (auto pc : parts[a]) {
      std::sort(pc.begin(), pc.end());
      pc.erase(std::unique(pc.begin(), pc.end()), pc.end());
      if (pc.empty()) continue;
      for (auto x : pc) {
        if (!std::binary_search(family[a].points.begin(), family[a].points.end(), x)) {
          throw FdcError("part of member " + std::to_string(a) + " leaves the member");
        }
      }
      cover.insert(pc.begin(), pc.end());
      cleaned[a].push_back(std::move(pc));
    }
    if (cover.size() != family[a].points.size()) throw FdcError("parts fail to cover member " + std::to_string(a));
    res.multiplicity = std::max(res.multiplicity, cleaned[a].size());
  }
  std::function<std::size_t(std::vector<Member>, std::vector<std::vector<PointSet>>)> build =
      [&](std::vector<Member> fam, std::vector<std::vector<PointSet>> rem) -> std::size_t {
    bool single = true;
    for (const auto& r_parts : rem) single = single && r_parts.size() <= 1;
    if (single) return graft(res.nodes, part_strategy(root, fam));
    SplitNode split{r, ChildStyle::flattened, {}, 0, 0};
    std::vector<Member> next;
    std::vector<std::vector<PointSet>> next_rem;
    for (std::size_t a = 0; a < fam.size(); ++a) {
      MemberSplit ms;
      ms.u_pieces.push_back(rem[a].front());
      if (rem[a].size() > 1) {
        PointSet v;
        for (std::size_t j = 1; j < rem[a].size(); ++j) v.insert(v.end(), rem[a][j].begin(), rem[a][j].end());
        std::sort(v.begin(), v.end());
        v.erase(std::unique(v.begin(), v.end()), v.end());
        ms.v_pieces.push_back(v);
        next.push_back(restrict_member(fam[a], v));
        next_rem.emplace_back(rem[a].begin() + 1, rem[a].end());
      }
      split.splits.push_back(std::move(ms));
    }
    const auto u_family = collected_pieces(fam, split.splits, true, ChildStyle::flattened);
    const std::size_t idx = res.nodes.size();
    res.nodes.push_back(DecompNode{std::move(fam), split});
    const std::size_t u = graft(res.nodes, part_strategy(root, u_family));
    const std::size_t v = build(std::move(next), std::move(next_rem));
    auto& s = std::get<SplitNode>(res.nodes[idx].content);
    s.u_child = u;
    s.v_child = v;
    return idx;
  };
  build(family, cleaned);
  return res;
}

}  // namespace linfdc
