#pragma once

// Equivariant decompositions: a DecompTree whose members carry finite group
// actions, with each split's piece lists permuted by the group.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>
#include <string>
#include <tuple>
#include <variant>
#include <vector>

#include "linfdc/fdc.hpp"
#include "linfdc/spaces.hpp"

namespace linfdc {

/// Permutations of the U and V piece indices induced by one group element.
struct IndexAction {
  Perm u;
  Perm v;

  bool operator==(const IndexAction&) const = default;
};

struct LeafCosets {
  std::size_t node = 0;
  std::size_t member = 0;
  std::size_t h_order = 0;            ///< |H|
  std::int64_t base_diameter = 0;     ///< diameter of the representative set Y
  std::int64_t measured_diameter = 0; ///< max diameter of a piece g H Y
  std::int64_t chain_bound = 0;       ///< D + (|H| - 1)(r + 2D)
};

struct EquivariantDecomp {
  DecompTree tree;
  std::vector<GroupAction> actions;  ///< one per root member
  /// index_actions[node][member][g]; empty for leaves.
  std::vector<std::vector<std::vector<IndexAction>>> index_actions;
  std::vector<LeafCosets> cosets;  ///< bookkeeping of each leaf-level coset split
  std::size_t k = 0;               ///< max |H|
  std::int64_t r = 0;
};

namespace detail {

inline PointSet image(const Perm& g, const PointSet& pts) {
  PointSet out;
  out.reserve(pts.size());
  for (auto x : pts) out.push_back(g[x]);
  std::sort(out.begin(), out.end());
  return out;
}

inline PointSet sorted(PointSet s) {
  std::sort(s.begin(), s.end());
  return s;
}

}  // namespace detail

/// Tree verification plus pointwise equivariance: every member is invariant
/// under its group, and g U_i = U_{g i}, g V_j = V_{g j} at every split, where
/// the index permutations form an action.
inline Verdict verify_equivariant(const EquivariantDecomp& ed) {
  if (auto v = verify_fdc(ed.tree); !v.ok()) return v;
  const auto& root = ed.tree.root;
  if (ed.actions.size() != root.size()) return Verdict::fail("structure", "tree", "one group action per member required");
  if (ed.index_actions.size() != ed.tree.nodes.size()) {
    return Verdict::fail("structure", "tree", "index actions do not match node count");
  }
  for (std::size_t a = 0; a < root.size(); ++a) {
    if (ed.actions[a].elements().front().size() != root.members[a].size()) {
      return Verdict::fail("structure", "member " + std::to_string(a), "action acts on the wrong number of points");
    }
  }
  for (std::size_t idx = 0; idx < ed.tree.nodes.size(); ++idx) {
    const auto& node = ed.tree.nodes[idx];
    for (std::size_t a = 0; a < node.family.size(); ++a) {
      const Member& m = node.family[a];
      const std::string where = "node " + std::to_string(idx) + " member " + std::to_string(a);
      for (const auto& g : ed.actions[m.space].elements()) {
        if (detail::image(g, m.points) != m.points) {
          return Verdict::fail("equivariance", where, "member is not invariant under its group");
        }
      }
    }
    const auto* split = std::get_if<SplitNode>(&node.content);
    if (!split) continue;
    if (ed.index_actions[idx].size() != node.family.size()) {
      return Verdict::fail("structure", "node " + std::to_string(idx), "index actions do not match family size");
    }
    for (std::size_t a = 0; a < node.family.size(); ++a) {
      const auto& group = ed.actions[node.family[a].space].elements();
      const auto& acts = ed.index_actions[idx][a];
      const std::string where = "node " + std::to_string(idx) + " member " + std::to_string(a);
      if (acts.size() != group.size()) return Verdict::fail("structure", where, "one index action per group element");
      const MemberSplit& ms = split->splits[a];
      for (std::size_t gi = 0; gi < group.size(); ++gi) {
        for (const auto& [name, pieces, sigma] :
             {std::tuple{"U", &ms.u_pieces, &acts[gi].u}, std::tuple{"V", &ms.v_pieces, &acts[gi].v}}) {
          if (sigma->size() != pieces->size()) {
            return Verdict::fail("structure", where, std::string(name) + " index action has wrong length");
          }
          for (std::size_t i = 0; i < pieces->size(); ++i) {
            if ((*sigma)[i] >= pieces->size()) return Verdict::fail("structure", where, "index out of range");
            if (detail::image(group[gi], (*pieces)[i]) != detail::sorted((*pieces)[(*sigma)[i]])) {
              return Verdict::fail("equivariance", where + " " + name + "-piece " + std::to_string(i),
                                   "g" + std::to_string(gi) + " maps the piece onto a set other than piece " +
                                       std::to_string((*sigma)[i]));
            }
          }
        }
        for (std::size_t hi = 0; hi < group.size(); ++hi) {
          const std::size_t gh = [&] {
            const Perm c = GroupAction::compose(group[gi], group[hi]);
            return static_cast<std::size_t>(std::find(group.begin(), group.end(), c) - group.begin());
          }();
          if (GroupAction::compose(acts[gi].u, acts[hi].u) != acts[gh].u ||
              GroupAction::compose(acts[gi].v, acts[hi].v) != acts[gh].v) {
            return Verdict::fail("equivariance", where, "index permutations do not form an action");
          }
        }
      }
    }
  }
  return {};
}

/// Lifts a flattened decomposition of the quotient family {G_a \ X_a} to an
/// equivariant decomposition of {(X_a, G_a)}. Internal nodes pull pieces back
/// along the projection with trivial index action. A bounded quotient leaf
/// with representative set Y becomes a split into the pieces g H Y, where H is
/// generated by the g with d(Y, gY) <= r, glued as a coproduct; the group
/// permutes the pieces as it permutes the cosets G/H.
inline EquivariantDecomp equivariant_lift(const MetricFamily& spaces, const std::vector<GroupAction>& actions,
                                          const DecompTree& base, std::int64_t r) {
  if (actions.size() != spaces.size()) throw FdcError("one group action per space required");
  if (base.root.size() != spaces.size()) throw FdcError("base tree must be rooted at the quotient family");
  if (auto v = verify_fdc(base); !v.ok()) throw FdcError("base tree does not verify: " + v.to_string());
  std::vector<QuotientSpace> quots;
  for (std::size_t a = 0; a < spaces.size(); ++a) {
    GroupAction(spaces.members[a], actions[a].elements());  // re-checks isometry
    quots.push_back(quotient(spaces.members[a], actions[a]));
    if (quots.back().space.size() != base.root.members[a].size()) throw FdcError("base member size differs from quotient");
    for (std::size_t i = 0; i < quots.back().space.size(); ++i) {
      for (std::size_t j = 0; j < i; ++j) {
        if (quots.back().space.d(i, j) != base.root.members[a].d(i, j)) {
          throw FdcError("base member " + std::to_string(a) + " is not the quotient space");
        }
      }
    }
  }
  EquivariantDecomp out;
  out.actions = actions;
  out.r = r;
  const auto preimage = [&](std::size_t a, const PointSet& orbits) {
    PointSet pts;
    for (auto o : orbits) pts.insert(pts.end(), quots[a].orbits[o].begin(), quots[a].orbits[o].end());
    std::sort(pts.begin(), pts.end());
    return pts;
  };
  const auto identity_perm = [](std::size_t n) {
    Perm p(n);
    std::iota(p.begin(), p.end(), 0);
    return p;
  };
  Subtree nodes;
  std::vector<std::vector<std::vector<IndexAction>>> index_actions;
  const auto push = [&](DecompNode n, std::vector<std::vector<IndexAction>> acts) {
    nodes.push_back(std::move(n));
    index_actions.push_back(std::move(acts));
    return nodes.size() - 1;
  };

  const auto lift_leaf = [&](const std::vector<Member>& fam) -> std::size_t {
    SplitNode split{r, ChildStyle::coproduct, {}, 0, 0};
    std::vector<Member> lifted;
    std::vector<std::vector<IndexAction>> acts;
    for (const auto& bm : fam) {
      if (!bm.blocks.empty()) throw FdcError("base leaf members must not be coproducts");
      const std::size_t a = bm.space;
      const FinSpace& X = spaces.members[a];
      const auto& group = actions[a].elements();
      lifted.push_back(Member{a, preimage(a, bm.points), {}});
      // representatives: per orbit, the point closest to the first one
      const std::size_t y0 = quots[a].orbits[bm.points.front()].front();
      PointSet Y;
      for (auto o : bm.points) {
        std::size_t best = quots[a].orbits[o].front();
        for (auto x : quots[a].orbits[o]) {
          if (X.d(y0, x) < X.d(y0, best)) best = x;
        }
        Y.push_back(best);
      }
      std::sort(Y.begin(), Y.end());
      const ExtInt diam_y = diameter(X, Y);
      if (diam_y.is_infinite()) throw FdcError("base leaf lifts to an unbounded representative set");
      // H = closure of short elements
      std::vector<std::size_t> gens;
      for (std::size_t gi = 0; gi < group.size(); ++gi) {
        if (set_distance(X, Y, detail::image(group[gi], Y)) <= ExtInt(r)) gens.push_back(gi);
      }
      const auto index_of = [&](const Perm& g) {
        const auto it = std::find(group.begin(), group.end(), g);
        return static_cast<std::size_t>(it - group.begin());
      };
      const std::size_t e = index_of(identity_perm(X.size()));
      std::vector<std::size_t> H = {e};
      std::vector<bool> in_h(group.size(), false);
      in_h[e] = true;
      for (std::size_t head = 0; head < H.size(); ++head) {
        for (auto s : gens) {
          const std::size_t prod = index_of(GroupAction::compose(group[H[head]], group[s]));
          if (!in_h[prod]) {
            in_h[prod] = true;
            H.push_back(prod);
          }
        }
      }
      // cosets gH in order of smallest group index, and their pieces gHY
      std::vector<std::size_t> coset_of(group.size(), group.size());
      std::vector<std::size_t> coset_rep;
      MemberSplit ms;
      for (std::size_t gi = 0; gi < group.size(); ++gi) {
        if (coset_of[gi] != group.size()) continue;
        const std::size_t c = coset_rep.size();
        coset_rep.push_back(gi);
        std::set<std::size_t> piece;
        for (auto h : H) {
          const std::size_t gh = index_of(GroupAction::compose(group[gi], group[h]));
          coset_of[gh] = c;
          for (auto y : Y) piece.insert(group[gh][y]);
        }
        ms.u_pieces.emplace_back(piece.begin(), piece.end());
      }
      std::vector<IndexAction> member_acts;
      for (std::size_t gi = 0; gi < group.size(); ++gi) {
        IndexAction ia;
        for (std::size_t c = 0; c < coset_rep.size(); ++c) {
          ia.u.push_back(coset_of[index_of(GroupAction::compose(group[gi], group[coset_rep[c]]))]);
        }
        member_acts.push_back(std::move(ia));
      }
      LeafCosets lc;
      lc.member = lifted.size() - 1;
      lc.h_order = H.size();
      lc.base_diameter = diam_y.value();
      for (const auto& pc : ms.u_pieces) lc.measured_diameter = std::max(lc.measured_diameter, diameter(X, pc).value());
      lc.chain_bound =
          lc.base_diameter + static_cast<std::int64_t>(H.size() - 1) * (r + 2 * lc.base_diameter);
      out.k = std::max(out.k, H.size());
      out.cosets.push_back(lc);
      split.splits.push_back(std::move(ms));
      acts.push_back(std::move(member_acts));
    }
    const std::size_t idx = push(DecompNode{lifted, split}, acts);
    for (std::size_t i = out.cosets.size() - fam.size(); i < out.cosets.size(); ++i) out.cosets[i].node = idx;
    auto u_family = collected_pieces(lifted, split.splits, true, ChildStyle::coproduct);
    const std::size_t u = push(measured_leaf(spaces, std::move(u_family)), {});
    const std::size_t v = push(DecompNode{{}, LeafNode{LeafKind::bounded, 0}}, {});
    auto& s = std::get<SplitNode>(nodes[idx].content);
    s.u_child = u;
    s.v_child = v;
    return idx;
  };

  std::function<std::size_t(std::size_t)> lift = [&](std::size_t b_idx) -> std::size_t {
    const DecompNode& bnode = base.nodes[b_idx];
    if (bnode.is_leaf()) return lift_leaf(bnode.family);
    const auto& bsplit = std::get<SplitNode>(bnode.content);
    if (bsplit.style != ChildStyle::flattened) throw FdcError("base tree must be flattened");
    std::vector<Member> fam;
    SplitNode split{bsplit.scale, ChildStyle::flattened, {}, 0, 0};
    std::vector<std::vector<IndexAction>> acts;
    for (std::size_t b = 0; b < bnode.family.size(); ++b) {
      const Member& bm = bnode.family[b];
      if (!bm.blocks.empty()) throw FdcError("base tree members must not be coproducts");
      fam.push_back(Member{bm.space, preimage(bm.space, bm.points), {}});
      MemberSplit ms;
      for (const auto& pc : bsplit.splits[b].u_pieces) ms.u_pieces.push_back(preimage(bm.space, pc));
      for (const auto& pc : bsplit.splits[b].v_pieces) ms.v_pieces.push_back(preimage(bm.space, pc));
      acts.emplace_back(actions[bm.space].order(),
                        IndexAction{identity_perm(ms.u_pieces.size()), identity_perm(ms.v_pieces.size())});
      split.splits.push_back(std::move(ms));
    }
    const std::size_t idx = push(DecompNode{std::move(fam), split}, std::move(acts));
    const std::size_t u = lift(bsplit.u_child);
    const std::size_t v = lift(bsplit.v_child);
    auto& s = std::get<SplitNode>(nodes[idx].content);
    s.u_child = u;
    s.v_child = v;
    return idx;
  };
  lift(0);
  out.tree = DecompTree{spaces, std::move(nodes)};
  out.index_actions = std::move(index_actions);
  if (auto v = verify_equivariant(out); !v.ok()) throw FdcError("lifted decomposition does not verify: " + v.to_string());
  return out;
}

/// Equivariant view of an ordinary tree: trivial group on every member.
inline EquivariantDecomp trivially_equivariant(const DecompTree& tree) {
  EquivariantDecomp out;
  out.tree = tree;
  for (const auto& m : tree.root.members) out.actions.push_back(GroupAction::trivial(m));
  for (const auto& n : tree.nodes) {
    std::vector<std::vector<IndexAction>> acts;
    if (const auto* s = std::get_if<SplitNode>(&n.content)) {
      for (const auto& ms : s->splits) {
        Perm u(ms.u_pieces.size()), v(ms.v_pieces.size());
        std::iota(u.begin(), u.end(), 0);
        std::iota(v.begin(), v.end(), 0);
        acts.push_back({IndexAction{u, v}});
      }
    }
    out.index_actions.push_back(std::move(acts));
  }
  return out;
}

}  // namespace linfdc
