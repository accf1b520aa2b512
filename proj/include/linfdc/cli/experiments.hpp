#pragma once

// Experiments driven by a GroupSpec. Each produces a deterministic JSON report
// plus auxiliary text files (trees, certificates) referenced from the report by
// relative path. Only the "timestamp" metadata field varies between runs.

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <ctime>
#include <functional>
#include <iomanip>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "linfdc/asdim.hpp"
#include "linfdc/cli/spec.hpp"
#include "linfdc/equivariant.hpp"
#include "linfdc/fdc.hpp"
#include "linfdc/io/text_format.hpp"
#include "linfdc/norms.hpp"
#include "linfdc/spaces.hpp"
#include "linfdc/structure.hpp"

namespace linfdc::cli {

using Json = nlohmann::ordered_json;

enum ExitCode : int { exit_pass = 0, exit_verification_failed = 1, exit_budget_exceeded = 2, exit_input_error = 3 };

struct RunOptions {
  std::optional<std::size_t> radius;
  std::optional<std::size_t> cap;
  std::optional<std::vector<std::int64_t>> scales;
  std::uint64_t seed = 1;
};

struct Report {
  Json json;
  int exit_code = exit_pass;
  std::vector<std::pair<std::string, std::string>> files;  ///< relative path, content
};

inline const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> names = {"balls",         "axioms",       "quotient-family",
                                                 "asdim-scan",    "fdc-pipeline", "th-factorize",
                                                 "triangularize", "hirsch",       "equivariant"};
  return names;
}

inline std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

inline std::string verdict_text(const Verdict& v) { return v.ok() ? "pass" : v.to_string(); }

/// Random element of GL_n(F_p(t)): entries are polynomials of degree <=
/// max_degree, each divided by a random nonzero polynomial with probability
/// 1/2. Resamples singular draws. Uses raw engine output only, so a seed
/// yields the same matrix on every platform.
inline GroupElement random_group_element(std::mt19937_64& rng, std::uint64_t p, std::size_t n,
                                         std::size_t max_degree) {
  const auto poly = [&](bool nonzero) {
    while (true) {
      const std::size_t deg = static_cast<std::size_t>(rng() % (max_degree + 1));
      std::vector<std::uint64_t> c(deg + 1);
      for (auto& x : c) x = rng() % p;
      Poly f(p, c);
      if (!nonzero || !f.is_zero()) return f;
    }
  };
  while (true) {
    std::vector<RatFunc> entries;
    for (std::size_t i = 0; i < n * n; ++i) {
      Poly num = poly(false);
      if (rng() % 2 == 0) {
        entries.emplace_back(std::move(num));
      } else {
        entries.emplace_back(std::move(num), poly(true));
      }
    }
    try {
      return GroupElement(Matrix(p, n, n, std::move(entries)));
    } catch (const SingularMatrix&) {
    }
  }
}

namespace detail {

struct Context {
  const GroupSpec& spec;
  const RunOptions& opt;
  MetricProfile profile;
  std::size_t radius;
  std::size_t cap;
  std::vector<std::int64_t> scales;
  Report report;
  std::optional<GroupWindow> window_cache;

  Context(const GroupSpec& s, const RunOptions& o)
      : spec(s),
        opt(o),
        profile(s.profile()),
        radius(o.radius.value_or(s.radius)),
        cap(o.cap.value_or(s.cap)),
        scales(o.scales.value_or(s.scales)) {}

  const GroupWindow& window() {
    if (!window_cache) window_cache = ball_space(spec.generator_elements(), radius, profile, cap);
    return *window_cache;
  }

  ExtInt piece_bound() const { return spec.piece_bound ? ExtInt(*spec.piece_bound) : ExtInt::infinity(); }

  void fail() { report.exit_code = exit_verification_failed; }
};

inline Json ext_json(ExtInt x) { return x.is_finite() ? Json(x.value()) : Json("INF"); }

struct SubgroupWindow {
  std::string name;
  GroupWindow window;
  GroupAction action;
  QuotientSpace quotient;
};

inline std::vector<SubgroupWindow> subgroup_windows(Context& ctx) {
  std::vector<SubgroupWindow> out;
  for (const auto& sg : ctx.spec.subgroups) {
    GroupWindow w = left_saturate(ctx.window(), sg.elements, ctx.profile, ctx.cap);
    GroupAction act = left_multiplication_action(w, sg.elements);
    QuotientSpace q = quotient(w.space, act);
    out.push_back({sg.name, std::move(w), std::move(act), std::move(q)});
  }
  return out;
}

inline void run_balls(Context& ctx) {
  const auto& w = ctx.window();
  Json growth = Json::array();
  for (std::size_t k = 0; k <= ctx.radius; ++k) {
    std::size_t count = 0;
    for (auto l : w.word_length) count += (l >= 0 && static_cast<std::size_t>(l) <= k) ? 1 : 0;
    growth.push_back({{"radius", k}, {"size", count}});
  }
  std::vector<std::int64_t> max_coord(ctx.profile.size(), 0);
  std::int64_t max_len = 0;
  for (const auto& g : w.elements) {
    const auto l = length(g, ctx.profile);
    for (std::size_t i = 0; i < l.units.size(); ++i) max_coord[i] = std::max(max_coord[i], l.units[i]);
    max_len = std::max(max_len, l.total());
  }
  Json norms = Json::array();
  for (std::size_t i = 0; i < ctx.profile.size(); ++i) {
    norms.push_back({{"norm", ctx.profile.norms()[i].name()}, {"max_length", max_coord[i]}});
  }
  std::map<std::int64_t, std::size_t> hist;
  for (const auto& g : w.elements) ++hist[length(g, ctx.profile).total()];
  Json histogram = Json::array();
  for (auto [l, c] : hist) histogram.push_back({{"length", l}, {"count", c}});
  ctx.report.json["results"] = {{"window_size", w.elements.size()},
                                {"growth", growth},
                                {"max_length", max_len},
                                {"per_norm", norms},
                                {"length_histogram", histogram},
                                {"diameter", ext_json(diameter(w.space))}};
}

inline void run_axioms(Context& ctx) {
  const auto& w = ctx.window();
  const std::size_t n = w.elements.size();
  std::vector<LengthValue> len;
  for (const auto& g : w.elements) len.push_back(length(g, ctx.profile));
  std::optional<std::string> violation;
  std::size_t pairs = 0;
  const auto e = GroupElement::identity(ctx.spec.p, ctx.spec.n);
  if (length(e, ctx.profile).total() != 0) violation = "l(e) != 0";
  for (std::size_t i = 0; i < n && !violation; ++i) {
    if (!(length(w.elements[i].inverse(), ctx.profile) == len[i])) violation = "l(g^-1) != l(g) at g" + std::to_string(i);
  }
  for (std::size_t i = 0; i < n && !violation; ++i) {
    for (std::size_t j = 0; j < n && !violation; ++j) {
      const auto lij = length(w.elements[i] * w.elements[j], ctx.profile);
      for (std::size_t k = 0; k < lij.units.size(); ++k) {
        if (lij.units[k] > len[i].units[k] + len[j].units[k]) {
          violation = "l(gh) > l(g) + l(h) at (g" + std::to_string(i) + ", g" + std::to_string(j) + ") for norm " +
                      ctx.profile.norms()[k].name();
        }
      }
      ++pairs;
    }
  }
  const auto tri = w.space.triangle_violation();
  // distinct matrix entries of window elements (first 64) as norm samples
  std::vector<RatFunc> entries;
  std::set<std::string> seen;
  for (const auto& g : w.elements) {
    for (const auto& m : {g.mat(), g.inv()}) {
      for (const auto& x : m.entries()) {
        if (entries.size() < 64 && seen.insert(x.to_string()).second) entries.push_back(x);
      }
    }
  }
  std::vector<std::pair<RatFunc, RatFunc>> samples;
  for (const auto& x : entries) {
    for (const auto& y : entries) samples.emplace_back(x, y);
  }
  Json norms = Json::array();
  bool norms_ok = true;
  for (const auto& ns : ctx.profile.norms()) {
    const auto rep = norm_axiom_check(ns, samples);
    norms_ok = norms_ok && rep.ok();
    norms.push_back({{"norm", ns.name()}, {"pairs_checked", rep.pairs_checked}, {"verdict", rep.ok() ? "pass" : *rep.violation}});
  }
  const bool ok = !violation && !tri && norms_ok;
  if (!ok) ctx.fail();
  ctx.report.json["results"] = {
      {"window_size", n},
      {"length_axioms", {{"pairs_checked", pairs}, {"verdict", violation ? *violation : "pass"}}},
      {"triangle_inequality",
       {{"triples_checked", n * n * n},
        {"verdict", tri ? "violated at (" + std::to_string((*tri)[0]) + "," + std::to_string((*tri)[1]) + "," +
                              std::to_string((*tri)[2]) + ")"
                        : "pass"}}},
      {"norm_axioms", norms},
      {"verdict", ok ? "pass" : "fail"}};
}

inline void run_quotient_family(Context& ctx) {
  Json rows = Json::array();
  bool ok = true;
  for (auto& sw : subgroup_windows(ctx)) {
    Json per_scale = Json::array();
    for (auto R : ctx.scales) {
      const auto total = r_components(sw.window.space, R);
      const auto quot = r_components(sw.quotient.space, R);
      const bool holds = quot.max_diameter <= total.max_diameter;
      ok = ok && holds;
      per_scale.push_back({{"R", R},
                           {"total_components", total.blocks.size()},
                           {"total_max_diameter", ext_json(total.max_diameter)},
                           {"quotient_components", quot.blocks.size()},
                           {"quotient_max_diameter", ext_json(quot.max_diameter)},
                           {"quotient_le_total", holds}});
    }
    rows.push_back({{"subgroup", sw.name},
                    {"order", sw.action.order()},
                    {"saturated_window", sw.window.elements.size()},
                    {"orbits", sw.quotient.orbits.size()},
                    {"scales", per_scale}});
  }
  if (!ok) ctx.fail();
  ctx.report.json["results"] = {{"window_size", ctx.window().elements.size()}, {"subgroups", rows},
                                {"verdict", ok ? "pass" : "fail"}};
}

inline Json asdim_entry(Context& ctx, const MetricFamily& fam, std::int64_t r, const std::string& file) {
  const auto cert = greedy_asdim(fam, r, ctx.spec.n_max, ctx.piece_bound());
  if (!cert) return {{"r", r}, {"result", "no certificate found at budget"}};
  ctx.report.files.emplace_back(file, io::certificate_to_text(*cert));
  std::size_t pieces = 0;
  for (const auto& m : cert->members) pieces += m.size();
  return {{"r", r}, {"n", cert->n}, {"bound", ext_json(cert->bound)}, {"pieces", pieces},
          {"verdict", verdict_text(verify_asdim(*cert, fam))}, {"certificate", file}};
}

inline void run_asdim_scan(Context& ctx) {
  const MetricFamily window_family("window", {ctx.window().space});
  Json win = Json::array();
  for (auto r : ctx.scales) win.push_back(asdim_entry(ctx, window_family, r, "certificates/window_r" + std::to_string(r) + ".txt"));
  Json res = {{"window_size", ctx.window().elements.size()}, {"n_max", ctx.spec.n_max},
              {"piece_bound", ctx.spec.piece_bound ? Json(*ctx.spec.piece_bound) : Json("none")}, {"window", win}};
  if (!ctx.spec.subgroups.empty()) {
    std::vector<FinSpace> qs;
    for (auto& sw : subgroup_windows(ctx)) qs.push_back(sw.quotient.space);
    const MetricFamily qfam("quotients", std::move(qs));
    Json q = Json::array();
    for (auto r : ctx.scales) q.push_back(asdim_entry(ctx, qfam, r, "certificates/quotients_r" + std::to_string(r) + ".txt"));
    res["quotient_family"] = q;
  }
  ctx.report.json["results"] = res;
}

/// Window plus its quotients by the declared subgroups.
inline MetricFamily pipeline_family(Context& ctx, std::vector<SubgroupWindow>& sws) {
  std::vector<FinSpace> members = {ctx.window().space};
  for (auto& sw : sws) members.push_back(sw.quotient.space);
  return MetricFamily("window and quotients", std::move(members));
}

inline Json tree_entry(Context& ctx, const DecompTree& tree, std::int64_t r, Json extra) {
  const std::string file = "trees/fdc_r" + std::to_string(r) + ".txt";
  ctx.report.files.emplace_back(file, io::tree_to_text(tree));
  const Verdict v = verify_fdc(tree);
  if (!v.ok()) ctx.fail();
  std::size_t leaves = 0;
  for (const auto& n : tree.nodes) leaves += n.is_leaf() ? 1 : 0;
  Json out = {{"r", r}, {"depth", tree.depth()}, {"nodes", tree.nodes.size()}, {"leaves", leaves},
              {"verdict", verdict_text(v)}, {"tree", file}};
  for (auto& [k, val] : extra.items()) out[k] = val;
  return out;
}

/// Diagonal valuation vector of an upper triangular element for `spec`.
inline std::optional<std::vector<std::int64_t>> diagonal_exponents(const GroupElement& g, const NormSpec& spec) {
  const Matrix& m = g.mat();
  std::vector<std::int64_t> out;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (!m(i, j).is_zero()) return std::nullopt;
    }
    out.push_back(valuation(m(i, i), spec).value());
  }
  return out;
}

inline void run_fdc_pipeline(Context& ctx) {
  auto sws = subgroup_windows(ctx);
  const MetricFamily fam = pipeline_family(ctx, sws);
  Json rows = Json::array();
  if (ctx.spec.pipeline == "asdim") {
    for (auto r : ctx.scales) {
      const auto cert = greedy_asdim(fam, r, ctx.spec.n_max, ctx.piece_bound());
      if (!cert) {
        rows.push_back({{"r", r}, {"result", "no certificate found at budget"}});
        continue;
      }
      rows.push_back(tree_entry(ctx, asdim_to_fdc(*cert, fam), r, {{"asdim_n", cert->n}}));
    }
  } else {
    // fibering over the diagonal: F\T -> D, D a window of Z^n with the max metric
    const NormSpec& ns = ctx.profile.norms().front();
    std::vector<std::vector<std::int64_t>> coords;
    std::map<std::vector<std::int64_t>, std::size_t> index;
    FamilyMap map;
    for (std::size_t a = 0; a < fam.size(); ++a) {
      const std::vector<GroupElement>& elems = a == 0 ? ctx.window().elements : sws[a - 1].window.elements;
      std::vector<std::size_t> img;
      for (std::size_t x = 0; x < fam.members[a].size(); ++x) {
        const GroupElement& rep = a == 0 ? elems[x] : elems[sws[a - 1].quotient.orbits[x].front()];
        const auto k = diagonal_exponents(rep, ns);
        if (!k) throw std::invalid_argument("fibering pipeline needs upper triangular generators");
        const auto [it, fresh] = index.emplace(*k, coords.size());
        if (fresh) coords.push_back(*k);
        img.push_back(it->second);
      }
      map.target.push_back(0);
      map.points.push_back(std::move(img));
    }
    std::vector<std::string> labels;
    for (const auto& k : coords) {
      std::string s = "(";
      for (std::size_t i = 0; i < k.size(); ++i) s += (i ? "," : "") + std::to_string(k[i]);
      labels.push_back(s + ")");
    }
    const FinSpace D = FinSpace::from_function(
        coords.size(),
        [&](std::size_t i, std::size_t j) {
          std::int64_t d = 0;
          for (std::size_t c = 0; c < coords[i].size(); ++c) d = std::max(d, std::abs(coords[i][c] - coords[j][c]));
          return ExtInt(d);
        },
        labels);
    const MetricFamily target("diagonal window", {D});
    for (auto r : ctx.scales) {
      const auto base_cert = brick_asdim(target, {coords}, r);
      const DecompTree base = asdim_to_fdc(base_cert, target);
      try {
        auto res = fibering_decompose(fam, map, base, r, greedy_strategy(r, ctx.spec.n_max, ctx.piece_bound()));
        rows.push_back(tree_entry(ctx, res.tree, r,
                                  {{"diagonal_points", coords.size()},
                                   {"base_depth", base.depth()},
                                   {"modulus_at_r", ext_json(res.modulus_at_scale)},
                                   {"fiber_leaves", res.fiber_leaves}}));
      } catch (const FdcError& e) {
        rows.push_back({{"r", r}, {"result", std::string("no certificate found at budget: ") + e.what()}});
      }
    }
  }
  ctx.report.json["results"] = {{"pipeline", ctx.spec.pipeline},
                                {"family_sizes",
                                 [&] {
                                   Json s = Json::array();
                                   for (const auto& m : fam.members) s.push_back(m.size());
                                   return s;
                                 }()},
                                {"note", "finite-depth witnesses on finite windows at the listed scales"},
                                {"scales", rows}};
}

inline Json th_entry(const THFactorization& f, const NormSpec& ns, bool with_matrices) {
  Json out = {{"norm", ns.name()}, {"verdict", th_check(f, ns) ? *th_check(f, ns) : "pass"}};
  Json ex = Json::array();
  for (auto e : f.exponents) ex.push_back(e);
  out["diagonal_exponents"] = ex;
  if (with_matrices) {
    out["t"] = f.t.mat().to_string();
    out["h"] = f.h.mat().to_string();
  }
  return out;
}

inline void run_th_factorize(Context& ctx) {
  Json gens = Json::array();
  bool ok = true;
  for (const auto& g : ctx.spec.generators) {
    Json per = Json::array();
    for (const auto& ns : ctx.profile.norms()) {
      const auto f = th_factorize(g.element, ns);
      ok = ok && !th_check(f, ns);
      per.push_back(th_entry(f, ns, true));
    }
    gens.push_back({{"generator", g.name}, {"factorizations", per}});
  }
  std::mt19937_64 rng(ctx.opt.seed);
  std::size_t verified = 0;
  std::int64_t max_exp = 0;
  for (std::size_t s = 0; s < ctx.spec.samples; ++s) {
    const GroupElement g = random_group_element(rng, ctx.spec.p, ctx.spec.n, ctx.spec.max_degree);
    for (const auto& ns : ctx.profile.norms()) {
      const auto f = th_factorize(g, ns);
      if (th_check(f, ns)) {
        ok = false;
      } else {
        ++verified;
      }
      for (auto e : f.exponents) max_exp = std::max(max_exp, std::abs(e));
    }
  }
  if (!ok) ctx.fail();
  ctx.report.json["results"] = {{"generators", gens},
                                {"random_samples",
                                 {{"seed", ctx.opt.seed},
                                  {"count", ctx.spec.samples},
                                  {"max_degree", ctx.spec.max_degree},
                                  {"factorizations_verified", verified},
                                  {"max_abs_exponent", max_exp}}},
                                {"verdict", ok ? "pass" : "fail"}};
}

inline void run_triangularize(Context& ctx) {
  Json rows = Json::array();
  for (const auto& sg : ctx.spec.subgroups) {
    const auto res = triangularize_unipotent(sg.elements);
    Json row = {{"subgroup", sg.name}, {"order", sg.elements.size()}};
    if (res.conjugator) {
      row["result"] = "triangularized";
      row["conjugator"] = res.conjugator->to_string();
      Json conj = Json::array();
      const Matrix P_inv = inverse(*res.conjugator);
      for (const auto& f : sg.elements) conj.push_back((P_inv * f.mat() * *res.conjugator).to_string());
      row["conjugates"] = conj;
    } else {
      row["result"] = "not unipotent";
      row["diagnostic"] = res.diagnostic;
    }
    rows.push_back(row);
  }
  ctx.report.json["results"] = {{"subgroups", rows}};
}

inline void run_hirsch(Context& ctx) {
  Json rows = Json::array();
  std::vector<SolvableCandidate> cands;
  for (const auto& s : ctx.spec.series) {
    Json factors = Json::array();
    for (const auto& f : s.series.factors) {
      factors.push_back({{"generators", f.generators}, {"relations", f.relations.size()}, {"rank", factor_rank(f)}});
    }
    rows.push_back({{"series", s.name}, {"factors", factors}, {"hirsch_rank", hirsch_rank(s.series)}});
    cands.push_back({s.name, s.generators, s.series});
  }
  Json res = {{"series", rows}};
  if (ctx.spec.hirsch_bound) {
    const auto probe = solvable_bound_probe(cands, *ctx.spec.hirsch_bound);
    Json per = Json::array();
    for (const auto& c : probe.candidates) per.push_back({{"series", c.name}, {"rank", c.rank}, {"pass", c.pass}});
    res["bound"] = {{"N", probe.bound}, {"candidates", per}, {"verdict", probe.pass() ? "pass" : "fail"}};
    if (!probe.pass()) ctx.fail();
  }
  ctx.report.json["results"] = res;
}

inline void run_equivariant(Context& ctx) {
  auto sws = subgroup_windows(ctx);
  if (sws.empty()) {
    ctx.report.json["results"] = {{"note", "no subgroups declared"}};
    return;
  }
  std::vector<FinSpace> spaces;
  std::vector<FinSpace> quots;
  std::vector<GroupAction> actions;
  for (auto& sw : sws) {
    spaces.push_back(sw.window.space);
    quots.push_back(sw.quotient.space);
    actions.push_back(sw.action);
  }
  const MetricFamily X("saturated windows", spaces);
  const MetricFamily Q("quotients", quots);
  Json rows = Json::array();
  for (auto r : ctx.scales) {
    const auto cert = greedy_asdim(Q, r, ctx.spec.n_max, ctx.piece_bound());
    if (!cert) {
      rows.push_back({{"r", r}, {"result", "no certificate found at budget"}});
      continue;
    }
    const auto ed = equivariant_lift(X, actions, asdim_to_fdc(*cert, Q), r);
    const Verdict v = verify_equivariant(ed);
    std::int64_t measured = 0;
    std::int64_t chain = 0;
    std::int64_t base_diam = 0;
    for (const auto& c : ed.cosets) {
      measured = std::max(measured, c.measured_diameter);
      chain = std::max(chain, c.chain_bound);
      base_diam = std::max(base_diam, c.base_diameter);
    }
    const bool within = measured <= chain;
    if (!v.ok() || !within) ctx.fail();
    const std::string file = "trees/equivariant_r" + std::to_string(r) + ".txt";
    ctx.report.files.emplace_back(file, io::tree_to_text(ed.tree));
    rows.push_back({{"r", r},
                    {"k", ed.k},
                    {"coset_splits", ed.cosets.size()},
                    {"max_representative_diameter", base_diam},
                    {"max_piece_diameter", measured},
                    {"chain_bound", chain},
                    {"k_times_r", static_cast<std::int64_t>(ed.k) * r},
                    {"verdict", verdict_text(v)},
                    {"tree", file}});
  }
  Json orders = Json::array();
  for (auto& sw : sws) orders.push_back({{"subgroup", sw.name}, {"order", sw.action.order()}, {"points", sw.window.elements.size()}});
  ctx.report.json["results"] = {{"actions", orders}, {"scales", rows}};
}

}  // namespace detail

/// Runs one experiment. Cap overruns yield exit code 2; malformed experiment
/// names or inputs throw std::invalid_argument.
inline Report run_experiment(const GroupSpec& spec, const std::string& experiment, const RunOptions& opt = {}) {
  static const std::map<std::string, std::function<void(detail::Context&)>> table = {
      {"balls", detail::run_balls},
      {"axioms", detail::run_axioms},
      {"quotient-family", detail::run_quotient_family},
      {"asdim-scan", detail::run_asdim_scan},
      {"fdc-pipeline", detail::run_fdc_pipeline},
      {"th-factorize", detail::run_th_factorize},
      {"triangularize", detail::run_triangularize},
      {"hirsch", detail::run_hirsch},
      {"equivariant", detail::run_equivariant}};
  const auto it = table.find(experiment);
  if (it == table.end()) throw std::invalid_argument("unknown experiment '" + experiment + "'");
  detail::Context ctx(spec, opt);
  Json scales = Json::array();
  for (auto r : ctx.scales) scales.push_back(r);
  ctx.report.json["metadata"] = {{"tool", "linfdc"},
                                 {"experiment", experiment},
                                 {"spec_hash", spec_hash(spec)},
                                 {"field", {{"p", spec.p}, {"n", spec.n}}},
                                 {"norms",
                                  [&] {
                                    Json a = Json::array();
                                    for (const auto& ns : spec.norms) a.push_back(ns.name());
                                    return a;
                                  }()},
                                 {"window", {{"radius", ctx.radius}, {"cap", ctx.cap}}},
                                 {"scales", scales},
                                 {"seed", opt.seed},
                                 {"timestamp", utc_timestamp()}};
  try {
    it->second(ctx);
    ctx.report.json["status"] = ctx.report.exit_code == exit_pass ? "pass" : "verification failed";
  } catch (const WindowCapExceeded& e) {
    ctx.report.exit_code = exit_budget_exceeded;
    ctx.report.json["status"] = "budget exceeded";
    ctx.report.json["error"] = e.what();
    ctx.report.files.clear();
  }
  return std::move(ctx.report);
}

}  // namespace linfdc::cli
