#pragma once

// Structured-text serialization of spaces, families, asdim certificates and
// decomposition trees, plus DOT export of trees.
//
// The format is a stream of whitespace-separated tokens. '#' starts a comment
// that runs to the end of the line. Strings are double-quoted, with a
// backslash escaping a quote or a backslash. Distances are integers or INF,
// and every list is preceded by its length. A two-point space:
//
//   space 2
//   labels "a" "b"
//   row 0
//   row 1 3
//
// Rows hold the lower triangle: row i lists d(i,0) .. d(i,i-1).

#include <cctype>
#include <cstddef>
#include <cstdint>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "linfdc/asdim.hpp"
#include "linfdc/ext_int.hpp"
#include "linfdc/fdc.hpp"
#include "linfdc/spaces.hpp"

namespace linfdc::io {

struct ParseError : std::runtime_error {
  ParseError(const std::string& what, std::size_t line, std::size_t col)
      : std::runtime_error("line " + std::to_string(line) + ", column " + std::to_string(col) + ": " + what),
        line(line),
        column(col) {}
  std::size_t line;
  std::size_t column;
};

class TokenReader {
 public:
  explicit TokenReader(std::string text) : s_(std::move(text)) {}

  bool at_end() {
    skip();
    return pos_ >= s_.size();
  }

  std::string next() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end of input");
    tok_line_ = line_;
    tok_col_ = col_;
    if (s_[pos_] == '"') return quoted();
    const std::size_t start = pos_;
    while (pos_ < s_.size() && !std::isspace(static_cast<unsigned char>(s_[pos_])) && s_[pos_] != '#') advance();
    return s_.substr(start, pos_ - start);
  }

  void expect(const std::string& word) {
    const std::string t = next();
    if (t != word) fail("expected '" + word + "', found '" + t + "'");
  }

  std::int64_t integer() {
    const std::string t = next();
    try {
      std::size_t used = 0;
      const long long v = std::stoll(t, &used);
      if (used != t.size()) throw std::invalid_argument(t);
      return v;
    } catch (const std::exception&) {
      fail("expected an integer, found '" + t + "'");
    }
  }

  std::size_t count() {
    const std::int64_t v = integer();
    if (v < 0) fail("expected a nonnegative count");
    return static_cast<std::size_t>(v);
  }

  ExtInt ext() {
    const std::string t = next();
    try {
      return parse_ext_int(t);
    } catch (const std::exception&) {
      fail("expected an integer or INF, found '" + t + "'");
    }
  }

  [[noreturn]] void fail(const std::string& what) const { throw ParseError(what, tok_line_, tok_col_); }

 private:
  void advance() {
    if (s_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void skip() {
    while (pos_ < s_.size()) {
      if (std::isspace(static_cast<unsigned char>(s_[pos_]))) {
        advance();
      } else if (s_[pos_] == '#') {
        while (pos_ < s_.size() && s_[pos_] != '\n') advance();
      } else {
        break;
      }
    }
  }

  std::string quoted() {
    advance();
    std::string out;
    while (true) {
      if (pos_ >= s_.size()) fail("unterminated string");
      const char c = s_[pos_];
      advance();
      if (c == '"') return out;
      if (c == '\\') {
        if (pos_ >= s_.size()) fail("unterminated escape");
        out.push_back(s_[pos_]);
        advance();
      } else {
        out.push_back(c);
      }
    }
  }

  std::string s_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t col_ = 1;
  std::size_t tok_line_ = 1;
  std::size_t tok_col_ = 1;
};

inline std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  return out + "\"";
}

// --- spaces and families ----------------------------------------------------

inline void write_space(std::ostream& os, const FinSpace& s) {
  os << "space " << s.size() << "\n";
  if (!s.labels().empty()) {
    os << "labels";
    for (const auto& l : s.labels()) os << " " << quote(l);
    os << "\n";
  }
  for (std::size_t i = 0; i < s.size(); ++i) {
    os << "row " << i;
    for (std::size_t j = 0; j < i; ++j) os << " " << s.d(i, j).to_string();
    os << "\n";
  }
}

inline FinSpace read_space(TokenReader& in) {
  in.expect("space");
  const std::size_t n = in.count();
  std::vector<std::string> labels;
  std::string t = n > 0 ? in.next() : "";
  if (t == "labels") {
    for (std::size_t i = 0; i < n; ++i) labels.push_back(in.next());
    t = n > 0 ? in.next() : "";
  }
  std::vector<ExtInt> d(n * n, ExtInt(0));
  for (std::size_t i = 0; i < n; ++i) {
    if (i > 0) t = in.next();
    if (t != "row") in.fail("expected 'row', found '" + t + "'");
    if (in.count() != i) in.fail("rows must appear in order");
    for (std::size_t j = 0; j < i; ++j) {
      const ExtInt v = in.ext();
      if (v < ExtInt(0)) in.fail("negative distance");
      d[i * n + j] = v;
      d[j * n + i] = v;
    }
  }
  return FinSpace(n, std::move(d), std::move(labels));
}

inline void write_family(std::ostream& os, const MetricFamily& f) {
  os << "family " << quote(f.label) << " " << f.size() << "\n";
  for (const auto& m : f.members) write_space(os, m);
}

inline MetricFamily read_family(TokenReader& in) {
  in.expect("family");
  std::string label = in.next();
  const std::size_t m = in.count();
  if (m == 0) in.fail("a family needs at least one member");
  std::vector<FinSpace> members;
  for (std::size_t i = 0; i < m; ++i) members.push_back(read_space(in));
  return MetricFamily(std::move(label), std::move(members));
}

// --- certificates -----------------------------------------------------------

inline void write_points(std::ostream& os, const PointSet& pts) {
  os << pts.size();
  for (auto x : pts) os << " " << x;
}

inline PointSet read_points(TokenReader& in) {
  PointSet pts(in.count());
  for (auto& x : pts) x = in.count();
  return pts;
}

inline void write_certificate(std::ostream& os, const AsdimCertificate& c) {
  os << "asdim n " << c.n << " r " << c.r << " bound " << c.bound.to_string() << " members " << c.members.size()
     << "\n";
  for (std::size_t m = 0; m < c.members.size(); ++m) {
    os << "member " << m << " pieces " << c.members[m].size() << "\n";
    for (const auto& pc : c.members[m]) {
      os << "piece " << pc.color << " ";
      write_points(os, pc.points);
      os << "\n";
    }
  }
}

inline AsdimCertificate read_certificate(TokenReader& in) {
  AsdimCertificate c;
  in.expect("asdim");
  in.expect("n");
  c.n = in.count();
  in.expect("r");
  c.r = in.integer();
  in.expect("bound");
  c.bound = in.ext();
  in.expect("members");
  c.members.resize(in.count());
  for (std::size_t m = 0; m < c.members.size(); ++m) {
    in.expect("member");
    if (in.count() != m) in.fail("members must appear in order");
    in.expect("pieces");
    c.members[m].resize(in.count());
    for (auto& pc : c.members[m]) {
      in.expect("piece");
      pc.color = in.count();
      pc.points = read_points(in);
    }
  }
  return c;
}

// --- decomposition trees ----------------------------------------------------

inline void write_member(std::ostream& os, const Member& m) {
  os << "member " << m.space << " ";
  write_points(os, m.points);
  os << " blocks " << m.blocks.size();
  for (auto b : m.blocks) os << " " << b;
  os << "\n";
}

inline Member read_member(TokenReader& in) {
  in.expect("member");
  Member m;
  m.space = in.count();
  m.points = read_points(in);
  in.expect("blocks");
  m.blocks.resize(in.count());
  for (auto& b : m.blocks) b = in.count();
  return m;
}

inline void write_tree(std::ostream& os, const DecompTree& t) {
  os << "fdc-tree nodes " << t.nodes.size() << "\n";
  write_family(os, t.root);
  for (std::size_t i = 0; i < t.nodes.size(); ++i) {
    const auto& n = t.nodes[i];
    os << "node " << i << " ";
    if (const auto* leaf = std::get_if<LeafNode>(&n.content)) {
      os << "leaf " << (leaf->kind == LeafKind::bounded ? "bounded" : "semi_bounded") << " " << leaf->bound;
    } else {
      const auto& s = std::get<SplitNode>(n.content);
      os << "split scale " << s.scale << " style " << (s.style == ChildStyle::flattened ? "flattened" : "coproduct")
         << " u " << s.u_child << " v " << s.v_child;
    }
    os << " family " << n.family.size() << "\n";
    for (const auto& m : n.family) write_member(os, m);
    if (const auto* s = std::get_if<SplitNode>(&n.content)) {
      for (const auto& ms : s->splits) {
        os << "split u " << ms.u_pieces.size() << " v " << ms.v_pieces.size() << "\n";
        for (const auto& pc : ms.u_pieces) {
          os << "piece u ";
          write_points(os, pc);
          os << "\n";
        }
        for (const auto& pc : ms.v_pieces) {
          os << "piece v ";
          write_points(os, pc);
          os << "\n";
        }
      }
    }
  }
}

inline DecompTree read_tree(TokenReader& in) {
  in.expect("fdc-tree");
  in.expect("nodes");
  const std::size_t count = in.count();
  DecompTree t;
  t.root = read_family(in);
  for (std::size_t i = 0; i < count; ++i) {
    in.expect("node");
    if (in.count() != i) in.fail("nodes must appear in order");
    DecompNode n;
    const std::string kind = in.next();
    if (kind == "leaf") {
      LeafNode leaf;
      const std::string lk = in.next();
      if (lk == "bounded") {
        leaf.kind = LeafKind::bounded;
      } else if (lk == "semi_bounded") {
        leaf.kind = LeafKind::semi_bounded;
      } else {
        in.fail("unknown leaf kind '" + lk + "'");
      }
      leaf.bound = in.integer();
      n.content = leaf;
    } else if (kind == "split") {
      SplitNode s;
      in.expect("scale");
      s.scale = in.integer();
      in.expect("style");
      const std::string st = in.next();
      if (st == "flattened") {
        s.style = ChildStyle::flattened;
      } else if (st == "coproduct") {
        s.style = ChildStyle::coproduct;
      } else {
        in.fail("unknown child style '" + st + "'");
      }
      in.expect("u");
      s.u_child = in.count();
      in.expect("v");
      s.v_child = in.count();
      n.content = s;
    } else {
      in.fail("expected 'leaf' or 'split', found '" + kind + "'");
    }
    in.expect("family");
    n.family.resize(in.count());
    for (auto& m : n.family) m = read_member(in);
    if (auto* s = std::get_if<SplitNode>(&n.content)) {
      s->splits.resize(n.family.size());
      for (auto& ms : s->splits) {
        in.expect("split");
        in.expect("u");
        ms.u_pieces.resize(in.count());
        in.expect("v");
        ms.v_pieces.resize(in.count());
        for (auto& pc : ms.u_pieces) {
          in.expect("piece");
          in.expect("u");
          pc = read_points(in);
        }
        for (auto& pc : ms.v_pieces) {
          in.expect("piece");
          in.expect("v");
          pc = read_points(in);
        }
      }
    }
    t.nodes.push_back(std::move(n));
  }
  return t;
}

template <class T, class Writer>
std::string to_text(const T& value, Writer&& writer) {
  std::ostringstream os;
  writer(os, value);
  return os.str();
}

inline std::string tree_to_text(const DecompTree& t) { return to_text(t, write_tree); }
inline std::string certificate_to_text(const AsdimCertificate& c) { return to_text(c, write_certificate); }
inline std::string family_to_text(const MetricFamily& f) { return to_text(f, write_family); }

inline DecompTree tree_from_text(const std::string& s) {
  TokenReader in(s);
  auto t = read_tree(in);
  if (!in.at_end()) in.fail("trailing input after tree");
  return t;
}

inline AsdimCertificate certificate_from_text(const std::string& s) {
  TokenReader in(s);
  auto c = read_certificate(in);
  if (!in.at_end()) in.fail("trailing input after certificate");
  return c;
}

inline MetricFamily family_from_text(const std::string& s) {
  TokenReader in(s);
  auto f = read_family(in);
  if (!in.at_end()) in.fail("trailing input after family");
  return f;
}

/// Graphviz rendering: one box per node, edges labelled U and V.
inline std::string to_dot(const DecompTree& t) {
  std::ostringstream os;
  os << "digraph fdc {\n  node [shape=box, fontname=\"monospace\"];\n";
  for (std::size_t i = 0; i < t.nodes.size(); ++i) {
    const auto& n = t.nodes[i];
    std::size_t points = 0;
    for (const auto& m : n.family) points += m.points.size();
    os << "  n" << i << " [label=\"node " << i << "\\nmembers " << n.family.size() << ", points " << points;
    if (const auto* leaf = std::get_if<LeafNode>(&n.content)) {
      os << "\\n" << (leaf->kind == LeafKind::bounded ? "bounded, diam <= " : "semi-bounded, finite d < ")
         << leaf->bound << "\", style=rounded];\n";
    } else {
      const auto& s = std::get<SplitNode>(n.content);
      os << "\\nsplit at r = " << s.scale << (s.style == ChildStyle::coproduct ? " (coproduct)" : "") << "\"];\n";
    }
  }
  for (std::size_t i = 0; i < t.nodes.size(); ++i) {
    if (const auto* s = std::get_if<SplitNode>(&t.nodes[i].content)) {
      os << "  n" << i << " -> n" << s->u_child << " [label=\"U\"];\n";
      os << "  n" << i << " -> n" << s->v_child << " [label=\"V\"];\n";
    }
  }
  os << "}\n";
  return os.str();
}

}  // namespace linfdc::io
