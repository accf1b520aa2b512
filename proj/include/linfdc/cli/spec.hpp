#pragma once

// Group specification files. A spec is line oriented with named sections;
// '#' starts a comment.
//
//   [field]            p = <prime>        n = <dimension>
//   [generators]       <name> = <matrix>
//   [norms]            t_adic | degree | place <polynomial>      (one per line)
//   [subgroup NAME]    element <matrix or word>                  (closed list)
//   [series NAME]      factor <g> | relation <ints> | generator <matrix or word>
//   [window]           radius = <k>       cap = <points>
//   [scales]           ladder = <r1> <r2> ...
//   [decomposition]    n_max = <n>        bound = <d> | none     pipeline = asdim | fibering
//   [hirsch]           bound = <N>
//   [sampling]         samples = <count>  max_degree = <d>
//
// A word is a product of generator names with optional integer powers, e.g.
// "a*b^-1*a"; "e" is the identity.

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "linfdc/algebra/matrix.hpp"
#include "linfdc/cli/expr.hpp"
#include "linfdc/norms.hpp"
#include "linfdc/spaces.hpp"
#include "linfdc/structure.hpp"

namespace linfdc::cli {

struct NamedElement {
  std::string name;
  GroupElement element;
};

struct SubgroupSpec {
  std::string name;
  std::vector<GroupElement> elements;
};

struct SeriesSpec {
  std::string name;
  NormalSeries series;
  std::vector<GroupElement> generators;
};

struct GroupSpec {
  std::uint64_t p = 0;
  std::size_t n = 0;
  std::vector<NamedElement> generators;
  std::vector<NormSpec> norms;
  std::vector<SubgroupSpec> subgroups;
  std::vector<SeriesSpec> series;
  std::size_t radius = 2;
  std::size_t cap = 20000;
  std::vector<std::int64_t> scales = {1, 2, 4};
  std::size_t n_max = 3;
  std::optional<std::int64_t> piece_bound;
  std::string pipeline = "asdim";
  std::optional<std::size_t> hirsch_bound;
  std::size_t samples = 20;
  std::size_t max_degree = 3;

  MetricProfile profile() const { return MetricProfile(norms); }

  std::vector<GroupElement> generator_elements() const {
    std::vector<GroupElement> out;
    for (const auto& g : generators) out.push_back(g.element);
    return out;
  }
};

namespace detail {

inline std::string trim(const std::string& s) {
  std::size_t a = 0;
  std::size_t b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

inline bool is_identifier(const std::string& s) {
  if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
  return std::all_of(s.begin(), s.end(), [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; });
}

struct Line {
  std::string text;  ///< comment stripped, trimmed
  std::size_t number = 0;
  std::size_t column = 1;  ///< column of text[0]
};

inline std::vector<Line> split_lines(const std::string& text) {
  std::vector<Line> out;
  std::istringstream in(text);
  std::string raw;
  std::size_t number = 0;
  while (std::getline(in, raw)) {
    ++number;
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    std::size_t lead = 0;
    while (lead < raw.size() && std::isspace(static_cast<unsigned char>(raw[lead]))) ++lead;
    std::string t = trim(raw);
    if (!t.empty()) out.push_back({t, number, lead + 1});
  }
  return out;
}

class SpecParser {
 public:
  explicit SpecParser(const std::string& text) : lines_(split_lines(text)) {}

  GroupSpec parse() {
    std::string section;
    std::string section_arg;
    for (const auto& line : lines_) {
      cur_ = &line;
      if (line.text.front() == '[') {
        if (line.text.back() != ']') fail("unterminated section header", 0);
        const std::string inner = trim(line.text.substr(1, line.text.size() - 2));
        const auto sp = inner.find(' ');
        section = inner.substr(0, sp);
        section_arg = sp == std::string::npos ? "" : trim(inner.substr(sp + 1));
        open_section(section, section_arg);
        continue;
      }
      if (section.empty()) fail("content before the first section", 0);
      handle(section, line);
    }
    cur_ = nullptr;
    finish();
    return spec_;
  }

 private:
  [[noreturn]] void fail(const std::string& what, std::size_t offset) const {
    if (!cur_) throw ParseError(what, lines_.empty() ? 1 : lines_.back().number, 1);
    throw ParseError(what, cur_->number, cur_->column + offset);
  }

  void require_field() {
    if (spec_.p == 0 || spec_.n == 0) fail("[field] with p and n must come first", 0);
  }

  void open_section(const std::string& name, const std::string& arg) {
    static const std::set<std::string> plain = {"field", "generators", "norms",  "window", "scales",
                                                "decomposition", "hirsch", "sampling"};
    if (name == "subgroup" || name == "series") {
      require_field();
      if (!is_identifier(arg)) fail("section [" + name + "] needs a name", 1);
      for (const auto& s : spec_.subgroups) {
        if (name == "subgroup" && s.name == arg) fail("duplicate subgroup '" + arg + "'", 1);
      }
      for (const auto& s : spec_.series) {
        if (name == "series" && s.name == arg) fail("duplicate series '" + arg + "'", 1);
      }
      if (name == "subgroup") spec_.subgroups.push_back({arg, {}});
      if (name == "series") spec_.series.push_back({arg, {}, {}});
      return;
    }
    if (!plain.contains(name)) fail("unknown section [" + name + "]", 1);
    if (!arg.empty()) fail("section [" + name + "] takes no name", 1);
    if (name != "field") require_field();
  }

  std::pair<std::string, std::string> key_value(const Line& line) {
    const auto eq = line.text.find('=');
    if (eq == std::string::npos) fail("expected 'key = value'", 0);
    return {trim(line.text.substr(0, eq)), line.text.substr(eq + 1)};
  }

  std::size_t value_offset(const Line& line) const {
    const auto eq = line.text.find('=');
    std::size_t off = eq + 1;
    while (off < line.text.size() && std::isspace(static_cast<unsigned char>(line.text[off]))) ++off;
    return off;
  }

  std::int64_t integer(const std::string& text, std::size_t offset) {
    const std::string t = trim(text);
    try {
      std::size_t used = 0;
      const long long v = std::stoll(t, &used);
      if (used != t.size()) throw std::invalid_argument(t);
      return v;
    } catch (const std::exception&) {
      fail("expected an integer, found '" + t + "'", offset);
    }
  }

  std::size_t positive(const std::string& text, std::size_t offset, const std::string& what) {
    const std::int64_t v = integer(text, offset);
    if (v <= 0) fail(what + " must be positive", offset);
    return static_cast<std::size_t>(v);
  }

  std::vector<std::string> words(const std::string& text) {
    std::istringstream in(text);
    std::vector<std::string> out;
    for (std::string w; in >> w;) out.push_back(w);
    return out;
  }

  GroupElement element(const std::string& text, std::size_t offset) {
    const std::string t = trim(text);
    if (!t.empty() && t.front() == '[') {
      Matrix m = [&] {
        try {
          return ExprParser(t, spec_.p, cur_->number, cur_->column + offset).parse_matrix(spec_.n);
        } catch (const AlgebraError& e) {
          fail(e.what(), offset);
        }
      }();
      try {
        return GroupElement(m);
      } catch (const SingularMatrix&) {
        fail("singular matrix " + m.to_string(), offset);
      }
    }
    return word(t, offset);
  }

  GroupElement word(const std::string& t, std::size_t offset) {
    GroupElement acc = GroupElement::identity(spec_.p, spec_.n);
    if (t == "e") return acc;
    std::size_t i = 0;
    bool expect_factor = true;
    while (i < t.size()) {
      if (std::isspace(static_cast<unsigned char>(t[i]))) {
        ++i;
        continue;
      }
      if (t[i] == '*') {
        if (expect_factor) fail("unexpected '*' in word", offset + i);
        expect_factor = true;
        ++i;
        continue;
      }
      const std::size_t start = i;
      while (i < t.size() && (std::isalnum(static_cast<unsigned char>(t[i])) || t[i] == '_')) ++i;
      const std::string name = t.substr(start, i - start);
      if (name.empty()) fail("unexpected '" + std::string(1, t[i]) + "' in word", offset + i);
      const auto it = std::find_if(spec_.generators.begin(), spec_.generators.end(),
                                   [&](const NamedElement& g) { return g.name == name; });
      if (it == spec_.generators.end()) fail("unknown generator '" + name + "'", offset + start);
      long e = 1;
      if (i < t.size() && t[i] == '^') {
        ++i;
        const std::size_t es = i;
        if (i < t.size() && t[i] == '-') ++i;
        while (i < t.size() && std::isdigit(static_cast<unsigned char>(t[i]))) ++i;
        if (es == i || t.substr(es, i - es) == "-") fail("expected an exponent", offset + es);
        e = std::stol(t.substr(es, i - es));
      }
      const GroupElement base = e < 0 ? it->element.inverse() : it->element;
      for (long k = 0; k < (e < 0 ? -e : e); ++k) acc = acc * base;
      expect_factor = false;
    }
    if (expect_factor) fail("empty word", offset);
    return acc;
  }

  void handle(const std::string& section, const Line& line) {
    if (section == "field") {
      auto [k, v] = key_value(line);
      if (k == "p") {
        const std::int64_t p = integer(v, value_offset(line));
        if (p < 2 || !is_prime(static_cast<std::uint64_t>(p))) fail("p = " + trim(v) + " is not prime", value_offset(line));
        spec_.p = static_cast<std::uint64_t>(p);
      } else if (k == "n") {
        spec_.n = positive(v, value_offset(line), "n");
      } else {
        fail("unknown key '" + k + "' in [field]", 0);
      }
    } else if (section == "generators") {
      auto [k, v] = key_value(line);
      if (!is_identifier(k) || k == "t" || k == "e") fail("invalid generator name '" + k + "'", 0);
      for (const auto& g : spec_.generators) {
        if (g.name == k) fail("duplicate generator '" + k + "'", 0);
      }
      spec_.generators.push_back({k, element(v, value_offset(line))});
    } else if (section == "norms") {
      const auto w = words(line.text);
      NormSpec ns = NormSpec::t_adic();
      if (line.text == "t_adic") {
        ns = NormSpec::t_adic();
      } else if (line.text == "degree") {
        ns = NormSpec::degree();
      } else if (w.front() == "place") {
        const std::size_t off = line.text.find("place") + 5;
        const RatFunc f = [&] { return ExprParser(line.text.substr(off), spec_.p, line.number, line.column + off).parse_all(); }();
        if (!f.is_polynomial() || f.num().degree() < 1) fail("a place must be a nonconstant polynomial", off);
        try {
          ns = NormSpec::finite_place(f.num());
        } catch (const AlgebraError& e) {
          fail(e.what(), off);
        }
      } else {
        fail("unknown norm '" + line.text + "'", 0);
      }
      if (std::find(spec_.norms.begin(), spec_.norms.end(), ns) != spec_.norms.end()) fail("duplicate norm", 0);
      spec_.norms.push_back(ns);
    } else if (section == "subgroup") {
      if (line.text.rfind("element", 0) != 0) fail("expected 'element <matrix or word>'", 0);
      spec_.subgroups.back().elements.push_back(element(line.text.substr(7), 7));
    } else if (section == "series") {
      auto& s = spec_.series.back();
      const auto w = words(line.text);
      if (w.front() == "factor") {
        if (w.size() != 2) fail("expected 'factor <generator count>'", 0);
        s.series.factors.push_back({static_cast<std::size_t>(integer(w[1], 7)), {}});
      } else if (w.front() == "relation") {
        if (s.series.factors.empty()) fail("relation before any factor", 0);
        auto& f = s.series.factors.back();
        std::vector<std::int64_t> row;
        for (std::size_t i = 1; i < w.size(); ++i) row.push_back(integer(w[i], 9));
        if (row.size() != f.generators) {
          fail("relation has " + std::to_string(row.size()) + " entries, factor has " + std::to_string(f.generators) +
                   " generators",
               0);
        }
        f.relations.push_back(std::move(row));
      } else if (w.front() == "generator") {
        s.generators.push_back(element(line.text.substr(9), 9));
      } else {
        fail("expected factor, relation or generator", 0);
      }
    } else if (section == "window") {
      auto [k, v] = key_value(line);
      if (k == "radius") {
        spec_.radius = static_cast<std::size_t>(std::max<std::int64_t>(0, integer(v, value_offset(line))));
        if (integer(v, value_offset(line)) < 0) fail("radius must be nonnegative", value_offset(line));
      } else if (k == "cap") {
        spec_.cap = positive(v, value_offset(line), "cap");
      } else {
        fail("unknown key '" + k + "' in [window]", 0);
      }
    } else if (section == "scales") {
      auto [k, v] = key_value(line);
      if (k != "ladder") fail("unknown key '" + k + "' in [scales]", 0);
      spec_.scales.clear();
      for (const auto& x : words(v)) {
        const std::int64_t r = integer(x, value_offset(line));
        if (r < 0) fail("scales must be nonnegative", value_offset(line));
        spec_.scales.push_back(r);
      }
      if (spec_.scales.empty()) fail("empty scale ladder", value_offset(line));
    } else if (section == "decomposition") {
      auto [k, v] = key_value(line);
      const std::string val = trim(v);
      if (k == "n_max") {
        spec_.n_max = static_cast<std::size_t>(integer(v, value_offset(line)));
      } else if (k == "bound") {
        if (val == "none") {
          spec_.piece_bound.reset();
        } else {
          spec_.piece_bound = integer(v, value_offset(line));
        }
      } else if (k == "pipeline") {
        if (val != "asdim" && val != "fibering") fail("pipeline must be asdim or fibering", value_offset(line));
        spec_.pipeline = val;
      } else {
        fail("unknown key '" + k + "' in [decomposition]", 0);
      }
    } else if (section == "hirsch") {
      auto [k, v] = key_value(line);
      if (k != "bound") fail("unknown key '" + k + "' in [hirsch]", 0);
      spec_.hirsch_bound = static_cast<std::size_t>(integer(v, value_offset(line)));
    } else if (section == "sampling") {
      auto [k, v] = key_value(line);
      if (k == "samples") {
        spec_.samples = static_cast<std::size_t>(integer(v, value_offset(line)));
      } else if (k == "max_degree") {
        spec_.max_degree = static_cast<std::size_t>(integer(v, value_offset(line)));
      } else {
        fail("unknown key '" + k + "' in [sampling]", 0);
      }
    }
  }

  void finish() {
    if (spec_.p == 0 || spec_.n == 0) fail("missing [field] with p and n", 0);
    if (spec_.generators.empty()) fail("no generators declared", 0);
    if (spec_.norms.empty()) fail("no norms declared", 0);
    for (const auto& s : spec_.subgroups) {
      if (auto err = subgroup_closure_error(s.elements)) {
        throw ParseError("subgroup " + s.name + " is not closed: " + *err, lines_.back().number, 1);
      }
    }
    for (const auto& s : spec_.series) {
      std::size_t gens = 0;
      for (const auto& f : s.series.factors) gens += f.generators;
      if (!s.generators.empty() && gens != s.generators.size()) {
        throw ParseError("series " + s.name + " declares " + std::to_string(gens) + " generators but lists " +
                             std::to_string(s.generators.size()),
                         lines_.back().number, 1);
      }
    }
  }

  std::vector<Line> lines_;
  const Line* cur_ = nullptr;
  GroupSpec spec_;
};

}  // namespace detail

/// Parses and validates a spec; throws io::ParseError with line and column.
inline GroupSpec parse_spec(const std::string& text) { return detail::SpecParser(text).parse(); }

/// Canonical text of a spec: every section and key written explicitly,
/// elements as canonical matrices.
inline std::string serialize_spec(const GroupSpec& s) {
  std::ostringstream os;
  os << "[field]\np = " << s.p << "\nn = " << s.n << "\n\n[generators]\n";
  for (const auto& g : s.generators) os << g.name << " = " << g.element.mat().to_string() << "\n";
  os << "\n[norms]\n";
  for (const auto& ns : s.norms) os << ns.name() << "\n";
  for (const auto& sg : s.subgroups) {
    os << "\n[subgroup " << sg.name << "]\n";
    for (const auto& e : sg.elements) os << "element " << e.mat().to_string() << "\n";
  }
  for (const auto& se : s.series) {
    os << "\n[series " << se.name << "]\n";
    for (const auto& f : se.series.factors) {
      os << "factor " << f.generators << "\n";
      for (const auto& row : f.relations) {
        os << "relation";
        for (auto x : row) os << " " << x;
        os << "\n";
      }
    }
    for (const auto& g : se.generators) os << "generator " << g.mat().to_string() << "\n";
  }
  os << "\n[window]\nradius = " << s.radius << "\ncap = " << s.cap << "\n\n[scales]\nladder =";
  for (auto r : s.scales) os << " " << r;
  os << "\n\n[decomposition]\nn_max = " << s.n_max << "\nbound = ";
  if (s.piece_bound) {
    os << *s.piece_bound;
  } else {
    os << "none";
  }
  os << "\npipeline = " << s.pipeline << "\n";
  if (s.hirsch_bound) os << "\n[hirsch]\nbound = " << *s.hirsch_bound << "\n";
  os << "\n[sampling]\nsamples = " << s.samples << "\nmax_degree = " << s.max_degree << "\n";
  return os.str();
}

/// 64-bit FNV-1a of the canonical serialization.
inline std::string spec_hash(const GroupSpec& s) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : serialize_spec(s)) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  static const char* digits = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i, h >>= 4) out[static_cast<std::size_t>(i)] = digits[h & 0xF];
  return out;
}

}  // namespace linfdc::cli
