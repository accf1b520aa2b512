#include <gtest/gtest.h>

#include "helpers.hpp"
#include "linfdc/cli/experiments.hpp"
#include "linfdc/cli/spec.hpp"
#include "linfdc/io/text_format.hpp"

using namespace linfdc;
using cli::parse_spec;
using io::ParseError;
using th::c;
using th::poly;
using th::t;

namespace {

const char* const kSmallSpec = R"(# small GL_2 example
[field]
p = 3
n = 2

[generators]
a = [[1, t], [0, 1]]
b = [[1, 0], [1/t, 1]]
s = [[0, 1], [1, 0]]

[norms]
t_adic
degree

[subgroup S]
element e
element s

[subgroup U]
element e
element [[1, 1], [0, 1]]
element [[1, 2], [0, 1]]

[series heis]
factor 1
factor 2
relation 3 0

[window]
radius = 2
cap = 5000

[scales]
ladder = 1 2

[decomposition]
n_max = 3
bound = none
pipeline = asdim

[hirsch]
bound = 3

[sampling]
samples = 6
max_degree = 2
)";

std::string with_field(const std::string& body) { return "[field]\np = 2\nn = 2\n" + body; }

ParseError parse_error(const std::string& text) {
  try {
    parse_spec(text);
  } catch (const ParseError& e) {
    return e;
  }
  ADD_FAILURE() << "no parse error for:\n" << text;
  return ParseError("none", 0, 0);
}

cli::Json without_timestamp(cli::Json j) {
  j["metadata"].erase("timestamp");
  return j;
}

}  // namespace

TEST(Expr, Examples) {
  const RatFunc x = cli::parse_ratfunc("1/(t^2+1)", 2);
  EXPECT_TRUE(x.num().is_one());
  EXPECT_EQ(x.den(), poly(2, {1, 0, 1}));
  EXPECT_TRUE(cli::parse_ratfunc("t/t", 5).is_one());
  EXPECT_EQ(cli::parse_ratfunc("(t+1)^2 - 2*t", 7), RatFunc(poly(7, {1, 0, 1})));
  EXPECT_EQ(cli::parse_ratfunc("t^-2", 3), t(3).pow(-2));
  EXPECT_EQ(cli::parse_ratfunc("-1", 5), c(5, 4));
  EXPECT_EQ(cli::parse_ratfunc("7", 5), c(5, 2));
}

TEST(Expr, Errors) {
  EXPECT_ANY_THROW(cli::parse_ratfunc("1/(t-t)", 3));
  EXPECT_ANY_THROW(cli::parse_ratfunc("t +", 3));
  EXPECT_ANY_THROW(cli::parse_ratfunc("(t", 3));
  EXPECT_ANY_THROW(cli::parse_ratfunc("x", 3));
  EXPECT_ANY_THROW(cli::parse_matrix("[[1, 0], [0]]", 3, 2));
}

TEST(Spec, ParsesSmallSpec) {
  const auto s = parse_spec(kSmallSpec);
  EXPECT_EQ(s.p, 3U);
  EXPECT_EQ(s.n, 2U);
  ASSERT_EQ(s.generators.size(), 3U);
  EXPECT_EQ(s.generators[1].element.mat()(1, 0), t(3).inverse());
  EXPECT_EQ(s.norms.size(), 2U);
  ASSERT_EQ(s.subgroups.size(), 2U);
  EXPECT_EQ(s.subgroups[0].elements[1], s.generators[2].element);
  EXPECT_EQ(s.series.at(0).series.factors.size(), 2U);
  EXPECT_EQ(s.scales, (std::vector<std::int64_t>{1, 2}));
  EXPECT_EQ(s.hirsch_bound, std::optional<std::size_t>(3));
  EXPECT_EQ(s.samples, 6U);
}

TEST(Spec, Rejections) {
  EXPECT_NE(std::string(parse_error(with_field("[generators]\ng = [[1, 1], [1, 1]]\n")).what()).find("singular"),
            std::string::npos);
  EXPECT_EQ(parse_error("[field]\np = 4\nn = 2\n").line, 2U);
  const auto closed = parse_error(with_field("[generators]\ng = [[1, t], [0, 1]]\n[norms]\ndegree\n"
                                             "[subgroup G]\nelement e\nelement [[1, 1], [1, 0]]\n"));
  EXPECT_NE(std::string(closed.what()).find("not closed"), std::string::npos);
  EXPECT_NE(std::string(parse_error(with_field("[generators]\ng = [[1, 0], [0, 1]]\n[norms]\nplace t^2+1\n")).what())
                .find("irreducible"),
            std::string::npos);
  EXPECT_ANY_THROW(parse_spec(with_field("[generators]\ng = [[1, 0], [0, 1]]\n")));  // no norms
}

TEST(Spec, ErrorLocation) {
  // the stray character sits in column 20 of line 5
  const auto e = parse_error(with_field("[generators]\ng = [[1, t], [0, 1 ? ]]\n"));
  EXPECT_EQ(e.line, 5U);
  EXPECT_EQ(e.column, 20U);
  const auto word = parse_error(with_field("[generators]\ng = [[1, t], [0, 1]]\nh = g * q\n"));
  EXPECT_EQ(word.line, 6U);
  EXPECT_EQ(word.column, 9U);
}

TEST(Spec, SerializeRoundTrip) {
  const auto s = parse_spec(kSmallSpec);
  const std::string text = cli::serialize_spec(s);
  const auto again = parse_spec(text);
  EXPECT_EQ(cli::serialize_spec(again), text);
  EXPECT_EQ(cli::spec_hash(again), cli::spec_hash(s));
  ASSERT_EQ(again.generators.size(), s.generators.size());
  for (std::size_t i = 0; i < s.generators.size(); ++i) EXPECT_EQ(again.generators[i].element, s.generators[i].element);
  EXPECT_EQ(again.series.at(0).series, s.series.at(0).series);
}

TEST(TextFormat, RoundTrips) {
  const FinSpace a = FinSpace::integer_interval(0, 6);
  const FinSpace b = FinSpace::from_function(
      3, [](std::size_t i, std::size_t j) { return i + j == 3 ? ExtInt::infinity() : ExtInt(2); }, {"x", "y z", "\"q\""});
  const MetricFamily fam("two members", {a, b});
  EXPECT_EQ(io::family_from_text(io::family_to_text(fam)), fam);

  const auto cert = greedy_asdim(fam, 1, 2);
  ASSERT_TRUE(cert);
  EXPECT_EQ(io::certificate_from_text(io::certificate_to_text(*cert)), *cert);

  const DecompTree tree = asdim_to_fdc(*cert, fam);
  const std::string text = io::tree_to_text(tree);
  const DecompTree back = io::tree_from_text(text);
  EXPECT_EQ(back, tree);
  EXPECT_EQ(io::tree_to_text(back), text);
  EXPECT_TRUE(verify_fdc(back).ok());
}

TEST(TextFormat, ErrorsCarryPosition) {
  try {
    io::family_from_text("family \"f\" 1\nspace 2\nrow 0\nrow 1 -3\n");
    FAIL() << "negative distance accepted";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line, 4U);
  }
  EXPECT_THROW(io::family_from_text("family \"f\" 1\nspace 1\nrow 0\nextra"), ParseError);
  EXPECT_THROW(io::tree_from_text("tree"), ParseError);
}

TEST(TextFormat, Dot) {
  const MetricFamily fam("interval", {FinSpace::integer_interval(0, 9)});
  const auto cert = greedy_asdim(fam, 2, 2);
  ASSERT_TRUE(cert);
  const DecompTree tree = asdim_to_fdc(*cert, fam);
  const std::string dot = io::to_dot(tree);
  EXPECT_EQ(dot.rfind("digraph fdc {", 0), 0U);
  EXPECT_NE(dot.find("n0 -> n1 [label=\"U\"]"), std::string::npos);
  EXPECT_NE(dot.find("[label=\"V\"]"), std::string::npos);
  EXPECT_EQ(dot.back(), '\n');
}

TEST(Experiments, UnknownNameThrows) {
  EXPECT_THROW(cli::run_experiment(parse_spec(kSmallSpec), "nope"), std::invalid_argument);
}

TEST(Experiments, CapOverrunIsBudgetExceeded) {
  cli::RunOptions opt;
  opt.cap = 3;
  const auto rep = cli::run_experiment(parse_spec(kSmallSpec), "balls", opt);
  EXPECT_EQ(rep.exit_code, cli::exit_budget_exceeded);
  EXPECT_EQ(rep.json["status"], "budget exceeded");
}

class ExperimentRuns : public ::testing::TestWithParam<std::string> {};

TEST_P(ExperimentRuns, DeterministicApartFromTimestamp) {
  const auto spec = parse_spec(kSmallSpec);
  const auto r1 = cli::run_experiment(spec, GetParam());
  const auto r2 = cli::run_experiment(spec, GetParam());
  EXPECT_EQ(r1.exit_code, cli::exit_pass) << r1.json.dump(2);
  EXPECT_EQ(without_timestamp(r1.json).dump(2), without_timestamp(r2.json).dump(2));
  EXPECT_EQ(r1.files, r2.files);
  const auto& meta = r1.json["metadata"];
  EXPECT_EQ(meta["experiment"], GetParam());
  EXPECT_EQ(meta["window"]["radius"], 2);
  EXPECT_EQ(meta["spec_hash"], cli::spec_hash(spec));
  EXPECT_TRUE(meta.contains("timestamp"));
}

INSTANTIATE_TEST_SUITE_P(All, ExperimentRuns, ::testing::ValuesIn(cli::experiment_names()),
                         [](const auto& info) {
                           std::string n = info.param;
                           for (auto& ch : n) {
                             if (ch == '-') ch = '_';
                           }
                           return n;
                         });
