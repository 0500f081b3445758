#include "cbd/io.hpp"

#include "test_support.hpp"

#include <gtest/gtest.h>

#include <random>

namespace cbd {
namespace {

using test::q;

const std::string kFixtures = CBD_FIXTURES;

TEST(ParseSystem, ReadsFixture) {
  auto s = load_system(kFixtures + "/cyclic3_anticorrelated.json");
  EXPECT_TRUE(validate(s).empty());
  EXPECT_EQ(s.contexts().size(), 3u);
  EXPECT_EQ(s.context("c1").contents, (std::vector<ContentId>{"q1", "q2"}));
  EXPECT_EQ(probability(s.context("c1").pmf, {1, -1}), q("1/2"));
  EXPECT_EQ(probability(s.context("c1").pmf, {1, 1}), 0);
}

TEST(ParseSystem, MalformedRationalReportsLineAndColumn) {
  try {
    load_system(kFixtures + "/bad_rational.json");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 4u);
    EXPECT_EQ(e.column(), 53u);
    EXPECT_NE(std::string(e.what()).find("1/0"), std::string::npos);
  }
}

TEST(ParseSystem, SyntaxErrorReportsLineAndColumn) {
  try {
    parse_system("{\n  \"contents\": [\"a\",]\n}");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
    EXPECT_EQ(e.column(), 20u);
  }
}

TEST(ParseSystem, RejectsUnknownKeys) {
  EXPECT_THROW(parse_system(R"({"contents": [], "contexts": [], "extra": 1})"), ParseError);
  EXPECT_THROW(parse_system(R"({"contents": ["a"], "contexts": [
      {"label": "c", "contents": ["a"], "pmf": {"+1": "1"}, "weight": "1"}]})"),
               ParseError);
  EXPECT_THROW(parse_system(R"({"contents": ["a"]})"), ParseError);
}

TEST(ParseSystem, RejectsNonDichotomousValuesAndWrongArity) {
  try {
    parse_system(R"({"contents": ["a"], "contexts": [
        {"label": "c", "contents": ["a"], "pmf": {"2": "1"}}]})");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("dichotomized"), std::string::npos);
  }
  EXPECT_THROW(parse_system(R"({"contents": ["a"], "contexts": [
      {"label": "c", "contents": ["a"], "pmf": {"+1,-1": "1"}}]})"),
               ParseError);
  EXPECT_THROW(parse_system(R"({"contents": ["a"], "contexts": [
      {"label": "c", "contents": ["a"], "pmf": {"+1": 0.5, "-1": "1/2"}}]})"),
               ParseError);
}

TEST(ParseSystem, SemanticProblemsAreLeftToValidate) {
  auto s = load_system(kFixtures + "/pmf_sum_nine_tenths.json");
  auto v = validate(s);
  ASSERT_EQ(v.size(), 1u);
  EXPECT_NE(v[0].find("9/10"), std::string::npos);
}

TEST(WriteSystem, CanonicalFormSortsAndPermutes) {
  System s({{"zz", {"b", "a"}, Pmf{{{1, -1}, q("1/3")}, {{-1, 1}, q("2/3")}, {{1, 1}, Rational(0)}}},
            {"aa", {"a"}, Pmf{{{1}, q("1/3")}, {{-1}, q("2/3")}}}});
  const std::string expected = R"({
  "contents": [
    "a",
    "b"
  ],
  "contexts": [
    {
      "label": "aa",
      "contents": [
        "a"
      ],
      "pmf": {
        "-1": "2/3",
        "+1": "1/3"
      }
    },
    {
      "label": "zz",
      "contents": [
        "a",
        "b"
      ],
      "pmf": {
        "-1,+1": "1/3",
        "+1,-1": "2/3"
      }
    }
  ]
}
)";
  EXPECT_EQ(write_system(s), expected);
}

TEST(WriteSystem, ParseWriteIsIdempotent) {
  std::mt19937_64 rng(61);
  for (int trial = 0; trial < 30; ++trial) {
    auto s = test::random_consistent_cyclic3(rng);
    const auto once = write_system(s);
    const auto twice = write_system(parse_system(once));
    EXPECT_EQ(once, twice);
    auto back = parse_system(once);
    for (const auto& d : s.contexts())
      EXPECT_TRUE(same_distribution(marginal(back, d.context, d.contents), d.pmf));
  }
}

TEST(HvFormat, RoundTrip) {
  HiddenVariableModel m{{"q1", "q2"}, {{{-1, 1}, q("1/3")}, {{1, 1}, q("2/3")}}};
  Layout layout{{"c1", {"q1", "q2"}}};
  const auto text = write_hv(m, layout);
  auto file = parse_hv(text);
  ASSERT_TRUE(file.model);
  EXPECT_EQ(file.model->contents, m.contents);
  ASSERT_EQ(file.model->support.size(), 2u);
  EXPECT_EQ(file.model->support[1].probability, q("2/3"));
  EXPECT_EQ(file.layout, layout);
  EXPECT_EQ(write_hv(*file.model, file.layout), text);
}

TEST(HvFormat, ContextModelAndErrors) {
  auto ctx = context_specific_hv(test::single_context().contexts()[0]);
  auto file = parse_hv(write_hv(ctx));
  ASSERT_TRUE(file.context_model);
  EXPECT_EQ(file.context_model->context, "c");
  EXPECT_EQ(file.context_model->support.size(), 3u);

  EXPECT_THROW(parse_hv(R"({"contents": ["a"], "support": [{"p": "1", "responses": {"a": 2}}]})"),
               ParseError);
  EXPECT_THROW(parse_hv(R"({"contents": ["a"], "support": [{"p": "1", "responses": {}}]})"),
               ParseError);
  EXPECT_THROW(parse_hv(R"({"contents": ["a"], "support": [], "bogus": 1})"), ParseError);
  auto bad_sum = parse_hv(R"({"contents": ["a"], "support": [{"p": "1/2", "responses": {"a": 1}}]})");
  EXPECT_FALSE(validate(*bad_sum.model).empty());
}

TEST(LayoutSpec, Parses) {
  auto l = parse_layout_spec("c1=q1,q2;c2=q2");
  ASSERT_TRUE(l);
  EXPECT_EQ(*l, (Layout{{"c1", {"q1", "q2"}}, {"c2", {"q2"}}}));
  EXPECT_FALSE(parse_layout_spec(""));
  EXPECT_FALSE(parse_layout_spec("c1"));
  EXPECT_FALSE(parse_layout_spec("c1=q1,,q2"));
}

}  // namespace
}  // namespace cbd
