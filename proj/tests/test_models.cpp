#include <gtest/gtest.h>

#include "stavi/model.hpp"

using namespace stavi;

TEST(Validate, Accepts) {
  EXPECT_FALSE(validate(parse_model("pt{P}")).has_value());
  EXPECT_FALSE(validate(GappedChain({Region::dense({"P"}), Region::gap(), Region::dense()})));
  EXPECT_FALSE(validate(parse_model("pt{} dense{P} gap dense{} pt{Q}")));
}

TEST(Validate, Rejects) {
  EXPECT_TRUE(validate(GappedChain({Region::point(), Region::gap(), Region::dense()})));
  EXPECT_TRUE(validate(GappedChain({Region::dense(), Region::gap()})));
  EXPECT_TRUE(validate(GappedChain({Region::gap()})));
  EXPECT_TRUE(validate(GappedChain(std::vector<Region>{})));
  // Two abutting dense segments meet at a gap, which must be explicit.
  EXPECT_TRUE(validate(GappedChain({Region::dense(), Region::dense()})));
  EXPECT_THROW(parse_model("pt{} gap dense{}"), ModelParseError);
}

TEST(Compare, Order) {
  auto m = parse_model("pt{} dense{} pt{}");
  EXPECT_EQ(compare(m, Position::at_point(0), Position::at_point(2)),
            std::strong_ordering::less);
  EXPECT_EQ(compare(m, Position::in_dense(1, Rational(1, 3)),
                    Position::in_dense(1, Rational(1, 2))),
            std::strong_ordering::less);
  EXPECT_EQ(compare(m, Position::in_dense(1, Rational(1, 2)),
                    Position::in_dense(1, Rational(1, 2))),
            std::strong_ordering::equal);
  EXPECT_THROW(compare(m, Position::at_point(5), Position::at_point(0)), std::out_of_range);
  EXPECT_THROW(compare(m, Position::at_point(1), Position::at_point(0)), std::out_of_range);
}

TEST(Reverse, Examples) {
  EXPECT_EQ(reverse(parse_model("pt{P} dense{Q}")), parse_model("dense{Q} pt{P}"));
  auto m = parse_model("dense{P} gap dense{}");
  EXPECT_EQ(reverse(m), parse_model("dense{} gap dense{P}"));
  EXPECT_EQ(reverse(reverse(m)), m);
}

TEST(Sample, Positions) {
  auto s = enumerate_sample_positions(parse_model("pt{P}"), 3);
  ASSERT_EQ(s.size(), 1u);
  EXPECT_EQ(s[0], Position::at_point(0));
  s = enumerate_sample_positions(parse_model("dense{P}"), 2);
  ASSERT_EQ(s.size(), 2u);
  EXPECT_EQ(s[0], Position::in_dense(0, Rational(1, 3)));
  EXPECT_EQ(s[1], Position::in_dense(0, Rational(2, 3)));
  s = enumerate_sample_positions(parse_model("dense{} gap dense{}"), 1);
  ASSERT_EQ(s.size(), 2u);
  EXPECT_EQ(s[0], Position::in_dense(0, Rational(1, 2)));
  EXPECT_EQ(s[1], Position::in_dense(2, Rational(1, 2)));
}

TEST(ModelText, RoundTrip) {
  for (const char* s : {"pt{P}", "dense{P,Q} gap dense{} pt{Q}", "pt{} pt{A_1,B}"}) {
    EXPECT_EQ(print_model(parse_model(s)), s);
  }
  EXPECT_EQ(print_model(parse_model("  pt{Q,P}\n dense{}")), "pt{P,Q} dense{}");
  EXPECT_THROW(parse_model("pt{P"), ModelParseError);
  EXPECT_THROW(parse_model("pt{P,}"), ModelParseError);
  EXPECT_THROW(parse_model("point{}"), ModelParseError);
  EXPECT_THROW(parse_model(""), ModelParseError);
}

TEST(Gaps, FiniteChainsHaveNone) {
  EXPECT_TRUE(parse_model("pt{} pt{P} pt{}").gaps().empty());
  EXPECT_TRUE(parse_model("pt{} pt{P}").is_finite_chain());
  EXPECT_EQ(parse_model("dense{} gap dense{}").gaps(), std::vector<std::size_t>{1});
}

TEST(Interval, Contains) {
  auto m = parse_model("pt{} dense{} gap dense{}");
  IntervalSpec iv = IntervalSpec::open(AtGap{2}, PlusInfinity{});
  EXPECT_FALSE(contains(m, iv, Position::in_dense(1, Rational(1, 2))));
  EXPECT_TRUE(contains(m, iv, Position::in_dense(3, Rational(1, 100))));
  iv = {Position::at_point(0), DenseEdge{1, Side::Right}, true, false};
  EXPECT_TRUE(contains(m, iv, Position::at_point(0)));
  EXPECT_TRUE(contains(m, iv, Position::in_dense(1, Rational(99, 100))));
  EXPECT_FALSE(contains(m, iv, Position::in_dense(3, Rational(1, 100))));
  IntervalSpec bad{AtGap{2}, PlusInfinity{}, true, false};
  EXPECT_THROW(check_interval(m, bad), std::invalid_argument);
}
