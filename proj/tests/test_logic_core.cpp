#include <gtest/gtest.h>

#include "stavi/expansion.hpp"
#include "stavi/fo.hpp"
#include "stavi/tl_parse.hpp"

using namespace stavi;

TEST(ParseFo, ExistsPred) {
  auto f = parse_fo("(E x (P x))");
  EXPECT_EQ(f, FoFormula::exists("x", FoFormula::pred("P", "x")));
}

TEST(ParseFo, AndLessPred) {
  auto f = parse_fo("(& (< x y) (Q y))");
  EXPECT_EQ(f, FoFormula::land(FoFormula::less("x", "y"), FoFormula::pred("Q", "y")));
}

TEST(ParseFo, Unbalanced) {
  try {
    parse_fo("(E x (< x x");
    FAIL() << "expected a parse error";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 1u);
    EXPECT_EQ(e.column(), 6u);  // innermost unclosed list
  }
}

TEST(ParseFo, RejectsBadArity) {
  EXPECT_THROW(parse_fo("(< x)"), ParseError);
  EXPECT_THROW(parse_fo("(E x y z)"), ParseError);
  EXPECT_THROW(parse_fo("x"), ParseError);
}

TEST(PrintFo, RoundTrip) {
  for (const char* s : {"(P x)", "(A y (| (! (= x y)) (Q y)))",
                        "(E z (& (< x z) (E x (< z x))))"}) {
    auto f = parse_fo(s);
    EXPECT_EQ(print_fo(f), s);
    EXPECT_EQ(parse_fo(print_fo(f)), f);
  }
}

TEST(FreeVars, Scoping) {
  EXPECT_EQ(free_vars(parse_fo("(E x (< x y))")), std::set<std::string>{"y"});
  EXPECT_EQ(free_vars(parse_fo("(P x)")), std::set<std::string>{"x"});
  EXPECT_EQ(free_vars(parse_fo("(& (E x (P x)) (Q x))")), std::set<std::string>{"x"});
}

TEST(ParseTl, Primitives) {
  EXPECT_EQ(parse_tl("(U P Q)"), tl::until(tl::atom("P"), tl::atom("Q")));
  EXPECT_EQ(parse_tl("(Us P Q)"), tl::until_s(tl::atom("P"), tl::atom("Q")));
  EXPECT_EQ(print_tl(parse_tl("(U P Q)")), "(U P Q)");
}

TEST(ParseTl, BoxExpands) {
  EXPECT_EQ(parse_tl("(BOX P)"), tl::lnot(tl::until(tl::top(), tl::lnot(tl::atom("P")))));
}

TEST(ParseTl, DerivedKeywordsOnlyPrimitive) {
  for (const auto& [name, e] : tl::expansion_table()) {
    std::string s = "(" + name + (e.arity == 1 ? " P)" : " P Q)");
    auto f = parse_tl(s);
    // Printing uses only primitive keywords, so the result reparses.
    auto printed = print_tl(f);
    EXPECT_EQ(parse_tl(printed), f) << name;
    EXPECT_EQ(printed.find(name + " "), std::string::npos) << name;
  }
}

TEST(ParseTl, Errors) {
  EXPECT_THROW(parse_tl("(U P)"), ParseError);
  EXPECT_THROW(parse_tl("(FOO P)"), ParseError);
  EXPECT_THROW(parse_tl("(U P Q"), ParseError);
}

TEST(Tl, MirrorSwaps) {
  auto p = tl::atom("P"), q = tl::atom("Q");
  EXPECT_EQ(tl::mirror(tl::until(p, q)), tl::since(p, q));
  EXPECT_EQ(tl::mirror(tl::until_s(p, q)), tl::since_s(p, q));
  EXPECT_EQ(tl::mirror(tl::mirror(tl::until(p, tl::since_s(q, p)))),
            tl::until(p, tl::since_s(q, p)));
}
