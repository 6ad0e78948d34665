#include <gtest/gtest.h>

#include "stavi/oracle.hpp"
#include "stavi/translate.hpp"

using namespace stavi;

namespace {

const std::vector<GappedChain>& corpus() {
  static const auto c = default_corpus(3, 2, 60, 41, 7);
  return c;
}

TlFormula P() { return tl::atom("P"); }
TlFormula Q() { return tl::atom("Q"); }

void expect_equiv(const FoFormula& f, TlFormula g) {
  auto v = check_equiv(f, g, corpus());
  EXPECT_TRUE(v.pass) << print_fo(f) << ": " << v.describe(corpus());
}

}  // namespace

TEST(SimpleToTl, OneVariable) {
  auto t = simple_to_tl(simple::at(P(), "x"));
  EXPECT_EQ(t, P());
  EXPECT_TRUE(simple_to_tl(SimpleFormula::top()).is_true());
  EXPECT_THROW(simple_to_tl(simple::var_less("x", "y")), FreeVariableError);
}

TEST(Translate, Atom) {
  EXPECT_EQ(translate(parse_fo("(P x)")), P());
}

TEST(Translate, WrongArity) {
  EXPECT_THROW(translate(parse_fo("(& (P x) (P y))")), FreeVariableError);
  EXPECT_THROW(translate(parse_fo("(E x (P x))")), FreeVariableError);
}

TEST(Translate, UntilReading) {
  const auto f = fo_tt::until("x", fo_atom("P"), fo_atom("Q"));
  const auto t = translate(f);
  expect_equiv(f, t);
  auto v = check_equiv(f, tl::until(P(), Q()), corpus());
  EXPECT_TRUE(v.pass);
}

TEST(Translate, EventuallyQ) {
  const auto f = parse_fo("(E y (& (< x y) (Q y)))");
  const auto t = translate(f);
  expect_equiv(f, t);
  expect_equiv(f, tl::until(tl::top(), Q()));
}

TEST(Translate, GapReadings) {
  const std::vector<FoFormula> fs = {
      fo_tt::until_s("x", fo_atom("P"), fo_atom("Q")),
      fo_tt::since_s("x", fo_atom("P"), fo_atom("Q")),
      fo_tt::gamma_plus("x", fo_atom("P")),
      fo_tt::gamma_minus("x", fo_atom("Q")),
      fo_tt::k_plus("x", fo_atom("P")),
  };
  for (const auto& f : fs) expect_equiv(f, translate(f));
  expect_equiv(fs[0], tl::until_s(P(), Q()));
}

TEST(Translate, RandomFormulas) {
  FuzzConfig cfg;
  Rng rng(42);
  for (int t = 0; t < 200; ++t) {
    auto f = gen_fo(cfg, rng);
    ASSERT_EQ(free_vars(f).size(), 1u);
    ASSERT_LE(quantifier_depth(f), cfg.max_quantifier_depth);
    auto v = check_equiv(f, translate(f), corpus());
    ASSERT_TRUE(v.pass) << print_fo(f) << ": " << v.describe(corpus());
  }
}
