#include <gtest/gtest.h>

#include "support.hpp"

using namespace supercalc;
using testing_support::Random;

namespace {

SuperScalar th(int i) { return SuperScalar::generator(i); }
SuperScalar odd(const std::string& n) { return SuperScalar::odd_symbol(n); }
SuperScalar even(const std::string& n) { return SuperScalar::even_symbol(n); }

SymbolTable table() {
  SymbolTable t(GeneratorSet{2, 2});
  t.declare("phi", Parity::even);
  t.declare("F", Parity::even);
  t.declare("psi1", Parity::odd);
  t.declare("psi2", Parity::odd);
  t.declare_function("f", 1);
  t.declare_function("g", 2);
  return t;
}

SuperScalar parse(const std::string& text) { return parse_superscalar(text, table()); }

std::size_t error_position(const std::string& text) {
  try {
    parse(text);
  } catch (const ParseError& e) {
    return e.position();
  }
  return std::string::npos;
}

}  // namespace

TEST(Expression, PrecedenceAndOperators) {
  EXPECT_EQ(parse("1 + 2*3"), SuperScalar(7));
  EXPECT_EQ(parse("(1 + 2)*3"), SuperScalar(9));
  EXPECT_EQ(parse("-2^2"), SuperScalar(-4));
  EXPECT_EQ(parse("2*-phi"), -2 * even("phi"));
  EXPECT_EQ(parse("--phi"), even("phi"));
  EXPECT_EQ(parse("3/6*phi"), Rational(1, 2) * even("phi"));
  EXPECT_EQ(parse("phi/(1+1)"), Rational(1, 2) * even("phi"));
  EXPECT_EQ(parse("0.25"), SuperScalar(Rational(1, 4)));
  EXPECT_EQ(parse("(phi + 1)^0"), SuperScalar(1));
  EXPECT_EQ(parse("  phi  -  F "), even("phi") - even("F"));
}

TEST(Expression, GeneratorsAndSymbols) {
  EXPECT_EQ(parse("theta2*theta1"), -(th(1) * th(2)));
  EXPECT_EQ(parse("eta1*eta2"), th(3) * th(4));
  EXPECT_EQ(parse("psi1*theta1"), -(th(1) * odd("psi1")));
  EXPECT_EQ(parse("theta1*theta1"), SuperScalar());
  EXPECT_EQ(parse("phi + theta1*psi1 + theta2*psi2 + theta1*theta2*F"),
            even("phi") + th(1) * odd("psi1") + th(2) * odd("psi2") + th(1) * th(2) * even("F"));
}

TEST(Expression, FunctionAtoms) {
  EXPECT_EQ(parse("f"), SuperScalar::func(FuncDeriv("f", {0})));
  EXPECT_EQ(parse("f''"), SuperScalar::func(FuncDeriv("f", {2})));
  EXPECT_EQ(parse("D[3]f"), SuperScalar::func(FuncDeriv("f", {3})));
  EXPECT_EQ(parse("D[1,2]g"), SuperScalar::func(FuncDeriv("g", {1, 2})));
  EXPECT_EQ(parse("g"), SuperScalar::func(FuncDeriv("g", {0, 0})));
  EXPECT_EQ(parse("h'"), SuperScalar::func(FuncDeriv("h", {1})));
  EXPECT_EQ(parse("D[1,1]k"), SuperScalar::func(FuncDeriv("k", {1, 1})));
  EXPECT_EQ(parse("f'^2"), SuperScalar::func(FuncDeriv("f", {1})).pow(2));
}

TEST(Expression, Errors) {
  EXPECT_EQ(error_position("phi +"), 5u);
  EXPECT_EQ(error_position("x"), 0u);
  EXPECT_EQ(error_position("1 + 2 )"), 6u);
  EXPECT_EQ(error_position("(1"), 2u);
  EXPECT_EQ(error_position("1/theta1"), 1u);
  EXPECT_EQ(error_position("1/0"), 1u);
  EXPECT_EQ(error_position("phi^F"), 4u);
  EXPECT_EQ(error_position("phi'"), 0u);
  EXPECT_EQ(error_position("g'"), 0u);
  EXPECT_EQ(error_position("D[1]g"), 0u);
  EXPECT_EQ(error_position("D[1]phi"), 0u);
  EXPECT_EQ(error_position("D[]f"), 0u);
  EXPECT_EQ(error_position("s{1,2}"), 0u);
  EXPECT_EQ(error_position("theta1'"), 0u);
  EXPECT_EQ(error_position("2 $ 3"), 2u);
  EXPECT_EQ(error_position(""), 0u);
  EXPECT_EQ(error_position("12345678901"), 0u);
  EXPECT_THROW(parse("theta3"), ContextError);
  EXPECT_THROW(parse("eta3"), ContextError);
  EXPECT_THROW(parse("theta0"), ContextError);
}

TEST(SymbolTable, Declarations) {
  SymbolTable t;
  EXPECT_THROW(t.declare("theta1", Parity::even), ContextError);
  EXPECT_THROW(t.declare("y3", Parity::even), ContextError);
  EXPECT_THROW(t.declare("s", Parity::even), ContextError);
  EXPECT_THROW(t.declare("1x", Parity::even), ContextError);
  t.declare("a", Parity::odd);
  EXPECT_NO_THROW(t.declare("a", Parity::odd));
  EXPECT_THROW(t.declare("a", Parity::even), ContextError);
  EXPECT_THROW(t.declare_function("a", 1), ContextError);
  t.declare_function("f", 2);
  EXPECT_THROW(t.declare_function("f", 1), ContextError);
  EXPECT_THROW(t.declare("f", Parity::even), ContextError);
  EXPECT_THROW(t.declare_function("h", 0), ContextError);
  EXPECT_EQ(t.symbol("a"), Parity::odd);
  EXPECT_EQ(t.function("f"), 2);
  EXPECT_FALSE(t.symbol("zz").has_value());
  EXPECT_NO_THROW(t.declare("theta", Parity::even));
}

TEST(Expression, SPolynomials) {
  const GeneratorSet ctx{4, 0};
  const SPolynomial F = parse_spolynomial("s{1,2}*s{3,4} - 2*s{1,2,3,4} + 1/3", ctx);
  EXPECT_EQ(F, s_var(MultiIndex{1, 2}) * s_var(MultiIndex{3, 4}) - 2 * s_var(MultiIndex{1, 2, 3, 4}) +
                   SPolynomial(Rational(1, 3)));
  EXPECT_EQ(parse_spolynomial(" s{ 1 , 2 }^2", ctx), s_var(MultiIndex{1, 2}).pow(2));
  EXPECT_THROW(parse_spolynomial("s{2,1}", ctx), ParseError);
  EXPECT_THROW(parse_spolynomial("s{1,2,3}", ctx), ParseError);
  EXPECT_THROW(parse_spolynomial("s{}", ctx), ParseError);
  EXPECT_THROW(parse_spolynomial("s{1,5}", ctx), ContextError);
  EXPECT_THROW(parse_spolynomial("theta1", ctx), ParseError);
  EXPECT_THROW(parse_spolynomial("s", ctx), ParseError);
}

TEST(Expression, YPolynomials) {
  const YPolynomial p = parse_ypolynomial("y1^2*y2 - 3*y3");
  EXPECT_EQ(p, YPolynomial::variable(0).pow(2) * YPolynomial::variable(1) - 3 * YPolynomial::variable(2));
  EXPECT_THROW(parse_ypolynomial("y0"), ParseError);
  EXPECT_THROW(parse_ypolynomial("x"), ParseError);
  EXPECT_THROW(parse_ypolynomial("y1'"), ParseError);
}

TEST(Expression, PrintedFormRoundTrips) {
  Random rng(51);
  const SymbolTable t = table();
  const std::vector<SuperScalar> atoms{th(1), th(2), th(3), th(4), even("phi"), even("F"), odd("psi1"), odd("psi2"),
                                       SuperScalar::func(FuncDeriv("f", {0})),
                                       SuperScalar::func(FuncDeriv("f", {rng.integer(1, 6)})),
                                       SuperScalar::func(FuncDeriv("g", {1, 0})),
                                       SuperScalar::func(FuncDeriv("g", {0, 0}))};
  for (int k = 0; k < 200; ++k) {
    SuperScalar s;
    for (int term = 0; term < 4; ++term) {
      SuperScalar m(rng.small_rational());
      for (int f = rng.integer(0, 4); f > 0; --f) m *= rng.pick(atoms);
      s += m;
    }
    const std::string text = to_string(s, t.context());
    EXPECT_EQ(parse_superscalar(text, t), s) << text;
  }
  const GeneratorSet ctx{6, 0};
  const auto coords = enumerate(6, ParityClass::even_positive);
  for (int k = 0; k < 100; ++k) {
    const SPolynomial F = rng.s_polynomial(coords, 3);
    EXPECT_EQ(parse_spolynomial(to_string(F), ctx), F) << to_string(F);
  }
}
