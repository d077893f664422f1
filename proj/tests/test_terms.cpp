#include "doctest.h"

#include "cstar/interval.hpp"
#include "cstar/parse.hpp"

using namespace cstar;

namespace {

NormedSet xy() { return {{"x", NormValue::of(1)}, {"y", NormValue::of(2)}}; }

}  // namespace

TEST_CASE("square of a skew term expands to four monomials") {
  NormalForm t = parse_term("(x - x*)*(x - x*)", xy());
  CHECK(t.size() == 4);
  CHECK(t.coeff({Atom::adj("x"), Atom::gen("x")}) == Coefficient(1));
  CHECK(t.coeff({Atom::gen("x"), Atom::gen("x")}) == Coefficient(-1));
  CHECK(t.is_self_adjoint());
}

TEST_CASE("adjoint reverses products and conjugates") {
  NormalForm t = parse_term("(2 + i) x y*", xy());
  NormalForm s = parse_term("(2 - i) y x*", xy());
  CHECK(t.star() == s);
  CHECK(t.star().star() == t);
}

TEST_CASE("scalars, division and powers") {
  CHECK(parse_term("1/2 x + x/2", xy()) == parse_term("x", xy()));
  CHECK(parse_term("x^3", xy()) == parse_term("x x x", xy()));
  CHECK(parse_term("x · y", xy()) == parse_term("x y", xy()));
  CHECK(parse_term("0.25 y", xy()) == parse_term("1/4 y", xy()));
  CHECK(parse_scalar("-(3/4)") == Rational(-3, 4));
}

TEST_CASE("real functions need self-adjoint arguments") {
  CHECK_THROWS_AS(parse_term("p(y)", xy()), ParseError);
  CHECK_NOTHROW(parse_term("p((y + y*)/2)", xy()));
  CHECK_NOTHROW(parse_term("sqrt(x* x)", xy()));
  CHECK_NOTHROW(parse_term("exp(y)", xy()));
}

TEST_CASE("functions of scalars collapse when exact") {
  CHECK(parse_term("sqrt(9/4)", xy()) == NormalForm::scalar(Rational(3, 2)));
  CHECK(parse_term("p(-1)", xy()).is_zero());
  CHECK(parse_term("sqrt(2)", xy()).size() == 1);
}

TEST_CASE("inverse lower bounds are checked") {
  CHECK_NOTHROW(parse_term("inv(1 + x* x, 1)", xy()));
  CHECK_NOTHROW(parse_term("inv(p(sqrt(y* y) - 1) + 1, 1)", xy()));
  CHECK_THROWS_AS(parse_term("inv(x* x, 1)", xy()), ParseError);
  ParseOptions lax;
  lax.check_inverse_bounds = false;
  CHECK_NOTHROW(parse_term("inv(x* x, 1)", xy(), lax));
}

TEST_CASE("errors carry positions") {
  try {
    parse_term("x + z", xy());
    FAIL("expected error");
  } catch (const ParseError& e) {
    CHECK(e.position() == 4);
  }
  CHECK_THROWS_AS(parse_term("x +", xy()), ParseError);
  CHECK_THROWS_AS(parse_term("norm_le(x, 1)", xy()), ParseError);
  CHECK_THROWS_AS(parse_term("x / y", xy()), ParseError);
}

TEST_CASE("printer round trips") {
  const char* samples[] = {"x",
                           "-x* + 2 y",
                           "(1/2 + 3/4i) x y* - i",
                           "inv(1 + x* x, 1) x",
                           "f_lam(x* x, 2) - 1/3",
                           "exp(i y) + exp(-i y*)",
                           "p(sqrt(x* x) - 1)"};
  for (const char* s : samples) {
    NormalForm t = parse_term(s, xy());
    CAPTURE(print_term(t));
    CHECK(parse_term(print_term(t), xy()) == t);
  }
  CHECK(print_term(parse_term("x + 1 - x", xy())) == "1");
  CHECK(print_term(NormalForm()) == "0");
}

TEST_CASE("spectral intervals") {
  NormedSet g = xy();
  auto iv = spectral_interval(parse_term("x* x", g), g);
  CHECK(iv.self_adjoint);
  CHECK(iv.bounds == Interval(0, 1));
  iv = spectral_interval(parse_term("x + x*", g), g);
  CHECK(iv.bounds == Interval(-2, 2));
  iv = spectral_interval(parse_term("y* x* x y", g), g);
  CHECK(iv.bounds == Interval(0, 4));
  CHECK(norm_upper_bound(parse_term("x y", g), g) == 2);
  CHECK(!spectral_interval(parse_term("x y", g), g).self_adjoint);
}

TEST_CASE("facts from relations tighten bounds") {
  NormedSet g{{"q", NormValue::of(2)}, {"u", NormValue::of(2)}};
  std::vector<NormalForm> rels = {positivity_body(parse_term("q - 1", g)),
                                  parse_term("u* u - 1", g)};
  Facts f = derive_facts(g, rels);
  REQUIRE(f.count("q"));
  CHECK(f["q"].self_adjoint);
  CHECK(*f["q"].lower == 1);
  CHECK(*f["u"].norm_cap == 1);
  auto iv = spectral_interval(parse_term("q q - 1", g), g, f);
  CHECK(iv.bounds == Interval(0, 3));
  CHECK(norm_upper_bound(parse_term("u q", g), g, f) == 2);
  CHECK(spectral_interval(parse_term("q*", g), g, f).bounds == Interval(1, 2));
}

TEST_CASE("sums of squares give exact lower bounds") {
  NormedSet g{{"x", NormValue::of(2)}, {"y", NormValue::of(1)}};
  auto lo = [&](const char* text) { return spectral_interval(parse_term(text, g), g).bounds.lo; };
  CHECK(lo("1 + (x - x*)* (x - x*)") == 1);
  CHECK(lo("1 + (x* - x)* (x* - x)") == 1);
  CHECK(lo("x* x + y* y - x* y - y* x + 1/3") == Rational(1, 3));
  // (x + 1)*(x + 1) - 1 = x*x + x + x*, bounded below by -1 over any algebra
  CHECK(lo("x* x + x + x*") == -1);
  CHECK(lo("x x* - 2") == -2);
  // no Gram certificate: x x - 1 with x not self-adjoint is indefinite
  CHECK(lo("x x + x* x* + 1") < 0);
  CHECK(parse_term("x x* inv(1 + (x - x*)* (x - x*), 1)", g).size() == 1);
}
