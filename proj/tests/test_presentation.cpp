#include "doctest.h"

#include "cstar/presentation.hpp"

using namespace cstar;

namespace {

Presentation pres(const char* text) { return parse_presentation(text); }

}  // namespace

TEST_CASE("relation sugar expands with origin tags") {
  NormedSet g{{"x", NormValue::of(2)}, {"y", NormValue::of(1)}};
  auto r = parse_relation("pos", "y >= 0", g);
  REQUIRE(r.size() == 1);
  CHECK(r[0].origin == "macro:ge");
  CHECK(r[0].body == parse_term("y - p(1/2 y + 1/2 y*)", g));

  auto li = parse_relation("li", "left_inv(x, 3)", g);
  CHECK(li[0].body == positivity_body(parse_term("9 x* x - 1", g)));

  auto nl = parse_relation("angle", "norm_le(x y, sqrt(3/4))", g);
  NormalForm a = parse_term("y* x* x y", g);
  CHECK(nl[0].body == positivity_body(Coefficient(Rational(3, 4)) * a - a * a));

  auto inv = parse_relation("w", "invertible(x, 2)", g);
  REQUIRE(inv.size() == 2);
  CHECK(inv[0].name == "w_l");
  CHECK(inv[1].name == "w_r");
  CHECK(inv[1].body == positivity_body(parse_term("4 x x* - 1", g)));

  CHECK(parse_relation("e", "x = x x", g)[0].body == parse_term("x - x x", g));
  CHECK(parse_relation("o", "1 <= y", g)[0].body == positivity_body(parse_term("y - 1", g)));
  CHECK_THROWS(parse_relation("bad", "x = y = x", g));
}

TEST_CASE("validate reports each violation") {
  CHECK(validate(pres("generators:\n x : 1\nrelations:\n sa : x - x*\n")).empty());
  auto d = validate(pres("flavor: non-unital\ngenerators:\n x : 1\nrelations:\n li : left_inv(x, 2)\n"));
  REQUIRE(d.size() == 1);
  CHECK(d[0].find("unital relation in non-unital presentation") != std::string::npos);
  PresentationParseOptions lenient;
  lenient.lenient = true;
  auto p = parse_presentation("generators:\n x : 1\nrelations:\n c : x y - y x\n c : x\n", lenient);
  d = validate(p);
  CHECK(d.size() == 2);  // duplicate name, undeclared y
  CHECK_THROWS_AS(parse_presentation("generators:\n x : 1\nrelations:\n c : x y\n"), ParseError);
}

TEST_CASE("canonical printing round trips") {
  Presentation p = pres(
      "flavor: unital\ngenerators:\n  q : 2, u : 2\nrelations:\n  qlb : 1 <= q\n  iso : u* u = 1\n");
  std::string text = print_presentation(p);
  Presentation back = parse_presentation(text);
  CHECK(print_presentation(back) == text);
  CHECK(back.relations[0].origin == "macro:le");
  CHECK(structurally_equal(p, back));
}

TEST_CASE("unitize flips the flavor only") {
  Presentation nu = load_presentation(CSTAR_CORPUS "/selfadjoint_nonunital.pres");
  Presentation u = load_presentation(CSTAR_CORPUS "/selfadjoint_unital.pres");
  CHECK(print_presentation(unitize(nu)) == print_presentation(u));
  CHECK_THROWS(unitize(u));
  Presentation empty = pres("flavor: non-unital\ngenerators:\n x : 1\n");
  CHECK(unitize(empty).flavor == Flavor::Unital);
}

TEST_CASE("join and split are inverse on disjoint parts") {
  Presentation a = pres("generators:\n q : 2\nrelations:\n qlb : 1 <= q\n");
  Presentation b = pres("generators:\n u : 2\nrelations:\n iso : u* u = 1\n");
  auto j = join({a, b});
  CHECK(j.joined.gens.size() == 2);
  auto s = split(j.joined);
  REQUIRE(s.parts.size() == 2);
  CHECK(structurally_equal(s.parts[0], a));
  CHECK(structurally_equal(s.parts[1], b));
  CHECK(s.warnings.empty());

  Presentation x = pres("generators:\n x : 1\n");
  auto jj = join({x, x});
  CHECK(jj.joined.gens.names() == std::vector<std::string>{"x", "x_2"});
  CHECK(jj.renames[1].at("x") == "x_2");
  CHECK_THROWS(join({x, x}, false));

  CHECK(split(pres("generators:\n x : 1, y : 1\nrelations:\n c : x y - y x\n")).parts.size() == 1);
  CHECK(split(pres("generators:\n x : 1, y : 1\n")).parts.size() == 2);
  auto w = split(pres("generators:\n x : 1, y : 1\nrelations:\n z : 0\n"));
  CHECK(w.parts.size() == 2);
  CHECK(w.warnings.size() == 1);
  CHECK(w.parts[1].relations.size() == 1);
}
