#include "doctest.h"

#include "cstar/parse.hpp"
#include "cstar/repsearch.hpp"
#include "cstar/tietze.hpp"

#include <random>

using namespace cstar;

namespace {

Presentation pres(const std::string& text) { return parse_presentation(text); }

std::string corpus(const std::string& name) { return std::string(CSTAR_CORPUS) + "/" + name; }

Derivation without_step(Derivation d, size_t one_based) {
  d.steps.erase(d.steps.begin() + static_cast<long>(one_based - 1));
  return d;
}

// Relations of `start` evaluated on a representation of the end presentation
// through the translation map.
double translated_residual(const Presentation& start, const Substitution& translation, const MatrixMap& rep, int dim) {
  double worst = 0;
  bool unital = start.flavor == Flavor::Unital;
  for (const auto& r : start.relations)
    worst = std::max(worst, op_norm(eval_term(rep, substitute(r.body, translation), dim, unital)));
  return worst;
}

}  // namespace

TEST_CASE("the first chain checks in strict mode") {
  auto d = load_derivation(corpus("self_adjoint_to_positive.drv"));
  REQUIRE(d.steps.size() == 6);
  auto r = check_derivation(d);
  CAPTURE(format_report(r));
  CHECK(r.pass);
  CHECK(r.gaps.empty());
  CHECK(r.end_checked);
  CHECK(r.end_matches);
  CHECK(r.translation.at("x") == parse_term("2 y - 1", r.result.gens));
  for (const auto& s : r.steps) CHECK(s.status == "ok");

  auto j = to_json(r);
  CHECK(j["pass"] == true);
  CHECK(j["steps"].size() == 6);
}

TEST_CASE("dropping a step breaks the chain") {
  auto d = load_derivation(corpus("self_adjoint_to_positive.drv"));

  // Without xdef the certificate removing def_y cites a missing relation.
  auto r = check_derivation(without_step(d, 3));
  CHECK_FALSE(r.pass);
  CHECK(r.failed_step == 3);
  CHECK(r.message.find("xdef") != std::string::npos);
  CHECK(r.steps.back().status == "skipped");

  // Without the removal of def_y every step applies but the end differs.
  auto s = check_derivation(without_step(d, 4));
  CHECK_FALSE(s.pass);
  CHECK(s.failed_step == 0);
  CHECK(s.end_checked);
  CHECK_FALSE(s.end_matches);
}

TEST_CASE("apply_move examples") {
  auto p = load_presentation(corpus("self_adjoint.pres"));
  auto added = apply_move(p, TietzeMove::add_generator("y", NormValue::of(1), "1/2 x + 1/2"));
  auto second = pres("generators:\n  x : 1\n  y : 1\nrelations:\n  sa : x = x*\n  def_y : y = 1/2 x + 1/2\n");
  CHECK(structurally_equal(added.result, second));
  CHECK(added.gaps.empty());

  auto q = pres("generators:\n  x : 1\n  y : 1\nrelations:\n  pos : y >= 0\n  defX : x = 2 y - 1\n");
  auto removed = apply_move(q, TietzeMove::remove_generator("x", "defX"));
  CHECK(structurally_equal(removed.result, load_presentation(corpus("positive.pres"))));
  REQUIRE(removed.eliminated.size() == 1);
  CHECK(removed.eliminated[0].second == parse_term("2 y - 1", q.gens));

  auto idem = pres("generators:\n  x : 1\nrelations:\n  i : x = x^2\n");
  auto quarter = TietzeMove::add_generator("y", NormValue::of(Rational(1, 4)), "x* x");
  CHECK_THROWS_AS(apply_move(idem, quarter), TietzeError);
  CheckOptions permissive;
  permissive.mode = Mode::Permissive;
  auto gap = apply_move(idem, quarter, permissive);
  REQUIRE(gap.gaps.size() == 1);
  CHECK(gap.gaps[0].find("unverified-norm-gap") == 0);

  // Defining relation of the wrong shape.
  CHECK_THROWS_AS(apply_move(idem, TietzeMove::remove_generator("x", "i")), TietzeError);
}

TEST_CASE("justification failures and oracle markers") {
  auto p = load_presentation(corpus("self_adjoint.pres"));
  auto wrong = TietzeMove::add_relation("r", "x* = x", parse_justifications("cert[(1 ; sa ; 1)]"));
  CHECK_THROWS_AS(apply_move(p, wrong), TietzeError);
  auto right = TietzeMove::add_relation("r", "x* = x", parse_justifications("cert[(-1 ; sa ; 1)]"));
  CHECK(apply_move(p, right).result.relations.size() == 2);
  auto autoc = TietzeMove::add_relation("r", "x* x = x x", parse_justifications("cert auto"));
  CHECK(apply_move(p, autoc).notes.size() >= 1);

  auto oracle = TietzeMove::add_relation("r", "x >= 0", parse_justifications("oracle"));
  CHECK_THROWS_AS(apply_move(p, oracle), TietzeError);
  CheckOptions permissive;
  permissive.mode = Mode::Permissive;
  auto o = apply_move(p, oracle, permissive);
  REQUIRE(o.gaps.size() == 1);
  CHECK(o.gaps[0].find("oracle-pending") == 0);

  CHECK_THROWS_AS(apply_move(p, TietzeMove::remove_relation("nope", {})), TietzeError);
  CHECK_THROWS_AS(parse_justifications("cert[(1 ; sa ; 1)] & bogus"), ParseError);
}

TEST_CASE("remove generators processes symbols in order") {
  auto p = pres("generators:\n  x : 1\n  y : 1\n  z : 2\nrelations:\n  dy : y = x\n  dz : z = y + x\n  r : z z* = 1\n");
  TietzeMove m = TietzeMove::remove_generator("y", "dy");
  m.generators.push_back({"z", {}, "", "dz", {}});
  auto out = apply_move(p, m);
  CHECK(out.result.gens.names() == std::vector<std::string>{"x"});
  REQUIRE(out.result.relations.size() == 1);
  CHECK(out.result.relations[0].body == parse_term("4 x x* - 1", out.result.gens));

  // z's definition mentions y, which comes later in the list.
  TietzeMove bad = TietzeMove::remove_generator("z", "dz");
  bad.generators.push_back({"y", {}, "", "dy", {}});
  CHECK_THROWS_AS(apply_move(p, bad), TietzeError);
}

TEST_CASE("add then remove is the identity") {
  std::mt19937_64 rng(99);
  std::uniform_int_distribution<int> coef(-2, 2), pick(0, 3), len(0, 2);
  const std::vector<std::string> letters{"a", "b"};
  auto random_term = [&] {
    std::string t = "0";
    for (int k = 0; k < 3; ++k) {
      t += " + (" + std::to_string(coef(rng)) + ")";
      for (int j = len(rng); j > 0; --j) {
        int l = pick(rng);
        t += " " + letters[l / 2] + (l % 2 ? "*" : "");
      }
    }
    return t;
  };
  for (int trial = 0; trial < 200; ++trial) {
    CAPTURE(trial);
    std::string text = "generators:\n  a : 1\n  b : 1\nrelations:\n  r1 : " + random_term() + " = 0\n";
    if (trial % 2) text += "  r2 : " + random_term() + " = 0\n";
    Presentation p;
    try {
      p = pres(text);
    } catch (const Error&) {
      continue;  // relations may normalize to zero
    }
    CheckOptions permissive;
    permissive.mode = Mode::Permissive;

    auto grown = apply_move(p, TietzeMove::add_generator("s", NormValue::of(100), random_term()), permissive);
    auto back = apply_move(grown.result, TietzeMove::remove_generator("s", "def_s"), permissive);
    CHECK(structurally_equal(back.result, p));

    std::string body = print_term(Coefficient(coef(rng) + 3) * p.relations[0].body);
    auto more = apply_move(p, TietzeMove::add_relation("extra", body, parse_justifications("cert auto")));
    auto less = apply_move(more.result, TietzeMove::remove_relation("extra", parse_justifications("cert auto")));
    CHECK(structurally_equal(less.result, p));
  }
}

TEST_CASE("derivation scripts round trip") {
  auto d = load_derivation(corpus("self_adjoint_to_positive.drv"));
  std::string text = print_derivation(d);
  auto again = parse_derivation(text, CSTAR_CORPUS);
  REQUIRE(again.steps.size() == d.steps.size());
  for (size_t k = 0; k < d.steps.size(); ++k) CHECK(again.steps[k].text() == d.steps[k].text());
  CHECK(check_derivation(again).pass);
  CHECK_THROWS_AS(parse_derivation("start: nope.pres\n", CSTAR_CORPUS), Error);
  CHECK_THROWS_AS(parse_derivation("start: self_adjoint.pres\nfrobnicate x\n", CSTAR_CORPUS), ParseError);
}

TEST_CASE("bridge examples") {
  auto p1 = load_presentation(corpus("self_adjoint.pres"));
  auto p2 = load_presentation(corpus("positive.pres"));
  auto b = bridge(p1, p2, {{"x", "2 y - 1"}}, {{"y", "1/2 x + 1/2"}});
  CHECK(b.gaps.empty());
  CHECK(b.joint.gens.names() == std::vector<std::string>{"x", "y"});
  CHECK(b.joint.relations.size() == 4);
  for (const Derivation* d : {&b.first, &b.second}) {
    auto r = check_derivation(*d);
    CAPTURE(format_report(r));
    CHECK(r.pass);
    CHECK(r.gaps.empty());
  }

  auto same = bridge(p1, p1, {{"x", "x"}}, {{"x", "x"}});
  CHECK(same.renames.at("x") == "x_2");
  CHECK(same.joint.gens.names().size() == 2);
  CHECK(check_derivation(same.first).pass);
  CHECK(check_derivation(same.second).pass);

  auto q = pres("generators:\n  y : 1\nrelations:\n  sa : y = y*\n");
  CHECK_THROWS_AS(bridge(p1, q, {{"x", "3 y"}}, {{"y", "x"}}), TietzeError);
  BridgeOptions permissive;
  permissive.mode = Mode::Permissive;
  auto flagged = bridge(p1, q, {{"x", "3 y"}}, {{"y", "x"}}, permissive);
  REQUIRE(flagged.gaps.size() == 1);
  CHECK(flagged.gaps[0].find("norm-cap") == 0);

  CHECK_THROWS_AS(bridge(p1, q, {}, {{"y", "x"}}), TietzeError);
}

TEST_CASE("auto_simplify examples") {
  auto dup = pres("generators:\n  x : 1\n  y : 1\nrelations:\n  r1 : y - x\n  r2 : y - x\n");
  auto a = auto_simplify(dup);
  REQUIRE_FALSE(a.derivation.steps.empty());
  CHECK(a.derivation.steps[0].kind == TietzeMove::Kind::RemoveRelations);
  CHECK(check_derivation(a.derivation).pass);

  auto mid = pres(
      "generators:\n  x : 1\n  y : 1\nrelations:\n  sa : x = x*\n  def_y : y = 1/2 x + 1/2\n  xdef : x = 2 y - 1\n");
  auto b = auto_simplify(mid);
  CHECK(b.result.gens.names().size() == 1);
  CHECK(check_derivation(b.derivation).pass);

  auto rigid = pres("generators:\n  x : 1\nrelations:\n  i : x = x^2\n");
  auto c = auto_simplify(rigid);
  CHECK(c.derivation.steps.empty());
  CHECK(structurally_equal(c.result, rigid));
}

TEST_CASE("translation agrees with matrix evaluation") {
  auto d = load_derivation(corpus("self_adjoint_to_positive.drv"));
  auto r = check_derivation(d);
  REQUIRE(r.pass);
  SearchConfig cfg;
  cfg.restarts = 6;
  int checked = 0;
  for (int dim = 1; dim <= 3; ++dim) {
    cfg.seed = 100 + static_cast<uint64_t>(dim);
    for (const auto& o : search_feasible(r.result, dim, cfg).restarts) {
      if (o.residual >= cfg.tol_feas) continue;
      ++checked;
      CHECK(translated_residual(d.start, r.translation, o.rep.assign, dim) < 1e-6);
    }
  }
  CHECK(checked > 0);
}

TEST_CASE("left-invertibility chain with lemma steps") {
  auto r = check_derivation(load_derivation(corpus("left_inv.drv")));
  CAPTURE(format_report(r));
  CHECK(r.pass);
  CHECK(r.gaps.empty());
  CHECK(r.translation.at("x") == parse_term("u q", r.result.gens));
  CHECK(split(r.result).parts.size() == 2);
}

TEST_CASE("idempotent chain: corrected and literal routes") {
  auto good = check_derivation(load_derivation(corpus("idempotent.drv")));
  CAPTURE(format_report(good));
  CHECK(good.pass);
  CHECK(good.gaps.empty());

  CheckOptions permissive;
  permissive.mode = Mode::Permissive;
  auto literal = load_derivation(corpus("idempotent_literal.drv"));
  auto bad = check_derivation(literal, permissive);
  CHECK_FALSE(bad.pass);
  CHECK(bad.failed_step == 10);
  CHECK(bad.message.find("norm_le((1 - r) (1 - k)") != std::string::npos);

  // The relation is genuinely not implied: a representation satisfies the
  // others and violates it.
  Derivation prefix = literal;
  prefix.steps.resize(9);
  prefix.end.reset();
  auto before = check_derivation(prefix, permissive).result;
  NormalForm def_k = before.find("def_k")->body;
  before.remove_relation("def_k");
  SearchConfig cfg;
  cfg.seed = 5;
  auto w = refute_redundancy(before, def_k, 1, cfg);
  CHECK(w.witness);
  CHECK(w.value > 0.5);
}
