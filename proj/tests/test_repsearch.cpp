#include "doctest.h"

#include "cstar/parse.hpp"
#include "cstar/repsearch.hpp"

using namespace cstar;
using Eigen::MatrixXcd;
using cd = std::complex<double>;

namespace {

Presentation pres(const std::string& text) { return parse_presentation(text); }

MatrixXcd mat2(cd a, cd b, cd c, cd d) {
  MatrixXcd m(2, 2);
  m << a, b, c, d;
  return m;
}

// Random polynomial term of small degree over the given generators.
NormalForm random_poly(std::mt19937_64& rng, const std::vector<std::string>& gens) {
  std::uniform_int_distribution<int> len(0, 3), coef(-3, 3), pick(0, static_cast<int>(gens.size()) * 2 - 1);
  NormalForm t;
  for (int k = 0; k < 4; ++k) {
    NormalForm m = NormalForm::scalar(Coefficient(Rational(coef(rng)), Rational(coef(rng))));
    for (int j = len(rng); j > 0; --j) {
      int g = pick(rng);
      m = m * (g % 2 ? NormalForm::adj(gens[g / 2]) : NormalForm::gen(gens[g / 2]));
    }
    t += m;
  }
  return t;
}

MatrixXcd random_matrix(std::mt19937_64& rng, int d) {
  std::normal_distribution<double> n(0, 1);
  MatrixXcd m(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) m(i, j) = cd(n(rng), n(rng));
  return m / std::max(1.0, op_norm(m));
}

}  // namespace

TEST_CASE("eval_term examples") {
  NormedSet gens{{"x", NormValue::of(1)}, {"y", NormValue::of(1)}};
  MatrixMap nil{{"x", mat2(0, 1, 0, 0)}};
  CHECK((eval_term(nil, parse_term("x* x", gens), 2) - mat2(0, 0, 0, 1)).norm() < 1e-15);

  MatrixMap proj{{"x", mat2(1, 0, 0, 0)}};
  CHECK(eval_term(proj, parse_term("x - x^2", gens), 2).norm() < 1e-15);

  MatrixMap y{{"y", mat2(0.5, 0, 0, 0.25)}};
  CHECK(eval_term(y, parse_term("y - p((y + y*)/2)", gens), 2).norm() < 1e-14);

  // sqrt clamps the negative eigenvalue to zero and reports the move.
  MatrixMap neg{{"y", mat2(-0.5, 0, 0, 0.25)}};
  EvalDiagnostics diag;
  MatrixXcd out = eval_term(neg, parse_term("sqrt((y + y*)/2)", gens), 2, true, &diag);
  CHECK(std::abs(out(0, 0)) < 1e-15);
  CHECK(std::abs(out(1, 1) - 0.5) < 1e-15);
  CHECK(diag.clamped == doctest::Approx(0.5));

  // Entire functions by power series.
  MatrixMap d{{"x", mat2(0.3, 0, 0, -0.7)}};
  MatrixXcd e = eval_term(d, parse_term("exp(x)", gens), 2);
  CHECK(std::abs(e(0, 0) - std::exp(0.3)) < 1e-14);
  CHECK(std::abs(e(1, 1) - std::exp(-0.7)) < 1e-14);
  MatrixXcd s = eval_term(d, parse_term("sin(x) sin(x) + cos(x) cos(x)", gens), 2);
  CHECK((s - MatrixXcd::Identity(2, 2)).norm() < 1e-14);

  CHECK_THROWS(eval_term(proj, parse_term("1 + x", gens), 2, false));
  CHECK_THROWS(eval_term(proj, parse_term("x + y", gens), 2));
}

TEST_CASE("eval_term is a *-homomorphism on polynomials") {
  std::mt19937_64 rng(11);
  std::vector<std::string> names{"a", "b"};
  for (int trial = 0; trial < 200; ++trial) {
    int d = 1 + trial % 4;
    MatrixMap rep{{"a", random_matrix(rng, d)}, {"b", random_matrix(rng, d)}};
    NormalForm s = random_poly(rng, names), t = random_poly(rng, names);
    MatrixXcd es = eval_term(rep, s, d), et = eval_term(rep, t, d);
    CHECK(op_norm(eval_term(rep, s * t, d) - es * et) < 1e-10);
    CHECK(op_norm(eval_term(rep, s + t, d) - es - et) < 1e-10);
    CHECK(op_norm(eval_term(rep, s.star(), d) - es.adjoint()) < 1e-10);
  }
}

TEST_CASE("analytic derivative matches central differences") {
  std::mt19937_64 rng(5);
  std::vector<std::string> names{"a", "b"};
  for (int trial = 0; trial < 100; ++trial) {
    int d = 1 + trial % 3;
    MatrixMap rep{{"a", random_matrix(rng, d)}, {"b", random_matrix(rng, d)}};
    NormalForm t = random_poly(rng, names);
    MatrixXcd dir = random_matrix(rng, d);
    MatrixXcd analytic = eval_derivative(rep, t, d, "a", dir);
    double h = 1e-5;
    MatrixMap plus = rep, minus = rep;
    plus["a"] += h * dir;
    minus["a"] -= h * dir;
    MatrixXcd fd = (eval_term(plus, t, d) - eval_term(minus, t, d)) / (2 * h);
    CHECK((analytic - fd).norm() <= 1e-5 * std::max(1.0, analytic.norm()));
  }
}

TEST_CASE("search_feasible examples") {
  SearchConfig cfg;
  cfg.seed = 3;

  auto idem = pres("generators:\n  x : 1\nrelations:\n  i : x - x^2\n");
  auto r = search_feasible(idem, 2, cfg);
  CHECK(r.residual < 1e-8);
  bool rank_one = false;
  for (const auto& o : r.restarts)
    if (o.residual < 1e-8 && std::abs(o.rep.assign.at("x").trace() - cd(1, 0)) < 1e-6) rank_one = true;
  CHECK(rank_one);

  auto sa = pres("generators:\n  x : 1\nrelations:\n  sa : x - x*\n");
  auto r1 = search_feasible(sa, 1, cfg);
  CHECK(r1.residual < 1e-12);
  CHECK(std::abs(r1.best.assign.at("x")(0, 0).imag()) < 1e-12);

  auto collapse = pres("generators:\n  x : 1\n  y : 1/4\nrelations:\n  i : x - x^2\n  d : y - x* x\n");
  SearchConfig many = cfg;
  many.restarts = 100;
  for (int d = 1; d <= 2; ++d) {
    auto rc = search_feasible(collapse, d, many);
    int feasible = 0;
    for (const auto& o : rc.restarts) {
      if (o.residual >= 1e-8) continue;
      ++feasible;
      CHECK(op_norm(o.rep.assign.at("x")) < 1e-3);
    }
    CHECK(feasible > 0);
  }
}

TEST_CASE("search is deterministic per seed") {
  auto idem = pres("generators:\n  x : 1\nrelations:\n  i : x - x^2\n");
  SearchConfig cfg;
  cfg.seed = 42;
  cfg.restarts = 5;
  auto a = search_feasible(idem, 3, cfg), b = search_feasible(idem, 3, cfg);
  REQUIRE(a.restarts.size() == b.restarts.size());
  for (size_t k = 0; k < a.restarts.size(); ++k) {
    CHECK(a.restarts[k].residual == b.restarts[k].residual);
    CHECK(a.restarts[k].rep.assign.at("x") == b.restarts[k].rep.assign.at("x"));
  }
  CHECK(a.residual == b.residual);
  cfg.seed = 43;
  auto c = search_feasible(idem, 3, cfg);
  CHECK(c.restarts[0].rep.assign.at("x") != a.restarts[0].rep.assign.at("x"));
}

TEST_CASE("caps are respected") {
  auto p = pres("generators:\n  x : 1/2\nrelations:\n  i : x - x^2\n");
  SearchConfig cfg;
  for (const auto& o : search_feasible(p, 3, cfg).restarts) CHECK(op_norm(o.rep.assign.at("x")) <= 0.5 + 1e-9);
}

TEST_CASE("refute_redundancy examples") {
  SearchConfig cfg;
  cfg.seed = 7;
  auto idem = pres("generators:\n  x : 1\nrelations:\n  i : x - x^2\n");
  auto w = refute_redundancy(idem, parse_term("x", idem.gens), 2, cfg);
  CHECK(w.witness);
  CHECK(w.residual < cfg.tol_feas);
  CHECK(w.value > 10 * cfg.tol_feas);

  auto sa = pres("generators:\n  x : 1\nrelations:\n  sa : x - x*\n");
  CHECK_FALSE(refute_redundancy(sa, parse_term("x - x*", sa.gens), 2, cfg).witness);
  for (int d = 1; d <= 4; ++d) CHECK_FALSE(refute_redundancy(sa, parse_term("x^2 - x* x", sa.gens), d, cfg).witness);
}

TEST_CASE("norm_lower_bound examples") {
  SearchConfig cfg;
  auto sa = pres("generators:\n  x : 1\nrelations:\n  sa : x - x*\n");
  auto a = norm_lower_bound(sa, parse_term("x", sa.gens), 1, cfg);
  CHECK(a.found);
  CHECK(a.value == doctest::Approx(1.0).epsilon(1e-6));

  auto idem = pres("generators:\n  x : 1\nrelations:\n  i : x - x^2\n");
  auto b = norm_lower_bound(idem, parse_term("x* x", idem.gens), 2, cfg);
  CHECK(b.value == doctest::Approx(1.0).epsilon(1e-6));

  auto zero = pres("generators:\n  x : 1\nrelations:\n  z : x\n");
  auto c = norm_lower_bound(zero, parse_term("x", zero.gens), 2, cfg);
  CHECK(c.found);
  CHECK(c.value < 1e-8);
}

TEST_CASE("json report shape") {
  auto idem = pres("generators:\n  x : 1\nrelations:\n  i : x - x^2\n");
  SearchConfig cfg;
  cfg.restarts = 2;
  auto j = to_json(search_feasible(idem, 2, cfg), idem);
  CHECK(j["restarts"].size() == 2);
  CHECK(j["best"]["assign"]["x"].size() == 2);
  CHECK(j["best"]["assign"]["x"][0][0].size() == 2);
  CHECK(j["caps"][0]["ok"] == true);
}
