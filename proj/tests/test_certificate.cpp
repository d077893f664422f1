#include "doctest.h"

#include "cstar/certificate.hpp"
#include "cstar/parse.hpp"

#include <random>

using namespace cstar;

namespace {

Presentation pres(const std::string& text) { return parse_presentation(text); }

std::vector<Monomial> words(const std::vector<std::string>& letters, int max_degree) {
  std::vector<Monomial> out{{}}, frontier{{}};
  for (int d = 1; d <= max_degree; ++d) {
    std::vector<Monomial> next;
    for (const auto& w : frontier)
      for (const auto& s : letters)
        for (const Atom& a : {Atom::gen(s), Atom::adj(s)}) {
          Monomial n = w;
          n.push_back(a);
          next.push_back(n);
        }
    out.insert(out.end(), next.begin(), next.end());
    frontier = next;
  }
  return out;
}

// Dense exact rank over Q(i) stored as real and imaginary halves: the target
// lies in the span iff appending it leaves the rank unchanged.  Independent
// of the incremental echelon form used by find_certificate.
bool in_span_bruteforce(const std::vector<NormalForm>& gens, const NormalForm& target) {
  std::map<Monomial, size_t, MonomialLess> index;
  auto col = [&](const Monomial& m) {
    auto it = index.find(m);
    if (it != index.end()) return it->second;
    size_t k = index.size();
    index.emplace(m, k);
    return k;
  };
  for (const auto& g : gens)
    for (const auto& [m, c] : g.terms()) col(m);
  for (const auto& [m, c] : target.terms()) col(m);
  size_t n = index.size();
  // Real form: a Q(i)-vector v gives rows re(v)|im(v) and -im(v)|re(v); Q(i)-span
  // membership is Q-span membership of the realified rows.
  auto realify = [&](const NormalForm& v, bool rotate) {
    std::vector<Rational> row(2 * n);
    for (const auto& [m, c] : v.terms()) {
      size_t k = index.at(m);
      row[k] = rotate ? Rational(-c.im()) : c.re();
      row[n + k] = rotate ? c.re() : c.im();
    }
    return row;
  };
  auto rank = [&](std::vector<std::vector<Rational>> rows) {
    size_t r = 0;
    for (size_t c = 0; c < 2 * n && r < rows.size(); ++c) {
      size_t piv = r;
      while (piv < rows.size() && sgn(rows[piv][c]) == 0) ++piv;
      if (piv == rows.size()) continue;
      std::swap(rows[piv], rows[r]);
      for (size_t i = 0; i < rows.size(); ++i) {
        if (i == r || sgn(rows[i][c]) == 0) continue;
        Rational f = rows[i][c] / rows[r][c];
        for (size_t j = c; j < 2 * n; ++j) rows[i][j] -= f * rows[r][j];
      }
      ++r;
    }
    return r;
  };
  std::vector<std::vector<Rational>> rows;
  for (const auto& g : gens) {
    rows.push_back(realify(g, false));
    rows.push_back(realify(g, true));
  }
  size_t before = rank(rows);
  rows.push_back(realify(target, false));
  return rank(rows) == before;
}

std::vector<NormalForm> all_products(const RelationTable& rels, const std::vector<std::string>& letters, int degree) {
  std::vector<NormalForm> out;
  auto ws = words(letters, degree);
  for (const auto& [n, r] : rels)
    for (const NormalForm& body : {r, r.star()})
      for (const auto& a : ws)
        for (const auto& b : ws) out.push_back(NormalForm::monomial(a) * body * NormalForm::monomial(b));
  return out;
}

NormalForm random_poly(std::mt19937_64& rng, int max_len) {
  std::uniform_int_distribution<int> len(0, max_len), coef(-2, 2), letter(0, 3);
  NormalForm t;
  for (int k = 0; k < 3; ++k) {
    Monomial m;
    for (int j = len(rng); j > 0; --j) {
      int l = letter(rng);
      m.push_back(l < 2 ? (l ? Atom::adj("x") : Atom::gen("x")) : (l == 3 ? Atom::adj("y") : Atom::gen("y")));
    }
    t += NormalForm::monomial(m, Coefficient(Rational(coef(rng)), Rational(coef(rng))));
  }
  return t;
}

}  // namespace

TEST_CASE("check_certificate examples") {
  auto p = pres("generators:\n  x : 1\nrelations:\n  r1 : x - x*\n");
  CHECK(check_certificate(p, parse_certificate("cert[(-1, r1, 𝟙)]", p.gens), parse_term("x* - x", p.gens)));
  CHECK_FALSE(check_certificate(p, parse_certificate("cert[(1, r1, 1)]", p.gens), parse_term("x* - x", p.gens)));

  auto q = pres("generators:\n  x : 1\n  y : 1\nrelations:\n  r2 : y - 1/2 x - 1/2\n");
  CHECK(check_certificate(q, parse_certificate("cert[(−2·𝟙, r2, 𝟙)]", q.gens), parse_term("x - 2y + 1", q.gens)));
  CHECK(check_certificate(q, parse_certificate("cert[(-2 ; r2 ; 1)]", q.gens), parse_term("x - 2y + 1", q.gens)));

  CHECK_THROWS_AS(check_certificate(p, parse_certificate("cert[(1 ; nope ; 1)]", p.gens), NormalForm()), Error);
  CHECK(check_certificate(p, {}, NormalForm()));
}

TEST_CASE("auto search finds the documented certificates") {
  auto p = pres("generators:\n  x : 1\nrelations:\n  r1 : x - x*\n");
  auto c = find_certificate(relation_table(p), parse_term("x* - x", p.gens), {"x"});
  REQUIRE(c);
  CHECK(check_certificate(p, *c, parse_term("x* - x", p.gens)));

  auto q = pres("generators:\n  x : 1\n  y : 1\nrelations:\n  r2 : y - 1/2 x - 1/2\n");
  auto d = find_certificate(relation_table(q), parse_term("x - 2y + 1", q.gens), {"x", "y"});
  REQUIRE(d);
  CHECK(d->size() == 1);
  CHECK(check_certificate(q, *d, parse_term("x - 2y + 1", q.gens)));

  // Needs a degree-one factor: x (x - x*) lies in the ideal but not in the scalar span.
  auto e = find_certificate(relation_table(p), parse_term("x^2 - x x*", p.gens), {"x"});
  REQUIRE(e);
  CHECK(check_certificate(p, *e, parse_term("x^2 - x x*", p.gens)));
}

TEST_CASE("no certificate for y over x - x*") {
  auto p = pres("generators:\n  x : 1\n  y : 1\nrelations:\n  r1 : x - x*\n");
  NormalForm y = NormalForm::gen("y");
  CHECK_FALSE(in_span_bruteforce(all_products(relation_table(p), {"x", "y"}, 2), y));
  CHECK_FALSE(find_certificate(relation_table(p), y, {"x", "y"}, {2, 100000}));
  // Any degree: the character x -> 0, y -> 1 kills r1 but not y.
  CHECK(augmentation(substitute(y, {{"y", NormalForm::unit()}})) == Coefficient(1));
  CHECK_FALSE(check_certificate(p, parse_certificate("cert[(y ; r1 ; 1), (1 ; r1* ; y)]", p.gens), y));
}

TEST_CASE("auto search agrees with the brute-force span oracle") {
  std::mt19937_64 rng(2024);
  int found = 0;
  for (int trial = 0; trial < 60; ++trial) {
    RelationTable rels{{"a", random_poly(rng, 2)}};
    if (trial % 2) rels.push_back({"b", random_poly(rng, 1)});
    NormalForm target;
    if (trial % 3) {
      // a random combination of degree-one products, which must be found
      auto prods = all_products(rels, {"x", "y"}, 1);
      std::uniform_int_distribution<size_t> pick(0, prods.size() - 1);
      std::uniform_int_distribution<int> coef(-3, 3);
      for (int k = 0; k < 3; ++k) target += Coefficient(coef(rng)) * prods[pick(rng)];
    } else {
      target = random_poly(rng, 2);
    }
    bool oracle = in_span_bruteforce(all_products(rels, {"x", "y"}, 1), target);
    auto cert = find_certificate(rels, target, {"x", "y"}, {1, 100000});
    CHECK(cert.has_value() == oracle);
    if (cert) {
      CHECK(check_certificate(rels, *cert, target));
      ++found;
    }
  }
  CHECK(found > 20);
}

TEST_CASE("certificate text round trip") {
  auto p = pres("generators:\n  x : 1\n  y : 2\nrelations:\n  r : x - y\n");
  auto c = parse_certificate("cert[(2 x ; r* ; y - 1), (1/2 ; r ; 1)]", p.gens);
  REQUIRE(c.size() == 2);
  CHECK(c[0].starred);
  CHECK(c[0].relation == "r");
  auto again = parse_certificate(print_certificate(c), p.gens);
  CHECK(print_certificate(again) == print_certificate(c));
  CHECK(expand_certificate(again, relation_table(p)) == expand_certificate(c, relation_table(p)));
  CHECK_THROWS_AS(parse_certificate("cert[(1 ; r)]", p.gens), ParseError);
  CHECK_THROWS_AS(parse_certificate("(1 ; r ; 1)", p.gens), ParseError);
}
