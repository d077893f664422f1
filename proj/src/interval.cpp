#include "cstar/interval.hpp"

#include <map>

namespace cstar {

NormalForm positivity_body(const NormalForm& a) {
  NormalForm re = (a + a.star()) * Coefficient(Rational(1, 2));
  return a - NormalForm::atom(Atom::call("p", FnClass::Real, re));
}

namespace {

NormalForm affine(const std::string& s, const Coefficient& alpha, const Coefficient& beta) {
  return alpha * NormalForm::gen(s) + NormalForm::scalar(beta);
}

}  // namespace

Facts derive_facts(const NormedSet& gens, const std::vector<NormalForm>& bodies) {
  Facts facts;
  for (const auto& s : gens.names()) {
    NormalForm g = NormalForm::gen(s), ga = NormalForm::adj(s);
    NormalForm sa_rel = g - ga;
    NormalForm idem_rel = g - g * g;
    NormalForm iso = ga * g - NormalForm::unit();
    NormalForm coiso = g * ga - NormalForm::unit();
    GeneratorFacts f;
    for (const auto& body : bodies) {
      if (body.is_zero()) continue;
      if (proportional(body, sa_rel)) f.self_adjoint = true;
      if (proportional(body, idem_rel)) f.idempotent = true;
      if (proportional(body, iso) || proportional(body, coiso))
        f.norm_cap = f.norm_cap ? rmin(*f.norm_cap, 1) : Rational(1);
      Coefficient alpha = body.coeff({Atom::gen(s)});
      if (!alpha.is_zero() && alpha.is_real() && body.unit_coeff().is_real()) {
        Coefficient beta = body.unit_coeff();
        if (body == positivity_body(affine(s, alpha, beta))) {
          // alpha s + beta >= 0
          f.self_adjoint = true;
          Rational edge = -beta.re() / alpha.re();
          edge.canonicalize();
          if (sgn(alpha.re()) > 0)
            f.lower = f.lower ? rmax(*f.lower, edge) : edge;
          else
            f.upper = f.upper ? rmin(*f.upper, edge) : edge;
        }
      }
    }
    if (f.idempotent && f.self_adjoint) {
      f.lower = f.lower ? rmax(*f.lower, 0) : Rational(0);
      f.upper = f.upper ? rmin(*f.upper, 1) : Rational(1);
      f.norm_cap = f.norm_cap ? rmin(*f.norm_cap, 1) : Rational(1);
    }
    if (f.self_adjoint || f.idempotent || f.lower || f.upper || f.norm_cap) facts[s] = f;
  }
  return facts;
}

std::set<std::string> self_adjoint_symbols(const Facts& facts) {
  std::set<std::string> out;
  for (const auto& [s, f] : facts)
    if (f.self_adjoint) out.insert(s);
  return out;
}

namespace {

Rational rpow(const Rational& b, size_t k) {
  Rational r = 1;
  for (size_t i = 0; i < k; ++i) r *= b;
  return r;
}

Interval power_interval(const Interval& iv, size_t k) {
  if (k % 2 == 1) return {rpow(iv.lo, k), rpow(iv.hi, k)};
  if (sgn(iv.lo) >= 0) return {rpow(iv.lo, k), rpow(iv.hi, k)};
  if (sgn(iv.hi) <= 0) return {rpow(iv.hi, k), rpow(iv.lo, k)};
  return {0, rpow(iv.magnitude(), k)};
}

class Analyzer {
 public:
  Analyzer(const NormedSet& gens, const Facts& facts)
      : gens_(gens), facts_(facts), sa_(self_adjoint_symbols(facts)), reg_(FunctionRegistry::active()) {}

  struct Info {
    Rational norm;
    std::optional<Interval> iv;
    bool positive() const { return iv && sgn(iv->lo) >= 0; }
  };

  Atom star_atom(const Atom& a) const {
    if (a.kind == Atom::Kind::Gen) return sa_.count(a.name) ? a : Atom::adj(a.name);
    if (a.kind == Atom::Kind::GenAdj) return Atom::gen(a.name);
    if (a.fn_class == FnClass::Real) return a;
    return Atom::call(a.name, a.fn_class, star_nf(*a.arg), a.params);
  }

  Monomial star_mono(const Monomial& m) const {
    Monomial out;
    for (auto it = m.rbegin(); it != m.rend(); ++it) out.push_back(star_atom(*it));
    return out;
  }

  NormalForm star_nf(const NormalForm& t) const { return identify_self_adjoint(t.star(), sa_); }

  bool sa(const NormalForm& t) const { return star_nf(t) == t; }

  Info atom(const Atom& a) {
    if (a.kind != Atom::Kind::Call) {
      if (!gens_.contains(a.name)) throw Error("bound requested for undeclared generator '" + a.name + "'");
      Rational cap = gens_.norm(a.name).upper();
      auto it = facts_.find(a.name);
      if (it == facts_.end()) return {cap, std::nullopt};
      const GeneratorFacts& f = it->second;
      if (f.norm_cap) cap = rmin(cap, *f.norm_cap);
      if (!f.self_adjoint || a.kind == Atom::Kind::GenAdj) return {cap, std::nullopt};
      Rational lo = -cap, hi = cap;
      if (f.lower) lo = rmax(lo, *f.lower);
      if (f.upper) hi = rmin(hi, *f.upper);
      if (hi < lo) {
        // contradictory facts: the quotient is zero, any bound holds
        lo = hi = 0;
      }
      Interval iv(lo, hi);
      return {rmin(cap, iv.magnitude()), iv};
    }
    const FunctionSymbol& fn = reg_.at(a.name);
    Info arg = nf(*a.arg);
    if (fn.fn_class == FnClass::Real || arg.iv) {
      Interval arg_iv = arg.iv ? *arg.iv : Interval::symmetric(arg.norm);
      Interval r = fn.range(arg_iv, a.params);
      return {r.magnitude(), r};
    }
    return {fn.norm_bound(arg.norm, a.params), std::nullopt};
  }

  Info mono(const Monomial& m) {
    if (m.empty()) return {1, Interval::point(1)};
    if (m.size() == 1) return atom(m[0]);
    std::vector<Info> infos;
    infos.reserve(m.size());
    for (const Atom& a : m) infos.push_back(atom(a));
    Rational prod = 1;
    for (const auto& i : infos) prod *= i.norm;

    bool same = true;
    for (size_t i = 1; i < m.size(); ++i)
      if (compare(m[i], m[0]) != 0) same = false;
    if (same && infos[0].iv) {
      Interval iv = power_interval(*infos[0].iv, m.size());
      return {rmin(prod, iv.magnitude()), iv};
    }

    size_t half = m.size() / 2;
    Monomial right(m.end() - half, m.end());
    Monomial left(m.begin(), m.begin() + half);
    if (compare(star_mono(right), left) == 0) {
      Rational w = 1;
      for (size_t i = m.size() - half; i < m.size(); ++i) w *= infos[i].norm;
      if (m.size() % 2 == 0) return {rmin(prod, w * w), Interval(0, rmin(prod, w * w))};
      const Info& mid = infos[half];
      if (mid.positive()) {
        Rational n = rmin(prod, w * w * mid.norm);
        return {n, Interval(0, n)};
      }
    }
    if (compare(star_mono(m), m) == 0) return {prod, Interval::symmetric(prod)};
    return {prod, std::nullopt};
  }

  Info nf(const NormalForm& t) {
    Rational triangle = 0;
    std::vector<std::pair<const NormalForm::Terms::value_type*, Info>> parts;
    for (const auto& entry : t.terms()) {
      Info mi = mono(entry.first);
      triangle += entry.second.abs_upper() * mi.norm;
      parts.emplace_back(&entry, mi);
    }
    if (!sa(t)) {
      Rational n = triangle;
      if (t.size() <= 6 && t.size() > 1) {
        NormalForm sq = identify_self_adjoint(t.star() * t, sa_);
        Info s = nf(sq);
        if (s.iv) n = rmin(n, sqrt_upper(rmax(s.iv->hi, 0)));
      }
      return {n, std::nullopt};
    }
    Interval acc = Interval::point(0);
    for (const auto& [entry, mi] : parts) {
      const Monomial& m = entry->first;
      const Coefficient& c = entry->second;
      Monomial ms = star_mono(m);
      int order = compare(ms, m);
      if (order == 0) {
        Interval miv = mi.iv ? *mi.iv : Interval::symmetric(mi.norm);
        acc = acc + c.re() * miv;
      } else if (order > 0) {
        Rational r = 2 * c.abs_upper() * mi.norm;
        acc = acc + Interval::symmetric(r);
      }
    }
    if (auto lo = gram_lower(t)) acc = Interval(rmin(rmax(acc.lo, *lo), acc.hi), acc.hi);
    if (auto lo = gram_lower(-t)) acc = Interval(acc.lo, rmax(rmin(acc.hi, -*lo), acc.lo));
    Rational n = rmin(triangle, acc.magnitude());
    return {n, acc};
  }

  // Sum-of-squares bound for self-adjoint t of degree <= 2: t = v* G v over
  // v = (1, letters), and eliminating the letters from G leaves c with
  // t - c >= 0 whenever the eliminated block is positive semidefinite.
  std::optional<Rational> gram_lower(const NormalForm& t) const {
    std::vector<Atom> letters;
    auto index = [&](const Atom& a) {
      for (size_t i = 0; i < letters.size(); ++i)
        if (compare(letters[i], a) == 0) return i + 1;
      letters.push_back(a);
      return letters.size();
    };
    std::map<std::pair<size_t, size_t>, Coefficient> entries;
    for (const auto& [m, c] : t.terms()) {
      if (m.size() > 2) return std::nullopt;
      if (m.empty()) {
        entries[{0, 0}] += c;
      } else if (m.size() == 1) {
        // c a = 1* (c a) when a is the smaller of a, a*; else c a = r* (c 1) with r = a*
        Atom r = star_atom(m[0]);
        int order = compare(m[0], r);
        if (order == 0) {
          Coefficient half = c * Coefficient(Rational(1, 2));
          entries[{0, index(m[0])}] += half;
          entries[{index(m[0]), 0}] += half;
        } else if (order < 0) {
          entries[{0, index(m[0])}] += c;
        } else {
          entries[{index(r), 0}] += c;
        }
      } else {
        entries[{index(star_atom(m[0])), index(m[1])}] += c;
      }
    }
    if (letters.empty()) return std::nullopt;
    size_t n = letters.size() + 1;
    std::vector<std::vector<Coefficient>> g(n, std::vector<Coefficient>(n));
    for (const auto& [ij, c] : entries) g[ij.first][ij.second] = c;
    for (size_t k = 1; k < n; ++k) {
      const Coefficient pivot = g[k][k];
      if (!pivot.is_real() || sgn(pivot.re()) < 0) return std::nullopt;
      if (pivot.is_zero()) {
        for (size_t j = 0; j < n; ++j)
          if (!g[k][j].is_zero() || !g[j][k].is_zero()) return std::nullopt;
        continue;
      }
      for (size_t i = 0; i < n; ++i) {
        if (i == k || g[i][k].is_zero()) continue;
        Coefficient f = g[i][k] / pivot;
        for (size_t j = 0; j < n; ++j)
          if (j != k) g[i][j] -= f * g[k][j];
      }
      for (size_t j = 0; j < n; ++j) g[k][j] = g[j][k] = Coefficient();
    }
    if (!g[0][0].is_real()) return std::nullopt;
    return g[0][0].re();
  }

 private:
  const NormedSet& gens_;
  const Facts& facts_;
  std::set<std::string> sa_;
  const FunctionRegistry& reg_;
};

}  // namespace

bool is_self_adjoint_mod(const NormalForm& t, const Facts& facts) {
  auto sa = self_adjoint_symbols(facts);
  NormalForm id = identify_self_adjoint(t, sa);
  return identify_self_adjoint(id.star(), sa) == id;
}

SpectralInterval spectral_interval(const NormalForm& t, const NormedSet& gens, const Facts& facts) {
  Analyzer an(gens, facts);
  NormalForm id = identify_self_adjoint(t, self_adjoint_symbols(facts));
  auto info = an.nf(id);
  SpectralInterval out;
  out.norm_upper = info.norm;
  out.self_adjoint = info.iv.has_value();
  out.bounds = info.iv ? *info.iv : Interval::symmetric(info.norm);
  return out;
}

Rational norm_upper_bound(const NormalForm& t, const NormedSet& gens, const Facts& facts) {
  return spectral_interval(t, gens, facts).norm_upper;
}

}  // namespace cstar
