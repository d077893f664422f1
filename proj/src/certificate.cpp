#include "cstar/certificate.hpp"

#include <algorithm>

namespace cstar {

RelationTable relation_table(const Presentation& p) {
  RelationTable t;
  for (const auto& r : p.relations) t.emplace_back(r.name, r.body);
  return t;
}

namespace {

const NormalForm& lookup(const RelationTable& rels, const std::string& name) {
  for (const auto& [n, body] : rels)
    if (n == name) return body;
  throw Error("certificate cites unknown relation '" + name + "'");
}

}  // namespace

NormalForm expand_certificate(const Certificate& c, const RelationTable& rels) {
  NormalForm sum;
  for (const auto& s : c) {
    const NormalForm& r = lookup(rels, s.relation);
    sum += s.a * (s.starred ? r.star() : r) * s.b;
  }
  return sum;
}

bool check_certificate(const RelationTable& rels, const Certificate& c, const NormalForm& target) {
  return expand_certificate(c, rels) == target;
}

bool check_certificate(const Presentation& p, const Certificate& c, const NormalForm& target) {
  return check_certificate(relation_table(p), c, target);
}

namespace {

std::vector<std::vector<Monomial>> monomials_by_degree(const std::vector<std::string>& letters, int max_degree) {
  std::vector<Atom> alphabet;
  for (const auto& s : letters) {
    alphabet.push_back(Atom::gen(s));
    alphabet.push_back(Atom::adj(s));
  }
  std::sort(alphabet.begin(), alphabet.end(), [](const Atom& a, const Atom& b) { return compare(a, b) < 0; });
  std::vector<std::vector<Monomial>> out{{Monomial{}}};
  for (int d = 1; d <= max_degree; ++d) {
    std::vector<Monomial> level;
    for (const auto& m : out.back())
      for (const auto& a : alphabet) {
        Monomial n = m;
        n.push_back(a);
        level.push_back(std::move(n));
      }
    out.push_back(std::move(level));
  }
  return out;
}

struct Candidate {
  Summand summand;
  NormalForm value;
};

// Row echelon basis over the Gaussian rationals, remembering for each basis
// vector its combination of candidate indices.
class Echelon {
 public:
  void add(const NormalForm& v, size_t index) {
    NormalForm r = v;
    std::map<size_t, Coefficient> combo{{index, Coefficient(1)}};
    reduce(r, combo);
    if (r.is_zero()) return;
    Monomial pivot = r.terms().rbegin()->first;
    rows_.push_back({pivot, r, combo});
  }

  // Coefficients k with target = sum k_j candidate_j, if target is in the span.
  std::optional<std::map<size_t, Coefficient>> solve(const NormalForm& target) const {
    NormalForm r = target;
    std::map<size_t, Coefficient> combo;
    reduce(r, combo);
    if (!r.is_zero()) return std::nullopt;
    std::map<size_t, Coefficient> out;
    for (const auto& [j, k] : combo)
      if (!k.is_zero()) out[j] = -k;
    return out;
  }

 private:
  struct Row {
    Monomial pivot;
    NormalForm vec;
    std::map<size_t, Coefficient> combo;
  };

  void reduce(NormalForm& r, std::map<size_t, Coefficient>& combo) const {
    for (const auto& row : rows_) {
      Coefficient c = r.coeff(row.pivot);
      if (c.is_zero()) continue;
      Coefficient k = c / row.vec.coeff(row.pivot);
      r -= row.vec * k;
      for (const auto& [j, v] : row.combo) {
        combo[j] -= k * v;
        if (combo[j].is_zero()) combo.erase(j);
      }
    }
  }

  std::vector<Row> rows_;
};

}  // namespace

std::optional<Certificate> find_certificate(const RelationTable& rels, const NormalForm& target,
                                            const std::vector<std::string>& letters, const CertificateSearch& opts) {
  if (target.is_zero()) return Certificate{};
  auto monos = monomials_by_degree(letters, opts.max_degree);
  std::vector<Candidate> cands;
  Echelon basis;
  for (int level = 0; level <= opts.max_degree; ++level) {
    size_t level_start = cands.size();
    // pairs (a, b) whose larger degree is exactly `level`
    for (const auto& [name, body] : rels) {
      if (body.is_zero()) continue;
      NormalForm bstar = body.star();
      bool need_star = !proportional(bstar, body).has_value();
      for (int da = 0; da <= level; ++da)
        for (int db = 0; db <= level; ++db) {
          if (std::max(da, db) != level) continue;
          for (const auto& ma : monos[da])
            for (const auto& mb : monos[db])
              for (int st = 0; st < (need_star ? 2 : 1); ++st) {
                if (cands.size() - level_start >= opts.max_candidates) break;
                Summand s{NormalForm::monomial(ma), st == 1, name, NormalForm::monomial(mb)};
                NormalForm v = s.a * (st == 1 ? bstar : body) * s.b;
                if (v.is_zero()) continue;
                basis.add(v, cands.size());
                cands.push_back({std::move(s), std::move(v)});
              }
        }
    }
    if (auto sol = basis.solve(target)) {
      Certificate cert;
      for (const auto& [j, k] : *sol) {
        Summand s = cands[j].summand;
        s.a = k * s.a;
        cert.push_back(std::move(s));
      }
      return cert;
    }
  }
  return std::nullopt;
}

Certificate parse_certificate(std::string_view text, const NormedSet& gens) {
  std::string t = trim(text);
  if (t.rfind("cert", 0) == 0) t = trim(std::string_view(t).substr(4));
  if (t.size() < 2 || t.front() != '[' || t.back() != ']') throw ParseError("certificate must be 'cert[...]'", 0);
  Certificate cert;
  std::string inner = trim(std::string_view(t).substr(1, t.size() - 2));
  if (inner.empty()) return cert;
  for (const auto& item : split_top_level(inner, ',')) {
    if (item.size() < 2 || item.front() != '(' || item.back() != ')')
      throw ParseError("certificate summand must be '(a ; rel ; b)': " + item, 0);
    std::string_view body = std::string_view(item).substr(1, item.size() - 2);
    auto parts = split_top_level(body, ';');
    if (parts.size() == 1) parts = split_top_level(body, ',');
    if (parts.size() != 3) throw ParseError("certificate summand needs three fields: " + item, 0);
    Summand s;
    s.a = parse_term(parts[0], gens);
    std::string rel = parts[1];
    if (!rel.empty() && rel.back() == '*') {
      s.starred = true;
      rel = trim(std::string_view(rel).substr(0, rel.size() - 1));
    }
    if (!is_identifier(rel)) throw ParseError("bad relation name in certificate: '" + rel + "'", 0);
    s.relation = rel;
    s.b = parse_term(parts[2], gens);
    cert.push_back(std::move(s));
  }
  return cert;
}

std::string print_certificate(const Certificate& c) {
  std::string out = "cert[";
  for (size_t i = 0; i < c.size(); ++i) {
    if (i) out += ", ";
    out += "(" + print_term(c[i].a) + " ; " + c[i].relation + (c[i].starred ? "*" : "") + " ; " +
           print_term(c[i].b) + ")";
  }
  return out + "]";
}

}  // namespace cstar
