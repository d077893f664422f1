#include "cstar/term.hpp"

#include <algorithm>
#include <cctype>
#include <functional>

namespace cstar {

Atom Atom::gen(std::string symbol) {
  Atom a;
  a.kind = Kind::Gen;
  a.name = std::move(symbol);
  return a;
}

Atom Atom::adj(std::string symbol) {
  Atom a;
  a.kind = Kind::GenAdj;
  a.name = std::move(symbol);
  return a;
}

Atom Atom::call(std::string fn, FnClass cls, NormalForm argument, std::vector<Rational> params) {
  Atom a;
  a.kind = Kind::Call;
  a.name = std::move(fn);
  a.fn_class = cls;
  for (auto& p : params) p.canonicalize();
  a.params = std::move(params);
  a.arg = std::make_shared<const NormalForm>(std::move(argument));
  return a;
}

Atom Atom::star() const {
  switch (kind) {
    case Kind::Gen:
      return adj(name);
    case Kind::GenAdj:
      return gen(name);
    case Kind::Call:
      if (fn_class == FnClass::Real) return *this;
      return call(name, fn_class, arg->star(), params);
  }
  return *this;
}

int compare(const Atom& a, const Atom& b) {
  bool ag = a.kind != Atom::Kind::Call, bg = b.kind != Atom::Kind::Call;
  if (ag != bg) return ag ? -1 : 1;
  int c = a.name.compare(b.name);
  if (c != 0) return c < 0 ? -1 : 1;
  if (ag) {
    if (a.kind == b.kind) return 0;
    return a.kind == Atom::Kind::Gen ? -1 : 1;
  }
  if (a.params.size() != b.params.size()) return a.params.size() < b.params.size() ? -1 : 1;
  for (size_t i = 0; i < a.params.size(); ++i) {
    int pc = cmp(a.params[i], b.params[i]);
    if (pc != 0) return pc < 0 ? -1 : 1;
  }
  if (a.fn_class != b.fn_class) return a.fn_class < b.fn_class ? -1 : 1;
  return compare(*a.arg, *b.arg);
}

int compare(const Monomial& a, const Monomial& b) {
  if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
  for (size_t i = 0; i < a.size(); ++i) {
    int c = compare(a[i], b[i]);
    if (c != 0) return c;
  }
  return 0;
}

Monomial star(const Monomial& m) {
  Monomial out;
  out.reserve(m.size());
  for (auto it = m.rbegin(); it != m.rend(); ++it) out.push_back(it->star());
  return out;
}

NormalForm NormalForm::scalar(const Coefficient& c) {
  NormalForm n;
  n.add_term({}, c);
  return n;
}

NormalForm NormalForm::gen(const std::string& symbol) { return monomial({Atom::gen(symbol)}); }
NormalForm NormalForm::adj(const std::string& symbol) { return monomial({Atom::adj(symbol)}); }
NormalForm NormalForm::atom(const Atom& a) { return monomial({a}); }

NormalForm NormalForm::monomial(Monomial m, const Coefficient& c) {
  NormalForm n;
  n.add_term(m, c);
  return n;
}

Coefficient NormalForm::coeff(const Monomial& m) const {
  auto it = terms_.find(m);
  return it == terms_.end() ? Coefficient() : it->second;
}

bool NormalForm::is_scalar() const { return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.empty()); }

int NormalForm::degree() const {
  int d = 0;
  for (const auto& [m, c] : terms_) d = std::max<int>(d, static_cast<int>(m.size()));
  return d;
}

void NormalForm::add_term(const Monomial& m, const Coefficient& c) {
  if (c.is_zero()) return;
  auto [it, inserted] = terms_.try_emplace(m, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

NormalForm& NormalForm::operator+=(const NormalForm& o) {
  for (const auto& [m, c] : o.terms_) add_term(m, c);
  return *this;
}

NormalForm& NormalForm::operator-=(const NormalForm& o) {
  for (const auto& [m, c] : o.terms_) add_term(m, -c);
  return *this;
}

NormalForm& NormalForm::operator*=(const Coefficient& c) {
  if (c.is_zero()) {
    terms_.clear();
    return *this;
  }
  for (auto& [m, v] : terms_) v *= c;
  return *this;
}

NormalForm NormalForm::operator-() const {
  NormalForm n = *this;
  for (auto& [m, v] : n.terms_) v = -v;
  return n;
}

NormalForm operator*(const NormalForm& a, const NormalForm& b) {
  NormalForm out;
  for (const auto& [ma, ca] : a.terms_) {
    for (const auto& [mb, cb] : b.terms_) {
      Monomial m;
      m.reserve(ma.size() + mb.size());
      m.insert(m.end(), ma.begin(), ma.end());
      m.insert(m.end(), mb.begin(), mb.end());
      out.add_term(m, ca * cb);
    }
  }
  return out;
}

NormalForm NormalForm::star() const {
  NormalForm out;
  for (const auto& [m, c] : terms_) out.add_term(cstar::star(m), c.conj());
  return out;
}

namespace {

void collect_generators(const NormalForm& t, std::set<std::string>& out) {
  for (const auto& [m, c] : t.terms()) {
    for (const Atom& a : m) {
      if (a.kind == Atom::Kind::Call)
        collect_generators(*a.arg, out);
      else
        out.insert(a.name);
    }
  }
}

void collect_functions(const NormalForm& t, std::set<std::string>& out) {
  for (const auto& [m, c] : t.terms()) {
    for (const Atom& a : m) {
      if (a.kind == Atom::Kind::Call) {
        out.insert(a.name);
        collect_functions(*a.arg, out);
      }
    }
  }
}

}  // namespace

std::set<std::string> NormalForm::generators() const {
  std::set<std::string> out;
  collect_generators(*this, out);
  return out;
}

bool NormalForm::mentions(const std::string& symbol) const { return generators().count(symbol) > 0; }

std::set<std::string> NormalForm::function_symbols() const {
  std::set<std::string> out;
  collect_functions(*this, out);
  return out;
}

bool operator==(const NormalForm& a, const NormalForm& b) {
  if (a.terms_.size() != b.terms_.size()) return false;
  auto ia = a.terms_.begin();
  auto ib = b.terms_.begin();
  for (; ia != a.terms_.end(); ++ia, ++ib) {
    if (compare(ia->first, ib->first) != 0) return false;
    if (!(ia->second == ib->second)) return false;
  }
  return true;
}

int compare(const NormalForm& a, const NormalForm& b) {
  auto ia = a.terms().begin();
  auto ib = b.terms().begin();
  for (; ia != a.terms().end() && ib != b.terms().end(); ++ia, ++ib) {
    int c = compare(ia->first, ib->first);
    if (c != 0) return c;
    c = compare(ia->second, ib->second);
    if (c != 0) return c;
  }
  if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
  return 0;
}

std::optional<Coefficient> proportional(const NormalForm& a, const NormalForm& b) {
  if (a.size() != b.size() || a.is_zero()) return std::nullopt;
  const auto& [m0, c0] = *a.terms().begin();
  Coefficient cb = b.coeff(m0);
  if (cb.is_zero()) return std::nullopt;
  Coefficient ratio = c0 / cb;
  for (const auto& [m, c] : a.terms()) {
    Coefficient other = b.coeff(m);
    if (other.is_zero() || !(other * ratio == c)) return std::nullopt;
  }
  return ratio;
}

NormedSet::NormedSet(std::initializer_list<std::pair<std::string, NormValue>> entries) {
  for (const auto& [n, v] : entries) add(n, v);
}

bool is_identifier(const std::string& text) {
  if (text.empty()) return false;
  if (!(std::isalpha(static_cast<unsigned char>(text[0])) || text[0] == '_')) return false;
  for (char c : text)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_')) return false;
  return true;
}

void NormedSet::add(const std::string& symbol, const NormValue& norm) {
  if (!is_identifier(symbol)) throw Error("invalid generator name '" + symbol + "'");
  if (is_reserved_word(symbol)) throw Error("generator name '" + symbol + "' is reserved");
  if (norms_.count(symbol)) throw Error("duplicate generator '" + symbol + "'");
  names_.push_back(symbol);
  norms_[symbol] = norm;
}

void NormedSet::remove(const std::string& symbol) {
  if (!norms_.erase(symbol)) throw Error("no generator '" + symbol + "' to remove");
  names_.erase(std::find(names_.begin(), names_.end(), symbol));
}

bool NormedSet::contains(const std::string& symbol) const { return norms_.count(symbol) > 0; }

const NormValue& NormedSet::norm(const std::string& symbol) const {
  auto it = norms_.find(symbol);
  if (it == norms_.end()) throw Error("unknown generator '" + symbol + "'");
  return it->second;
}

namespace {

using AtomMap = std::function<NormalForm(const Atom&, const std::function<NormalForm(const NormalForm&)>&)>;

NormalForm transform(const NormalForm& t, const AtomMap& f) {
  std::function<NormalForm(const NormalForm&)> rec = [&](const NormalForm& u) { return transform(u, f); };
  NormalForm out;
  for (const auto& [m, c] : t.terms()) {
    NormalForm prod = NormalForm::scalar(c);
    for (const Atom& a : m) {
      prod = prod * f(a, rec);
      if (prod.is_zero()) break;
    }
    out += prod;
  }
  return out;
}

NormalForm rebuild_call(const Atom& a, const std::function<NormalForm(const NormalForm&)>& rec) {
  return NormalForm::atom(Atom::call(a.name, a.fn_class, rec(*a.arg), a.params));
}

}  // namespace

NormalForm substitute(const NormalForm& t, const Substitution& sub, const NormedSet* target) {
  return transform(t, [&](const Atom& a, const auto& rec) -> NormalForm {
    if (a.kind == Atom::Kind::Call) return rebuild_call(a, rec);
    auto it = sub.find(a.name);
    if (it == sub.end()) {
      if (target && !target->contains(a.name))
        throw Error("generator '" + a.name + "' is neither substituted nor in the target set");
      return NormalForm::atom(a);
    }
    return a.kind == Atom::Kind::Gen ? it->second : it->second.star();
  });
}

NormalForm rename(const NormalForm& t, const std::map<std::string, std::string>& names) {
  Substitution sub;
  for (const auto& [from, to] : names) sub[from] = NormalForm::gen(to);
  return substitute(t, sub);
}

NormalForm identify_self_adjoint(const NormalForm& t, const std::set<std::string>& symbols) {
  if (symbols.empty()) return t;
  return transform(t, [&](const Atom& a, const auto& rec) -> NormalForm {
    if (a.kind == Atom::Kind::Call) return rebuild_call(a, rec);
    if (a.kind == Atom::Kind::GenAdj && symbols.count(a.name)) return NormalForm::gen(a.name);
    return NormalForm::atom(a);
  });
}

std::optional<Coefficient> augmentation(const NormalForm& t) {
  const FunctionRegistry& reg = FunctionRegistry::active();
  std::function<std::optional<Coefficient>(const Atom&)> atom_value = [&](const Atom& a) -> std::optional<Coefficient> {
    if (a.kind != Atom::Kind::Call) return Coefficient(0);
    auto inner = augmentation(*a.arg);
    if (!inner) return std::nullopt;
    const FunctionSymbol* fn = reg.find(a.name);
    if (!fn) return std::nullopt;
    if (!inner->is_real()) return std::nullopt;
    auto v = fn->exact(inner->re(), a.params);
    if (!v) return std::nullopt;
    return Coefficient(*v);
  };
  Coefficient total;
  bool undetermined = false;
  for (const auto& [m, c] : t.terms()) {
    Coefficient prod = c;
    bool unknown = false;
    bool zero = false;
    for (const Atom& a : m) {
      auto v = atom_value(a);
      if (!v) {
        unknown = true;
        continue;
      }
      if (v->is_zero()) {
        zero = true;
        break;
      }
      prod *= *v;
    }
    if (zero) continue;
    if (unknown) {
      undetermined = true;
      continue;
    }
    total += prod;
  }
  if (undetermined) return std::nullopt;
  return total;
}

}  // namespace cstar
