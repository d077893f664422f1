#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "cstar/functions.hpp"
#include "cstar/scalar.hpp"

namespace cstar {

class NormalForm;

/// Letter of a *-monomial: a generator, its adjoint, or a functional-calculus
/// application phi(A; params) with A in normal form.
struct Atom {
  enum class Kind { Gen, GenAdj, Call };

  Kind kind = Kind::Gen;
  std::string name;
  FnClass fn_class = FnClass::Real;
  std::vector<Rational> params;
  std::shared_ptr<const NormalForm> arg;

  static Atom gen(std::string symbol);
  static Atom adj(std::string symbol);
  static Atom call(std::string fn, FnClass cls, NormalForm argument, std::vector<Rational> params = {});

  bool is_generator_letter() const { return kind != Kind::Call; }
  const NormalForm& argument() const { return *arg; }
  Atom star() const;
};

int compare(const Atom& a, const Atom& b);
inline bool operator==(const Atom& a, const Atom& b) { return compare(a, b) == 0; }

/// Ordered product of atoms; the empty monomial is the unit.
using Monomial = std::vector<Atom>;

/// Length-lexicographic order; within a length, atoms compare by generator
/// name (Gen before GenAdj), then function applications.
int compare(const Monomial& a, const Monomial& b);
Monomial star(const Monomial& m);

struct MonomialLess {
  bool operator()(const Monomial& a, const Monomial& b) const { return compare(a, b) < 0; }
};

/// Element of the polynomial-plus-functional-calculus fragment of the
/// scaled-free unital *-algebra: a finite Gaussian-rational combination of
/// canonical monomials.  Zero coefficients never appear.
class NormalForm {
 public:
  using Terms = std::map<Monomial, Coefficient, MonomialLess>;

  NormalForm() = default;
  static NormalForm scalar(const Coefficient& c);
  static NormalForm unit() { return scalar(1); }
  static NormalForm gen(const std::string& symbol);
  static NormalForm adj(const std::string& symbol);
  static NormalForm atom(const Atom& a);
  static NormalForm monomial(Monomial m, const Coefficient& c = 1);

  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  size_t size() const { return terms_.size(); }
  Coefficient coeff(const Monomial& m) const;
  Coefficient unit_coeff() const { return coeff({}); }
  bool is_scalar() const;
  int degree() const;

  void add_term(const Monomial& m, const Coefficient& c);

  NormalForm& operator+=(const NormalForm& o);
  NormalForm& operator-=(const NormalForm& o);
  NormalForm& operator*=(const Coefficient& c);
  NormalForm operator-() const;

  friend NormalForm operator+(NormalForm a, const NormalForm& b) { return a += b; }
  friend NormalForm operator-(NormalForm a, const NormalForm& b) { return a -= b; }
  friend NormalForm operator*(const NormalForm& a, const NormalForm& b);
  friend NormalForm operator*(const Coefficient& c, NormalForm a) { return a *= c; }
  friend NormalForm operator*(NormalForm a, const Coefficient& c) { return a *= c; }

  NormalForm star() const;
  bool is_self_adjoint() const { return star() == *this; }

  /// Generator symbols occurring anywhere, including inside function arguments.
  std::set<std::string> generators() const;
  bool mentions(const std::string& symbol) const;
  std::set<std::string> function_symbols() const;

  friend bool operator==(const NormalForm& a, const NormalForm& b);

 private:
  Terms terms_;
};

int compare(const NormalForm& a, const NormalForm& b);

/// True when a == c*b for some nonzero Gaussian rational c; returns c.
std::optional<Coefficient> proportional(const NormalForm& a, const NormalForm& b);

/// Finite set of generator symbols with exact norm caps, in declaration order.
class NormedSet {
 public:
  NormedSet() = default;
  NormedSet(std::initializer_list<std::pair<std::string, NormValue>> entries);

  void add(const std::string& symbol, const NormValue& norm);
  void remove(const std::string& symbol);
  bool contains(const std::string& symbol) const;
  const NormValue& norm(const std::string& symbol) const;
  const std::vector<std::string>& names() const { return names_; }
  size_t size() const { return names_.size(); }
  bool empty() const { return names_.empty(); }

  friend bool operator==(const NormedSet& a, const NormedSet& b) {
    return a.names_ == b.names_ && a.norms_ == b.norms_;
  }

 private:
  std::vector<std::string> names_;
  std::map<std::string, NormValue> norms_;
};

bool is_identifier(const std::string& text);

using Substitution = std::map<std::string, NormalForm>;

/// Homomorphic replacement Gen(s) -> sub[s], GenAdj(s) -> star(sub[s]),
/// recursing into function arguments.  When `target` is given, every
/// unmapped generator must belong to it.
NormalForm substitute(const NormalForm& t, const Substitution& sub, const NormedSet* target = nullptr);

/// Renames generators (a substitution by generators).
NormalForm rename(const NormalForm& t, const std::map<std::string, std::string>& names);

/// The unital *-character killing every generator.  nullopt means some
/// function symbol has no exact value at the point required.
std::optional<Coefficient> augmentation(const NormalForm& t);

/// Replaces GenAdj(s) by Gen(s) for the listed symbols, recursively.
NormalForm identify_self_adjoint(const NormalForm& t, const std::set<std::string>& symbols);

}  // namespace cstar
