#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "cstar/parse.hpp"

namespace cstar {

/// A C*-relation body = 0.  `origin` is "axiom", "derived", or
/// "macro:<tag>" for relations produced by sugar expansion.
struct Relation {
  std::string name;
  NormalForm body;
  std::string origin = "axiom";

  bool is_macro() const { return origin.rfind("macro:", 0) == 0; }
};

/// Bodies of the order and norm sugar.
NormalForm expand_ge(const NormalForm& a, const NormalForm& b);  // a >= b
NormalForm expand_norm_le(const NormalForm& a, const Rational& c_squared);
NormalForm expand_left_inv(const NormalForm& a, const Rational& c_squared);
NormalForm expand_right_inv(const NormalForm& a, const Rational& c_squared);

/// Parses "sqrt(q)" or a rational scalar c and returns c^2.
Rational parse_norm_square(std::string_view text);

/// Parses one relation in the relation DSL: a plain term, `lhs = rhs`,
/// `a >= b`, `a <= b`, `norm_le(a, c)`, `left_inv(a, c)`, `right_inv(a, c)`,
/// `invertible(a, c)` or `inv(a, c)`.  The last two yield `<name>_l` and
/// `<name>_r`; everything else yields one relation called `name`.
std::vector<Relation> parse_relation(const std::string& name, std::string_view text, const NormedSet& gens,
                                     const ParseOptions& options = {});

}  // namespace cstar
