#pragma once

#include <string>
#include <string_view>

#include "cstar/term.hpp"

namespace cstar {

class ParseError : public Error {
 public:
  ParseError(const std::string& message, size_t position);
  size_t position() const { return position_; }

 private:
  size_t position_;
};

struct ParseOptions {
  /// Reject inv(A, m) unless the fact-free spectral bound gives A >= m.
  bool check_inverse_bounds = true;
};

/// Parses a term over the given generators.  Juxtaposition or '·' is
/// multiplication, postfix '*' is the adjoint, '/' divides by a scalar,
/// '^n' is a positive power, 'i' is the imaginary unit.
NormalForm parse_term(std::string_view text, const NormedSet& gens, const ParseOptions& options = {});

/// Parses a real rational scalar expression such as "-3/4" or "(1 + 1/2)".
Rational parse_scalar(std::string_view text);

/// Canonical text; parse_term(print_term(t)) == t.
std::string print_term(const NormalForm& t);
std::string print_monomial(const Monomial& m);

/// Throws ParseError when some inv(A, m) inside t lacks a certified bound.
void check_inverse_bounds(const NormalForm& t, const NormedSet& gens);

/// Splits on commas that are not nested inside parentheses or brackets.
std::vector<std::string> split_top_level(std::string_view text, char sep);
std::string trim(std::string_view text);

}  // namespace cstar
