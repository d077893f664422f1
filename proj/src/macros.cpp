#include "cstar/macros.hpp"

#include <cctype>

#include "cstar/interval.hpp"

namespace cstar {

NormalForm expand_ge(const NormalForm& a, const NormalForm& b) { return positivity_body(a - b); }

NormalForm expand_norm_le(const NormalForm& a, const Rational& c_squared) {
  NormalForm aa = a.star() * a;
  return positivity_body(Coefficient(c_squared) * aa - aa * aa);
}

NormalForm expand_left_inv(const NormalForm& a, const Rational& c_squared) {
  return positivity_body(Coefficient(c_squared) * (a.star() * a) - NormalForm::unit());
}

NormalForm expand_right_inv(const NormalForm& a, const Rational& c_squared) {
  return positivity_body(Coefficient(c_squared) * (a * a.star()) - NormalForm::unit());
}

Rational parse_norm_square(std::string_view text) {
  std::string t = trim(text);
  if (t.rfind("sqrt", 0) == 0) {
    std::string rest = trim(std::string_view(t).substr(4));
    if (rest.size() >= 2 && rest.front() == '(' && rest.back() == ')') {
      Rational q = parse_scalar(std::string_view(rest).substr(1, rest.size() - 2));
      if (sgn(q) < 0) throw Error("negative value under sqrt in '" + t + "'");
      return q;
    }
  }
  Rational c = parse_scalar(t);
  if (sgn(c) < 0) throw Error("norm bound must be nonnegative: '" + t + "'");
  return c * c;
}

namespace {

// Position of a top-level comparison operator, or npos.
size_t find_operator(std::string_view s, std::string& op) {
  int depth = 0;
  for (size_t i = 0; i < s.size(); ++i) {
    char c = s[i];
    if (c == '(') ++depth;
    if (c == ')') --depth;
    if (depth != 0) continue;
    if ((c == '>' || c == '<') && i + 1 < s.size() && s[i + 1] == '=') {
      op = std::string(1, c) + "=";
      return i;
    }
    if (c == '=') {
      op = "=";
      return i;
    }
  }
  return std::string_view::npos;
}

bool is_call_form(const std::string& t, const std::string& head, std::string& inner) {
  if (t.rfind(head, 0) != 0) return false;
  std::string rest = trim(std::string_view(t).substr(head.size()));
  if (rest.empty() || rest.front() != '(' || rest.back() != ')') return false;
  int depth = 0;
  for (size_t i = 0; i < rest.size(); ++i) {
    if (rest[i] == '(') ++depth;
    if (rest[i] == ')' && --depth == 0 && i + 1 != rest.size()) return false;
  }
  inner = rest.substr(1, rest.size() - 2);
  return true;
}

}  // namespace

std::vector<Relation> parse_relation(const std::string& name, std::string_view text, const NormedSet& gens,
                                     const ParseOptions& options) {
  std::string t = trim(text);
  std::string op;
  size_t at = find_operator(t, op);
  if (at != std::string_view::npos) {
    std::string lhs = t.substr(0, at), rhs = t.substr(at + op.size());
    std::string op2;
    if (find_operator(rhs, op2) != std::string_view::npos)
      throw ParseError("chained comparison in relation '" + name + "'", at);
    NormalForm a = parse_term(lhs, gens, options), b = parse_term(rhs, gens, options);
    if (op == "=") return {{name, a - b, "axiom"}};
    if (op == ">=") return {{name, expand_ge(a, b), "macro:ge"}};
    return {{name, expand_ge(b, a), "macro:le"}};
  }
  static const char* heads[] = {"norm_le", "left_inv", "right_inv", "invertible", "inv"};
  for (const char* head : heads) {
    std::string inner;
    if (!is_call_form(t, head, inner)) continue;
    auto args = split_top_level(inner, ',');
    if (args.size() != 2) throw ParseError(std::string(head) + " expects two arguments", 0);
    NormalForm a = parse_term(args[0], gens, options);
    Rational c2 = parse_norm_square(args[1]);
    std::string h = head;
    if (h == "norm_le") return {{name, expand_norm_le(a, c2), "macro:norm_le"}};
    if (h == "left_inv") return {{name, expand_left_inv(a, c2), "macro:left_inv"}};
    if (h == "right_inv") return {{name, expand_right_inv(a, c2), "macro:right_inv"}};
    return {{name + "_l", expand_left_inv(a, c2), "macro:invertible"},
            {name + "_r", expand_right_inv(a, c2), "macro:invertible"}};
  }
  return {{name, parse_term(t, gens, options), "axiom"}};
}

}  // namespace cstar
