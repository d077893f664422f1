#include "cstar/parse.hpp"

#include <cctype>

#include "cstar/interval.hpp"

namespace cstar {

ParseError::ParseError(const std::string& message, size_t position)
    : Error(message + " (at offset " + std::to_string(position) + ")"), position_(position) {}

namespace {

enum class Tok { Num, Ident, Sym, End };

struct Token {
  Tok kind;
  std::string text;
  size_t pos;
};

std::vector<Token> lex(std::string_view s) {
  std::vector<Token> out;
  size_t i = 0;
  while (i < s.size()) {
    unsigned char c = s[i];
    if (std::isspace(c)) {
      ++i;
    } else if (std::isdigit(c)) {
      size_t j = i;
      while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
      if (j + 1 < s.size() && s[j] == '.' && std::isdigit(static_cast<unsigned char>(s[j + 1]))) {
        ++j;
        while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
      }
      out.push_back({Tok::Num, std::string(s.substr(i, j - i)), i});
      i = j;
    } else if (std::isalpha(c) || c == '_') {
      size_t j = i;
      while (j < s.size() && (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_')) ++j;
      out.push_back({Tok::Ident, std::string(s.substr(i, j - i)), i});
      i = j;
    } else if (s.substr(i, 4) == "\xF0\x9D\x9F\x99") {  // double-struck one
      out.push_back({Tok::Num, "1", i});
      i += 4;
    } else if (s.substr(i, 3) == "\xE2\x88\x92") {  // minus sign
      out.push_back({Tok::Sym, "-", i});
      i += 3;
    } else if (c == 0xC2 && i + 1 < s.size() && static_cast<unsigned char>(s[i + 1]) == 0xB7) {
      out.push_back({Tok::Sym, ".", i});
      i += 2;
    } else if (std::string_view("+-*/^(),").find(static_cast<char>(c)) != std::string_view::npos) {
      out.push_back({Tok::Sym, std::string(1, static_cast<char>(c)), i});
      ++i;
    } else {
      throw ParseError(std::string("unexpected character '") + static_cast<char>(c) + "'", i);
    }
  }
  out.push_back({Tok::End, "", s.size()});
  return out;
}

bool is_macro_name(const std::string& name) {
  return name == "norm_le" || name == "left_inv" || name == "right_inv" || name == "invertible";
}

class Parser {
 public:
  Parser(std::string_view text, const NormedSet* gens, const ParseOptions& options)
      : toks_(lex(text)), gens_(gens), options_(options) {}

  NormalForm parse_all() {
    NormalForm t = sum();
    if (peek().kind != Tok::End) fail("unexpected '" + peek().text + "'");
    return t;
  }

 private:
  const Token& peek() const { return toks_[pos_]; }
  bool is_sym(const char* s) const { return peek().kind == Tok::Sym && peek().text == s; }
  Token take() { return toks_[pos_++]; }
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, peek().pos); }
  void expect(const char* s) {
    if (!is_sym(s)) fail(std::string("expected '") + s + "'");
    ++pos_;
  }

  bool starts_factor() const {
    return peek().kind == Tok::Num || peek().kind == Tok::Ident || is_sym("(");
  }

  NormalForm sum() {
    NormalForm acc;
    bool negate = false;
    if (is_sym("+") || is_sym("-")) negate = take().text == "-";
    NormalForm first = prod();
    acc += negate ? -first : first;
    while (is_sym("+") || is_sym("-")) {
      bool minus = take().text == "-";
      NormalForm t = prod();
      acc += minus ? -t : t;
    }
    return acc;
  }

  NormalForm prod() {
    if (!starts_factor()) fail(peek().kind == Tok::End ? "unexpected end of input" : "unexpected '" + peek().text + "'");
    NormalForm acc = factor();
    for (;;) {
      if (is_sym(".")) {
        ++pos_;
        acc = acc * factor();
      } else if (is_sym("/")) {
        size_t at = peek().pos;
        ++pos_;
        NormalForm d = factor();
        if (!d.is_scalar() || d.is_zero()) throw ParseError("division by a non-scalar or zero", at);
        acc *= Coefficient(1) / d.unit_coeff();
      } else if (starts_factor()) {
        acc = acc * factor();
      } else {
        return acc;
      }
    }
  }

  NormalForm factor() {
    NormalForm t = primary();
    for (;;) {
      if (is_sym("*")) {
        ++pos_;
        t = t.star();
      } else if (is_sym("^")) {
        ++pos_;
        if (peek().kind != Tok::Num || peek().text.find('.') != std::string::npos) fail("expected integer exponent");
        long k = std::stol(take().text);
        if (k < 1) fail("exponent must be positive");
        NormalForm base = t;
        for (long j = 1; j < k; ++j) t = t * base;
      } else {
        return t;
      }
    }
  }

  NormalForm primary() {
    const Token tok = peek();
    if (tok.kind == Tok::Num) {
      ++pos_;
      Rational q = parse_rational(tok.text);
      if (is_sym("/") && toks_[pos_ + 1].kind == Tok::Num) {
        ++pos_;
        Rational d = parse_rational(take().text);
        if (sgn(d) == 0) throw ParseError("division by zero", tok.pos);
        q /= d;
      }
      return NormalForm::scalar(q);
    }
    if (is_sym("(")) {
      ++pos_;
      NormalForm t = sum();
      expect(")");
      return t;
    }
    if (tok.kind != Tok::Ident) fail("expected a term");
    ++pos_;
    if (tok.text == "i") return NormalForm::scalar(Coefficient(0, 1));
    const FunctionRegistry& reg = FunctionRegistry::active();
    if (const FunctionSymbol* fn = reg.find(tok.text)) return call(*fn, tok.pos);
    if (is_macro_name(tok.text))
      throw ParseError("relation macro '" + tok.text + "' cannot appear inside a term", tok.pos);
    if (gens_ && gens_->contains(tok.text)) return NormalForm::gen(tok.text);
    throw ParseError("unknown identifier '" + tok.text + "'", tok.pos);
  }

  NormalForm call(const FunctionSymbol& fn, size_t at) {
    expect("(");
    NormalForm arg = sum();
    std::vector<Rational> params;
    while (is_sym(",")) {
      ++pos_;
      size_t ppos = peek().pos;
      NormalForm p = sum();
      if (!p.is_scalar() || !p.unit_coeff().is_real())
        throw ParseError("parameter of '" + fn.name + "' must be a real rational", ppos);
      params.push_back(p.unit_coeff().re());
    }
    expect(")");
    try {
      fn.check_params(params);
    } catch (const Error& e) {
      throw ParseError(e.what(), at);
    }
    if (fn.fn_class == FnClass::Real && !arg.is_self_adjoint())
      throw ParseError("argument of real function '" + fn.name + "' is not self-adjoint", at);
    if (arg.is_scalar() && arg.unit_coeff().is_real() && fn.exact) {
      if (auto v = fn.exact(arg.unit_coeff().re(), params)) return NormalForm::scalar(*v);
    }
    NormalForm out = NormalForm::atom(Atom::call(fn.name, fn.fn_class, arg, params));
    if (options_.check_inverse_bounds && gens_) check_inverse_bounds(out, *gens_);
    return out;
  }

  std::vector<Token> toks_;
  size_t pos_ = 0;
  const NormedSet* gens_;
  ParseOptions options_;
};

}  // namespace

NormalForm parse_term(std::string_view text, const NormedSet& gens, const ParseOptions& options) {
  return Parser(text, &gens, options).parse_all();
}

Rational parse_scalar(std::string_view text) {
  NormalForm t = Parser(text, nullptr, {}).parse_all();
  if (!t.is_scalar() || !t.unit_coeff().is_real()) throw ParseError("expected a real scalar", 0);
  return t.unit_coeff().re();
}

void check_inverse_bounds(const NormalForm& t, const NormedSet& gens) {
  for (const auto& [m, c] : t.terms()) {
    for (const Atom& a : m) {
      if (a.kind != Atom::Kind::Call) continue;
      check_inverse_bounds(*a.arg, gens);
      if (a.name != "inv") continue;
      Interval iv = spectral_interval(*a.arg, gens).bounds;
      if (iv.lo < a.params.at(0))
        throw ParseError("inv(" + print_term(*a.arg) + ", " + to_string(a.params[0]) +
                             "): lower bound not certified (spectral enclosure " + iv.str() + ")",
                         0);
    }
  }
}

std::string print_monomial(const Monomial& m) {
  std::string out;
  for (const Atom& a : m) {
    if (!out.empty()) out += ' ';
    switch (a.kind) {
      case Atom::Kind::Gen:
        out += a.name;
        break;
      case Atom::Kind::GenAdj:
        out += a.name + "*";
        break;
      case Atom::Kind::Call:
        out += a.name + "(" + print_term(*a.arg);
        for (const auto& p : a.params) out += ", " + to_string(p);
        out += ")";
        break;
    }
  }
  return out;
}

std::string print_term(const NormalForm& t) {
  if (t.is_zero()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [m, c0] : t.terms()) {
    Coefficient c = c0;
    bool negative = (c.is_real() && sgn(c.re()) < 0) || (sgn(c.re()) == 0 && sgn(c.im()) < 0);
    if (negative) c = -c;
    if (first)
      out += negative ? "-" : "";
    else
      out += negative ? " - " : " + ";
    first = false;
    if (m.empty())
      out += c.str();
    else if (c.is_one())
      out += print_monomial(m);
    else
      out += c.str() + " " + print_monomial(m);
  }
  return out;
}

std::string trim(std::string_view text) {
  size_t a = 0, b = text.size();
  while (a < b && std::isspace(static_cast<unsigned char>(text[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(text[b - 1]))) --b;
  return std::string(text.substr(a, b - a));
}

std::vector<std::string> split_top_level(std::string_view text, char sep) {
  std::vector<std::string> out;
  int depth = 0;
  size_t start = 0;
  for (size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    if (c == '(' || c == '[' || c == '{') ++depth;
    if (c == ')' || c == ']' || c == '}') --depth;
    if (c == sep && depth == 0) {
      out.push_back(trim(text.substr(start, i - start)));
      start = i + 1;
    }
  }
  out.push_back(trim(text.substr(start)));
  return out;
}

}  // namespace cstar
