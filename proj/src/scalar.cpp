#include "cstar/scalar.hpp"

#include <cctype>
#include <cmath>
#include <sstream>

namespace cstar {

std::string to_string(const Rational& q) {
  Rational c = q;
  c.canonicalize();
  return c.get_str();
}

Rational parse_rational(std::string_view text) {
  std::string s(text);
  auto bad = [&] { return Error("malformed rational '" + s + "'"); };
  if (s.empty()) throw bad();
  size_t dot = s.find('.');
  Rational out;
  if (dot != std::string::npos) {
    std::string intpart = s.substr(0, dot);
    std::string frac = s.substr(dot + 1);
    bool neg = !intpart.empty() && intpart[0] == '-';
    if (neg) intpart.erase(0, 1);
    if (intpart.empty()) intpart = "0";
    for (char c : intpart + frac)
      if (!std::isdigit(static_cast<unsigned char>(c))) throw bad();
    mpz_class num(intpart + frac, 10);
    mpz_class den;
    mpz_ui_pow_ui(den.get_mpz_t(), 10, frac.size());
    out = Rational(num, den);
    out.canonicalize();
    if (neg) out = -out;
  } else {
    size_t slash = s.find('/');
    auto check_int = [&](const std::string& t) {
      size_t start = (!t.empty() && (t[0] == '-' || t[0] == '+')) ? 1 : 0;
      if (start >= t.size()) throw bad();
      for (size_t i = start; i < t.size(); ++i)
        if (!std::isdigit(static_cast<unsigned char>(t[i]))) throw bad();
    };
    if (slash == std::string::npos) {
      check_int(s);
      out = Rational(mpz_class(s[0] == '+' ? s.substr(1) : s, 10));
    } else {
      std::string n = s.substr(0, slash), d = s.substr(slash + 1);
      check_int(n);
      check_int(d);
      mpz_class dz(d, 10);
      if (dz == 0) throw Error("zero denominator in '" + s + "'");
      out = Rational(mpz_class(n[0] == '+' ? n.substr(1) : n, 10), dz);
    }
  }
  out.canonicalize();
  return out;
}

double to_double(const Rational& q) { return q.get_d(); }

std::optional<Rational> exact_sqrt(const Rational& q) {
  if (sgn(q) < 0) return std::nullopt;
  mpz_class n = q.get_num(), d = q.get_den();
  if (!mpz_perfect_square_p(n.get_mpz_t()) || !mpz_perfect_square_p(d.get_mpz_t())) return std::nullopt;
  mpz_class rn, rd;
  mpz_sqrt(rn.get_mpz_t(), n.get_mpz_t());
  mpz_sqrt(rd.get_mpz_t(), d.get_mpz_t());
  Rational r(rn, rd);
  r.canonicalize();
  return r;
}

namespace {
// floor(sqrt(q) * 2^96) for q >= 0
mpz_class scaled_isqrt(const Rational& q, mpz_class& scale) {
  mpz_ui_pow_ui(scale.get_mpz_t(), 2, 96);
  mpz_class num = q.get_num() * scale * scale;
  mpz_class n;
  mpz_fdiv_q(n.get_mpz_t(), num.get_mpz_t(), q.get_den().get_mpz_t());
  mpz_class r;
  mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
  return r;
}
}  // namespace

Rational sqrt_lower(const Rational& q) {
  if (sgn(q) <= 0) return 0;
  if (auto e = exact_sqrt(q)) return *e;
  mpz_class scale;
  mpz_class r = scaled_isqrt(q, scale);
  Rational out(r, scale);
  out.canonicalize();
  return out;
}

Rational sqrt_upper(const Rational& q) {
  if (sgn(q) <= 0) return 0;
  if (auto e = exact_sqrt(q)) return *e;
  mpz_class scale;
  mpz_class r = scaled_isqrt(q, scale);
  Rational out(r + 1, scale);
  out.canonicalize();
  return out;
}

namespace {
// Taylor partial sum and a remainder bound for q >= 0.
void exp_bounds_nonneg(const Rational& q, Rational& lo, Rational& hi) {
  Rational sum = 1, term = 1;
  int k = 0;
  Rational tiny(1, 1);
  tiny /= Rational(mpz_class("1000000000000000000000000000000"));
  for (;;) {
    ++k;
    term *= q;
    term /= k;
    sum += term;
    if (k > 2 * q.get_d() + 4 && term <= tiny * sum) break;
    if (k > 400) break;
  }
  lo = sum;
  // remainder <= next_term / (1 - q/(k+2))
  Rational next = term * q / (k + 1);
  Rational ratio = q / (k + 2);
  hi = sum + next / (1 - ratio);
  lo.canonicalize();
  hi.canonicalize();
}
}  // namespace

Rational exp_lower(const Rational& q) {
  Rational lo, hi;
  if (sgn(q) >= 0) {
    exp_bounds_nonneg(q, lo, hi);
    return lo;
  }
  exp_bounds_nonneg(-q, lo, hi);
  Rational r = 1 / hi;
  r.canonicalize();
  return r;
}

Rational exp_upper(const Rational& q) {
  Rational lo, hi;
  if (sgn(q) >= 0) {
    exp_bounds_nonneg(q, lo, hi);
    return hi;
  }
  exp_bounds_nonneg(-q, lo, hi);
  Rational r = 1 / lo;
  r.canonicalize();
  return r;
}

Rational rmin(const Rational& a, const Rational& b) { return a < b ? a : b; }
Rational rmax(const Rational& a, const Rational& b) { return a < b ? b : a; }
Rational rabs(const Rational& a) { return sgn(a) < 0 ? Rational(-a) : a; }

Interval::Interval(Rational l, Rational h) : lo(std::move(l)), hi(std::move(h)) {
  if (hi < lo) throw Error("empty interval [" + to_string(lo) + ", " + to_string(hi) + "]");
}

bool Interval::contains(double v, double slack) const {
  return v >= lo.get_d() - slack && v <= hi.get_d() + slack;
}

std::string Interval::str() const { return "[" + to_string(lo) + ", " + to_string(hi) + "]"; }

Interval operator+(const Interval& a, const Interval& b) { return {a.lo + b.lo, a.hi + b.hi}; }

Interval operator*(const Rational& c, const Interval& a) {
  if (sgn(c) >= 0) return {c * a.lo, c * a.hi};
  return {c * a.hi, c * a.lo};
}

Interval hull(const Interval& a, const Interval& b) { return {rmin(a.lo, b.lo), rmax(a.hi, b.hi)}; }

bool operator==(const Interval& a, const Interval& b) { return a.lo == b.lo && a.hi == b.hi; }

Coefficient::Coefficient(Rational re, Rational im) : re_(std::move(re)), im_(std::move(im)) {
  re_.canonicalize();
  im_.canonicalize();
}

Rational Coefficient::abs_upper() const {
  if (is_real()) return rabs(re_);
  if (sgn(re_) == 0) return rabs(im_);
  return sqrt_upper(abs_squared());
}

std::complex<double> Coefficient::to_complex() const { return {re_.get_d(), im_.get_d()}; }

Coefficient& Coefficient::operator+=(const Coefficient& o) {
  re_ += o.re_;
  im_ += o.im_;
  return *this;
}

Coefficient& Coefficient::operator-=(const Coefficient& o) {
  re_ -= o.re_;
  im_ -= o.im_;
  return *this;
}

Coefficient& Coefficient::operator*=(const Coefficient& o) {
  if (is_real() && o.is_real()) {
    re_ *= o.re_;
    return *this;
  }
  Rational r = re_ * o.re_ - im_ * o.im_;
  Rational i = re_ * o.im_ + im_ * o.re_;
  re_ = r;
  im_ = i;
  return *this;
}

Coefficient& Coefficient::operator/=(const Coefficient& o) {
  if (o.is_zero()) throw Error("division by zero coefficient");
  if (o.is_real()) {
    re_ /= o.re_;
    im_ /= o.re_;
    return *this;
  }
  Rational d = o.abs_squared();
  *this *= o.conj();
  re_ /= d;
  im_ /= d;
  return *this;
}

std::string Coefficient::str() const {
  if (is_real()) return to_string(re_);
  if (sgn(re_) == 0) {
    if (im_ == 1) return "i";
    if (im_ == -1) return "-i";
    return to_string(im_) + "i";
  }
  std::string s = "(" + to_string(re_);
  if (sgn(im_) < 0)
    s += " - " + (im_ == -1 ? std::string("i") : to_string(-im_) + "i");
  else
    s += " + " + (im_ == 1 ? std::string("i") : to_string(im_) + "i");
  return s + ")";
}

int compare(const Coefficient& a, const Coefficient& b) {
  int c = cmp(a.re(), b.re());
  if (c != 0) return c < 0 ? -1 : 1;
  c = cmp(a.im(), b.im());
  return c < 0 ? -1 : (c > 0 ? 1 : 0);
}

NormValue NormValue::of(const Rational& q) {
  if (sgn(q) < 0) throw Error("norm value must be nonnegative, got " + to_string(q));
  NormValue v;
  v.square_ = q * q;
  v.square_.canonicalize();
  v.sqrt_form_ = false;
  return v;
}

NormValue NormValue::sqrt_of(const Rational& q) {
  if (sgn(q) < 0) throw Error("sqrt of negative value " + to_string(q));
  if (auto e = exact_sqrt(q)) return of(*e);
  NormValue v;
  v.square_ = q;
  v.square_.canonicalize();
  v.sqrt_form_ = true;
  return v;
}

NormValue NormValue::parse(std::string_view text) {
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s += c;
  if (s.rfind("sqrt(", 0) == 0 && s.back() == ')') return sqrt_of(parse_rational(s.substr(5, s.size() - 6)));
  return of(parse_rational(s));
}

Rational NormValue::lower() const {
  if (!sqrt_form_) return *exact_sqrt(square_);
  return sqrt_lower(square_);
}

Rational NormValue::upper() const {
  if (!sqrt_form_) return *exact_sqrt(square_);
  return sqrt_upper(square_);
}

double NormValue::to_double() const { return std::sqrt(square_.get_d()); }

bool NormValue::at_least(const Rational& bound) const {
  if (sgn(bound) <= 0) return true;
  return square_ >= bound * bound;
}

std::string NormValue::str() const {
  if (sqrt_form_) return "sqrt(" + to_string(square_) + ")";
  return to_string(*exact_sqrt(square_));
}

}  // namespace cstar
