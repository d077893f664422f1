#pragma once

#include <gmpxx.h>

#include <complex>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace cstar {

using Rational = mpq_class;

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string to_string(const Rational& q);
Rational parse_rational(std::string_view text);
double to_double(const Rational& q);

/// Exact square root when q is the square of a rational.
std::optional<Rational> exact_sqrt(const Rational& q);
/// Rational enclosures of sqrt(q) for q >= 0; both exact when q is a square.
Rational sqrt_lower(const Rational& q);
Rational sqrt_upper(const Rational& q);

/// Rational bounds on exp(q), lower <= e^q <= upper.
Rational exp_lower(const Rational& q);
Rational exp_upper(const Rational& q);

Rational rmin(const Rational& a, const Rational& b);
Rational rmax(const Rational& a, const Rational& b);
Rational rabs(const Rational& a);

/// Closed interval with exact rational endpoints, lo <= hi.
struct Interval {
  Rational lo;
  Rational hi;

  Interval() = default;
  Interval(Rational l, Rational h);
  static Interval point(const Rational& v) { return {v, v}; }
  static Interval symmetric(const Rational& r) { return {-r, r}; }

  Rational magnitude() const { return rmax(rabs(lo), rabs(hi)); }
  bool contains(double v, double slack = 0.0) const;
  bool contains(const Interval& other) const { return lo <= other.lo && other.hi <= hi; }
  std::string str() const;
};

Interval operator+(const Interval& a, const Interval& b);
Interval operator*(const Rational& c, const Interval& a);
Interval hull(const Interval& a, const Interval& b);
bool operator==(const Interval& a, const Interval& b);

/// Gaussian rational re + im*i; the coefficient field of normal forms.
class Coefficient {
 public:
  Coefficient() = default;
  Coefficient(Rational re, Rational im = 0);
  Coefficient(long v) : re_(v), im_(0) {}
  Coefficient(int v) : re_(v), im_(0) {}

  const Rational& re() const { return re_; }
  const Rational& im() const { return im_; }
  bool is_zero() const { return sgn(re_) == 0 && sgn(im_) == 0; }
  bool is_real() const { return sgn(im_) == 0; }
  bool is_one() const { return re_ == 1 && sgn(im_) == 0; }

  Coefficient conj() const { return {re_, -im_}; }
  Rational abs_squared() const { return re_ * re_ + im_ * im_; }
  Rational abs_upper() const;
  std::complex<double> to_complex() const;

  Coefficient& operator+=(const Coefficient& o);
  Coefficient& operator-=(const Coefficient& o);
  Coefficient& operator*=(const Coefficient& o);
  Coefficient& operator/=(const Coefficient& o);
  Coefficient operator-() const { return {-re_, -im_}; }

  friend Coefficient operator+(Coefficient a, const Coefficient& b) { return a += b; }
  friend Coefficient operator-(Coefficient a, const Coefficient& b) { return a -= b; }
  friend Coefficient operator*(Coefficient a, const Coefficient& b) { return a *= b; }
  friend Coefficient operator/(Coefficient a, const Coefficient& b) { return a /= b; }
  friend bool operator==(const Coefficient& a, const Coefficient& b) {
    return a.re_ == b.re_ && a.im_ == b.im_;
  }

  /// Text accepted back by the term parser: "3/4", "-2i", "(1/2 + 3/4i)".
  std::string str() const;

 private:
  Rational re_{0};
  Rational im_{0};
};

int compare(const Coefficient& a, const Coefficient& b);

/// Nonnegative exact scalar, either a rational q or sqrt(q).  Stored by its
/// square so comparisons are exact.
class NormValue {
 public:
  NormValue() = default;
  static NormValue of(const Rational& q);
  static NormValue sqrt_of(const Rational& q);
  static NormValue parse(std::string_view text);

  const Rational& square() const { return square_; }
  bool is_sqrt() const { return sqrt_form_; }
  Rational lower() const;
  Rational upper() const;
  double to_double() const;

  /// value >= bound, exactly.
  bool at_least(const Rational& bound) const;
  std::string str() const;

  friend bool operator==(const NormValue& a, const NormValue& b) { return a.square_ == b.square_; }
  friend bool operator<(const NormValue& a, const NormValue& b) { return a.square_ < b.square_; }
  friend bool operator<=(const NormValue& a, const NormValue& b) { return a.square_ <= b.square_; }

 private:
  Rational square_{0};
  bool sqrt_form_ = false;
};

}  // namespace cstar
