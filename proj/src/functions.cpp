#include "cstar/functions.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <sstream>

namespace cstar {

void FunctionRegistry::add(FunctionSymbol symbol) {
  if (symbol.name.empty()) throw Error("function symbol without a name");
  symbols_[symbol.name] = std::move(symbol);
}

const FunctionSymbol* FunctionRegistry::find(const std::string& name) const {
  auto it = symbols_.find(canonical_function_name(name));
  return it == symbols_.end() ? nullptr : &it->second;
}

const FunctionSymbol& FunctionRegistry::at(const std::string& name) const {
  const FunctionSymbol* s = find(name);
  if (!s) throw Error("unknown function symbol '" + name + "'");
  return *s;
}

std::vector<std::string> FunctionRegistry::names() const {
  std::vector<std::string> out;
  for (const auto& [k, v] : symbols_) out.push_back(k);
  return out;
}

std::string FunctionRegistry::fingerprint() const {
  std::string text;
  for (const auto& [k, v] : symbols_) {
    text += k + ":" + std::to_string(static_cast<int>(v.fn_class)) + ":" +
            std::to_string(v.n_params) + ":" + v.description + ";";
  }
  text += extra_text_;
  // FNV-1a, enough to tell registries apart in manifests.
  uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  std::ostringstream os;
  os << std::hex << h;
  return os.str();
}

std::string canonical_function_name(const std::string& name) {
  if (name == "pow_half") return "sqrt";
  if (name == "inv_lb") return "inv";
  return name;
}

bool is_reserved_word(const std::string& name) {
  static const char* words[] = {"i",        "sqrt",      "p",         "inv",       "inv_lb", "pow_half",
                                "f_lam",    "exp",       "sin",       "cos",       "norm_le",
                                "left_inv", "right_inv", "invertible"};
  for (const char* w : words)
    if (name == w) return true;
  return FunctionRegistry::active().contains(name);
}

namespace {

Rational clamp_q(const Rational& v, const Rational& lo, const Rational& hi) {
  return v < lo ? lo : (hi < v ? hi : v);
}

void no_params(const std::vector<Rational>& ps) {
  if (!ps.empty()) throw Error("function takes no scalar parameters");
}

FunctionSymbol positive_part() {
  FunctionSymbol s;
  s.name = "p";
  s.description = "positive part t -> max(t, 0)";
  s.domain = FnDomain::SelfAdjoint;
  s.check_params = no_params;
  s.range = [](const Interval& iv, const std::vector<Rational>&) {
    return Interval(rmax(iv.lo, 0), rmax(iv.hi, 0));
  };
  s.exact = [](const Rational& c, const std::vector<Rational>&) -> std::optional<Rational> { return rmax(c, 0); };
  s.scalar = [](double t, const std::vector<double>&, double& clamped) {
    clamped = 0;
    return t > 0 ? t : 0.0;
  };
  return s;
}

FunctionSymbol square_root() {
  FunctionSymbol s;
  s.name = "sqrt";
  s.description = "square root on [0, inf), clamped below 0";
  s.domain = FnDomain::Positive;
  s.check_params = no_params;
  s.range = [](const Interval& iv, const std::vector<Rational>&) {
    return Interval(sqrt_lower(rmax(iv.lo, 0)), sqrt_upper(rmax(iv.hi, 0)));
  };
  s.exact = [](const Rational& c, const std::vector<Rational>&) -> std::optional<Rational> {
    if (sgn(c) <= 0) return Rational(0);
    return exact_sqrt(c);
  };
  s.scalar = [](double t, const std::vector<double>&, double& clamped) {
    clamped = t < 0 ? -t : 0.0;
    return t > 0 ? std::sqrt(t) : 0.0;
  };
  return s;
}

FunctionSymbol bounded_inverse() {
  FunctionSymbol s;
  s.name = "inv";
  s.description = "inverse with certified lower bound m: t -> 1/max(t, m)";
  s.domain = FnDomain::SelfAdjoint;
  s.n_params = 1;
  s.check_params = [](const std::vector<Rational>& ps) {
    if (ps.size() != 1) throw Error("inv takes exactly one lower-bound parameter");
    if (sgn(ps[0]) <= 0) throw Error("inv lower bound must be positive");
  };
  s.range = [](const Interval& iv, const std::vector<Rational>& ps) {
    const Rational& m = ps.at(0);
    return Interval(1 / rmax(iv.hi, m), 1 / rmax(iv.lo, m));
  };
  s.exact = [](const Rational& c, const std::vector<Rational>& ps) -> std::optional<Rational> {
    Rational r = 1 / rmax(c, ps.at(0));
    r.canonicalize();
    return r;
  };
  s.scalar = [](double t, const std::vector<double>& ps, double& clamped) {
    double m = ps.at(0);
    clamped = t < m ? m - t : 0.0;
    return 1.0 / std::max(t, m);
  };
  return s;
}

FunctionSymbol f_lambda() {
  FunctionSymbol s;
  s.name = "f_lam";
  s.description = "piecewise map on [0,1] with breakpoint sqrt(1 - lambda^-2)";
  s.domain = FnDomain::SelfAdjoint;
  s.n_params = 1;
  s.check_params = [](const std::vector<Rational>& ps) {
    if (ps.size() != 1) throw Error("f_lam takes exactly one parameter lambda");
    if (ps[0] < 1) throw Error("f_lam requires lambda >= 1");
  };
  s.range = [](const Interval& iv, const std::vector<Rational>& ps) {
    const Rational& lam = ps.at(0);
    Rational bp_sq = 1 - 1 / (lam * lam);
    Rational bp_lo = sqrt_lower(bp_sq), bp_hi = sqrt_upper(bp_sq);
    auto below_bp = [&](const Rational& nu) { return sgn(nu) <= 0 || nu * nu <= bp_sq; };
    // f(nu) = bp (1 - nu) / (1 - bp) on the falling branch, increasing in bp.
    auto fall = [&](const Rational& nu, const Rational& bp) {
      if (bp >= 1) return Rational(1);
      return Rational(bp * (1 - nu) / (1 - bp));
    };
    auto val_lo = [&](const Rational& nu) { return below_bp(nu) ? nu : fall(nu, bp_lo); };
    auto val_hi = [&](const Rational& nu) { return below_bp(nu) ? nu : fall(nu, bp_hi); };
    Rational a = clamp_q(iv.lo, 0, 1), b = clamp_q(iv.hi, 0, 1);
    if (below_bp(b)) return Interval(a, b);
    if (!below_bp(a)) return Interval(val_lo(b), val_hi(a));
    return Interval(rmin(val_lo(a), val_lo(b)), bp_hi);
  };
  s.exact = [](const Rational& c, const std::vector<Rational>& ps) -> std::optional<Rational> {
    const Rational& lam = ps.at(0);
    Rational bp_sq = 1 - 1 / (lam * lam);
    Rational nu = clamp_q(c, 0, 1);
    if (sgn(nu) <= 0 || nu * nu <= bp_sq) return nu;
    if (nu == 1) return Rational(0);
    auto bp = exact_sqrt(bp_sq);
    if (!bp) return std::nullopt;
    Rational r = *bp * (1 - nu) / (1 - *bp);
    r.canonicalize();
    return r;
  };
  s.scalar = [](double t, const std::vector<double>& ps, double& clamped) {
    clamped = t < 0 ? -t : (t > 1 ? t - 1 : 0.0);
    return f_lambda_value(t, ps.at(0));
  };
  return s;
}

FunctionSymbol entire(const std::string& name) {
  FunctionSymbol s;
  s.name = name;
  s.fn_class = FnClass::Entire;
  s.domain = FnDomain::Any;
  s.description = "entire function " + name + " via power series";
  s.check_params = no_params;
  // exp(n) majorizes the coefficient-wise absolute series of all three.
  s.norm_bound = [](const Rational& n, const std::vector<Rational>&) { return exp_upper(n); };
  if (name == "exp") {
    s.range = [](const Interval& iv, const std::vector<Rational>&) {
      return Interval(exp_lower(iv.lo), exp_upper(iv.hi));
    };
    s.exact = [](const Rational& c, const std::vector<Rational>&) -> std::optional<Rational> {
      if (sgn(c) == 0) return Rational(1);
      return std::nullopt;
    };
    s.scalar = [](double t, const std::vector<double>&, double& clamped) {
      clamped = 0;
      return std::exp(t);
    };
    s.series = [](int k) { return 1.0 / std::tgamma(k + 1.0); };
  } else if (name == "sin") {
    s.range = [](const Interval&, const std::vector<Rational>&) { return Interval(-1, 1); };
    s.exact = [](const Rational& c, const std::vector<Rational>&) -> std::optional<Rational> {
      if (sgn(c) == 0) return Rational(0);
      return std::nullopt;
    };
    s.scalar = [](double t, const std::vector<double>&, double& clamped) {
      clamped = 0;
      return std::sin(t);
    };
    s.series = [](int k) {
      if (k % 2 == 0) return 0.0;
      double v = 1.0 / std::tgamma(k + 1.0);
      return ((k / 2) % 2 == 0) ? v : -v;
    };
  } else {
    s.range = [](const Interval&, const std::vector<Rational>&) { return Interval(-1, 1); };
    s.exact = [](const Rational& c, const std::vector<Rational>&) -> std::optional<Rational> {
      if (sgn(c) == 0) return Rational(1);
      return std::nullopt;
    };
    s.scalar = [](double t, const std::vector<double>&, double& clamped) {
      clamped = 0;
      return std::cos(t);
    };
    s.series = [](int k) {
      if (k % 2 == 1) return 0.0;
      double v = 1.0 / std::tgamma(k + 1.0);
      return ((k / 2) % 2 == 0) ? v : -v;
    };
  }
  return s;
}

std::mutex g_active_mutex;
std::shared_ptr<const FunctionRegistry> g_active;

}  // namespace

double f_lambda_value(double nu, double lambda) {
  nu = std::clamp(nu, 0.0, 1.0);
  double bp = std::sqrt(std::max(0.0, 1.0 - 1.0 / (lambda * lambda)));
  if (nu <= bp) return nu;
  return bp / (bp - 1.0) * (nu - 1.0);
}

std::shared_ptr<const FunctionRegistry> FunctionRegistry::make_builtin() {
  auto reg = std::make_shared<FunctionRegistry>();
  reg->add(positive_part());
  reg->add(square_root());
  reg->add(bounded_inverse());
  reg->add(f_lambda());
  reg->add(entire("exp"));
  reg->add(entire("sin"));
  reg->add(entire("cos"));
  return reg;
}

const FunctionRegistry& FunctionRegistry::builtin() {
  static const std::shared_ptr<const FunctionRegistry> reg = make_builtin();
  return *reg;
}

const FunctionRegistry& FunctionRegistry::active() {
  std::lock_guard<std::mutex> lock(g_active_mutex);
  if (g_active) return *g_active;
  return builtin();
}

void FunctionRegistry::set_active(std::shared_ptr<const FunctionRegistry> registry) {
  std::lock_guard<std::mutex> lock(g_active_mutex);
  g_active = std::move(registry);
}

namespace {

Interval interval_mul(const Interval& a, const Interval& b) {
  Rational c[4] = {a.lo * b.lo, a.lo * b.hi, a.hi * b.lo, a.hi * b.hi};
  Rational lo = c[0], hi = c[0];
  for (const auto& v : c) {
    lo = rmin(lo, v);
    hi = rmax(hi, v);
  }
  return {lo, hi};
}

Rational eval_poly(const std::vector<Rational>& coeffs, const Rational& t) {
  Rational acc = 0;
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * t + *it;
  acc.canonicalize();
  return acc;
}

}  // namespace

FunctionSymbol make_piecewise_symbol(const std::string& name, std::vector<PolynomialPiece> pieces,
                                     FnDomain domain) {
  if (pieces.empty()) throw Error("piecewise function '" + name + "' has no pieces");
  for (size_t i = 0; i < pieces.size(); ++i) {
    if (pieces[i].hi < pieces[i].lo) throw Error("piece with hi < lo in '" + name + "'");
    if (i > 0 && pieces[i].lo != pieces[i - 1].hi)
      throw Error("pieces of '" + name + "' must be contiguous");
    if (i > 0 && eval_poly(pieces[i].coeffs, pieces[i].lo) != eval_poly(pieces[i - 1].coeffs, pieces[i].lo))
      throw Error("'" + name + "' is discontinuous at " + to_string(pieces[i].lo));
  }
  auto shared = std::make_shared<std::vector<PolynomialPiece>>(std::move(pieces));
  FunctionSymbol s;
  s.name = name;
  s.domain = domain;
  s.description = "piecewise polynomial " + name;
  for (const auto& pc : *shared) {
    s.description += " [" + to_string(pc.lo) + "," + to_string(pc.hi) + "]:";
    for (const auto& c : pc.coeffs) s.description += to_string(c) + ",";
  }
  s.check_params = no_params;
  s.range = [shared](const Interval& iv, const std::vector<Rational>&) {
    const Rational& dlo = shared->front().lo;
    const Rational& dhi = shared->back().hi;
    Rational a = clamp_q(iv.lo, dlo, dhi), b = clamp_q(iv.hi, dlo, dhi);
    std::optional<Interval> out;
    for (const auto& pc : *shared) {
      if (pc.hi < a || b < pc.lo) continue;
      Interval sub(rmax(a, pc.lo), rmin(b, pc.hi));
      // interval Horner: sound outward enclosure
      Interval acc = Interval::point(0);
      for (auto it = pc.coeffs.rbegin(); it != pc.coeffs.rend(); ++it)
        acc = interval_mul(acc, sub) + Interval::point(*it);
      out = out ? hull(*out, acc) : acc;
    }
    return *out;
  };
  s.exact = [shared](const Rational& c, const std::vector<Rational>&) -> std::optional<Rational> {
    Rational t = clamp_q(c, shared->front().lo, shared->back().hi);
    for (const auto& pc : *shared)
      if (pc.lo <= t && t <= pc.hi) return eval_poly(pc.coeffs, t);
    return std::nullopt;
  };
  s.scalar = [shared](double t, const std::vector<double>&, double& clamped) {
    double lo = shared->front().lo.get_d(), hi = shared->back().hi.get_d();
    double u = std::clamp(t, lo, hi);
    clamped = std::abs(u - t);
    for (const auto& pc : *shared) {
      if (u >= pc.lo.get_d() && u <= pc.hi.get_d()) {
        double acc = 0;
        for (auto it = pc.coeffs.rbegin(); it != pc.coeffs.rend(); ++it) acc = acc * u + it->get_d();
        return acc;
      }
    }
    return 0.0;
  };
  return s;
}

}  // namespace cstar
