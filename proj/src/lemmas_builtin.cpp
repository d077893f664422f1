#include "cstar/lemmas.hpp"

#include <Eigen/QR>

namespace cstar {

namespace {

using Eigen::MatrixXcd;
using cd = std::complex<double>;

MatrixXcd gaussian(std::mt19937_64& rng, int rows, int cols) {
  std::normal_distribution<double> n(0.0, 1.0);
  MatrixXcd m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = cd(n(rng), n(rng));
  return m;
}

MatrixXcd unitary(std::mt19937_64& rng, int d) {
  Eigen::HouseholderQR<MatrixXcd> qr(gaussian(rng, d, d));
  return qr.householderQ() * MatrixXcd::Identity(d, d);
}

double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

// Hermitian with spectrum drawn from [lo, hi].
MatrixXcd positive(std::mt19937_64& rng, int d, double lo, double hi) {
  MatrixXcd u = unitary(rng, d);
  Eigen::VectorXcd s(d);
  for (int i = 0; i < d; ++i) s(i) = uniform(rng, lo, hi);
  return u * s.asDiagonal() * u.adjoint();
}

// Orthogonal projection onto the column space of a full-column-rank m.
MatrixXcd column_projection(const MatrixXcd& m) {
  if (m.cols() == 0) return MatrixXcd::Zero(m.rows(), m.rows());
  return m * (m.adjoint() * m).inverse() * m.adjoint();
}

struct IdempotentTriple {
  MatrixXcd x, r, k;
};

// Idempotent x with ||x|| <= lam together with its range and kernel projections.
IdempotentTriple idempotent(std::mt19937_64& rng, int d, double lam) {
  int rank = std::uniform_int_distribution<int>(0, d)(rng);
  int rest = d - rank;
  MatrixXcd b = gaussian(rng, rank, rest);
  double bn = rank && rest ? Eigen::JacobiSVD<MatrixXcd>(b).singularValues()(0) : 0.0;
  double target = std::sqrt(std::max(lam * lam - 1.0, 0.0)) * uniform(rng, 0.0, 0.999);
  if (bn > 0) b *= target / bn;
  MatrixXcd x0 = MatrixXcd::Zero(d, d), r0 = MatrixXcd::Zero(d, d);
  x0.topLeftCorner(rank, rank).setIdentity();
  x0.topRightCorner(rank, rest) = -b;
  r0.topLeftCorner(rank, rank).setIdentity();
  MatrixXcd kb(d, rest);
  kb << b, MatrixXcd::Identity(rest, rest);
  MatrixXcd k0 = column_projection(kb);
  MatrixXcd w = unitary(rng, d);
  return {w * x0 * w.adjoint(), w * r0 * w.adjoint(), w * k0 * w.adjoint()};
}

Rational pick(std::mt19937_64& rng, const std::vector<Rational>& options) {
  return options[std::uniform_int_distribution<size_t>(0, options.size() - 1)(rng)];
}

// Left-invertible x with mu^2 x*x >= 1, with its polar parts q and u.
void polar_triple(std::mt19937_64& rng, int d, double mu, MatrixXcd& x, MatrixXcd& q, MatrixXcd& u) {
  MatrixXcd a = unitary(rng, d), w = unitary(rng, d);
  Eigen::VectorXcd s(d);
  for (int i = 0; i < d; ++i) s(i) = uniform(rng, 1.0 / mu, 1.0 / mu + 2.0);
  x = a * s.asDiagonal() * w.adjoint();
  q = w * s.asDiagonal() * w.adjoint();
  u = a * w.adjoint();
}

const char* kDefU = "u = {mu} x inv(p({mu} sqrt(x* x) - 1) + 1, 1)";
const char* kDefR = "r = x x* inv(1 + (x - x*)* (x - x*), 1)";
const char* kDefK = "k = (1 - x) (1 - x)* inv(1 + (x* - x)* (x* - x), 1)";
const char* kRecon = "inv(1 - f_lam(r k* k r*, {lam}), {m}) (r - r k)";

LemmaSchema schema(std::string name, std::string description, std::vector<std::string> terms,
                   std::vector<std::string> scalars = {}) {
  LemmaSchema s;
  s.name = std::move(name);
  s.description = std::move(description);
  s.term_vars = std::move(terms);
  s.scalar_vars = std::move(scalars);
  return s;
}

LemmaSample polar_from_x(std::mt19937_64& rng, int d) {
  Rational mu = pick(rng, {Rational(1, 2), Rational(1), Rational(2)});
  LemmaSample out;
  out.scalars["mu"] = mu;
  polar_triple(rng, d, mu.get_d(), out.terms["x"], out.terms["q"], out.terms["u"]);
  return out;
}

LemmaSample polar_from_parts(std::mt19937_64& rng, int d) {
  Rational mu = pick(rng, {Rational(1, 2), Rational(1), Rational(2)});
  LemmaSample out;
  out.scalars["mu"] = mu;
  MatrixXcd u = unitary(rng, d);
  MatrixXcd q = positive(rng, d, 1.0 / mu.get_d(), 1.0 / mu.get_d() + 2.0);
  out.terms["u"] = u;
  out.terms["q"] = q;
  out.terms["x"] = u * q;
  return out;
}

LemmaSample idempotent_sample(std::mt19937_64& rng, int d, bool with_m) {
  static const std::vector<std::pair<Rational, Rational>> lam_m = {
      {Rational(3, 2), Rational(1, 4)}, {Rational(2), Rational(1, 8)}, {Rational(3), Rational(1, 20)}};
  const auto& [lam, m] = lam_m[std::uniform_int_distribution<size_t>(0, lam_m.size() - 1)(rng)];
  LemmaSample out;
  out.scalars["lam"] = lam;
  if (with_m) out.scalars["m"] = m;
  auto t = idempotent(rng, d, lam.get_d());
  out.terms["x"] = t.x;
  out.terms["r"] = t.r;
  out.terms["k"] = t.k;
  return out;
}

}  // namespace

std::shared_ptr<const LemmaRegistry> LemmaRegistry::make_builtin() {
  auto reg = std::make_shared<LemmaRegistry>();

  {
    auto s = schema("sqrt_square", "square root of a positive element squares back", {"A"});
    s.positive = {"A"};
    s.conclusion = "sqrt((A + A*)/2) sqrt((A + A*)/2) = A";
    s.sampler = [](std::mt19937_64& rng, int d) {
      return LemmaSample{{{"A", positive(rng, d, 0.0, 3.0)}}, {}};
    };
    reg->add(s);
  }
  {
    auto s = schema("positive_by_definition", "a generator equal to a positive term is positive", {"s", "T"});
    s.required = {"s = T"};
    s.positive = {"T"};
    s.conclusion = "s >= 0";
    s.sampler = [](std::mt19937_64& rng, int d) {
      MatrixXcd t = positive(rng, d, 0.0, 2.0);
      return LemmaSample{{{"s", t}, {"T", t}}, {}};
    };
    reg->add(s);
  }
  {
    auto s = schema("sqrt_lower_bound", "mu^2 x*x >= 1 gives mu |x| >= 1", {"q", "x"}, {"mu"});
    s.scalar_conditions = {"{mu} > 0"};
    s.required = {"q = sqrt(x* x)", "left_inv(x, {mu})"};
    s.conclusion = "1 <= {mu} q";
    s.sampler = polar_from_x;
    reg->add(s);
  }
  {
    auto s = schema("polar_isometry", "the polar part of a left-invertible element is an isometry", {"u", "x"},
                    {"mu"});
    s.scalar_conditions = {"{mu} > 0"};
    s.required = {kDefU, "left_inv(x, {mu})"};
    s.conclusion = "u* u = 1";
    s.sampler = polar_from_x;
    reg->add(s);
  }
  {
    auto s = schema("recover_x_polar", "polar decomposition x = u |x|", {"x", "q", "u"}, {"mu"});
    s.scalar_conditions = {"{mu} > 0"};
    s.required = {"q = sqrt(x* x)", kDefU, "left_inv(x, {mu})"};
    s.conclusion = "x = u q";
    s.sampler = polar_from_x;
    reg->add(s);
  }
  for (const char* which : {"left_inv_from_polar", "polar_modulus", "polar_unitary_part"}) {
    auto s = schema(which, "consequence of x = u q with u isometric and mu q >= 1", {"x", "q", "u"}, {"mu"});
    s.scalar_conditions = {"{mu} > 0"};
    s.required = {"x = u q", "u* u = 1", "1 <= {mu} q"};
    std::string w = which;
    s.conclusion = w == "left_inv_from_polar" ? "left_inv(x, {mu})" : w == "polar_modulus" ? "q = sqrt(x* x)" : kDefU;
    s.sampler = polar_from_parts;
    reg->add(s);
  }
  {
    auto s = schema("range_projection_norm", "the range projection of an idempotent is a contraction", {"e"});
    s.required = {"e = e e"};
    s.kind = LemmaSchema::Kind::NormBound;
    s.conclusion = "e e* inv(1 + (e - e*)* (e - e*), 1)";
    s.bound = "1";
    s.sampler = [](std::mt19937_64& rng, int d) { return LemmaSample{{{"e", idempotent(rng, d, 3.0).x}}, {}}; };
    reg->add(s);
  }
  for (const char* which : {"projection_from_idempotent_range", "projection_from_idempotent_range_sa"}) {
    auto s = schema(which, "the range formula of an idempotent yields a projection", {"e", "r"});
    s.required = {"e = e e", "r = e e* inv(1 + (e - e*)* (e - e*), 1)"};
    s.conclusion = std::string(which) == "projection_from_idempotent_range" ? "r r = r" : "r = r*";
    s.sampler = [](std::mt19937_64& rng, int d) {
      auto t = idempotent(rng, d, 3.0);
      return LemmaSample{{{"e", t.x}, {"r", t.r}}, {}};
    };
    reg->add(s);
  }
  for (const char* which : {"two_projection_angle", "complementary_angle"}) {
    auto s = schema(which, "angle between range and kernel of an idempotent of norm <= lam", {"x", "r", "k"},
                    {"lam"});
    s.lets = {{"nu0sq", "1 - 1/{lam}^2"}};
    s.scalar_conditions = {"{lam} >= 1"};
    s.required = {"x = x x", kDefR, kDefK};
    s.caps = {{"x", "{lam}"}};
    s.conclusion = std::string(which) == "two_projection_angle" ? "norm_le(r k, sqrt({nu0sq}))"
                                                                  : "norm_le((1 - r) (1 - k), sqrt({nu0sq}))";
    s.sampler = [](std::mt19937_64& rng, int d) { return idempotent_sample(rng, d, false); };
    reg->add(s);
  }
  {
    auto s = schema("recover_x_two_projections", "an idempotent from its range and kernel projections",
                    {"x", "r", "k"}, {"lam", "m"});
    s.lets = {{"nu0sq", "1 - 1/{lam}^2"}};
    s.scalar_conditions = {"{lam} >= 1", "{m} > 0"};
    s.required = {"x = x x", kDefR, kDefK};
    s.caps = {{"x", "{lam}"}};
    s.positive = {"1 - f_lam(r k* k r*, {lam}) - {m}"};
    s.conclusion = std::string("x = ") + kRecon;
    s.sampler = [](std::mt19937_64& rng, int d) { return idempotent_sample(rng, d, true); };
    reg->add(s);
  }
  const std::vector<std::string> two_projection_requires = {
      std::string("x = ") + kRecon, "r r = r", "r = r*", "k k = k", "k = k*", "norm_le(r k, sqrt({nu0sq}))",
      "norm_le((1 - r) (1 - k), sqrt({nu0sq}))"};
  for (const char* which :
       {"range_from_two_projections_r", "range_from_two_projections_k", "idempotent_from_two_projections"}) {
    auto s = schema(which, "two projections in general position determine an idempotent", {"x", "r", "k"},
                    {"lam", "m"});
    s.lets = {{"nu0sq", "1 - 1/{lam}^2"}};
    s.scalar_conditions = {"{lam} >= 1", "{m} > 0"};
    s.required = two_projection_requires;
    std::string w = which;
    s.conclusion = w == "range_from_two_projections_r" ? kDefR : w == "range_from_two_projections_k" ? kDefK : "x = x x";
    s.sampler = [](std::mt19937_64& rng, int d) { return idempotent_sample(rng, d, true); };
    reg->add(s);
  }
  {
    auto s = schema("two_projection_idempotent_norm", "norm of the idempotent built from two projections",
                    {"r", "k"}, {"lam", "m"});
    s.lets = {{"nu0sq", "1 - 1/{lam}^2"}};
    s.scalar_conditions = {"{lam} >= 1", "{m} > 0"};
    s.required = {"r r = r", "r = r*", "k k = k", "k = k*", "norm_le(r k, sqrt({nu0sq}))",
                  "norm_le((1 - r) (1 - k), sqrt({nu0sq}))"};
    s.positive = {"1 - f_lam(r k* k r*, {lam}) - {m}"};
    s.kind = LemmaSchema::Kind::NormBound;
    s.conclusion = kRecon;
    s.bound = "{lam}";
    s.sampler = [](std::mt19937_64& rng, int d) {
      LemmaSample full = idempotent_sample(rng, d, true);
      full.terms.erase("x");
      return full;
    };
    reg->add(s);
  }
  return reg;
}

}  // namespace cstar
