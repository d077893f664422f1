#include "cstar/repsearch.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include <algorithm>
#include <cmath>
#include <limits>

namespace cstar {

using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using Eigen::VectorXd;
using cd = std::complex<double>;

double op_norm(const MatrixXcd& m) {
  if (m.size() == 0) return 0.0;
  return Eigen::JacobiSVD<MatrixXcd>(m).singularValues()(0);
}

namespace {

std::vector<double> to_doubles(const std::vector<Rational>& v) {
  std::vector<double> out;
  for (const auto& q : v) out.push_back(q.get_d());
  return out;
}

struct Evaluator {
  const MatrixMap& rep;
  int dim;
  bool unital;
  EvalDiagnostics* diag;

  const MatrixXcd& generator(const std::string& s) const {
    auto it = rep.find(s);
    if (it == rep.end()) throw Error("no matrix assigned to generator '" + s + "'");
    if (it->second.rows() != dim || it->second.cols() != dim)
      throw Error("matrix for '" + s + "' has the wrong size");
    return it->second;
  }

  MatrixXcd call(const Atom& a) const {
    const FunctionSymbol& f = FunctionRegistry::active().at(a.name);
    MatrixXcd arg = term(a.argument());
    std::vector<double> params = to_doubles(a.params);
    if (f.fn_class == FnClass::Entire) return series(f, arg);

    MatrixXcd h = (arg + arg.adjoint()) / 2.0;
    double asym = op_norm(arg - h);
    if (diag) diag->asymmetry = std::max(diag->asymmetry, asym);
    if (asym > 1e-8 * std::max(1.0, op_norm(h)))
      throw Error("argument of " + a.name + " is not Hermitian (asymmetry " + std::to_string(asym) + ")");
    Eigen::SelfAdjointEigenSolver<MatrixXcd> es(h);
    if (es.info() != Eigen::Success) throw Error("eigendecomposition failed in " + a.name);
    Eigen::VectorXcd values(dim);
    for (int i = 0; i < dim; ++i) {
      double moved = 0.0;
      values(i) = f.scalar(es.eigenvalues()(i), params, moved);
      if (diag) diag->clamped = std::max(diag->clamped, moved);
    }
    return es.eigenvectors() * values.asDiagonal() * es.eigenvectors().adjoint();
  }

  MatrixXcd series(const FunctionSymbol& f, const MatrixXcd& a) const {
    MatrixXcd power = MatrixXcd::Identity(dim, dim), sum = MatrixXcd::Zero(dim, dim);
    // Taylor coefficients of the entire symbols are bounded by 1/k!, so
    // na^k / k! majorizes the k-th term.
    double na = op_norm(a), majorant = 1.0;
    for (int k = 0; k < 400; ++k) {
      sum += f.series(k) * power;
      majorant *= na / (k + 1);
      if (k + 1 > na && majorant <= 1e-17 * std::max(1.0, op_norm(sum))) break;
      power = power * a;
    }
    return sum;
  }

  MatrixXcd atom(const Atom& a) const {
    switch (a.kind) {
      case Atom::Kind::Gen: return generator(a.name);
      case Atom::Kind::GenAdj: return generator(a.name).adjoint();
      case Atom::Kind::Call: return call(a);
    }
    return {};
  }

  MatrixXcd monomial(const Monomial& m) const {
    if (m.empty()) {
      if (!unital) throw Error("unit monomial in a non-unital evaluation");
      return MatrixXcd::Identity(dim, dim);
    }
    MatrixXcd out = atom(m.front());
    for (size_t i = 1; i < m.size(); ++i) out = out * atom(m[i]);
    return out;
  }

  MatrixXcd term(const NormalForm& t) const {
    MatrixXcd out = MatrixXcd::Zero(dim, dim);
    for (const auto& [m, c] : t.terms()) out += c.to_complex() * monomial(m);
    return out;
  }
};

bool polynomial_in(const Atom& a, const std::string& s) {
  return a.kind != Atom::Kind::Call || !a.argument().mentions(s);
}

}  // namespace

MatrixXcd eval_term(const MatrixMap& rep, const NormalForm& t, int dim, bool unital, EvalDiagnostics* diag) {
  if (dim < 1) throw Error("dimension must be positive");
  return Evaluator{rep, dim, unital, diag}.term(t);
}

MatrixXcd eval_derivative(const MatrixMap& rep, const NormalForm& t, int dim, const std::string& symbol,
                          const MatrixXcd& direction, bool unital) {
  Evaluator ev{rep, dim, unital, nullptr};
  MatrixXcd out = MatrixXcd::Zero(dim, dim);
  for (const auto& [m, c] : t.terms()) {
    if (m.empty()) continue;
    std::vector<MatrixXcd> letters;
    for (const auto& a : m) {
      if (!polynomial_in(a, symbol)) throw Error("derivative through a function symbol is not supported");
      letters.push_back(ev.atom(a));
    }
    for (size_t k = 0; k < m.size(); ++k) {
      if (m[k].kind == Atom::Kind::Call || m[k].name != symbol) continue;
      MatrixXcd acc = MatrixXcd::Identity(dim, dim);
      for (size_t j = 0; j < m.size(); ++j)
        acc = acc * (j == k ? (m[k].kind == Atom::Kind::Gen ? direction : MatrixXcd(direction.adjoint())) : letters[j]);
      out += c.to_complex() * acc;
    }
  }
  return out;
}


namespace {

struct Problem {
  int dim;
  bool unital;
  std::vector<std::string> names;
  std::vector<double> caps;
  std::vector<NormalForm> bodies;
  std::vector<bool> analytic;
  // Optional push term sqrt(weight) * (target - ||eval(push)||_F).
  const NormalForm* push = nullptr;
  double push_weight = 0.0;
  double push_target = 0.0;

  Problem(const Presentation& p, int d, const SearchConfig& cfg) : dim(d), unital(p.flavor == Flavor::Unital) {
    if (d < 1) throw Error("dimension must be positive");
    for (const auto& s : p.gens.names()) {
      names.push_back(s);
      caps.push_back(p.gens.norm(s).to_double());
    }
    for (const auto& r : p.relations) {
      bodies.push_back(r.body);
      analytic.push_back(cfg.analytic && r.body.function_symbols().empty());
    }
  }

  int block() const { return 2 * dim * dim; }
  int n_params() const { return static_cast<int>(names.size()) * block(); }
  int n_residuals() const { return static_cast<int>(bodies.size()) * block() + (push ? 1 : 0); }

  MatrixMap unpack(const VectorXd& theta) const {
    MatrixMap out;
    for (size_t g = 0; g < names.size(); ++g) {
      MatrixXcd m(dim, dim);
      int base = static_cast<int>(g) * block();
      for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) {
          int at = base + 2 * (i * dim + j);
          m(i, j) = cd(theta(at), theta(at + 1));
        }
      out[names[g]] = m;
    }
    return out;
  }

  VectorXd pack(const MatrixMap& rep) const {
    VectorXd theta(n_params());
    for (size_t g = 0; g < names.size(); ++g) {
      const MatrixXcd& m = rep.at(names[g]);
      int base = static_cast<int>(g) * block();
      for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) {
          int at = base + 2 * (i * dim + j);
          theta(at) = m(i, j).real();
          theta(at + 1) = m(i, j).imag();
        }
    }
    return theta;
  }

  // Nearest point of the norm ball: singular values clipped at the cap.
  void project(VectorXd& theta) const {
    MatrixMap rep = unpack(theta);
    bool changed = false;
    for (size_t g = 0; g < names.size(); ++g) {
      MatrixXcd& m = rep[names[g]];
      Eigen::JacobiSVD<MatrixXcd> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
      if (svd.singularValues()(0) <= caps[g]) continue;
      Eigen::VectorXd sv = svd.singularValues().cwiseMin(caps[g]);
      m = svd.matrixU() * sv.cast<cd>().asDiagonal() * svd.matrixV().adjoint();
      changed = true;
    }
    if (changed) theta = pack(rep);
  }

  void write_block(VectorXd& r, int at, const MatrixXcd& m) const {
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j) {
        r(at + 2 * (i * dim + j)) = m(i, j).real();
        r(at + 2 * (i * dim + j) + 1) = m(i, j).imag();
      }
  }

  VectorXd residual(const VectorXd& theta, EvalDiagnostics* diag = nullptr) const {
    MatrixMap rep = unpack(theta);
    VectorXd r(n_residuals());
    for (size_t b = 0; b < bodies.size(); ++b)
      write_block(r, static_cast<int>(b) * block(), eval_term(rep, bodies[b], dim, unital, diag));
    if (push) r(r.size() - 1) = std::sqrt(push_weight) * (push_target - eval_term(rep, *push, dim, unital, diag).norm());
    return r;
  }

  double relation_part(const VectorXd& r) const {
    return r.head(static_cast<Eigen::Index>(bodies.size()) * block()).norm();
  }

  MatrixXd jacobian(const VectorXd& theta) const {
    MatrixXd jac = MatrixXd::Zero(n_residuals(), n_params());
    MatrixMap rep = unpack(theta);
    bool any_numeric = push != nullptr;
    for (size_t b = 0; b < bodies.size(); ++b) any_numeric = any_numeric || !analytic[b];
    for (int k = 0; k < n_params(); ++k) {
      int g = k / block(), e = (k % block()) / 2;
      MatrixXcd dir = MatrixXcd::Zero(dim, dim);
      dir(e / dim, e % dim) = k % 2 ? cd(0, 1) : cd(1, 0);
      VectorXd col = VectorXd::Zero(n_residuals());
      for (size_t b = 0; b < bodies.size(); ++b)
        if (analytic[b])
          write_block(col, static_cast<int>(b) * block(), eval_derivative(rep, bodies[b], dim, names[g], dir, unital));
      if (any_numeric) {
        double h = 1e-6 * std::max(1.0, std::abs(theta(k)));
        VectorXd plus = theta, minus = theta;
        plus(k) += h;
        minus(k) -= h;
        VectorXd fd = (residual(plus) - residual(minus)) / (2 * h);
        for (size_t b = 0; b < bodies.size(); ++b)
          if (!analytic[b]) col.segment(static_cast<int>(b) * block(), block()) = fd.segment(static_cast<int>(b) * block(), block());
        if (push) col(col.size() - 1) = fd(fd.size() - 1);
      }
      jac.col(k) = col;
    }
    return jac;
  }

  // Restarts cycle through general, Hermitian and normal starting points;
  // Newton-type iterations tend to keep the spectral shape of the start.
  VectorXd initial(std::mt19937_64& rng, int index) const {
    std::normal_distribution<double> normal(0.0, 1.0);
    std::uniform_real_distribution<double> scale(0.1, 1.0), unit(-1.0, 1.0);
    auto gaussian = [&] {
      MatrixXcd m(dim, dim);
      for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) m(i, j) = cd(normal(rng), normal(rng));
      return m;
    };
    MatrixMap rep;
    for (size_t g = 0; g < names.size(); ++g) {
      MatrixXcd m;
      if (index % 3 == 0) {
        m = gaussian();
        double n = op_norm(m);
        m *= n > 0 ? caps[g] * scale(rng) / n : 0.0;
      } else {
        Eigen::HouseholderQR<MatrixXcd> qr(gaussian());
        MatrixXcd u = qr.householderQ() * MatrixXcd::Identity(dim, dim);
        Eigen::VectorXcd ev(dim);
        for (int i = 0; i < dim; ++i) {
          double re = unit(rng), im = index % 3 == 2 ? unit(rng) : 0.0;
          double r = std::hypot(re, im);
          ev(i) = r > 1 ? cd(re, im) / r * caps[g] : cd(re, im) * caps[g];
        }
        m = u * ev.asDiagonal() * u.adjoint();
      }
      rep[names[g]] = m;
    }
    return pack(rep);
  }
};

// Levenberg-Marquardt on |residual|^2 with projection onto the norm caps.
VectorXd minimize(const Problem& prob, VectorXd theta, const SearchConfig& cfg) {
  prob.project(theta);
  VectorXd r = prob.residual(theta);
  double cost = r.squaredNorm(), mu = 1e-3;
  double stop = std::pow(cfg.tol_feas * 1e-3, 2);
  // A push never reaches zero cost; it ends once progress stalls.
  int flat = 0;
  for (int it = 0; it < cfg.max_iters && mu < 1e12 && flat < 8; ++it) {
    if (!prob.push && cost <= stop) break;
    MatrixXd jac = prob.jacobian(theta);
    MatrixXd normal = jac.transpose() * jac;
    VectorXd grad = jac.transpose() * r;
    bool improved = false;
    while (mu < 1e12) {
      MatrixXd damped = normal;
      damped.diagonal().array() += mu;
      VectorXd step = damped.ldlt().solve(-grad);
      VectorXd next = theta + step;
      prob.project(next);
      VectorXd rn = prob.residual(next);
      double cn = rn.squaredNorm();
      if (std::isfinite(cn) && cn < cost) {
        bool tiny = (next - theta).norm() <= 1e-15 * (1.0 + theta.norm());
        flat = prob.push && cost - cn <= 1e-9 * cost ? flat + 1 : 0;
        theta = next;
        r = rn;
        cost = cn;
        mu = std::max(mu / 3.0, 1e-12);
        improved = !tiny;
        break;
      }
      mu *= 4.0;
    }
    if (!improved) break;
  }
  return theta;
}

std::mt19937_64 restart_rng(uint64_t seed, int index) {
  std::seed_seq seq{static_cast<uint32_t>(seed), static_cast<uint32_t>(seed >> 32), static_cast<uint32_t>(index)};
  return std::mt19937_64(seq);
}

MatrixRep make_rep(const Problem& prob, const VectorXd& theta) { return {prob.dim, prob.unpack(theta)}; }

}  // namespace

double relation_residual(const Presentation& p, const MatrixRep& rep, EvalDiagnostics* diag) {
  double sum = 0.0;
  bool unital = p.flavor == Flavor::Unital;
  for (const auto& r : p.relations) sum += eval_term(rep.assign, r.body, rep.dim, unital, diag).squaredNorm();
  return std::sqrt(sum);
}

SearchResult search_feasible(const Presentation& p, int dim, const SearchConfig& cfg) {
  Problem prob(p, dim, cfg);
  SearchResult out;
  out.residual = std::numeric_limits<double>::infinity();
  for (int k = 0; k < cfg.restarts; ++k) {
    auto rng = restart_rng(cfg.seed, k);
    VectorXd theta = minimize(prob, prob.initial(rng, k), cfg);
    RestartOutcome o;
    o.index = k;
    o.rep = make_rep(prob, theta);
    EvalDiagnostics diag;
    o.residual = relation_residual(p, o.rep, &diag);
    o.clamped = diag.clamped;
    if (o.residual < out.residual) {
      out.residual = o.residual;
      out.best = o.rep;
    }
    out.restarts.push_back(std::move(o));
  }
  if (cfg.restarts <= 0) out.best.dim = dim;
  return out;
}


namespace {

struct Candidate {
  MatrixRep rep;
  double residual = std::numeric_limits<double>::infinity();
  double value = 0.0;
  double clamped = 0.0;
};

Candidate assess(const Presentation& p, const Problem& prob, const VectorXd& theta, const NormalForm& q) {
  Candidate c;
  c.rep = make_rep(prob, theta);
  EvalDiagnostics diag;
  c.residual = relation_residual(p, c.rep, &diag);
  c.value = op_norm(eval_term(c.rep.assign, q, c.rep.dim, prob.unital, &diag));
  c.clamped = diag.clamped;
  return c;
}

// Better: near-feasible beats infeasible; among near-feasible the larger
// value wins; otherwise the smaller residual.
bool better(const Candidate& a, const Candidate& b, double tol) {
  bool fa = a.residual <= tol, fb = b.residual <= tol;
  if (fa != fb) return fa;
  if (fa) return a.value > b.value;
  return a.residual < b.residual;
}

// Per restart: reach feasibility, push ||q|| up against the relations, then
// polish back to feasibility.  Returns the best candidate of each restart.
std::vector<Candidate> explore(const Presentation& p, const NormalForm& q, int dim, const SearchConfig& cfg,
                               const std::vector<double>& weights) {
  Problem prob(p, dim, cfg);
  std::vector<Candidate> out;
  for (int k = 0; k < cfg.restarts; ++k) {
    auto rng = restart_rng(cfg.seed, k);
    VectorXd start = prob.initial(rng, k);
    VectorXd feasible = minimize(prob, start, cfg);
    Candidate best = assess(p, prob, feasible, q);

    // The push starts from the random point: at a feasible point q often
    // vanishes, where ||q|| has no useful gradient.
    for (double w : weights) {
      Problem pushed = prob;
      pushed.push = &q;
      pushed.push_weight = w;
      pushed.push_target = 2.0 * (eval_term(prob.unpack(start), q, dim, prob.unital).norm() + 1.0);
      VectorXd polished = minimize(prob, minimize(pushed, start, cfg), cfg);
      Candidate c = assess(p, prob, polished, q);
      if (better(c, best, cfg.tol_feas)) best = c;
    }
    out.push_back(std::move(best));
  }
  return out;
}

}  // namespace

RefuteResult refute_redundancy(const Presentation& p, const NormalForm& q, int dim, const SearchConfig& cfg) {
  RefuteResult out;
  auto cands = explore(p, q, dim, cfg, {cfg.push_weight});
  const Candidate* best = nullptr;
  for (size_t k = 0; k < cands.size(); ++k) {
    out.restarts.push_back({static_cast<int>(k), cands[k].residual, cands[k].clamped, cands[k].rep});
    if (!best || better(cands[k], *best, cfg.tol_feas)) best = &cands[k];
  }
  if (!best) {
    out.rep.dim = dim;
    return out;
  }
  out.rep = best->rep;
  out.residual = best->residual;
  out.value = best->value;
  out.witness = best->residual < cfg.tol_feas && best->value > cfg.refute_factor * cfg.tol_feas;
  return out;
}

LowerBoundResult norm_lower_bound(const Presentation& p, const NormalForm& t, int dim, const SearchConfig& cfg) {
  LowerBoundResult out;
  out.rep.dim = dim;
  // A light push barely leaves the attractor at q = 0; heavier ones are
  // tried as well.
  std::vector<double> weights{cfg.push_weight, 10 * cfg.push_weight, 100 * cfg.push_weight};
  for (const auto& c : explore(p, t, dim, cfg, weights)) {
    if (c.residual > cfg.tol_feas) continue;
    if (!out.found || c.value > out.value) {
      out.found = true;
      out.value = c.value;
      out.rep = c.rep;
      out.residual = c.residual;
    }
  }
  return out;
}

SchemaValidation validate_schema(const LemmaSchema& s, int samples, uint64_t seed, int max_dim) {
  SchemaValidation out;
  out.schema = s.name;
  out.samples = samples;
  try {
    for (int i = 0; i < samples; ++i) {
      auto rng = restart_rng(seed, i);
      int dim = std::uniform_int_distribution<int>(1, std::max(1, max_dim))(rng);
      LemmaSample sample;
      if (s.sampler) {
        sample = s.sampler(rng, dim);
      } else {
        if (!s.sample_scalars.empty()) sample.scalars = s.sample_scalars[i % s.sample_scalars.size()];
        auto sc = schema_scalars(s, sample.scalars);
        Presentation p;
        for (const auto& v : s.term_vars) p.gens.add(v, NormValue::of(2));
        for (const auto& [term, cap] : s.caps)
          if (p.gens.contains(term)) {
            p.gens.remove(term);
            p.gens.add(term, NormValue::sqrt_of(parse_norm_square(fill_template(cap, sc))));
          }
        int n = 0;
        for (const auto& req : s.required)
          for (auto& body : template_relation(s, req, sc)) p.relations.push_back({"q" + std::to_string(++n), body});
        SearchConfig cfg;
        cfg.seed = seed + static_cast<uint64_t>(i);
        cfg.restarts = 4;
        auto found = search_feasible(p, dim, cfg);
        if (!found.feasible(cfg)) continue;
        sample.terms = found.best.assign;
      }
      auto sc = schema_scalars(s, sample.scalars);
      double side = 0.0;
      bool admissible = true;
      for (const auto& req : s.required)
        for (const auto& body : template_relation(s, req, sc))
          side = std::max(side, eval_term(sample.terms, body, dim).norm());
      admissible = admissible && side <= 1e-7;
      for (const auto& pos : s.positive) {
        MatrixXcd m = eval_term(sample.terms, template_term(s, pos, sc), dim);
        Eigen::SelfAdjointEigenSolver<MatrixXcd> es((m + m.adjoint()) / 2.0, Eigen::EigenvaluesOnly);
        admissible = admissible && es.eigenvalues().minCoeff() >= -1e-9 && op_norm(m - m.adjoint()) <= 1e-9;
      }
      for (const auto& [term, cap] : s.caps) {
        double c = std::sqrt(parse_norm_square(fill_template(cap, sc)).get_d());
        admissible = admissible && op_norm(eval_term(sample.terms, template_term(s, term, sc), dim)) <= c + 1e-9;
      }
      if (!admissible) continue;
      ++out.accepted;
      out.worst_side = std::max(out.worst_side, side);
      double violation = 0.0;
      if (s.kind == LemmaSchema::Kind::Identity) {
        for (const auto& body : template_relation(s, s.conclusion, sc))
          violation = std::max(violation, eval_term(sample.terms, body, dim).norm());
      } else {
        double bound = std::sqrt(parse_norm_square(fill_template(s.bound, sc)).get_d());
        violation = std::max(0.0, op_norm(eval_term(sample.terms, template_term(s, s.conclusion, sc), dim)) - bound);
      }
      out.worst = std::max(out.worst, violation);
    }
  } catch (const Error& e) {
    out.message = e.what();
    out.ok = false;
    return out;
  }
  out.ok = out.accepted > 0 && 2 * out.accepted >= out.samples && out.worst <= 1e-6;
  if (out.accepted == 0)
    out.message = "no admissible sample";
  else if (2 * out.accepted < out.samples)
    out.message = "too few admissible samples";
  else if (out.worst > 1e-6)
    out.message = "conclusion violated numerically";
  return out;
}

nlohmann::ordered_json rep_to_json(const MatrixRep& rep) {
  nlohmann::ordered_json out;
  out["dim"] = rep.dim;
  nlohmann::ordered_json assign = nlohmann::ordered_json::object();
  for (const auto& [s, m] : rep.assign) {
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (int i = 0; i < m.rows(); ++i) {
      nlohmann::ordered_json row = nlohmann::ordered_json::array();
      for (int j = 0; j < m.cols(); ++j) row.push_back({m(i, j).real(), m(i, j).imag()});
      rows.push_back(row);
    }
    assign[s] = rows;
  }
  out["assign"] = assign;
  return out;
}

namespace {

nlohmann::ordered_json caps_json(const Presentation& p, const MatrixRep& rep) {
  nlohmann::ordered_json out = nlohmann::ordered_json::array();
  for (const auto& s : p.gens.names()) {
    auto it = rep.assign.find(s);
    if (it == rep.assign.end()) continue;
    double n = op_norm(it->second), cap = p.gens.norm(s).to_double();
    out.push_back({{"generator", s}, {"cap", p.gens.norm(s).str()}, {"norm", n}, {"ok", n <= cap + 1e-9}});
  }
  return out;
}

nlohmann::ordered_json restarts_json(const std::vector<RestartOutcome>& rs) {
  nlohmann::ordered_json out = nlohmann::ordered_json::array();
  for (const auto& r : rs) out.push_back({{"index", r.index}, {"residual", r.residual}, {"clamped", r.clamped}});
  return out;
}

}  // namespace

nlohmann::ordered_json to_json(const SearchResult& r, const Presentation& p) {
  nlohmann::ordered_json out;
  out["kind"] = "repsearch";
  out["dim"] = r.best.dim;
  out["residual"] = r.residual;
  out["restarts"] = restarts_json(r.restarts);
  out["best"] = rep_to_json(r.best);
  out["caps"] = caps_json(p, r.best);
  EvalDiagnostics diag;
  if (!r.best.assign.empty()) relation_residual(p, r.best, &diag);
  out["clamped"] = diag.clamped;
  out["asymmetry"] = diag.asymmetry;
  return out;
}

nlohmann::ordered_json to_json(const RefuteResult& r, const Presentation& p) {
  nlohmann::ordered_json out;
  out["kind"] = "refute";
  out["witness"] = r.witness;
  out["residual"] = r.residual;
  out["value"] = r.value;
  out["restarts"] = restarts_json(r.restarts);
  out["best"] = rep_to_json(r.rep);
  out["caps"] = caps_json(p, r.rep);
  return out;
}

nlohmann::ordered_json to_json(const LowerBoundResult& r, const Presentation& p) {
  nlohmann::ordered_json out;
  out["kind"] = "lowerbound";
  out["found"] = r.found;
  out["value"] = r.value;
  out["residual"] = r.residual;
  out["best"] = rep_to_json(r.rep);
  out["caps"] = caps_json(p, r.rep);
  return out;
}

}  // namespace cstar
