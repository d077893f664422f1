#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <vector>

#include "json.hpp"

#include "cstar/lemmas.hpp"
#include "cstar/presentation.hpp"

namespace cstar {

/// Accumulated numerical side information of an evaluation.
struct EvalDiagnostics {
  double clamped = 0.0;    // largest distance an eigenvalue was moved into a domain
  double asymmetry = 0.0;  // largest ||A - A*|| of a real-function argument
};

/// Homomorphic evaluation of t under a generator assignment.  Real function
/// symbols act on the symmetrized argument by eigendecomposition; entire
/// ones by truncated power series.  With unital = false a unit monomial is
/// an error.
Eigen::MatrixXcd eval_term(const MatrixMap& rep, const NormalForm& t, int dim, bool unital = true,
                           EvalDiagnostics* diag = nullptr);

/// Real-linear derivative of a polynomial term (no function symbols) in the
/// direction X_s -> X_s + eps * direction.
Eigen::MatrixXcd eval_derivative(const MatrixMap& rep, const NormalForm& t, int dim, const std::string& symbol,
                                 const Eigen::MatrixXcd& direction, bool unital = true);

double op_norm(const Eigen::MatrixXcd& m);

struct MatrixRep {
  int dim = 1;
  MatrixMap assign;
};

struct SearchConfig {
  uint64_t seed = 1;
  int restarts = 20;
  int max_iters = 300;
  double tol_feas = 1e-8;
  double tol_cap = 1e-9;
  /// Witness threshold for refutation is refute_factor * tol_feas.
  double refute_factor = 10.0;
  /// Weight of the objective term while pushing a norm up.
  double push_weight = 1e-2;
  /// Use analytic Jacobians for polynomial relations.
  bool analytic = true;
};

struct RestartOutcome {
  int index = 0;
  double residual = 0.0;
  double clamped = 0.0;
  MatrixRep rep;
};

struct SearchResult {
  MatrixRep best;
  double residual = 0.0;
  std::vector<RestartOutcome> restarts;
  bool feasible(const SearchConfig& cfg) const { return residual <= cfg.tol_feas; }
};

/// Residual sqrt(sum_r ||eval(r)||_F^2) of a presentation's relations.
double relation_residual(const Presentation& p, const MatrixRep& rep, EvalDiagnostics* diag = nullptr);

/// Seeded random restarts of Levenberg-Marquardt on the relation residual,
/// each generator rescaled to its norm cap after every step.
SearchResult search_feasible(const Presentation& p, int dim, const SearchConfig& cfg);

struct RefuteResult {
  bool witness = false;
  MatrixRep rep;
  double residual = 0.0;
  double value = 0.0;  // ||eval(q)||_op at the reported representation
  std::vector<RestartOutcome> restarts;
};

/// Looks for a near-feasible representation on which q is far from zero.
RefuteResult refute_redundancy(const Presentation& p, const NormalForm& q, int dim, const SearchConfig& cfg);

struct LowerBoundResult {
  bool found = false;
  double value = 0.0;
  MatrixRep rep;
  double residual = 0.0;
};

/// Largest ||eval(t)||_op over near-feasible representations found.
LowerBoundResult norm_lower_bound(const Presentation& p, const NormalForm& t, int dim, const SearchConfig& cfg);

/// Numerical validation of a lemma schema on random instances.
struct SchemaValidation {
  std::string schema;
  int samples = 0;
  int accepted = 0;      // samples meeting every side condition
  double worst = 0.0;    // largest conclusion violation over accepted samples
  double worst_side = 0.0;
  bool ok = false;
  std::string message;
};

SchemaValidation validate_schema(const LemmaSchema& s, int samples, uint64_t seed, int max_dim = 6);

nlohmann::ordered_json rep_to_json(const MatrixRep& rep);
nlohmann::ordered_json to_json(const SearchResult& r, const Presentation& p);
nlohmann::ordered_json to_json(const RefuteResult& r, const Presentation& p);
nlohmann::ordered_json to_json(const LowerBoundResult& r, const Presentation& p);

}  // namespace cstar
