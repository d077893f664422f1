#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "cstar/scalar.hpp"

namespace cstar {

/// Real symbols act on self-adjoint arguments through the continuous
/// functional calculus; entire symbols accept any argument via power series.
enum class FnClass { Real, Entire };

enum class FnDomain { SelfAdjoint, Positive, Any };

/// A function symbol usable inside terms.  Real symbols are total continuous
/// functions on the line: arguments outside the natural domain are clamped
/// into it, and the clamping is reported by numerical evaluation.
struct FunctionSymbol {
  std::string name;
  FnClass fn_class = FnClass::Real;
  FnDomain domain = FnDomain::SelfAdjoint;
  size_t n_params = 0;
  std::string description;

  /// Throws Error when parameters are outside the admissible set.
  std::function<void(const std::vector<Rational>&)> check_params;
  /// Sound outward enclosure of phi([lo, hi]) for a self-adjoint argument.
  std::function<Interval(const Interval&, const std::vector<Rational>&)> range;
  /// Entire symbols: bound on ||phi(A)|| given ||A|| <= n.
  std::function<Rational(const Rational&, const std::vector<Rational>&)> norm_bound;
  /// Exact value at a rational point when it is rational, nullopt otherwise.
  std::function<std::optional<Rational>(const Rational&, const std::vector<Rational>&)> exact;
  /// Scalar evaluation; `clamped` receives the distance moved into the domain.
  std::function<double(double, const std::vector<double>&, double& clamped)> scalar;
  /// Entire symbols: k-th Taylor coefficient at 0.
  std::function<double(int)> series;
};

class FunctionRegistry {
 public:
  void add(FunctionSymbol symbol);
  const FunctionSymbol* find(const std::string& name) const;
  const FunctionSymbol& at(const std::string& name) const;
  std::vector<std::string> names() const;
  bool contains(const std::string& name) const { return find(name) != nullptr; }
  /// Stable hash of the registered symbol names and definitions.
  std::string fingerprint() const;
  void add_fingerprint_text(const std::string& text) { extra_text_ += text; }

  static std::shared_ptr<const FunctionRegistry> make_builtin();
  static const FunctionRegistry& builtin();
  /// Process-wide registry used by parsing, bounds and evaluation.
  static const FunctionRegistry& active();
  static void set_active(std::shared_ptr<const FunctionRegistry> registry);

 private:
  std::map<std::string, FunctionSymbol> symbols_;
  std::string extra_text_;
};

/// Canonical name for accepted aliases (pow_half -> sqrt, inv_lb -> inv).
std::string canonical_function_name(const std::string& name);

/// Names that may not be used as generators.
bool is_reserved_word(const std::string& name);

/// One polynomial piece t -> sum c_k t^k valid on [lo, hi].
struct PolynomialPiece {
  Rational lo;
  Rational hi;
  std::vector<Rational> coeffs;
};

/// Real symbol from a piecewise polynomial with rational breakpoints; the
/// argument is clamped into [first.lo, last.hi].
FunctionSymbol make_piecewise_symbol(const std::string& name, std::vector<PolynomialPiece> pieces,
                                     FnDomain domain);

/// The piecewise map f_lambda on [0, 1]: identity up to sqrt(1 - lambda^-2),
/// then linear down to 0 at 1.
double f_lambda_value(double nu, double lambda);

}  // namespace cstar
