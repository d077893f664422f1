#pragma once

#include <Eigen/Dense>

#include <functional>
#include <map>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "cstar/presentation.hpp"

namespace cstar {

using MatrixMap = std::map<std::string, Eigen::MatrixXcd>;

/// One random instantiation of a schema that satisfies its requirements.
struct LemmaSample {
  MatrixMap terms;
  std::map<std::string, Rational> scalars;
};

using LemmaSampler = std::function<LemmaSample(std::mt19937_64&, int dim)>;

/// A trusted functional-calculus identity or norm bound over term variables
/// and exact scalar parameters.  Templates are written in the relation DSL;
/// `{name}` stands for a scalar parameter or a `let` value.
struct LemmaSchema {
  enum class Kind { Identity, NormBound };

  std::string name;
  std::string description;
  std::vector<std::string> term_vars;
  std::vector<std::string> scalar_vars;
  std::vector<std::pair<std::string, std::string>> lets;  // name, scalar template
  std::vector<std::string> scalar_conditions;             // "{lam} >= 1"
  std::vector<std::string> required;                      // relation templates
  std::vector<std::string> positive;                      // term templates, >= 0 in the quotient
  std::vector<std::pair<std::string, std::string>> caps;  // term template, norm template
  Kind kind = Kind::Identity;
  std::string conclusion;  // relation template, or the bounded term for NormBound
  std::string bound;       // NormBound only
  LemmaSampler sampler;    // builtins; user schemata are sampled by representation search
  std::vector<std::map<std::string, Rational>> sample_scalars;  // scalar values for search-based sampling
  std::string origin = "builtin";

  /// Registry-file text for this schema.
  std::string text() const;
};

class LemmaError : public Error {
 public:
  using Error::Error;
};

/// A schema applied to concrete terms of an ambient presentation with every
/// side condition discharged.
struct LemmaInstance {
  std::string schema;
  std::string label;
  LemmaSchema::Kind kind = LemmaSchema::Kind::Identity;
  std::vector<std::pair<std::string, std::string>> bindings;  // printed
  std::vector<std::string> discharged;
  NormalForm conclusion;  // relation body, or bounded term
  NormValue bound;
};

class LemmaRegistry {
 public:
  void add(LemmaSchema schema);
  const LemmaSchema* find(const std::string& name) const;
  const LemmaSchema& at(const std::string& name) const;
  std::vector<std::string> names() const;
  bool empty() const { return schemas_.empty(); }
  std::string fingerprint() const;

  static std::shared_ptr<const LemmaRegistry> make_builtin();
  static const LemmaRegistry& active();
  static void set_active(std::shared_ptr<const LemmaRegistry> registry);

 private:
  std::map<std::string, LemmaSchema> schemas_;
};

/// Scalar values including `let` definitions, after checking conditions.
std::map<std::string, Rational> schema_scalars(const LemmaSchema& s, const std::map<std::string, Rational>& given);

/// Replaces {name} placeholders by parenthesized rationals.
std::string fill_template(const std::string& text, const std::map<std::string, Rational>& scalars);

/// Template over the schema's term variables (as generators), scalars filled in.
NormalForm template_term(const LemmaSchema& s, const std::string& text, const std::map<std::string, Rational>& scalars);
std::vector<NormalForm> template_relation(const LemmaSchema& s, const std::string& text,
                                          const std::map<std::string, Rational>& scalars);

LemmaInstance instantiate_lemma(const LemmaSchema& s, const std::map<std::string, NormalForm>& terms,
                                const std::map<std::string, Rational>& scalars, const Presentation& ambient);

/// Bindings text "s = y, T = 1/2 x + 1/2" is parsed over ambient generators.
LemmaInstance instantiate_lemma(const std::string& schema, std::string_view bindings, const Presentation& ambient,
                                const LemmaRegistry& registry = LemmaRegistry::active());

}  // namespace cstar
