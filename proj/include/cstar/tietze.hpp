#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "cstar/certificate.hpp"
#include "cstar/lemmas.hpp"
#include "cstar/presentation.hpp"

namespace cstar {

class TietzeError : public Error {
 public:
  using Error::Error;
};

enum class Mode { Strict, Permissive };
std::string mode_name(Mode m);

/// One piece of evidence; a step may combine several with '&'.
struct Justification {
  enum class Kind { Certificate, AutoCertificate, Lemma, Oracle };
  Kind kind = Kind::Oracle;
  Certificate cert;      // Certificate: parsed when the step is checked
  std::string cert_text;
  std::string schema;    // Lemma
  std::string bindings;  // Lemma, parsed against the ambient presentation
  std::string label;     // Lemma: name under which a certificate may cite the conclusion

  std::string text() const;
};

using Justifications = std::vector<Justification>;

/// "cert[...] & fclemma(name; s = y) as L & oracle"
Justifications parse_justifications(std::string_view text);
std::string print_justifications(const Justifications& js);

struct RelationItem {
  std::string name;
  std::string text;  // relation DSL; unused when removing
  Justifications by;
};

struct GeneratorItem {
  std::string symbol;
  NormValue norm;        // AddGenerators
  std::string text;      // AddGenerators: defining term over the old generators
  std::string relation;  // defining relation: created (default def_<symbol>) or eliminated
  Justifications by;     // norm-bound evidence
};

struct TietzeMove {
  enum class Kind { AddRelations, RemoveRelations, AddGenerators, RemoveGenerators };
  Kind kind = Kind::AddRelations;
  std::vector<RelationItem> relations;
  std::vector<GeneratorItem> generators;
  int line = 0;

  static TietzeMove add_relation(std::string name, std::string text, Justifications by);
  static TietzeMove remove_relation(std::string name, Justifications by);
  static TietzeMove add_generator(std::string symbol, NormValue norm, std::string text, Justifications by = {});
  static TietzeMove remove_generator(std::string symbol, std::string relation, Justifications by = {});

  std::string text() const;
};

std::string move_kind_name(TietzeMove::Kind k);

struct CheckOptions {
  Mode mode = Mode::Strict;
  /// Factor degree for `cert auto`.
  int cert_degree = 1;
  /// Without the registry every lemma justification is an unverified gap.
  bool use_registry = true;
  const LemmaRegistry* registry = nullptr;  // default: the active registry
};

struct MoveOutcome {
  Presentation result;
  std::vector<std::string> gaps;   // "unverified-norm-gap: ...", "oracle-pending: ...", "fclemma-unverified: ..."
  std::vector<std::string> notes;  // evidence actually used
  /// Generators eliminated by the move and the terms that replaced them.
  std::vector<std::pair<std::string, NormalForm>> eliminated;
};

/// Applies one move after checking every side condition.  Strict mode turns
/// each gap into a TietzeError.
MoveOutcome apply_move(const Presentation& p, const TietzeMove& m, const CheckOptions& options = {});

/// Body c*s + rest with rest free of s: returns t = -rest/c.
std::optional<NormalForm> eliminable(const NormalForm& body, const std::string& symbol);

struct Derivation {
  Presentation start;
  std::vector<TietzeMove> steps;
  std::optional<Presentation> end;
  std::string start_path;
  std::string end_path;
};

/// Script text; `start:`/`end:` paths are resolved against `base_dir`.
Derivation parse_derivation(std::string_view text, const std::string& base_dir = ".");
Derivation load_derivation(const std::string& path);
std::string print_derivation(const Derivation& d);

struct StepReport {
  int step = 0;
  int line = 0;
  std::string kind;
  std::string text;
  std::string status;  // ok | gap | fail | skipped
  std::vector<std::string> gaps;
  std::vector<std::string> notes;
  std::string message;
};

struct DerivationReport {
  Mode mode = Mode::Strict;
  bool pass = false;
  std::vector<StepReport> steps;
  std::vector<std::string> gaps;
  int failed_step = 0;  // 1-based; 0 when every step applied
  bool end_checked = false;
  bool end_matches = false;
  std::string message;
  Presentation result;
  /// Start generators as terms over the final generators.
  Substitution translation;
};

DerivationReport check_derivation(const Derivation& d, const CheckOptions& options = {});
std::string format_report(const DerivationReport& r);
nlohmann::ordered_json to_json(const DerivationReport& r);

struct BridgeResult {
  Presentation joint;
  Derivation first;   // p1 -> joint
  Derivation second;  // p2 -> joint
  std::vector<std::string> gaps;
  std::map<std::string, std::string> renames;  // second presentation's clashing generators
};

struct BridgeOptions {
  Mode mode = Mode::Strict;
  int cert_degree = 1;
};

/// dict1: generators of p1 -> terms over p2's generators; dict2 the reverse.
BridgeResult bridge(const Presentation& p1, const Presentation& p2, const std::map<std::string, std::string>& dict1,
                    const std::map<std::string, std::string>& dict2, const BridgeOptions& options = {});

struct SimplifyBudget {
  int max_degree = 1;
  int max_steps = 20;
};

struct SimplifyResult {
  Presentation result;
  Derivation derivation;
};

SimplifyResult auto_simplify(const Presentation& p, const SimplifyBudget& budget = {});

}  // namespace cstar
