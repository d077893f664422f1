#pragma once

#include <map>
#include <string>
#include <vector>

#include "json.hpp"

#include "cstar/interval.hpp"
#include "cstar/macros.hpp"

namespace cstar {

enum class Flavor { Unital, NonUnital };

std::string flavor_name(Flavor f);
Flavor parse_flavor(const std::string& text);

/// <S, f | R> in either category.  Relations keep their declaration order.
struct Presentation {
  Flavor flavor = Flavor::Unital;
  NormedSet gens;
  std::vector<Relation> relations;
  std::vector<std::string> notes;

  const Relation* find(const std::string& name) const;
  bool has_relation(const std::string& name) const { return find(name) != nullptr; }
  /// Throws on duplicate names and on generators outside `gens`.
  void add_relation(Relation r);
  void remove_relation(const std::string& name);
  std::vector<NormalForm> bodies() const;
  Facts facts() const { return derive_facts(gens, bodies()); }
};

/// One message per violated invariant; empty when the presentation is valid.
std::vector<std::string> validate(const Presentation& p);

/// Same generators and relation bodies in the unital category.
Presentation unitize(const Presentation& p);

struct JoinResult {
  Presentation joined;
  /// Per input part: generator renames applied (old -> new).
  std::vector<std::map<std::string, std::string>> renames;
};

/// Coproduct in the unital category.  Clashing generator names in later
/// parts are suffixed _2, _3, ... unless auto_rename is false.
JoinResult join(const std::vector<Presentation>& parts, bool auto_rename = true);

struct SplitResult {
  std::vector<Presentation> parts;
  std::vector<std::string> warnings;
};

/// Free-product factors along connected components of generator
/// co-occurrence.  Generator-free relations go to every factor.
SplitResult split(const Presentation& p);

/// Equality up to relation names and generator order.
bool structurally_equal(const Presentation& a, const Presentation& b);

struct PresentationParseOptions {
  /// Accept relations over undeclared identifiers so that `validate` can
  /// report them instead of failing at parse time.
  bool lenient = false;
};

Presentation parse_presentation(std::string_view text, const PresentationParseOptions& options = {});
Presentation load_presentation(const std::string& path, const PresentationParseOptions& options = {});
std::string print_presentation(const Presentation& p);
nlohmann::ordered_json to_json(const Presentation& p);

std::string read_file(const std::string& path);

}  // namespace cstar
