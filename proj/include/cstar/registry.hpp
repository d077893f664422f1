#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "cstar/functions.hpp"
#include "cstar/lemmas.hpp"

namespace cstar {

/// User additions to the builtin function and schema registries.
///
///   function clip01 [domain: selfadjoint]
///     piece -1 0 : 0
///     piece 0 1 : 0, 1
///   end
///
///   schema name
///     terms: a, b
///     scalars: c
///     required: a = a*
///     conclude: ...
///     sample: c = 2
///   end
struct RegistryFile {
  std::string path;
  std::vector<FunctionSymbol> functions;
  std::vector<LemmaSchema> schemas;
  std::string text;
};

RegistryFile parse_registry(std::string_view text);
RegistryFile load_registry(const std::string& path);

/// Builtins extended by the file, installed as the active registries.
void install_registry(const RegistryFile& file);

/// Builtins only.
void reset_registry();

/// Value of CSTAR_REGISTRY, empty when unset.
std::string default_registry_path();

}  // namespace cstar
