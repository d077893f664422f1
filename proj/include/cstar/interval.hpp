#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "cstar/term.hpp"

namespace cstar {

/// What the relations of a presentation say about one generator in the
/// quotient.  Every field only ever tightens a bound soundly.
struct GeneratorFacts {
  bool self_adjoint = false;
  bool idempotent = false;
  std::optional<Rational> lower;     // spectrum >= lower
  std::optional<Rational> upper;     // spectrum <= upper
  std::optional<Rational> norm_cap;  // norm <= cap (isometries, projections)
};

using Facts = std::map<std::string, GeneratorFacts>;

/// Reads generator facts off relation bodies by exact pattern matching:
/// s - s*, positivity expansions of a*s + b, s*s - 1, s s* - 1, s - s s.
Facts derive_facts(const NormedSet& gens, const std::vector<NormalForm>& bodies);

/// Symbols known to be self-adjoint under `facts`.
std::set<std::string> self_adjoint_symbols(const Facts& facts);

/// Body of the relation "a >= 0", namely a - p((a + a*)/2).
NormalForm positivity_body(const NormalForm& a);

/// Enclosure of the universal spectrum (self-adjoint terms) or the norm.
struct SpectralInterval {
  Interval bounds;
  bool self_adjoint = false;
  Rational norm_upper;
};

/// Compositional, sound, exact-rational bound.  Uses generator caps,
/// positivity patterns (b*b, b*Pb, p, sqrt, nonnegative sums), registry
/// range maps, and any quotient facts supplied.  For a term that is not
/// self-adjoint the bounds are [-n, n] for the norm bound n.
SpectralInterval spectral_interval(const NormalForm& t, const NormedSet& gens, const Facts& facts = {});
Rational norm_upper_bound(const NormalForm& t, const NormedSet& gens, const Facts& facts = {});

/// Self-adjointness modulo the self-adjoint symbols in `facts`.
bool is_self_adjoint_mod(const NormalForm& t, const Facts& facts);

}  // namespace cstar
