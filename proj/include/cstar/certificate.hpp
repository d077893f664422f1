#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cstar/presentation.hpp"

namespace cstar {

/// a · r · b, or a · r* · b when `starred`.
struct Summand {
  NormalForm a;
  bool starred = false;
  std::string relation;
  NormalForm b;
};

/// Witness that target = sum of summands lies in the algebraic ideal.
using Certificate = std::vector<Summand>;

/// Named bodies a certificate may cite, in a fixed order.
using RelationTable = std::vector<std::pair<std::string, NormalForm>>;

RelationTable relation_table(const Presentation& p);

/// Normal form of the certificate sum; throws on unknown relation names.
NormalForm expand_certificate(const Certificate& c, const RelationTable& rels);

/// Exact: the expanded sum must equal target with no tolerance.
bool check_certificate(const RelationTable& rels, const Certificate& c, const NormalForm& target);
bool check_certificate(const Presentation& p, const Certificate& c, const NormalForm& target);

struct CertificateSearch {
  int max_degree = 1;
  /// Upper limit on candidate products a·r·b per degree level.
  size_t max_candidates = 6000;
};

/// Finds a certificate with factor monomials of degree <= max_degree over
/// the letters s, s* for s in `letters`.  Degrees are tried in increasing
/// order and candidates are enumerated deterministically, so the result is
/// reproducible.  Complete at each degree up to the candidate cap.
std::optional<Certificate> find_certificate(const RelationTable& rels, const NormalForm& target,
                                            const std::vector<std::string>& letters,
                                            const CertificateSearch& opts = {});

/// "cert[(a ; rel ; b), (a ; rel* ; b)]"; factors are parsed over `gens`.
Certificate parse_certificate(std::string_view text, const NormedSet& gens);
std::string print_certificate(const Certificate& c);

}  // namespace cstar
