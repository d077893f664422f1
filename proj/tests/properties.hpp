#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cstar/repsearch.hpp"

namespace cstar::props {

struct SuiteResult {
  std::string name;
  int cases = 0;
  int failures = 0;
  int skipped = 0;  // draws without a certified bound
  std::string first_failure;
};

// Randomized kernel properties; 10000 cases in total at scale 1.
std::vector<SuiteResult> run_all(uint64_t seed, double scale = 1.0);

SuiteResult ring_axioms(uint64_t seed, int cases);
SuiteResult star_involution(uint64_t seed, int cases);
SuiteResult normalize_idempotent(uint64_t seed, int cases);
SuiteResult augmentation_character(uint64_t seed, int cases);
SuiteResult certificate_exactness(uint64_t seed, int cases);
SuiteResult tietze_inverse_pairs(uint64_t seed, int cases);
SuiteResult spectral_soundness(uint64_t seed, int cases);

// One line of corpus/sandwich.txt: "file.pres | term".
struct SandwichOutcome {
  std::string presentation;
  std::string term;
  int line = 0;
  double lower = 0.0;  // best ||t|| over near-feasible representations
  double upper = 0.0;  // certified symbolic bound
  bool found = false;
  bool ok = false;
  std::string error;
};

std::vector<SandwichOutcome> sandwich_checks(const std::string& corpus_dir, int dim, const SearchConfig& cfg);

}  // namespace cstar::props
