#include "doctest.h"

#include "properties.hpp"

using namespace cstar::props;

namespace {

void expect_clean(const SuiteResult& r, int cases) {
  CAPTURE(r.name);
  CAPTURE(r.first_failure);
  CHECK(r.cases == cases);
  CHECK(r.failures == 0);
}

}  // namespace

TEST_CASE("ring axioms on random polynomials") { expect_clean(ring_axioms(11, 3000), 3000); }
TEST_CASE("star is an involutive anti-automorphism") { expect_clean(star_involution(12, 1500), 1500); }
TEST_CASE("normal forms are fixed points") { expect_clean(normalize_idempotent(13, 1500), 1500); }
TEST_CASE("augmentation is a unital *-character") { expect_clean(augmentation_character(14, 1500), 1500); }
TEST_CASE("certificates are exact") { expect_clean(certificate_exactness(15, 1000), 1000); }
TEST_CASE("tietze moves invert") { expect_clean(tietze_inverse_pairs(16, 500), 500); }
TEST_CASE("spectral intervals enclose matrix spectra") { expect_clean(spectral_soundness(17, 1000), 1000); }

TEST_CASE("numerical lower bounds sit below symbolic upper bounds") {
  cstar::SearchConfig cfg;
  cfg.seed = 3;
  cfg.restarts = 4;
  cfg.max_iters = 120;
  auto outcomes = sandwich_checks(CSTAR_CORPUS, 2, cfg);
  CHECK(outcomes.size() >= 20);
  for (const auto& o : outcomes) {
    CAPTURE(o.presentation);
    CAPTURE(o.term);
    CAPTURE(o.error);
    CAPTURE(o.lower);
    CAPTURE(o.upper);
    CHECK(o.error.empty());
    CHECK(o.found);
    CHECK(o.ok);
  }
}
