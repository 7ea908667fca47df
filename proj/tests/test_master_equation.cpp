#include <doctest.h>

#include "support/master_equation_harness.hpp"

// Reduced-replicate version of acceptance criterion 1. The seed is pinned:
// a 3-sigma band per lattice point over 15 points would otherwise fail ~4%
// of honest runs, while a real bias in any sub-step shifts whole regions of
// the lattice and still trips the check.
TEST_CASE("one-step Monte-Carlo mean matches the mass-balance expression") {
    const haptotest::MasterEqResult res =
        haptotest::run_master_equation_check(20000, 1);
    INFO(res.detail);
    CHECK(res.pass);
}
