#include <doctest.h>

#include "haptowave/ib_engine.hpp"

using namespace haptowave;

namespace {

ModelParams probs_params(double theta, double eta, double beta, double tau,
                         double alpha) {
    ModelParams p;
    p.dx = 0.05;
    p.dy = 0.02;
    p.tau = tau;
    p.eps = 1e-2;
    p.X = 1.0;
    p.Y = 1.0;
    p.alpha = alpha;
    p.rho_max = 1.0;
    p.E_max = 1.0;
    p.theta = theta;
    p.eta = eta;
    p.beta = beta;
    p.D_M = p.eps;
    return p;
}

}  // namespace

TEST_CASE("random movement probabilities") {
    {
        const MoveProbs m = random_move_probs(probs_params(1e-4, 0, 0, 1, 0.1));
        CHECK(m.left == doctest::Approx(5e-5));
        CHECK(m.right == doctest::Approx(5e-5));
        CHECK(m.stay == doctest::Approx(0.9999));
    }
    {
        const MoveProbs m = random_move_probs(probs_params(1.0, 0, 0, 1, 0.1));
        CHECK(m.left == doctest::Approx(0.5));
        CHECK(m.right == doctest::Approx(0.5));
        CHECK(m.stay == doctest::Approx(0.0));
    }
}

TEST_CASE("haptotactic movement probabilities") {
    const ModelParams p = probs_params(1e-4, 1e-2, 0, 1, 0.1);
    const PhenotypeLaws laws =
        make_laws("y_squared", "one_minus_y_squared", "quadratic", 1e-7, 1e-5,
                  1.0);

    SUBCASE("uniform matrix pulls nowhere") {
        const MoveProbs m = hapto_move_probs(0.7, 0.7, 0.7, 1.0, laws, p);
        CHECK(m.left == 0.0);
        CHECK(m.right == 0.0);
        CHECK(m.stay == 1.0);
    }
    SUBCASE("a fully epithelial cell ignores gradients") {
        const MoveProbs m = hapto_move_probs(1.0, 0.2, 0.9, 0.0, laws, p);
        CHECK(m.left == 0.0);
        CHECK(m.right == 0.0);
    }
    SUBCASE("only uphill differences attract") {
        // E_right - E_here = 0.5, E_left - E_here = -0.2, mu = 1
        const MoveProbs m = hapto_move_probs(0.3, 0.5, 1.0, 1.0, p);
        CHECK(m.right == doctest::Approx(2.5e-3).epsilon(1e-12));
        CHECK(m.left == 0.0);
        CHECK(m.stay == doctest::Approx(1.0 - 2.5e-3));
    }
}

TEST_CASE("phenotype switch probabilities") {
    const SwitchProbs s =
        phenotype_switch_probs(probs_params(0, 0, 6.25e-4, 1, 0.1));
    CHECK(s.down == doctest::Approx(3.125e-4));
    CHECK(s.up == doctest::Approx(3.125e-4));
    CHECK(s.none == doctest::Approx(0.999375));
}

TEST_CASE("division/death probabilities") {
    const ModelParams p = probs_params(0, 0, 0, 1.25e-3, 0.1);
    const PhenotypeLaws laws =
        make_laws("y_squared", "one_minus_y_squared", "quadratic", 1e-7, 1e-5,
                  1.0);

    SUBCASE("at or above carrying density division is impossible") {
        for (double y : {0.0, 0.5, 1.0}) {
            for (double rho : {1.0, 1.3}) {
                const ProlifProbs q = proliferation_probs(y, rho, laws, p);
                CHECK(q.division == 0.0);
                CHECK(q.death >= 0.0);
            }
        }
    }
    SUBCASE("empty site, epithelial cell: pure division branch") {
        const ProlifProbs q = proliferation_probs(0.0, 0.0, laws, p);
        CHECK(q.division == doctest::Approx(1.25e-4).epsilon(1e-12));
        CHECK(q.death == 0.0);
    }
    SUBCASE("zero net growth is pure quiescence") {
        // r(0.5) = 0.75, rho/rho_max = 0.75 -> R = 0
        const ProlifProbs q = proliferation_probs(0.5, 0.75, laws, p);
        CHECK(q.death == 0.0);
        CHECK(q.division == 0.0);
        CHECK(q.quiescent == 1.0);
    }
}

TEST_CASE("probability triples stay in [0,1] and sum to 1 across the grid") {
    const ModelParams p = probs_params(1e-4, 1e-2, 6.25e-4, 1.25e-3, 0.1);
    const PhenotypeLaws laws =
        make_laws("y_squared", "one_minus_y_squared", "quadratic", 1e-7, 1e-5,
                  1.0);
    for (double y = 0.0; y <= 1.0; y += 0.1) {
        for (double el : {0.0, 0.4, 1.0}) {
            for (double er : {0.0, 0.4, 1.0}) {
                const MoveProbs h = hapto_move_probs(el, 0.5, er, y, laws, p);
                CHECK(h.left >= 0.0);
                CHECK(h.right >= 0.0);
                CHECK(h.left + h.right <= 1.0);
                CHECK(h.left + h.right + h.stay == doctest::Approx(1.0));
            }
        }
        for (double rho : {0.0, 0.5, 1.0, 1.2}) {
            const ProlifProbs q = proliferation_probs(y, rho, laws, p);
            CHECK(q.death >= 0.0);
            CHECK(q.division >= 0.0);
            CHECK((q.death == 0.0 || q.division == 0.0));
            CHECK(q.death + q.division + q.quiescent == doctest::Approx(1.0));
        }
    }
}
