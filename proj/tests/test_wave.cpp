#include <doctest.h>

#include <cmath>

#include "haptowave/wave.hpp"

using namespace haptowave;

namespace {

Model wave_model() {
    Model m;
    ModelParams& p = m.params;
    p.dx = 0.1;
    p.dy = 0.05;
    p.tau = 5e-3;
    p.eps = 1e-2;
    p.X = 10.0;
    p.Y = 1.0;
    p.alpha = 0.1;
    p.rho_max = 100.0;
    p.E_max = 1.0;
    p.kappa_M = 1.0;
    p.kappa_E = 1.0;
    p.p_min = 1e-7;
    p.zeta = 1e-5;
    p.derive();
    m.laws = make_laws("y_squared", "one_minus_y_squared", "quadratic",
                       p.p_min, p.zeta, p.Y);
    return m;
}

FieldSnapshot blank_snapshot(const Model& m) {
    const ModelParams& p = m.params;
    FieldSnapshot s;
    s.t = 1.0;
    s.x.resize(p.nx() + 1);
    for (int i = 0; i <= p.nx(); ++i) s.x[i] = p.x_of(i);
    s.y.resize(p.ny() + 1);
    for (int j = 0; j <= p.ny(); ++j) s.y[j] = p.y_of(j);
    s.n.assign(s.x.size() * s.y.size(), 0.0);
    s.rho.assign(s.x.size(), 0.0);
    s.M.assign(s.x.size(), 0.0);
    s.E.assign(s.x.size(), p.E_max);
    return s;
}

void set_column_rho(FieldSnapshot& s) {
    const int ny = s.ny();
    const double dy = s.y[1] - s.y[0];
    for (int i = 0; i <= s.nx(); ++i) {
        double acc = 0.0;
        for (int j = 0; j <= ny; ++j) {
            acc += ((j == 0 || j == ny) ? 0.5 : 1.0) * s.n_at(i, j);
        }
        s.rho[i] = acc * dy;
    }
}

// snapshot manufactured from the asymptotic relations themselves: a linear
// ybar ramp over [0, ell], delta-like phenotype columns
FieldSnapshot oracle_snapshot(const Model& m, double ell) {
    FieldSnapshot s = blank_snapshot(m);
    const ModelParams& p = m.params;
    const int ny = s.ny();
    const double dy = s.y[1] - s.y[0];
    for (int i = 0; i <= s.nx(); ++i) {
        const double x = s.x[i];
        if (x > ell) break;
        const double yb = std::min(1.0, x / ell);
        const int j = static_cast<int>(std::llround(yb / dy));
        const double rho = oracle_rho(s.y[j], m.laws, p);
        if (rho <= 0.0) continue;
        // one nonzero cell per column: rho = 0.5*dy*n at the ends, dy*n inside
        const double w = (j == 0 || j == ny) ? 0.5 : 1.0;
        s.n[i * (ny + 1) + j] = rho / (w * dy);
        s.M[i] = oracle_M(s.y[j], m.laws, p);
        s.E[i] = 0.0;
    }
    set_column_rho(s);
    return s;
}

}  // namespace

TEST_CASE("dominant phenotype extraction") {
    const Model m = wave_model();
    FieldSnapshot s = blank_snapshot(m);
    const int ny = s.ny();

    SUBCASE("single occupied level is the argmax") {
        s.n[3 * (ny + 1) + 7] = 5.0;
        set_column_rho(s);
        const auto yb = extract_ybar(s, m.params.rho_max, 1e-6);
        REQUIRE(yb[3].has_value());
        CHECK(*yb[3] == doctest::Approx(s.y[7]));
        CHECK_FALSE(yb[4].has_value());
    }
    SUBCASE("two-way tie reports the smaller phenotype") {
        s.n[3 * (ny + 1) + 4] = 5.0;
        s.n[3 * (ny + 1) + 9] = 5.0;
        set_column_rho(s);
        const auto yb = extract_ybar(s, m.params.rho_max, 1e-6);
        REQUIRE(yb[3].has_value());
        CHECK(*yb[3] == doctest::Approx(s.y[4]));
    }
    SUBCASE("argmax is invariant under positive rescaling") {
        for (int i = 0; i <= s.nx(); ++i) {
            for (int j = 0; j <= ny; ++j) {
                s.n[i * (ny + 1) + j] =
                    std::exp(-std::pow(s.y[j] - 0.3 - 0.05 * i, 2) / 0.01);
            }
        }
        set_column_rho(s);
        const auto y1 = extract_ybar(s, m.params.rho_max, 1e-6);
        // rescale the snapshot and its density scale together (units change)
        FieldSnapshot s7 = s;
        for (double& v : s7.n) v *= 7.0;
        set_column_rho(s7);
        const auto y2 = extract_ybar(s7, 7.0 * m.params.rho_max, 1e-6);
        for (size_t i = 0; i < y1.size(); ++i) {
            CHECK(y1[i].has_value() == y2[i].has_value());
            if (y1[i]) CHECK(*y1[i] == *y2[i]);
        }
    }
}

TEST_CASE("oracle relations at the boundary and interior points") {
    const Model m = wave_model();
    const ModelParams& p = m.params;
    CHECK(oracle_rho(0.0, m.laws, p) == doctest::Approx(p.rho_max));
    CHECK(oracle_rho(1.0, m.laws, p) == doctest::Approx(0.0));
    CHECK(oracle_rho(0.5, m.laws, p) == doctest::Approx(0.75 * p.rho_max));
    CHECK(oracle_M(1.0, m.laws, p) == doctest::Approx(0.0));
    // p(0.5) = 1e-7 + 2.5e-6 = 2.6e-6; M = p*r*rho_max/kM
    CHECK(oracle_M(0.5, m.laws, p) ==
          doctest::Approx(2.6e-6 * 0.75 * p.rho_max).epsilon(1e-12));
    CHECK(oracle_E(5.0, 3.0, p) == p.E_max);
    CHECK(oracle_E(2.0, 3.0, p) == 0.0);
}

TEST_CASE("oracle_rho is injective because r is strictly decreasing") {
    const Model m = wave_model();
    double prev = oracle_rho(0.0, m.laws, m.params);
    for (int j = 1; j <= m.params.ny(); ++j) {
        const double v = oracle_rho(m.params.y_of(j), m.laws, m.params);
        CHECK(v < prev);
        prev = v;
    }
}

TEST_CASE("structure checks") {
    const Model m = wave_model();
    const FieldSnapshot s = oracle_snapshot(m, 8.0);
    WaveProfile prof = extract_profile(s, m.params.rho_max, 1e-3);
    REQUIRE_FALSE(prof.empty());
    CHECK(prof.single_interval);

    SUBCASE("the manufactured profile has no violations") {
        const StructureReport rep = structure_checks(prof);
        CHECK(rep.ybar_violation_frac == 0.0);
        CHECK(rep.rho_violation_frac == 0.0);
        CHECK(rep.rear_ybar == doctest::Approx(0.0));
        CHECK(rep.edge_ybar > 0.9);
    }
    SUBCASE("one injected inversion is flagged exactly once") {
        // an upward bump creates exactly one decreasing adjacent pair
        const size_t mid = prof.x.size() / 2;
        prof.ybar[mid] = prof.ybar[mid + 1] + 0.1;
        const StructureReport rep = structure_checks(prof);
        CHECK(rep.ybar_violation_frac ==
              doctest::Approx(1.0 / (prof.x.size() - 1)));
    }
}

TEST_CASE("comparison against the oracle is exact on manufactured input") {
    const Model m = wave_model();
    const FieldSnapshot s = oracle_snapshot(m, 8.0);
    const OracleErrors err = compare_to_oracle(s, m, 1e-3, 0.1);
    CHECK(err.rho_linf == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(err.rho_l1 == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(err.M_linf == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(err.E_l1 < 0.02);  // one-cell mismatch allowance at the edge
}

TEST_CASE("empty support is an error") {
    const Model m = wave_model();
    const FieldSnapshot s = blank_snapshot(m);
    CHECK_THROWS_AS(compare_to_oracle(s, m, 1e-3, 0.1), SchemeError);
}

TEST_CASE("phenotypic width") {
    const Model m = wave_model();
    FieldSnapshot s = blank_snapshot(m);
    const int ny = s.ny();

    SUBCASE("delta column has zero width") {
        s.n[2 * (ny + 1) + 5] = 3.0;
        set_column_rho(s);
        CHECK(concentration_width(s, 2) == 0.0);
    }
    SUBCASE("a discrete Gaussian's width is recovered within one dy") {
        const double sigma = 0.12;
        for (int j = 0; j <= ny; ++j) {
            s.n[4 * (ny + 1) + j] =
                std::exp(-std::pow(s.y[j] - 0.5, 2) / (2 * sigma * sigma));
        }
        set_column_rho(s);
        CHECK(std::abs(concentration_width(s, 4) - sigma) <
              (s.y[1] - s.y[0]));
    }
}

TEST_CASE("front speed estimation") {
    SUBCASE("stationary profile") {
        const FrontSpeed fs = front_speed({1.0, 2.0, 3.0}, {5.0, 5.0, 5.0});
        CHECK(fs.c == doctest::Approx(0.0));
        CHECK(fs.residual == doctest::Approx(0.0));
    }
    SUBCASE("uniform translation") {
        const FrontSpeed fs = front_speed({1.0, 2.0, 3.0}, {4.0, 4.7, 5.4});
        CHECK(fs.c == doctest::Approx(0.7).epsilon(1e-12));
        CHECK(fs.residual < 1e-12);
    }
    SUBCASE("fewer than two edges is an error") {
        CHECK_THROWS_AS(front_speed({1.0}, {4.0}), SchemeError);
    }
}
