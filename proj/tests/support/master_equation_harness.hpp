#pragma once

// Monte-Carlo vs mass-balance harness shared by the unit test (reduced
// replicate count) and acceptance criterion 1 (1e5 replicates).
//
// Setup: 5 sites x 3 phenotypes, fixed non-monotone ECM ramp, quadratic
// laws. Event probabilities are chosen small enough that the terms the
// balance expression drops (double moves O(theta*eta), switch-move coupling
// O(beta*eta*dy)) sit an order of magnitude below the 3-sigma band:
// the largest neglected product is N*theta*hapto ~ 2e-3 expected cells,
// while 3 SE at 1e5 replicates is ~1.2e-2 cells.

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "haptowave/ib_engine.hpp"
#include "support/der1_oracle.hpp"

namespace haptotest {

struct MasterEqResult {
    bool pass = true;
    double worst_sigmas = 0.0;  // max |mean - expected| / SE over the lattice
    std::string detail;
};

inline MasterEqResult run_master_equation_check(int replicates,
                                                uint64_t seed) {
    using namespace haptowave;

    Model model;
    ModelParams& P = model.params;
    P.dx = 0.05;
    P.dy = 0.5;
    P.tau = 1.25e-3;
    P.eps = 1e-2;
    P.X = 0.2;  // 5 sites
    P.Y = 1.0;  // 3 phenotypes
    P.alpha = 1.0;
    P.E_max = 1.0;
    P.kappa_M = 1.0;
    P.kappa_E = 1.0;
    P.p_min = 1e-7;
    P.zeta = 1e-5;
    P.theta = 4e-3;
    P.eta = 2e-2;
    P.beta = 2e-3;
    P.D_M = P.eps;
    model.laws = make_laws("y_squared", "one_minus_y_squared", "quadratic",
                           P.p_min, P.zeta, P.Y);

    IBState st;
    st.nx = P.nx();
    st.ny = P.ny();
    const int32_t counts[5][3] = {{120, 80, 40},
                                  {200, 150, 100},
                                  {260, 200, 160},
                                  {180, 140, 90},
                                  {60, 30, 10}};
    st.N.assign(15, 0);
    for (int i = 0; i < 5; ++i) {
        for (int j = 0; j < 3; ++j) st.N[st.idx(i, j)] = counts[i][j];
    }
    st.M.assign(5, 0.0);
    st.E = {0.2, 0.5, 1.0, 0.6, 0.3};  // both movement directions exercised
    P.rho_max = 12000.0;  // death and division branches both active

    Der1Input in;
    in.nx = st.nx;
    in.ny = st.ny;
    in.E = st.E;
    const double inv_cell = 1.0 / (P.dx * P.dy);
    in.n.resize(st.N.size());
    for (size_t q = 0; q < st.N.size(); ++q) in.n[q] = st.N[q] * inv_cell;
    const std::vector<double> expected = der1_expected(in, P, model.laws);

    std::vector<double> sum(st.N.size(), 0.0), sumsq(st.N.size(), 0.0);
    for (int r = 0; r < replicates; ++r) {
        IBSimulator1D sim(model, st, replicate_seed(seed, r));
        sim.step_cells();
        for (size_t q = 0; q < st.N.size(); ++q) {
            const double v = sim.state().N[q] * inv_cell;
            sum[q] += v;
            sumsq[q] += v * v;
        }
    }

    MasterEqResult res;
    for (size_t q = 0; q < st.N.size(); ++q) {
        const double mean = sum[q] / replicates;
        const double var =
            std::max(0.0, sumsq[q] / replicates - mean * mean);
        const double se = std::sqrt(var / replicates);
        const double diff = std::abs(mean - expected[q]);
        const double sigmas = se > 0.0 ? diff / se : (diff > 0.0 ? 1e9 : 0.0);
        res.worst_sigmas = std::max(res.worst_sigmas, sigmas);
        if (diff > 3.0 * se + 1e-12) {
            res.pass = false;
            res.detail += "site " + std::to_string(q) + ": |" +
                          std::to_string(mean) + " - " +
                          std::to_string(expected[q]) + "| > 3*" +
                          std::to_string(se) + "\n";
        }
    }
    return res;
}

}  // namespace haptotest
