#include <doctest.h>

#include <cmath>

#include "haptowave/ib_engine.hpp"
#include "haptowave/profile.hpp"

using namespace haptowave;

namespace {

ModelParams small_params(double eps = 1e-2) {
    ModelParams p;
    p.dx = 0.05;
    p.dy = 0.02;
    p.tau = 0.5 * p.dx * p.dx;
    p.eps = eps;
    p.X = 5.0;
    p.Y = 1.0;
    p.T = 1.0;
    p.alpha = 0.1;
    p.rho_max = 1.0;
    p.E_max = 1.0;
    p.p_min = 1e-7;
    p.zeta = 1e-5;
    p.derive();
    return p;
}

}  // namespace

TEST_CASE("normalization constant integrates the phenotype Gaussian to 1") {
    const ModelParams p = small_params();
    InitialProfile prof;
    prof.A0 = 100.0;
    prof.ybar0 = 0.2;
    prof.normalize(p);
    double integral = 0.0;
    for (int j = 0; j <= p.ny(); ++j) {
        const double y = p.y_of(j);
        const double w = (j == 0 || j == p.ny()) ? 0.5 : 1.0;
        integral += w * p.dy * std::exp(-(y - 0.2) * (y - 0.2) / p.eps);
    }
    CHECK(std::abs(prof.C * integral - 1.0) < 1e-10);
}

TEST_CASE("initial state: floored counts, no enzymes, full matrix") {
    const ModelParams p = small_params();
    InitialProfile prof;
    prof.A0 = 100.0;
    prof.ybar0 = 0.2;
    prof.normalize(p);
    const IBState st = init_state(prof, p);

    // at x = 0, y = ybar0 the profile value is A0*C
    const int j0 = static_cast<int>(std::llround(0.2 / p.dy));
    CHECK(p.y_of(j0) == doctest::Approx(0.2));
    CHECK(st.N[st.idx(0, j0)] ==
          static_cast<int32_t>(std::floor(prof.A0 * prof.C)));

    // where the envelope drops below one cell the count floors to zero
    bool found_zero_tail = false;
    for (int i = 0; i <= st.nx; ++i) {
        const double x = p.x_of(i);
        if (std::exp(-x * x) < 1.0 / (prof.A0 * prof.C)) {
            CHECK(st.N[st.idx(i, j0)] == 0);
            found_zero_tail = true;
            break;
        }
    }
    CHECK(found_zero_tail);

    for (double m : st.M) CHECK(m == 0.0);
    for (double e : st.E) CHECK(e == p.E_max);
}

TEST_CASE("rho_max from the initial profile matches the density definition") {
    const ModelParams p = small_params();
    InitialProfile prof;
    prof.A0 = 100.0;
    prof.ybar0 = 0.2;
    prof.normalize(p);
    const IBState st = init_state(prof, p);
    const double direct = rho_max_from_profile(prof, p);
    double best = 0.0;
    for (int i = 0; i <= st.nx; ++i) {
        best = std::max(best, st.rho_at(i, p.dx));
    }
    CHECK(direct == doctest::Approx(best).epsilon(1e-12));
    // the peak sits at x = 0 and is close to A0/(dx dy) before flooring
    CHECK(direct <= prof.A0 / (p.dx * p.dy));
    CHECK(direct > 0.9 * prof.A0 / (p.dx * p.dy));
}

TEST_CASE("an everywhere-subunit profile is an initialization error") {
    const ModelParams p = small_params();
    InitialProfile prof;
    prof.A0 = 1e-3;  // floors to zero at every site
    prof.ybar0 = 0.2;
    prof.normalize(p);
    CHECK_THROWS_AS(init_state(prof, p), InitError);
}
