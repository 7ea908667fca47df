#include <algorithm>
#include <cmath>
#include <sstream>

#include "haptowave/laws.hpp"

namespace haptowave {

namespace {

void check_positive(ValidationReport& rep, const char* name, double v) {
    if (!(v > 0.0) || !std::isfinite(v)) {
        std::ostringstream os;
        os << name << " = " << v << " must be positive";
        rep.violations.push_back({"parameter-positivity", os.str()});
    }
}

void check_nonneg(ValidationReport& rep, const char* name, double v) {
    if (v < 0.0 || !std::isfinite(v)) {
        std::ostringstream os;
        os << name << " = " << v << " must be >= 0";
        rep.violations.push_back({"parameter-positivity", os.str()});
    }
}

}  // namespace

ValidationReport validate_config(const ModelParams& params,
                                 const PhenotypeLaws& laws) {
    ValidationReport rep;

    check_positive(rep, "tau", params.tau);
    check_positive(rep, "dx", params.dx);
    check_positive(rep, "dy", params.dy);
    check_positive(rep, "eps", params.eps);
    check_positive(rep, "alpha", params.alpha);
    check_positive(rep, "rho_max", params.rho_max);
    check_positive(rep, "E_max", params.E_max);
    check_positive(rep, "kappa_M", params.kappa_M);
    check_positive(rep, "kappa_E", params.kappa_E);
    check_positive(rep, "X", params.X);
    check_positive(rep, "Y", params.Y);
    check_nonneg(rep, "p_min", params.p_min);
    check_nonneg(rep, "zeta", params.zeta);
    check_nonneg(rep, "T", params.T);
    if (!rep.ok()) return rep;  // grid scans below need sane parameters

    if (!(params.theta > 0.0) || params.theta > 1.0) {
        std::ostringstream os;
        os << "theta = " << params.theta
           << " outside (0,1]: random-movement probability (theta/2 per "
              "direction) must be a probability";
        rep.violations.push_back({"random-movement-probability", os.str()});
    }
    if (!(params.beta > 0.0) || params.beta > 1.0) {
        std::ostringstream os;
        os << "beta = " << params.beta
           << " outside (0,1]: phenotype-switch probability must be a "
              "probability";
        rep.violations.push_back({"phenotype-switch-probability", os.str()});
    }

    const int ny = params.ny();
    const double tol = 1e-9;

    // haptotaxis bound: eta * max_j mu(y_j) <= 1 keeps the directional
    // probabilities in eq-space (scaling factor small enough)
    double mu_max = 0.0;
    for (int j = 0; j <= ny; ++j) {
        mu_max = std::max(mu_max, laws.mu(params.y_of(j)));
    }
    if (params.eta * mu_max > 1.0 + tol) {
        std::ostringstream os;
        os << "eta * max mu(y) = " << params.eta * mu_max
           << " exceeds 1: haptotactic move probabilities could leave [0,1]";
        rep.violations.push_back({"haptotaxis-probability-bound", os.str()});
    }

    // proliferation bound: tau * sup|R| <= 1; R is affine in rho so the
    // supremum over rho in [0, rho_max] sits at the endpoints
    double supR = 0.0;
    for (int j = 0; j <= ny; ++j) {
        const double y = params.y_of(j);
        supR = std::max(supR, std::abs(growth_rate(y, 0.0, laws, params)));
        supR = std::max(supR,
                        std::abs(growth_rate(y, params.rho_max, laws, params)));
    }
    if (params.tau * supR > 1.0 + tol) {
        std::ostringstream os;
        os << "tau * sup|R| = " << params.tau * supR
           << " exceeds 1: division/death probabilities could leave [0,1] "
              "(choose a smaller time-step)";
        rep.violations.push_back({"proliferation-probability-bound", os.str()});
    }

    // explicit MDE update positivity/stability
    const double mde_rate =
        params.tau * (2.0 * params.D_M / (params.dx * params.dx) + params.kappa_M);
    if (mde_rate > 1.0 + tol) {
        std::ostringstream os;
        os << "tau*(2*D_M/dx^2 + kappa_M) = " << mde_rate
           << " exceeds 1: explicit MDE update would lose positivity";
        rep.violations.push_back({"mde-update-stability", os.str()});
    }

    // law shape scans
    if (std::abs(laws.mu(0.0)) > tol) {
        rep.violations.push_back(
            {"mu-admissibility", "mu(0) must be 0 (no haptotaxis at y=0)"});
    }
    if (std::abs(laws.r(0.0) - 1.0) > tol) {
        rep.violations.push_back({"r-admissibility", "r(0) must be 1"});
    }
    if (std::abs(laws.r(params.Y)) > tol) {
        rep.violations.push_back({"r-admissibility", "r(Y) must be 0"});
    }
    if (std::abs(laws.p(0.0) - params.p_min) > tol * std::max(1.0, params.p_min)) {
        rep.violations.push_back({"p-admissibility", "p(0) must equal p_min"});
    }
    for (int j = 0; j < ny; ++j) {
        const double y0 = params.y_of(j), y1 = params.y_of(j + 1);
        if (laws.mu(y1) < laws.mu(y0) - tol) {
            rep.violations.push_back(
                {"mu-admissibility", "mu must be non-decreasing on [0,Y]"});
            break;
        }
    }
    for (int j = 0; j < ny; ++j) {
        const double y0 = params.y_of(j), y1 = params.y_of(j + 1);
        if (laws.r(y1) >= laws.r(y0)) {
            rep.violations.push_back(
                {"r-admissibility", "r must be strictly decreasing on (0,Y)"});
            break;
        }
    }
    for (int j = 0; j < ny; ++j) {
        const double y0 = params.y_of(j), y1 = params.y_of(j + 1);
        if (laws.p(y1) <= laws.p(y0)) {
            rep.violations.push_back(
                {"p-admissibility", "p must be strictly increasing on (0,Y)"});
            break;
        }
    }
    return rep;
}

}  // namespace haptowave
