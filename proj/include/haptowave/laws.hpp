#pragma once

#include <functional>
#include <string>
#include <vector>

#include "haptowave/params.hpp"

namespace haptowave {

/// Phenotype-dependent model functions. mu controls haptotactic sensitivity,
/// r the proliferation factor, p the MDE secretion rate. Admissibility
/// (mu(0)=0 increasing, r(0)=1 r(Y)=0 decreasing, p(0)=p_min increasing)
/// is enforced by validate_config, not here.
struct PhenotypeLaws {
    std::function<double(double)> mu;
    std::function<double(double)> r;
    std::function<double(double)> p;
    std::string mu_name = "custom";
    std::string r_name = "custom";
    std::string p_name = "custom";
};

/// Built-in law registry. mu: "y_squared" (y^2), "linear" (y/Y).
/// r: "one_minus_y_squared" (1-(y/Y)^2), "one_minus_y" (1-y/Y).
/// p: "quadratic" (p_min + zeta y^2), "linear" (p_min + zeta y).
/// Unknown names throw ConfigError.
PhenotypeLaws make_laws(const std::string& mu_name, const std::string& r_name,
                        const std::string& p_name, double p_min, double zeta,
                        double Y);

std::vector<std::string> registered_mu_laws();
std::vector<std::string> registered_r_laws();
std::vector<std::string> registered_p_laws();

/// Net growth rate R(y, rho) = alpha (r(y) - rho/rho_max).
inline double growth_rate(double y, double rho, const PhenotypeLaws& laws,
                          const ModelParams& params) {
    return params.alpha * (laws.r(y) - rho / params.rho_max);
}

/// Law values tabulated on the phenotype grid; hot loops read these
/// instead of going through std::function.
struct LawTables {
    std::vector<double> mu, r, p;
    double mu_max = 0.0;

    LawTables() = default;
    LawTables(const PhenotypeLaws& laws, int ny, double dy) {
        mu.resize(ny + 1);
        r.resize(ny + 1);
        p.resize(ny + 1);
        for (int j = 0; j <= ny; ++j) {
            const double y = j * dy;
            mu[j] = laws.mu(y);
            r[j] = laws.r(y);
            p[j] = laws.p(y);
            if (mu[j] > mu_max) mu_max = mu[j];
        }
    }
    LawTables(const PhenotypeLaws& laws, const ModelParams& params)
        : LawTables(laws, params.ny(), params.dy) {}
};

struct Model {
    ModelParams params;
    PhenotypeLaws laws;
};

/// One violated invariant, with the constraint it comes from.
struct Violation {
    std::string constraint;
    std::string message;
};

struct ValidationReport {
    std::vector<Violation> violations;
    bool ok() const { return violations.empty(); }
    std::string to_string() const;
};

/// Checks every admissibility constraint (parameter positivity, probability
/// ranges, haptotaxis bound eta*max mu <= 1, proliferation bound
/// tau*sup|R| <= 1, MDE stability, law shape by grid scan).
/// Empty report means the configuration is runnable.
ValidationReport validate_config(const ModelParams& params,
                                 const PhenotypeLaws& laws);

}  // namespace haptowave
