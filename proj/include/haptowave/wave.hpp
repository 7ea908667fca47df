#pragma once

#include <optional>
#include <vector>

#include "haptowave/laws.hpp"
#include "haptowave/params.hpp"
#include "haptowave/snapshot.hpp"

namespace haptowave {

/// Front structure extracted from one snapshot. Support is the x-range where
/// rho exceeds threshold_frac * rho_max; ybar the phenotype argmax of n
/// (ties broken toward smaller y).
struct WaveProfile {
    double t = 0.0;
    std::vector<double> x;        // support columns only
    std::vector<double> rho;      // at support columns
    std::vector<double> ybar;     // dominant phenotype
    std::vector<double> sigma_y;  // phenotypic std dev
    double ell = 0.0;             // front edge (right end of support)
    bool single_interval = true;  // support contiguity flag
    bool empty() const { return x.empty(); }

    double rear_ybar() const { return ybar.front(); }
    double edge_ybar() const { return ybar.back(); }
};

/// Builds the profile from a snapshot with a full n field.
WaveProfile extract_profile(const FieldSnapshot& snap, double rho_max,
                            double threshold_frac = 1e-3);

/// Dominant phenotype per support column (spec op; profile convenience
/// above bundles it with rho/sigma).
std::vector<std::optional<double>> extract_ybar(const FieldSnapshot& snap,
                                                double rho_max,
                                                double threshold_frac = 1e-3);

/// Asymptotic front relations: rho = rho_max r(ybar),
/// M = p(ybar) rho / kappa_M inside the support, E the indicator profile.
double oracle_rho(double ybar, const PhenotypeLaws& laws,
                  const ModelParams& params);
double oracle_M(double ybar, const PhenotypeLaws& laws,
                const ModelParams& params);
/// E = E_max outside [support), 0 inside.
double oracle_E(double x, double ell, const ModelParams& params);

/// Monotone-structure report: fraction of adjacent support cells breaking
/// ybar non-decreasing / rho non-increasing (with slack for noisy or
/// grid-quantized profiles), plus the rear and edge phenotype values.
struct StructureReport {
    double ybar_violation_frac = 0.0;
    double rho_violation_frac = 0.0;
    double rear_ybar = 0.0;
    double edge_ybar = 0.0;
    int cells_checked = 0;
    bool pass(double tol_frac) const {
        return ybar_violation_frac <= tol_frac &&
               rho_violation_frac <= tol_frac;
    }
};

StructureReport structure_checks(const WaveProfile& profile,
                                 double ybar_slack = 0.0,
                                 double rho_slack = 0.0);

/// Relative errors against the oracle relations over the interior of the
/// support (the outer edge_exclusion_frac of the support near ell is
/// excluded); E compared over the whole domain.
struct OracleErrors {
    double rho_linf = 0.0;  // max |rho - rho_max r(ybar)| / rho_max
    double rho_l1 = 0.0;    // sum|diff| / sum oracle
    double M_linf = 0.0;    // max |M - M_or| / max M_or
    double M_l1 = 0.0;
    double E_linf = 0.0;    // max |E - E_or| / E_max
    double E_l1 = 0.0;      // sum |E - E_or| dx / (E_max * X)
    int interior_cols = 0;
};

OracleErrors compare_to_oracle(const FieldSnapshot& snap, const Model& model,
                               double threshold_frac = 1e-3,
                               double edge_exclusion_frac = 0.1);

/// Phenotypic standard deviation of the normalized y-marginal per support
/// column (already part of WaveProfile; this recomputes for a single x).
double concentration_width(const FieldSnapshot& snap, int i);

/// sigma_y averaged over the middle band of the support
/// (default central 20%).
double mid_support_sigma(const WaveProfile& profile, double band_frac = 0.2);

/// Least-squares front speed from edge positions over time.
struct FrontSpeed {
    double c = 0.0;
    double residual = 0.0;  // rms of the linear fit
};

FrontSpeed front_speed(const std::vector<double>& times,
                       const std::vector<double>& edges);

}  // namespace haptowave
