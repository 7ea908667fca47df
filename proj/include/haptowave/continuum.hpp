#pragma once

#include <vector>

#include "haptowave/laws.hpp"
#include "haptowave/params.hpp"
#include "haptowave/profile.hpp"
#include "haptowave/snapshot.hpp"

namespace haptowave {

/// Node-centered fields for the rescaled system. The grid doubles as a
/// finite-volume mesh: node i owns a cell of width dx (half at the ends),
/// so trapezoidal sums are exactly the cell-volume totals.
struct ContinuumState {
    int nx = 0, ny = 0;
    double dx = 0.0, dy = 0.0;
    double t = 0.0;
    std::vector<double> n;  // (nx+1)*(ny+1), x-major
    std::vector<double> M, E;

    int idx(int i, int j) const { return i * (ny + 1) + j; }
    double xw(int i) const { return (i == 0 || i == nx) ? 0.5 * dx : dx; }
    double yw(int j) const { return (j == 0 || j == ny) ? 0.5 * dy : dy; }
};

/// Continuum analogue of the IB initial condition: n = F/(dx_ib*dy_ib) with
/// the floor dropped, M = 0, E = E_max. The continuum grid steps may differ
/// from the IB lattice steps used in the density normalization.
ContinuumState init_continuum(const InitialProfile& profile,
                              const ModelParams& params, double cont_dx,
                              double cont_dy);

/// Phenotype marginal rho(x) = trapz_y n(x,.).
std::vector<double> marginal_density(const ContinuumState& s);

/// dn/dt = eps n_xx - (n mu(y) E_x)_x + R(y,rho) n / eps + eps n_yy,
/// central diffusion, first-order upwind advection (face velocity
/// mu(y) dE/dx), zero-flux boundaries in x and y.
std::vector<double> cell_rhs(const ContinuumState& s,
                             const std::vector<double>& rho,
                             const Model& model);

/// dM/dt = M_xx + (trapz_y p n - kappa_M M)/eps, zero-flux ends.
std::vector<double> mde_rhs(const ContinuumState& s, const Model& model);

/// dE/dt = -kappa_E E M / eps, pointwise.
std::vector<double> ecm_rhs(const ContinuumState& s, const Model& model);

/// The six bounds named by the operation contract, exposed for diagnostics.
struct StableDtBounds {
    double x_diffusion;   // dx^2/(2 eps)
    double advection;     // dx / max|mu dE/dx|
    double y_diffusion;   // dy^2/(2 eps)
    double reaction;      // eps / sup|R|
    double mde_decay;     // eps / kappa_M
    double ecm_decay;     // eps / (kappa_E max M)
    double chosen;        // the dt actually returned
};

/// Positivity-preserving explicit time-step: safety 0.9 over the combined
/// outflow rates of each field (this implies every individual bound above;
/// the per-field sums are what explicit Euler actually needs).
StableDtBounds stable_dt_bounds(const ContinuumState& s,
                                const std::vector<double>& rho,
                                const Model& model);
double stable_dt(const ContinuumState& s, const Model& model);

/// Forward-Euler update of n, M, E. No clamping; throws SchemeError when a
/// field drops below -1e-12 times its scale.
void advance(ContinuumState& s, const Model& model, double dt);

struct ContinuumRun {
    std::vector<FieldSnapshot> snapshots;
    long long steps = 0;
};

/// Integrates to the last requested rescaled time, capturing snapshots.
/// cont_dx/cont_dy <= 0 fall back to the IB lattice steps.
ContinuumRun run_continuum(const Model& model, const InitialProfile& profile,
                           const std::vector<double>& snapshot_times,
                           double cont_dx = 0.0, double cont_dy = 0.0,
                           bool keep_fields = true);

FieldSnapshot continuum_snapshot(const ContinuumState& s, bool with_field);

}  // namespace haptowave
