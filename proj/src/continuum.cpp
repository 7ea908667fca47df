#include "haptowave/continuum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace haptowave {

ContinuumState init_continuum(const InitialProfile& profile,
                              const ModelParams& params, double cont_dx,
                              double cont_dy) {
    ContinuumState s;
    s.dx = cont_dx > 0.0 ? cont_dx : params.dx;
    s.dy = cont_dy > 0.0 ? cont_dy : params.dy;
    s.nx = static_cast<int>(std::llround(params.X / s.dx));
    s.ny = static_cast<int>(std::llround(params.Y / s.dy));
    s.t = 0.0;

    InitialProfile prof = profile;
    if (prof.C <= 0.0) prof.normalize(params);

    // density normalization uses the IB lattice cell dx*dy so both engines
    // start from the same density field; values below one cell per lattice
    // site truncate to zero, matching the lattice support (an analytic tail,
    // however small, would outgrow the front through the 1/eps reaction)
    const double inv_cell = 1.0 / (params.dx * params.dy);
    s.n.assign((s.nx + 1) * (s.ny + 1), 0.0);
    for (int i = 0; i <= s.nx; ++i) {
        const double x = i * s.dx;
        for (int j = 0; j <= s.ny; ++j) {
            const double v = prof.value(x * x, j * s.dy, params);
            s.n[s.idx(i, j)] = v >= 1.0 ? v * inv_cell : 0.0;
        }
    }
    s.M.assign(s.nx + 1, 0.0);
    s.E.assign(s.nx + 1, params.E_max);
    return s;
}

std::vector<double> marginal_density(const ContinuumState& s) {
    std::vector<double> rho(s.nx + 1, 0.0);
    for (int i = 0; i <= s.nx; ++i) {
        const double* col = &s.n[s.idx(i, 0)];
        double acc = 0.5 * (col[0] + col[s.ny]);
        for (int j = 1; j < s.ny; ++j) acc += col[j];
        rho[i] = acc * s.dy;
    }
    return rho;
}

std::vector<double> cell_rhs(const ContinuumState& s,
                             const std::vector<double>& rho,
                             const Model& model) {
    const ModelParams& p = model.params;
    const LawTables tab(model.laws, s.ny, s.dy);
    const double eps = p.eps;
    const int nx = s.nx, ny = s.ny;
    std::vector<double> rhs((nx + 1) * (ny + 1), 0.0);

    // x-direction face fluxes: F = -eps dn/dx + n mu(y) dE/dx (upwind)
    for (int i = 0; i < nx; ++i) {
        const double dEdx = (s.E[i + 1] - s.E[i]) / s.dx;
        const double* nl = &s.n[s.idx(i, 0)];
        const double* nr = &s.n[s.idx(i + 1, 0)];
        double* rl = &rhs[s.idx(i, 0)];
        double* rr = &rhs[s.idx(i + 1, 0)];
        const double wl = 1.0 / s.xw(i);
        const double wr = 1.0 / s.xw(i + 1);
        for (int j = 0; j <= ny; ++j) {
            const double v = tab.mu[j] * dEdx;
            const double upwind = v > 0.0 ? nl[j] : nr[j];
            const double flux = -eps * (nr[j] - nl[j]) / s.dx + v * upwind;
            rl[j] -= flux * wl;
            rr[j] += flux * wr;
        }
    }

    // y-direction diffusive fluxes: G = -eps dn/dy
    for (int i = 0; i <= nx; ++i) {
        const double* col = &s.n[s.idx(i, 0)];
        double* r = &rhs[s.idx(i, 0)];
        for (int j = 0; j < ny; ++j) {
            const double flux = -eps * (col[j + 1] - col[j]) / s.dy;
            r[j] -= flux / s.yw(j);
            r[j + 1] += flux / s.yw(j + 1);
        }
    }

    // reaction R(y, rho) n / eps
    const double inv_eps = 1.0 / eps;
    for (int i = 0; i <= nx; ++i) {
        const double crowd = rho[i] / p.rho_max;
        const double* col = &s.n[s.idx(i, 0)];
        double* r = &rhs[s.idx(i, 0)];
        for (int j = 0; j <= ny; ++j) {
            r[j] += p.alpha * (tab.r[j] - crowd) * col[j] * inv_eps;
        }
    }
    return rhs;
}

std::vector<double> mde_rhs(const ContinuumState& s, const Model& model) {
    const ModelParams& p = model.params;
    const LawTables tab(model.laws, s.ny, s.dy);
    const int nx = s.nx, ny = s.ny;
    std::vector<double> rhs(nx + 1, 0.0);
    const double inv_eps = 1.0 / p.eps;
    for (int i = 0; i <= nx; ++i) {
        const double* col = &s.n[s.idx(i, 0)];
        double src = 0.5 * (tab.p[0] * col[0] + tab.p[ny] * col[ny]);
        for (int j = 1; j < ny; ++j) src += tab.p[j] * col[j];
        src *= s.dy;
        const double left = s.M[i > 0 ? i - 1 : 1];
        const double right = s.M[i < nx ? i + 1 : nx - 1];
        const double lap = (left + right - 2.0 * s.M[i]) / (s.dx * s.dx);
        rhs[i] = lap + (src - p.kappa_M * s.M[i]) * inv_eps;
    }
    return rhs;
}

std::vector<double> ecm_rhs(const ContinuumState& s, const Model& model) {
    const ModelParams& p = model.params;
    std::vector<double> rhs(s.nx + 1);
    const double k = p.kappa_E / p.eps;
    for (int i = 0; i <= s.nx; ++i) rhs[i] = -k * s.E[i] * s.M[i];
    return rhs;
}

StableDtBounds stable_dt_bounds(const ContinuumState& s,
                                const std::vector<double>& rho,
                                const Model& model) {
    const ModelParams& p = model.params;
    const LawTables tab(model.laws, s.ny, s.dy);
    const double eps = p.eps;
    const double inf = std::numeric_limits<double>::infinity();

    double vmax = 0.0;
    for (int i = 0; i < s.nx; ++i) {
        vmax = std::max(vmax,
                        tab.mu_max * std::abs(s.E[i + 1] - s.E[i]) / s.dx);
    }
    double rho_hi = 0.0;
    for (double v : rho) rho_hi = std::max(rho_hi, v);
    // R affine in rho: |R| peaks at a corner of [0, max rho] x {r(0), r(Y)}
    double supR = 0.0;
    for (double c : {0.0, rho_hi / p.rho_max}) {
        supR = std::max(supR, p.alpha * std::abs(tab.r[0] - c));
        supR = std::max(supR, p.alpha * std::abs(tab.r[s.ny] - c));
    }
    double maxM = 0.0;
    for (double v : s.M) maxM = std::max(maxM, v);

    StableDtBounds b;
    b.x_diffusion = s.dx * s.dx / (2.0 * eps);
    b.advection = vmax > 0.0 ? s.dx / vmax : inf;
    b.y_diffusion = s.dy * s.dy / (2.0 * eps);
    b.reaction = supR > 0.0 ? eps / supR : inf;
    b.mde_decay = eps / p.kappa_M;
    b.ecm_decay = maxM > 0.0 ? eps / (p.kappa_E * maxM) : inf;

    // combined per-field outflow rates: what the explicit update actually
    // needs for positivity (the MDE diffusivity is 1 after rescaling, so its
    // CFL is dx^2/2 and is NOT covered by the six bounds above)
    const double rate_n = 2.0 * eps / (s.dx * s.dx) +
                          2.0 * eps / (s.dy * s.dy) + 2.0 * vmax / s.dx +
                          supR / eps;
    const double rate_m = 2.0 / (s.dx * s.dx) + p.kappa_M / eps;
    const double rate_e = maxM > 0.0 ? p.kappa_E * maxM / eps : 0.0;
    const double rate = std::max({rate_n, rate_m, rate_e});
    b.chosen = 0.9 / rate;
    if (!(b.chosen > 0.0) || !std::isfinite(b.chosen)) {
        throw SchemeError("stable_dt degenerated to zero");
    }
    return b;
}

double stable_dt(const ContinuumState& s, const Model& model) {
    return stable_dt_bounds(s, marginal_density(s), model).chosen;
}

void advance(ContinuumState& s, const Model& model, double dt) {
    const std::vector<double> rho = marginal_density(s);
    const std::vector<double> dn = cell_rhs(s, rho, model);
    const std::vector<double> dM = mde_rhs(s, model);
    const std::vector<double> dE = ecm_rhs(s, model);

    double nscale = 0.0;
    for (size_t q = 0; q < s.n.size(); ++q) {
        s.n[q] += dt * dn[q];
        nscale = std::max(nscale, std::abs(s.n[q]));
    }
    double mscale = 0.0;
    for (int i = 0; i <= s.nx; ++i) {
        s.M[i] += dt * dM[i];
        s.E[i] += dt * dE[i];
        mscale = std::max(mscale, std::abs(s.M[i]));
    }
    s.t += dt;

    const double ntol = -1e-12 * std::max(nscale, 1.0);
    const double mtol = -1e-12 * std::max(mscale, 1.0);
    const double etol = -1e-12 * model.params.E_max;
    for (int i = 0; i <= s.nx; ++i) {
        for (int j = 0; j <= s.ny; ++j) {
            if (s.n[s.idx(i, j)] < ntol) {
                std::ostringstream os;
                os << "cell density went negative at (i=" << i << ", j=" << j
                   << "): n = " << s.n[s.idx(i, j)] << " at t = " << s.t
                   << " (dt = " << dt << " likely exceeds the stable step)";
                throw SchemeError(os.str());
            }
        }
        if (s.M[i] < mtol || s.E[i] < etol) {
            std::ostringstream os;
            os << "M or E went negative at site " << i << " (M = " << s.M[i]
               << ", E = " << s.E[i] << ") at t = " << s.t;
            throw SchemeError(os.str());
        }
    }
}

FieldSnapshot continuum_snapshot(const ContinuumState& s, bool with_field) {
    FieldSnapshot f;
    f.t = s.t;
    f.x.resize(s.nx + 1);
    for (int i = 0; i <= s.nx; ++i) f.x[i] = i * s.dx;
    f.y.resize(s.ny + 1);
    for (int j = 0; j <= s.ny; ++j) f.y[j] = j * s.dy;
    if (with_field) f.n = s.n;
    f.rho = marginal_density(s);
    f.M = s.M;
    f.E = s.E;
    return f;
}

ContinuumRun run_continuum(const Model& model, const InitialProfile& profile,
                           const std::vector<double>& snapshot_times,
                           double cont_dx, double cont_dy, bool keep_fields) {
    ContinuumState s =
        init_continuum(profile, model.params, cont_dx, cont_dy);
    ContinuumRun run;
    size_t next = 0;
    const double t_end =
        snapshot_times.empty() ? 0.0 : snapshot_times.back();
    auto capture = [&]() {
        run.snapshots.push_back(continuum_snapshot(s, keep_fields));
        ++next;
    };
    while (next < snapshot_times.size() && snapshot_times[next] <= s.t + 1e-12) {
        capture();
    }
    while (s.t < t_end - 1e-12) {
        double dt = stable_dt(s, model);
        const double t_stop = snapshot_times[next];
        if (s.t + dt > t_stop) dt = t_stop - s.t;
        advance(s, model, dt);
        ++run.steps;
        while (next < snapshot_times.size() &&
               snapshot_times[next] <= s.t + 1e-12) {
            capture();
        }
    }
    return run;
}

}  // namespace haptowave
