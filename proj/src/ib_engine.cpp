#include "haptowave/ib_engine.hpp"

#include <algorithm>
#include <atomic>
#include <cassert>
#include <cmath>
#include <sstream>
#include <thread>

namespace haptowave {

long long IBState::total_cells() const {
    long long c = 0;
    for (int32_t v : N) c += v;
    return c;
}

IBState init_state(const InitialProfile& profile, const ModelParams& params) {
    IBState st;
    st.nx = params.nx();
    st.ny = params.ny();
    st.N.assign((st.nx + 1) * (st.ny + 1), 0);
    st.M.assign(st.nx + 1, 0.0);
    st.E.assign(st.nx + 1, params.E_max);

    InitialProfile prof = profile;
    if (prof.C <= 0.0) prof.normalize(params);

    long long total = 0;
    for (int i = 0; i <= st.nx; ++i) {
        const double x = params.x_of(i);
        const double xsq = x * x;
        for (int j = 0; j <= st.ny; ++j) {
            const double v = prof.value(xsq, params.y_of(j), params);
            const int32_t c = static_cast<int32_t>(std::floor(v));
            st.N[st.idx(i, j)] = c;
            total += c;
        }
    }
    if (total == 0) {
        throw InitError(
            "initial cell distribution floors to zero everywhere "
            "(increase A0 or refine the lattice)");
    }
    return st;
}

namespace {

// Shared explicit update for the MDE difference equation with mirrored
// (zero-flux) ghost values.
void mde_update_kernel(const double* M, const double* src, double* out, int nx,
                       const ModelParams& p) {
    const double dx2 = p.dx * p.dx;
    for (int i = 0; i <= nx; ++i) {
        const double left = M[i > 0 ? i - 1 : 1];
        const double right = M[i < nx ? i + 1 : nx - 1];
        const double lap = (left + right - 2.0 * M[i]) / dx2;
        out[i] = M[i] + p.tau * (p.D_M * lap - p.kappa_M * M[i] + src[i]);
    }
}

void check_mde_stability(const ModelParams& p) {
    const double rate =
        p.tau * (2.0 * p.D_M / (p.dx * p.dx) + p.kappa_M);
    if (rate > 1.0 + 1e-12) {
        std::ostringstream os;
        os << "MDE update unstable: tau*(2*D_M/dx^2 + kappa_M) = " << rate
           << " > 1";
        throw ConfigError(os.str());
    }
}

}  // namespace

std::vector<double> step_mde(const IBState& state, const Model& model) {
    const ModelParams& p = model.params;
    check_mde_stability(p);
    std::vector<double> src(state.nx + 1, 0.0);
    for (int i = 0; i <= state.nx; ++i) {
        double acc = 0.0;
        for (int j = 0; j <= state.ny; ++j) {
            acc += model.laws.p(p.y_of(j)) * state.N[state.idx(i, j)];
        }
        // dy * sum_j p(y_j) n_ij with n = N/(dx dy)
        src[i] = acc / p.dx;
    }
    std::vector<double> out(state.nx + 1);
    mde_update_kernel(state.M.data(), src.data(), out.data(), state.nx, p);
    return out;
}

std::vector<double> step_ecm(const IBState& state, const Model& model) {
    const ModelParams& p = model.params;
    std::vector<double> out(state.nx + 1);
    for (int i = 0; i <= state.nx; ++i) {
        const double decay = p.tau * p.kappa_E * state.M[i];
        if (decay > 1.0 + 1e-12) {
            std::ostringstream os;
            os << "ECM update would go negative at site " << i
               << ": tau*kappa_E*M = " << decay << " > 1";
            throw SchemeError(os.str());
        }
        out[i] = state.E[i] * (1.0 - decay);
    }
    return out;
}

// ---- simulator ----

IBSimulator1D::IBSimulator1D(const Model& model, IBState init, uint64_t seed)
    : P_(model.params),
      tab_(model.laws, model.params),
      st_(std::move(init)),
      rng_(seed) {
    check_mde_stability(P_);
    st_.rng_seed = seed;
    const int nx = st_.nx;
    col_count_.assign(nx + 1, 0);
    p_sum_.assign(nx + 1, 0.0);
    src_k_.assign(nx + 1, 0.0);
    rho_frozen_.assign(nx + 1, 0.0);
    m_next_.assign(nx + 1, 0.0);
    q_cached_c_.assign(nx + 1, -1);
    q_theta_.assign(nx + 1, 1.0);
    q_beta_.assign(nx + 1, 1.0);
    picked_.assign(st_.ny + 1, 0);
    rebuild_columns();
}

void IBSimulator1D::rebuild_columns() {
    const int nx = st_.nx, ny = st_.ny;
    imin_ = nx;
    imax_ = 0;
    for (int i = 0; i <= nx; ++i) {
        int64_t c = 0;
        double ps = 0.0;
        const int32_t* col = &st_.N[st_.idx(i, 0)];
        for (int j = 0; j <= ny; ++j) {
            c += col[j];
            ps += tab_.p[j] * col[j];
        }
        col_count_[i] = c;
        p_sum_[i] = ps;
        q_cached_c_[i] = -1;
        if (c > 0) {
            imin_ = std::min(imin_, i);
            imax_ = std::max(imax_, i);
        }
    }
    if (imin_ > imax_) {  // extinct population: keep an empty valid range
        imin_ = 0;
        imax_ = 0;
    }
}

int IBSimulator1D::pick_phenotype(int col, double u) const {
    // weight j by remaining (unpicked) cells; picked_ is zeroed outside
    // the proliferation sub-step
    const int32_t* colN = &st_.N[st_.idx(col, 0)];
    int64_t avail = col_count_[col];
    for (int j = 0; j <= st_.ny; ++j) avail -= picked_[j];
    const double target = u * static_cast<double>(avail);
    double acc = 0.0;
    for (int j = 0; j <= st_.ny; ++j) {
        acc += static_cast<double>(colN[j] - picked_[j]);
        if (acc > target) return j;
    }
    return st_.ny;
}

void IBSimulator1D::depart(int col, int j) {
    assert(st_.N[st_.idx(col, j)] > 0);
    --st_.N[st_.idx(col, j)];
    --col_count_[col];
    p_sum_[col] -= tab_.p[j];
}

void IBSimulator1D::arrive(int col, int j) {
    ++st_.N[st_.idx(col, j)];
    ++col_count_[col];
    p_sum_[col] += tab_.p[j];
    imin_ = std::min(imin_, col);
    imax_ = std::max(imax_, col);
}

void IBSimulator1D::apply_move_arrivals() {
    for (const auto& [col, j] : arrivals_) arrive(col, j);
    arrivals_.clear();
}

void IBSimulator1D::substep_random_move() {
    const double theta = P_.theta;
    if (theta <= 0.0) return;
    const int nx = st_.nx;
    const int lo = imin_, hi = imax_;
    for (int i = lo; i <= hi; ++i) {
        const int64_t c = col_count_[i];
        if (c == 0) continue;
        if (q_cached_c_[i] != c) {
            q_cached_c_[i] = c;
            q_theta_[i] = Rng::q0_of(c, theta);
            q_beta_[i] = Rng::q0_of(c, P_.beta);
        }
        const int64_t movers = rng_.binomial_cached_q0(c, theta, q_theta_[i]);
        for (int64_t m = 0; m < movers; ++m) {
            const int j = pick_phenotype(i, rng_.uniform());
            const int dir = rng_.uniform() < 0.5 ? -1 : 1;
            int target = i + dir;
            if (target < 0 || target > nx) target = i;  // aborted at the wall
            depart(i, j);
            arrivals_.emplace_back(target, j);
        }
    }
    apply_move_arrivals();
}

void IBSimulator1D::substep_hapto_move() {
    if (P_.eta <= 0.0 || tab_.mu_max <= 0.0) return;
    const int nx = st_.nx;
    const double scale = P_.eta / (2.0 * P_.E_max);
    const int lo = imin_, hi = imax_;
    for (int i = lo; i <= hi; ++i) {
        const int64_t c = col_count_[i];
        if (c == 0) continue;
        const double dEl = i > 0 ? std::max(0.0, st_.E[i - 1] - st_.E[i]) : 0.0;
        const double dEr = i < nx ? std::max(0.0, st_.E[i + 1] - st_.E[i]) : 0.0;
        if (dEl <= 0.0 && dEr <= 0.0) continue;
        const double pl_max = scale * tab_.mu_max * dEl;
        const double pr_max = scale * tab_.mu_max * dEr;
        const double bound = pl_max + pr_max;
        const int64_t cand = rng_.binomial(c, bound);
        for (int64_t m = 0; m < cand; ++m) {
            const int j = pick_phenotype(i, rng_.uniform());
            depart(i, j);
            // accept with the cell's own sensitivity relative to the bound
            if (rng_.uniform() < tab_.mu[j] / tab_.mu_max) {
                const int dir = rng_.uniform() * (dEl + dEr) < dEl ? -1 : 1;
                arrivals_.emplace_back(i + dir, j);
            } else {
                arrivals_.emplace_back(i, j);
            }
        }
    }
    apply_move_arrivals();
}

void IBSimulator1D::substep_phenotype_switch() {
    const double beta = P_.beta;
    if (beta <= 0.0) return;
    const int ny = st_.ny;
    const int lo = imin_, hi = imax_;
    for (int i = lo; i <= hi; ++i) {
        const int64_t c = col_count_[i];
        if (c == 0) continue;
        if (q_cached_c_[i] != c) {
            q_cached_c_[i] = c;
            q_theta_[i] = Rng::q0_of(c, P_.theta);
            q_beta_[i] = Rng::q0_of(c, beta);
        }
        const int64_t movers = rng_.binomial_cached_q0(c, beta, q_beta_[i]);
        for (int64_t m = 0; m < movers; ++m) {
            const int j = pick_phenotype(i, rng_.uniform());
            const int dir = rng_.uniform() < 0.5 ? -1 : 1;
            int tj = j + dir;
            if (tj < 0 || tj > ny) tj = j;  // aborted at the phenotype wall
            depart(i, j);
            arrivals_.emplace_back(i, tj);
        }
    }
    apply_move_arrivals();
}

void IBSimulator1D::substep_proliferation() {
    const int ny = st_.ny;
    const double inv_rho_max = 1.0 / P_.rho_max;
    const int lo = imin_, hi = imax_;
    // density freeze: all division/death draws in this sub-step read the
    // post-movement site density
    for (int i = lo; i <= hi; ++i) {
        rho_frozen_[i] = static_cast<double>(col_count_[i]) / P_.dx;
        max_rho_ratio_ =
            std::max(max_rho_ratio_, rho_frozen_[i] * inv_rho_max);
    }
    for (int i = lo; i <= hi; ++i) {
        const int64_t c = col_count_[i];
        if (c == 0) continue;
        const double crowd = rho_frozen_[i] * inv_rho_max;
        // R is affine in r(y); r decreasing means |R| peaks at a phenotype end
        const double maxdiff =
            std::max(std::abs(tab_.r[0] - crowd), std::abs(tab_.r[ny] - crowd));
        if (maxdiff <= 0.0) continue;
        const double bound = std::min(1.0, P_.tau * P_.alpha * maxdiff);
        const int64_t cand = rng_.binomial(c, bound);
        if (cand == 0) continue;
        std::fill(picked_.begin(), picked_.end(), 0);
        static thread_local std::vector<std::pair<int, int>> deltas;
        deltas.clear();
        for (int64_t m = 0; m < cand; ++m) {
            const int j = pick_phenotype(i, rng_.uniform());
            ++picked_[j];
            const double R = P_.alpha * (tab_.r[j] - crowd);
            // accept with tau|R| / bound so the per-cell event probability
            // is exactly tau R_+ (division) or tau R_- (death)
            if (R != 0.0 && rng_.uniform() * bound < P_.tau * std::abs(R)) {
                deltas.emplace_back(j, R > 0.0 ? 1 : -1);
            }
        }
        for (const auto& [j, d] : deltas) {
            if (d > 0) {
                arrive(i, j);
            } else {
                depart(i, j);
            }
        }
        std::fill(picked_.begin(), picked_.end(), 0);
    }
}

void IBSimulator1D::step_cells() {
    substep_random_move();
    substep_hapto_move();
    substep_phenotype_switch();
    substep_proliferation();
}

void IBSimulator1D::update_ecm() {
    const double k = P_.tau * P_.kappa_E;
    const int nx = st_.nx;
    for (int i = 0; i <= nx; ++i) {
        const double decay = k * st_.M[i];
        if (decay > 1.0 + 1e-12) {
            std::ostringstream os;
            os << "ECM update would go negative at site " << i
               << ": tau*kappa_E*M = " << decay << " > 1";
            throw SchemeError(os.str());
        }
        st_.E[i] *= (1.0 - decay);
    }
}

void IBSimulator1D::update_mde() {
    const int nx = st_.nx;
    for (int i = 0; i <= nx; ++i) src_k_[i] /= P_.dx;
    mde_update_kernel(st_.M.data(), src_k_.data(), m_next_.data(), nx, P_);
    st_.M.swap(m_next_);
}

void IBSimulator1D::step() {
    // src_k_ snapshots the pre-step source so the MDE update reads n^k
    std::copy(p_sum_.begin(), p_sum_.end(), src_k_.begin());
    step_cells();
    update_ecm();   // reads M^k (not yet updated)
    update_mde();   // reads M^k and the n^k source snapshot
    ++st_.step;
    if ((st_.step & 4095) == 0) rebuild_columns();  // cap FP drift in p_sum_
}

FieldSnapshot IBSimulator1D::snapshot(bool with_field) const {
    FieldSnapshot s;
    s.t = rescaled_time_of_step(st_.step, P_);
    const int nx = st_.nx, ny = st_.ny;
    s.x.resize(nx + 1);
    for (int i = 0; i <= nx; ++i) s.x[i] = P_.x_of(i);
    s.y.resize(ny + 1);
    for (int j = 0; j <= ny; ++j) s.y[j] = P_.y_of(j);
    const double inv_cell = 1.0 / (P_.dx * P_.dy);
    if (with_field) {
        s.n.resize(st_.N.size());
        for (size_t q = 0; q < st_.N.size(); ++q) {
            s.n[q] = st_.N[q] * inv_cell;
        }
    }
    s.rho.resize(nx + 1);
    for (int i = 0; i <= nx; ++i) {
        long long c = 0;
        for (int j = 0; j <= ny; ++j) c += st_.N[st_.idx(i, j)];
        s.rho[i] = static_cast<double>(c) / P_.dx;
    }
    s.M = st_.M;
    s.E = st_.E;
    return s;
}

// ---- ensemble ----

namespace {

std::vector<long long> snapshot_steps(const std::vector<double>& times,
                                      const ModelParams& p) {
    std::vector<long long> ks;
    ks.reserve(times.size());
    for (double t : times) {
        ks.push_back(steps_to(t, p));
    }
    return ks;
}

ReplicateResult run_one_replicate(const Model& model, const IBState& init,
                                  const std::vector<double>& times,
                                  uint64_t seed, bool keep_fields) {
    ReplicateResult res;
    res.seed = seed;
    IBSimulator1D sim(model, init, seed);
    const auto ks = snapshot_steps(times, model.params);
    std::vector<double> prev_E;
    size_t next = 0;
    auto capture = [&]() {
        FieldSnapshot snap = sim.snapshot(keep_fields);
        snap.t = times[next];  // label with the requested time
        for (double v : snap.M) {
            if (v < 0.0) res.fields_nonnegative = false;
        }
        for (double v : snap.E) {
            if (v < 0.0 || v > model.params.E_max + 1e-12) {
                res.fields_nonnegative = false;
            }
        }
        if (!prev_E.empty()) {
            for (size_t q = 0; q < snap.E.size(); ++q) {
                if (snap.E[q] > prev_E[q] + 1e-12) res.ecm_monotone = false;
            }
        }
        prev_E = snap.E;
        res.snapshots.push_back(std::move(snap));
        ++next;
    };
    while (next < ks.size() && ks[next] == 0) capture();
    const long long k_end = ks.empty() ? 0 : ks.back();
    for (long long k = 1; k <= k_end; ++k) {
        sim.step();
        while (next < ks.size() && ks[next] == k) capture();
    }
    res.max_rho_ratio = sim.max_rho_ratio();
    return res;
}

}  // namespace

EnsembleResult run_replicates(const Model& model, const InitialProfile& profile,
                              const std::vector<double>& snapshot_times,
                              int n_reps, uint64_t base_seed, int threads,
                              bool keep_fields) {
    if (n_reps < 1) throw ConfigError("replicates must be >= 1");
    const IBState init = init_state(profile, model.params);

    EnsembleResult out;
    out.replicates.resize(n_reps);
    std::atomic<int> cursor{0};
    auto worker = [&]() {
        for (;;) {
            const int r = cursor.fetch_add(1);
            if (r >= n_reps) return;
            out.replicates[r] =
                run_one_replicate(model, init, snapshot_times,
                                  replicate_seed(base_seed, r), keep_fields);
        }
    };
    const int nthreads = std::max(1, std::min(threads, n_reps));
    if (nthreads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(nthreads);
        for (int t = 0; t < nthreads; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    // reduce in replicate order: output is identical for any thread count
    const size_t nsnap = snapshot_times.size();
    out.mean.resize(nsnap);
    for (size_t s = 0; s < nsnap; ++s) {
        FieldSnapshot& m = out.mean[s];
        m = out.replicates[0].snapshots[s];
        for (int r = 1; r < n_reps; ++r) {
            const FieldSnapshot& f = out.replicates[r].snapshots[s];
            for (size_t q = 0; q < m.n.size(); ++q) m.n[q] += f.n[q];
            for (size_t q = 0; q < m.rho.size(); ++q) m.rho[q] += f.rho[q];
            for (size_t q = 0; q < m.M.size(); ++q) m.M[q] += f.M[q];
            for (size_t q = 0; q < m.E.size(); ++q) m.E[q] += f.E[q];
        }
        const double inv = 1.0 / n_reps;
        for (double& v : m.n) v *= inv;
        for (double& v : m.rho) v *= inv;
        for (double& v : m.M) v *= inv;
        for (double& v : m.E) v *= inv;
    }
    return out;
}

}  // namespace haptowave
