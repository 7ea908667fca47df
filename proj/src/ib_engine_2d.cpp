#include "haptowave/ib_engine_2d.hpp"

#include <algorithm>
#include <atomic>
#include <cassert>
#include <cmath>
#include <limits>
#include <sstream>
#include <thread>

namespace haptowave {

long long IBState2D::total_cells() const {
    long long c = 0;
    for (int32_t v : N) c += v;
    return c;
}

IBState2D init_state_2d(const InitialProfile& profile,
                        const ModelParams& params) {
    if (!(params.X2 > 0.0) || !(params.dx2 > 0.0)) {
        throw ConfigError("2D mode requires X2 and dx2");
    }
    IBState2D st;
    st.n1 = params.nx();
    st.n2 = params.nx2();
    st.ny = params.ny();
    st.N.assign(static_cast<size_t>(st.ncols()) * (st.ny + 1), 0);
    st.M.assign(st.ncols(), 0.0);
    st.E.assign(st.ncols(), params.E_max);

    InitialProfile prof = profile;
    if (prof.C <= 0.0) prof.normalize(params);

    long long total = 0;
    for (int i1 = 0; i1 <= st.n1; ++i1) {
        const double x1 = params.x_of(i1);
        for (int i2 = 0; i2 <= st.n2; ++i2) {
            const double x2 = i2 * params.dx2;
            const double rsq = x1 * x1 + x2 * x2;
            const int c = st.col(i1, i2);
            for (int j = 0; j <= st.ny; ++j) {
                const double v = prof.value(rsq, params.y_of(j), params);
                const int32_t cnt = static_cast<int32_t>(std::floor(v));
                st.N[st.idx(c, j)] = cnt;
                total += cnt;
            }
        }
    }
    if (total == 0) {
        throw InitError("2D initial cell distribution floors to zero");
    }
    return st;
}

IBSimulator2D::IBSimulator2D(const Model& model, IBState2D init, uint64_t seed)
    : P_(model.params),
      tab_(model.laws, model.params),
      st_(std::move(init)),
      rng_(seed) {
    st_.rng_seed = seed;
    const double mde_rate =
        P_.tau * (2.0 * P_.D_M * (1.0 / (P_.dx * P_.dx) + 1.0 / (P_.dx2 * P_.dx2)) +
                  P_.kappa_M);
    if (mde_rate > 1.0 + 1e-12) {
        std::ostringstream os;
        os << "2D MDE update unstable: tau*(2*D_M*(1/dx1^2+1/dx2^2) + kappa_M) = "
           << mde_rate << " > 1";
        throw ConfigError(os.str());
    }
    const int nc = st_.ncols();
    col_count_.assign(nc, 0);
    p_sum_.assign(nc, 0.0);
    src_k_.assign(nc, 0.0);
    rho_frozen_.assign(nc, 0.0);
    m_next_.assign(nc, 0.0);
    q_cached_c_.assign(nc, -1);
    q_rand_.assign(nc, 1.0);
    q_beta_.assign(nc, 1.0);
    picked_.assign(st_.ny + 1, 0);
    p_any_move_ = 1.0 - (1.0 - P_.theta) * (1.0 - P_.theta);
    rebuild_columns();
}

void IBSimulator2D::rebuild_columns() {
    const int ny = st_.ny;
    lo1_ = st_.n1;
    hi1_ = 0;
    lo2_ = st_.n2;
    hi2_ = 0;
    for (int i1 = 0; i1 <= st_.n1; ++i1) {
        for (int i2 = 0; i2 <= st_.n2; ++i2) {
            const int c = st_.col(i1, i2);
            int64_t cnt = 0;
            double ps = 0.0;
            const int32_t* col = &st_.N[st_.idx(c, 0)];
            for (int j = 0; j <= ny; ++j) {
                cnt += col[j];
                ps += tab_.p[j] * col[j];
            }
            col_count_[c] = cnt;
            p_sum_[c] = ps;
            q_cached_c_[c] = -1;
            if (cnt > 0) {
                lo1_ = std::min(lo1_, i1);
                hi1_ = std::max(hi1_, i1);
                lo2_ = std::min(lo2_, i2);
                hi2_ = std::max(hi2_, i2);
            }
        }
    }
    if (lo1_ > hi1_) {
        lo1_ = hi1_ = lo2_ = hi2_ = 0;
    }
}

int IBSimulator2D::pick_phenotype(int c, double u) const {
    const int32_t* colN = &st_.N[st_.idx(c, 0)];
    int64_t avail = col_count_[c];
    for (int j = 0; j <= st_.ny; ++j) avail -= picked_[j];
    const double target = u * static_cast<double>(avail);
    double acc = 0.0;
    for (int j = 0; j <= st_.ny; ++j) {
        acc += static_cast<double>(colN[j] - picked_[j]);
        if (acc > target) return j;
    }
    return st_.ny;
}

void IBSimulator2D::depart(int c, int j) {
    assert(st_.N[st_.idx(c, j)] > 0);
    --st_.N[st_.idx(c, j)];
    --col_count_[c];
    p_sum_[c] -= tab_.p[j];
}

void IBSimulator2D::arrive(int c, int j) {
    ++st_.N[st_.idx(c, j)];
    ++col_count_[c];
    p_sum_[c] += tab_.p[j];
    const int i1 = c / (st_.n2 + 1);
    const int i2 = c % (st_.n2 + 1);
    lo1_ = std::min(lo1_, i1);
    hi1_ = std::max(hi1_, i1);
    lo2_ = std::min(lo2_, i2);
    hi2_ = std::max(hi2_, i2);
}

void IBSimulator2D::apply_arrivals() {
    for (const auto& [c, j] : arrivals_) arrive(c, j);
    arrivals_.clear();
}

void IBSimulator2D::substep_random_move() {
    const double theta = P_.theta;
    if (theta <= 0.0) return;
    const int stride = st_.n2 + 1;
    const double p_both = theta * theta;
    const double p_ax1 = theta * (1.0 - theta);
    for (int i1 = lo1_; i1 <= hi1_; ++i1) {
        for (int i2 = lo2_; i2 <= hi2_; ++i2) {
            const int c = i1 * stride + i2;
            const int64_t cnt = col_count_[c];
            if (cnt == 0) continue;
            if (q_cached_c_[c] != cnt) {
                q_cached_c_[c] = cnt;
                q_rand_[c] = Rng::q0_of(cnt, p_any_move_);
                q_beta_[c] = Rng::q0_of(cnt, P_.beta);
            }
            const int64_t movers =
                rng_.binomial_cached_q0(cnt, p_any_move_, q_rand_[c]);
            for (int64_t m = 0; m < movers; ++m) {
                const int j = pick_phenotype(c, rng_.uniform());
                const double u = rng_.uniform() * p_any_move_;
                int d1 = 0, d2 = 0;
                if (u < p_both) {
                    d1 = rng_.uniform() < 0.5 ? -1 : 1;
                    d2 = rng_.uniform() < 0.5 ? -1 : 1;
                } else if (u < p_both + p_ax1) {
                    d1 = rng_.uniform() < 0.5 ? -1 : 1;
                } else {
                    d2 = rng_.uniform() < 0.5 ? -1 : 1;
                }
                int t1 = i1 + d1, t2 = i2 + d2;
                if (t1 < 0 || t1 > st_.n1) t1 = i1;  // aborted at the wall
                if (t2 < 0 || t2 > st_.n2) t2 = i2;
                depart(c, j);
                arrivals_.emplace_back(t1 * stride + t2, j);
            }
        }
    }
    apply_arrivals();
}

void IBSimulator2D::substep_hapto_move() {
    if (P_.eta <= 0.0 || tab_.mu_max <= 0.0) return;
    const int stride = st_.n2 + 1;
    const double scale = P_.eta / (2.0 * P_.E_max);
    for (int i1 = lo1_; i1 <= hi1_; ++i1) {
        for (int i2 = lo2_; i2 <= hi2_; ++i2) {
            const int c = i1 * stride + i2;
            const int64_t cnt = col_count_[c];
            if (cnt == 0) continue;
            const double Ec = st_.E[c];
            const double d1l =
                i1 > 0 ? std::max(0.0, st_.E[c - stride] - Ec) : 0.0;
            const double d1r =
                i1 < st_.n1 ? std::max(0.0, st_.E[c + stride] - Ec) : 0.0;
            const double d2l = i2 > 0 ? std::max(0.0, st_.E[c - 1] - Ec) : 0.0;
            const double d2r =
                i2 < st_.n2 ? std::max(0.0, st_.E[c + 1] - Ec) : 0.0;
            const double g1 = d1l + d1r, g2 = d2l + d2r;
            if (g1 <= 0.0 && g2 <= 0.0) continue;
            const double q1 = scale * tab_.mu_max * g1;
            const double q2 = scale * tab_.mu_max * g2;

            // axis-1 candidates; their axis-2 outcome is drawn inline with
            // the cell's own sensitivity so both axes read the pre-sub-step
            // position
            if (q1 > 0.0) {
                const int64_t cand = rng_.binomial(cnt, q1);
                for (int64_t m = 0; m < cand; ++m) {
                    const int j = pick_phenotype(c, rng_.uniform());
                    depart(c, j);
                    const double ratio = tab_.mu[j] / tab_.mu_max;
                    int d1 = 0, d2 = 0;
                    if (rng_.uniform() < ratio) {
                        d1 = rng_.uniform() * g1 < d1l ? -1 : 1;
                    }
                    if (g2 > 0.0 &&
                        rng_.uniform() < scale * tab_.mu[j] * g2) {
                        d2 = rng_.uniform() * g2 < d2l ? -1 : 1;
                    }
                    arrivals_.emplace_back(c + d1 * stride + d2, j);
                }
            }
            // remaining cells attempt axis 2 only
            if (q2 > 0.0) {
                const int64_t cand = rng_.binomial(col_count_[c], q2);
                for (int64_t m = 0; m < cand; ++m) {
                    const int j = pick_phenotype(c, rng_.uniform());
                    depart(c, j);
                    int d2 = 0;
                    if (rng_.uniform() < tab_.mu[j] / tab_.mu_max) {
                        d2 = rng_.uniform() * g2 < d2l ? -1 : 1;
                    }
                    arrivals_.emplace_back(c + d2, j);
                }
            }
        }
    }
    apply_arrivals();
}

void IBSimulator2D::substep_phenotype_switch() {
    const double beta = P_.beta;
    if (beta <= 0.0) return;
    const int stride = st_.n2 + 1;
    const int ny = st_.ny;
    for (int i1 = lo1_; i1 <= hi1_; ++i1) {
        for (int i2 = lo2_; i2 <= hi2_; ++i2) {
            const int c = i1 * stride + i2;
            const int64_t cnt = col_count_[c];
            if (cnt == 0) continue;
            if (q_cached_c_[c] != cnt) {
                q_cached_c_[c] = cnt;
                q_rand_[c] = Rng::q0_of(cnt, p_any_move_);
                q_beta_[c] = Rng::q0_of(cnt, beta);
            }
            const int64_t movers = rng_.binomial_cached_q0(cnt, beta, q_beta_[c]);
            for (int64_t m = 0; m < movers; ++m) {
                const int j = pick_phenotype(c, rng_.uniform());
                const int dir = rng_.uniform() < 0.5 ? -1 : 1;
                int tj = j + dir;
                if (tj < 0 || tj > ny) tj = j;
                depart(c, j);
                arrivals_.emplace_back(c, tj);
            }
        }
    }
    apply_arrivals();
}

void IBSimulator2D::substep_proliferation() {
    const int stride = st_.n2 + 1;
    const int ny = st_.ny;
    const double inv_cell = 1.0 / (P_.dx * P_.dx2);
    const double inv_rho_max = 1.0 / P_.rho_max;
    for (int i1 = lo1_; i1 <= hi1_; ++i1) {
        for (int i2 = lo2_; i2 <= hi2_; ++i2) {
            const int c = i1 * stride + i2;
            rho_frozen_[c] = static_cast<double>(col_count_[c]) * inv_cell;
            max_rho_ratio_ =
                std::max(max_rho_ratio_, rho_frozen_[c] * inv_rho_max);
        }
    }
    for (int i1 = lo1_; i1 <= hi1_; ++i1) {
        for (int i2 = lo2_; i2 <= hi2_; ++i2) {
            const int c = i1 * stride + i2;
            const int64_t cnt = col_count_[c];
            if (cnt == 0) continue;
            const double crowd = rho_frozen_[c] * inv_rho_max;
            const double maxdiff = std::max(std::abs(tab_.r[0] - crowd),
                                            std::abs(tab_.r[ny] - crowd));
            if (maxdiff <= 0.0) continue;
            const double bound = std::min(1.0, P_.tau * P_.alpha * maxdiff);
            const int64_t cand = rng_.binomial(cnt, bound);
            if (cand == 0) continue;
            std::fill(picked_.begin(), picked_.end(), 0);
            static thread_local std::vector<std::pair<int, int>> deltas;
            deltas.clear();
            for (int64_t m = 0; m < cand; ++m) {
                const int j = pick_phenotype(c, rng_.uniform());
                ++picked_[j];
                const double R = P_.alpha * (tab_.r[j] - crowd);
                if (R != 0.0 && rng_.uniform() * bound < P_.tau * std::abs(R)) {
                    deltas.emplace_back(j, R > 0.0 ? 1 : -1);
                }
            }
            for (const auto& [j, d] : deltas) {
                if (d > 0) {
                    arrive(c, j);
                } else {
                    depart(c, j);
                }
            }
            std::fill(picked_.begin(), picked_.end(), 0);
        }
    }
}

void IBSimulator2D::step_cells() {
    substep_random_move();
    substep_hapto_move();
    substep_phenotype_switch();
    substep_proliferation();
}

void IBSimulator2D::update_ecm() {
    const double k = P_.tau * P_.kappa_E;
    const int nc = st_.ncols();
    for (int c = 0; c < nc; ++c) {
        const double decay = k * st_.M[c];
        if (decay > 1.0 + 1e-12) {
            std::ostringstream os;
            os << "2D ECM update would go negative at column " << c
               << ": tau*kappa_E*M = " << decay << " > 1";
            throw SchemeError(os.str());
        }
        st_.E[c] *= (1.0 - decay);
    }
}

void IBSimulator2D::update_mde() {
    const int stride = st_.n2 + 1;
    const double inv_d1 = 1.0 / (P_.dx * P_.dx);
    const double inv_d2 = 1.0 / (P_.dx2 * P_.dx2);
    const double inv_cell = 1.0 / (P_.dx * P_.dx2);
    const double* M = st_.M.data();
    for (int i1 = 0; i1 <= st_.n1; ++i1) {
        for (int i2 = 0; i2 <= st_.n2; ++i2) {
            const int c = i1 * stride + i2;
            const double up = M[(i1 > 0 ? i1 - 1 : 1) * stride + i2];
            const double dn = M[(i1 < st_.n1 ? i1 + 1 : st_.n1 - 1) * stride + i2];
            const double lf = M[i1 * stride + (i2 > 0 ? i2 - 1 : 1)];
            const double rt =
                M[i1 * stride + (i2 < st_.n2 ? i2 + 1 : st_.n2 - 1)];
            const double lap =
                (up + dn - 2.0 * M[c]) * inv_d1 + (lf + rt - 2.0 * M[c]) * inv_d2;
            m_next_[c] = M[c] + P_.tau * (P_.D_M * lap - P_.kappa_M * M[c] +
                                          src_k_[c] * inv_cell);
        }
    }
    st_.M.swap(m_next_);
}

void IBSimulator2D::step() {
    std::copy(p_sum_.begin(), p_sum_.end(), src_k_.begin());
    step_cells();
    update_ecm();
    update_mde();
    ++st_.step;
    if ((st_.step & 4095) == 0) rebuild_columns();
}

FieldSnapshot2D IBSimulator2D::snapshot(bool with_field) const {
    FieldSnapshot2D s;
    s.t = rescaled_time_of_step(st_.step, P_);
    s.x1.resize(st_.n1 + 1);
    for (int i = 0; i <= st_.n1; ++i) s.x1[i] = P_.x_of(i);
    s.x2.resize(st_.n2 + 1);
    for (int i = 0; i <= st_.n2; ++i) s.x2[i] = i * P_.dx2;
    s.y.resize(st_.ny + 1);
    for (int j = 0; j <= st_.ny; ++j) s.y[j] = P_.y_of(j);
    const double inv_n = 1.0 / (P_.dx * P_.dx2 * P_.dy);
    if (with_field) {
        s.n.resize(st_.N.size());
        for (size_t q = 0; q < st_.N.size(); ++q) s.n[q] = st_.N[q] * inv_n;
    }
    const double inv_cell = 1.0 / (P_.dx * P_.dx2);
    const int nc = st_.ncols();
    s.rho.resize(nc);
    for (int c = 0; c < nc; ++c) {
        long long cnt = 0;
        for (int j = 0; j <= st_.ny; ++j) cnt += st_.N[st_.idx(c, j)];
        s.rho[c] = static_cast<double>(cnt) * inv_cell;
    }
    s.M = st_.M;
    s.E = st_.E;
    return s;
}

TransectProfile radial_transect(const FieldSnapshot2D& snap, double dr) {
    const int n1 = snap.nx1(), n2 = snap.nx2(), ny = snap.ny();
    const double dx1 = snap.x1.size() > 1 ? snap.x1[1] - snap.x1[0] : 1.0;
    if (dr <= 0.0) dr = dx1;
    const double rmax = std::hypot(snap.x1.back(), snap.x2.back());
    const int nbins = static_cast<int>(rmax / dr) + 1;

    std::vector<double> nsum(static_cast<size_t>(nbins) * (ny + 1), 0.0);
    std::vector<double> rho_sum(nbins, 0.0), m_sum(nbins, 0.0),
        e_sum(nbins, 0.0);
    std::vector<int> cols(nbins, 0);
    const bool has_field = !snap.n.empty();

    for (int i1 = 0; i1 <= n1; ++i1) {
        for (int i2 = 0; i2 <= n2; ++i2) {
            const double r = std::hypot(snap.x1[i1], snap.x2[i2]);
            const int b = std::min(nbins - 1, static_cast<int>(r / dr));
            const int c = snap.col(i1, i2);
            rho_sum[b] += snap.rho[c];
            m_sum[b] += snap.M[c];
            e_sum[b] += snap.E[c];
            ++cols[b];
            if (has_field) {
                for (int j = 0; j <= ny; ++j) {
                    nsum[b * (ny + 1) + j] += snap.n[c * (ny + 1) + j];
                }
            }
        }
    }

    TransectProfile tp;
    tp.t = snap.t;
    const double dx2g = snap.x2.size() > 1 ? snap.x2[1] - snap.x2[0] : 1.0;
    const double dyg = snap.y.size() > 1 ? snap.y[1] - snap.y[0] : 1.0;
    const double cell_vol = dx1 * dx2g * dyg;
    const double nan = std::numeric_limits<double>::quiet_NaN();
    for (int b = 0; b < nbins; ++b) {
        if (cols[b] == 0) continue;
        tp.r.push_back((b + 0.5) * dr);
        tp.rho.push_back(rho_sum[b] / cols[b]);
        tp.M.push_back(m_sum[b] / cols[b]);
        tp.E.push_back(e_sum[b] / cols[b]);
        double tot = 0.0, mean = 0.0;
        int jbest = 0;
        double best = nsum[b * (ny + 1)];
        for (int j = 0; j <= ny; ++j) {
            const double v = nsum[b * (ny + 1) + j];
            if (v > best) {
                best = v;
                jbest = j;
            }
            const double w = (j == 0 || j == ny) ? 0.5 * v : v;
            tot += w;
            mean += w * snap.y[j];
        }
        double count = 0.0;
        for (int j = 0; j <= ny; ++j) count += nsum[b * (ny + 1) + j];
        tp.cells.push_back(static_cast<long long>(std::llround(count * cell_vol)));
        if (tot > 0.0 && best > 0.0) {
            tp.ybar.push_back(snap.y[jbest]);
            mean /= tot;
            double var = 0.0;
            for (int j = 0; j <= ny; ++j) {
                const double w =
                    (j == 0 || j == ny) ? 0.5 * nsum[b * (ny + 1) + j]
                                        : nsum[b * (ny + 1) + j];
                const double d = snap.y[j] - mean;
                var += w * d * d;
            }
            tp.sigma_y.push_back(std::sqrt(std::max(0.0, var / tot)));
        } else {
            tp.ybar.push_back(nan);
            tp.sigma_y.push_back(nan);
        }
    }
    return tp;
}

namespace {

Replicate2DResult run_one_replicate_2d(const Model& model,
                                       const IBState2D& init,
                                       const std::vector<double>& times,
                                       uint64_t seed, bool keep_fields) {
    Replicate2DResult res;
    res.seed = seed;
    IBSimulator2D sim(model, init, seed);
    std::vector<long long> ks;
    ks.reserve(times.size());
    for (double t : times) ks.push_back(steps_to(t, model.params));
    std::vector<double> prev_E;
    size_t next = 0;
    auto capture = [&]() {
        FieldSnapshot2D snap = sim.snapshot(keep_fields);
        snap.t = times[next];
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

Ensemble2DResult run_2d(const Model& model, const InitialProfile& profile,
                        const std::vector<double>& snapshot_times, int n_reps,
                        uint64_t base_seed, int threads, bool keep_fields) {
    if (n_reps < 1) throw ConfigError("replicates must be >= 1");
    const IBState2D init = init_state_2d(profile, model.params);

    Ensemble2DResult out;
    out.replicates.resize(n_reps);
    std::atomic<int> cursor{0};
    auto worker = [&]() {
        for (;;) {
            const int r = cursor.fetch_add(1);
            if (r >= n_reps) return;
            out.replicates[r] =
                run_one_replicate_2d(model, init, snapshot_times,
                                     replicate_seed(base_seed, r), keep_fields);
        }
    };
    const int nthreads = std::max(1, std::min(threads, n_reps));
    if (nthreads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < nthreads; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    const size_t nsnap = snapshot_times.size();
    out.mean.resize(nsnap);
    for (size_t s = 0; s < nsnap; ++s) {
        FieldSnapshot2D& m = out.mean[s];
        m = out.replicates[0].snapshots[s];
        for (int r = 1; r < n_reps; ++r) {
            const FieldSnapshot2D& f = out.replicates[r].snapshots[s];
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
        out.mean_transect.push_back(radial_transect(m));
    }
    return out;
}

}  // namespace haptowave
