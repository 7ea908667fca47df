#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "haptowave/laws.hpp"
#include "haptowave/params.hpp"
#include "haptowave/profile.hpp"
#include "haptowave/rng.hpp"
#include "haptowave/snapshot.hpp"

namespace haptowave {

// ---- per-step event probabilities (the model's update rules) ----

struct MoveProbs {
    double left, right, stay;
};

/// Undirected random walk: P_L = P_R = theta/2.
inline MoveProbs random_move_probs(const ModelParams& p) {
    return {0.5 * p.theta, 0.5 * p.theta, 1.0 - p.theta};
}

/// Biased walk up the ECM gradient; only positive differences attract.
inline MoveProbs hapto_move_probs(double E_left, double E_here, double E_right,
                                  double mu_y, const ModelParams& p) {
    const double scale = p.eta * mu_y / (2.0 * p.E_max);
    const double pl = scale * std::max(0.0, E_left - E_here);
    const double pr = scale * std::max(0.0, E_right - E_here);
    return {pl, pr, 1.0 - pl - pr};
}

inline MoveProbs hapto_move_probs(double E_left, double E_here, double E_right,
                                  double y, const PhenotypeLaws& laws,
                                  const ModelParams& p) {
    return hapto_move_probs(E_left, E_here, E_right, laws.mu(y), p);
}

struct SwitchProbs {
    double down, up, none;
};

/// Unbiased phenotype switch: P_D = P_U = beta/2. Moves past [0,Y] abort.
inline SwitchProbs phenotype_switch_probs(const ModelParams& p) {
    return {0.5 * p.beta, 0.5 * p.beta, 1.0 - p.beta};
}

struct ProlifProbs {
    double death, division, quiescent;
};

/// P_A = tau R_-, P_B = tau R_+; at most one of them is nonzero.
inline ProlifProbs proliferation_probs(double y, double rho,
                                       const PhenotypeLaws& laws,
                                       const ModelParams& p) {
    const double R = growth_rate(y, rho, laws, p);
    const double pa = p.tau * std::max(0.0, -R);
    const double pb = p.tau * std::max(0.0, R);
    return {pa, pb, 1.0 - pa - pb};
}

// ---- lattice state ----

struct IBState {
    int nx = 0, ny = 0;          // grids carry indices 0..nx, 0..ny
    std::vector<int32_t> N;      // cell counts, x-major (nx+1)*(ny+1)
    std::vector<double> M, E;    // per spatial site
    long long step = 0;
    uint64_t rng_seed = 0;

    int idx(int i, int j) const { return i * (ny + 1) + j; }
    double rho_at(int i, double dx) const {
        long long c = 0;
        for (int j = 0; j <= ny; ++j) c += N[idx(i, j)];
        return static_cast<double>(c) / dx;
    }
    long long total_cells() const;
};

/// N_ij = floor(profile), M = 0, E = E_max. Throws InitError when every
/// count floors to zero.
IBState init_state(const InitialProfile& profile, const ModelParams& params);

/// Difference-equation updates for the environment fields, reading only
/// step-k quantities. These are the reference implementations used in tests;
/// the simulator shares the same kernels.
std::vector<double> step_mde(const IBState& state, const Model& model);
std::vector<double> step_ecm(const IBState& state, const Model& model);

/// Stochastic lattice engine for one replicate. Sampling is aggregated per
/// column (binomial counts + without-replacement thinning), which preserves
/// the per-cell joint distribution exactly while keeping the cost per step
/// proportional to the number of occupied columns.
class IBSimulator1D {
public:
    IBSimulator1D(const Model& model, IBState init, uint64_t seed);

    /// One full step of the difference system: cells (four sub-steps),
    /// then ECM and MDE updates from the step-k fields.
    void step();

    /// Sub-steps (i)-(iv) only: random move, haptotactic move, phenotype
    /// switch, division/death with the post-movement site density frozen.
    void step_cells();

    const IBState& state() const { return st_; }
    const ModelParams& params() const { return P_; }

    FieldSnapshot snapshot(bool with_field = true) const;

    double max_rho_ratio() const { return max_rho_ratio_; }

private:
    void substep_random_move();
    void substep_hapto_move();
    void substep_phenotype_switch();
    void substep_proliferation();
    void update_ecm();
    void update_mde();
    void apply_move_arrivals();
    void apply_switch_arrivals(int col);
    int pick_phenotype(int col, double u) const;
    void depart(int col, int j);
    void arrive(int col, int j);
    void rebuild_columns();

    ModelParams P_;
    LawTables tab_;
    IBState st_;
    Rng rng_;

    std::vector<int64_t> col_count_;
    std::vector<double> p_sum_;       // sum_j p(y_j) N_ij per column
    std::vector<double> src_k_;       // MDE source snapshot (pre-step n^k)
    std::vector<double> rho_frozen_;  // density at start of sub-step (iv)
    std::vector<double> m_next_;
    std::vector<int64_t> q_cached_c_;
    std::vector<double> q_theta_, q_beta_;
    std::vector<int32_t> picked_;     // per-column thinning scratch
    std::vector<std::pair<int32_t, int32_t>> arrivals_;  // (col, j)
    int imin_ = 0, imax_ = 0;
    double max_rho_ratio_ = 0.0;
};

// ---- ensemble driver ----

struct ReplicateResult {
    uint64_t seed = 0;
    std::vector<FieldSnapshot> snapshots;
    double max_rho_ratio = 0.0;
    bool fields_nonnegative = true;
    bool ecm_monotone = true;
};

struct EnsembleResult {
    std::vector<ReplicateResult> replicates;
    std::vector<FieldSnapshot> mean;  // one per snapshot time
};

/// Runs n_reps independent replicates (seeds derived from base_seed) to the
/// requested rescaled snapshot times and averages the fields. Replicates run
/// concurrently on up to `threads` threads; results are reduced in replicate
/// order, so output is independent of the thread count.
EnsembleResult run_replicates(const Model& model, const InitialProfile& profile,
                              const std::vector<double>& snapshot_times,
                              int n_reps, uint64_t base_seed, int threads,
                              bool keep_fields = true);

}  // namespace haptowave
