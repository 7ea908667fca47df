#include "haptowave/wave.hpp"

#include <algorithm>
#include <cmath>

namespace haptowave {

namespace {

// trapezoid weight on the phenotype grid
inline double yweight(int j, int ny) { return (j == 0 || j == ny) ? 0.5 : 1.0; }

struct ColumnStats {
    double ybar;
    double sigma;
};

ColumnStats column_stats(const FieldSnapshot& snap, int i) {
    const int ny = snap.ny();
    int jbest = 0;
    double best = snap.n_at(i, 0);
    double w = 0.0, mean = 0.0;
    for (int j = 0; j <= ny; ++j) {
        const double v = snap.n_at(i, j);
        if (v > best) {  // strict: ties keep the smaller y
            best = v;
            jbest = j;
        }
        const double ww = yweight(j, ny) * v;
        w += ww;
        mean += ww * snap.y[j];
    }
    ColumnStats cs;
    cs.ybar = snap.y[jbest];
    if (w <= 0.0) {
        cs.sigma = 0.0;
        return cs;
    }
    mean /= w;
    double var = 0.0;
    for (int j = 0; j <= ny; ++j) {
        const double d = snap.y[j] - mean;
        var += yweight(j, ny) * snap.n_at(i, j) * d * d;
    }
    cs.sigma = std::sqrt(std::max(0.0, var / w));
    return cs;
}

}  // namespace

WaveProfile extract_profile(const FieldSnapshot& snap, double rho_max,
                            double threshold_frac) {
    WaveProfile prof;
    prof.t = snap.t;
    const double thr = threshold_frac * rho_max;
    const int nx = snap.nx();
    int first = -1, last = -1;
    int segments = 0;
    bool in_support = false;
    for (int i = 0; i <= nx; ++i) {
        const bool above = snap.rho[i] > thr;
        if (above && !in_support) ++segments;
        in_support = above;
        if (above) {
            if (first < 0) first = i;
            last = i;
        }
    }
    if (first < 0) return prof;  // empty support
    prof.single_interval = (segments == 1);
    for (int i = first; i <= last; ++i) {
        if (snap.rho[i] <= thr) continue;
        prof.x.push_back(snap.x[i]);
        prof.rho.push_back(snap.rho[i]);
        const ColumnStats cs = column_stats(snap, i);
        prof.ybar.push_back(cs.ybar);
        prof.sigma_y.push_back(cs.sigma);
    }
    prof.ell = snap.x[last];
    return prof;
}

std::vector<std::optional<double>> extract_ybar(const FieldSnapshot& snap,
                                                double rho_max,
                                                double threshold_frac) {
    const double thr = threshold_frac * rho_max;
    std::vector<std::optional<double>> out(snap.nx() + 1);
    for (int i = 0; i <= snap.nx(); ++i) {
        if (snap.rho[i] > thr) out[i] = column_stats(snap, i).ybar;
    }
    return out;
}

double oracle_rho(double ybar, const PhenotypeLaws& laws,
                  const ModelParams& params) {
    return params.rho_max * laws.r(ybar);
}

double oracle_M(double ybar, const PhenotypeLaws& laws,
                const ModelParams& params) {
    return laws.p(ybar) * params.rho_max * laws.r(ybar) / params.kappa_M;
}

double oracle_E(double x, double ell, const ModelParams& params) {
    return x > ell ? params.E_max : 0.0;
}

StructureReport structure_checks(const WaveProfile& profile, double ybar_slack,
                                 double rho_slack) {
    StructureReport rep;
    const int m = static_cast<int>(profile.x.size());
    if (m == 0) return rep;
    rep.rear_ybar = profile.rear_ybar();
    rep.edge_ybar = profile.edge_ybar();
    if (m < 2) return rep;
    int yviol = 0, rviol = 0;
    for (int i = 0; i + 1 < m; ++i) {
        if (profile.ybar[i + 1] < profile.ybar[i] - ybar_slack) ++yviol;
        if (profile.rho[i + 1] > profile.rho[i] + rho_slack) ++rviol;
    }
    rep.cells_checked = m - 1;
    rep.ybar_violation_frac = static_cast<double>(yviol) / (m - 1);
    rep.rho_violation_frac = static_cast<double>(rviol) / (m - 1);
    return rep;
}

OracleErrors compare_to_oracle(const FieldSnapshot& snap, const Model& model,
                               double threshold_frac,
                               double edge_exclusion_frac) {
    const ModelParams& p = model.params;
    const WaveProfile prof = extract_profile(snap, p.rho_max, threshold_frac);
    if (prof.empty()) {
        throw SchemeError("compare_to_oracle: snapshot has empty support");
    }
    const double x_lo = prof.x.front();
    const double x_cut = x_lo + (1.0 - edge_exclusion_frac) * (prof.ell - x_lo);

    OracleErrors err;
    double rho_or_sum = 0.0, rho_diff_sum = 0.0;
    double m_or_sum = 0.0, m_diff_sum = 0.0, m_or_max = 0.0, m_diff_max = 0.0;

    // interior metrics need M at the profile columns: map x back to index
    const double dx = snap.x.size() > 1 ? snap.x[1] - snap.x[0] : 1.0;
    for (size_t q = 0; q < prof.x.size(); ++q) {
        if (prof.x[q] > x_cut) break;
        const int i = static_cast<int>(std::llround(prof.x[q] / dx));
        const double r_or = oracle_rho(prof.ybar[q], model.laws, p);
        const double m_or = oracle_M(prof.ybar[q], model.laws, p);
        const double rd = std::abs(snap.rho[i] - r_or);
        const double md = std::abs(snap.M[i] - m_or);
        err.rho_linf = std::max(err.rho_linf, rd / p.rho_max);
        rho_diff_sum += rd;
        rho_or_sum += r_or;
        m_diff_max = std::max(m_diff_max, md);
        m_or_max = std::max(m_or_max, m_or);
        m_diff_sum += md;
        m_or_sum += m_or;
        ++err.interior_cols;
    }
    if (err.interior_cols == 0) {
        throw SchemeError("compare_to_oracle: interior of support is empty");
    }
    err.rho_l1 = rho_or_sum > 0.0 ? rho_diff_sum / rho_or_sum : 0.0;
    err.M_linf = m_or_max > 0.0 ? m_diff_max / m_or_max : 0.0;
    err.M_l1 = m_or_sum > 0.0 ? m_diff_sum / m_or_sum : 0.0;

    // E against the indicator profile, whole domain
    double e_sum = 0.0;
    for (int i = 0; i <= snap.nx(); ++i) {
        const double d = std::abs(snap.E[i] - oracle_E(snap.x[i], prof.ell, p));
        err.E_linf = std::max(err.E_linf, d / p.E_max);
        const double w = (i == 0 || i == snap.nx()) ? 0.5 : 1.0;
        e_sum += w * dx * d;
    }
    err.E_l1 = e_sum / (p.E_max * (snap.x.back() - snap.x.front()));
    return err;
}

double concentration_width(const FieldSnapshot& snap, int i) {
    return column_stats(snap, i).sigma;
}

double mid_support_sigma(const WaveProfile& profile, double band_frac) {
    if (profile.empty()) return 0.0;
    const int m = static_cast<int>(profile.x.size());
    const int lo = static_cast<int>((0.5 - 0.5 * band_frac) * m);
    const int hi = std::min(m - 1, static_cast<int>((0.5 + 0.5 * band_frac) * m));
    double acc = 0.0;
    int cnt = 0;
    for (int q = std::max(0, lo); q <= hi; ++q) {
        acc += profile.sigma_y[q];
        ++cnt;
    }
    return cnt > 0 ? acc / cnt : 0.0;
}

FrontSpeed front_speed(const std::vector<double>& times,
                       const std::vector<double>& edges) {
    if (times.size() != edges.size() || times.size() < 2) {
        throw SchemeError("front_speed needs at least two support edges");
    }
    const int n = static_cast<int>(times.size());
    double st = 0.0, se = 0.0, stt = 0.0, ste = 0.0;
    for (int i = 0; i < n; ++i) {
        st += times[i];
        se += edges[i];
        stt += times[i] * times[i];
        ste += times[i] * edges[i];
    }
    const double denom = n * stt - st * st;
    if (denom == 0.0) throw SchemeError("front_speed: degenerate times");
    FrontSpeed fs;
    fs.c = (n * ste - st * se) / denom;
    const double b = (se - fs.c * st) / n;
    double rss = 0.0;
    for (int i = 0; i < n; ++i) {
        const double r = edges[i] - (fs.c * times[i] + b);
        rss += r * r;
    }
    fs.residual = std::sqrt(rss / n);
    return fs;
}

}  // namespace haptowave
