#include "haptowave/runner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <limits>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "haptowave/io.hpp"

namespace haptowave {

namespace fs = std::filesystem;
using nlohmann::json;

int resolve_threads(int requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("HAPTOWAVE_THREADS")) {
        const int n = std::atoi(env);
        if (n > 0) return n;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

namespace {

struct Effective {
    LoadedConfig cfg;
    std::vector<double> times;
    int replicates = 1;
    uint64_t seed = 1;
    int threads = 1;
    std::string out;
};

Effective resolve(const RunSpec& spec) {
    Effective e;
    e.cfg = load_config(spec.config);
    e.times = spec.snapshot_times.empty() ? e.cfg.snapshot_times
                                          : spec.snapshot_times;
    for (size_t i = 0; i < e.times.size(); ++i) {
        if (e.times[i] < 0.0 || e.times[i] > e.cfg.model.params.T + 1e-12 ||
            (i > 0 && e.times[i] < e.times[i - 1])) {
            throw ConfigError("snapshot times must be sorted and within [0,T]");
        }
    }
    e.replicates = spec.replicates > 0 ? spec.replicates : e.cfg.replicates;
    e.seed = spec.seed_set ? spec.seed : e.cfg.seed;
    e.threads = resolve_threads(spec.threads);
    e.out = spec.out_dir;
    fs::create_directories(e.out);
    return e;
}

std::string rep_name(const std::string& prefix, int r,
                     const std::string& suffix) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%03d", r);
    return prefix + buf + suffix;
}

json run_start_record(const Effective& e, const std::string& mode) {
    const ModelParams& p = e.cfg.model.params;
    return json{{"event", "run_start"},
                {"mode", mode},
                {"config", e.cfg.name},
                {"config_hash", fnv1a64_hex(e.cfg.canonical)},
                {"seed", e.seed},
                {"replicates", e.replicates},
                {"eps", p.eps},
                {"rho_max", p.rho_max},
                {"theta", p.theta},
                {"eta", p.eta},
                {"beta", p.beta},
                {"D_M", p.D_M}};
}

void log_replicate(NdjsonLog& log, int r, uint64_t seed, double max_rho_ratio,
                   bool nonneg, bool ecm_monotone) {
    log.record(json{{"event", "replicate"},
                    {"index", r},
                    {"seed", seed},
                    {"max_rho_over_rho_max", max_rho_ratio},
                    {"fields_nonnegative", nonneg},
                    {"ecm_monotone", ecm_monotone}}
                   .dump());
}

void log_check(NdjsonLog& log, const CheckRecord& c) {
    log.record(json{{"event", "check"},
                    {"metric", c.metric},
                    {"value", c.value},
                    {"tolerance", c.tolerance},
                    {"pass", c.pass},
                    {"enforced", c.enforced}}
                   .dump());
}

double cross_engine_l1(const FieldSnapshot& ib, const FieldSnapshot& cont) {
    if (ib.rho.size() != cont.rho.size()) {
        throw SchemeError(
            "cross-engine comparison requires matching spatial grids");
    }
    double num = 0.0, den = 0.0;
    const int nx = cont.nx();
    for (int i = 0; i <= nx; ++i) {
        const double w = (i == 0 || i == nx) ? 0.5 : 1.0;
        num += w * std::abs(ib.rho[i] - cont.rho[i]);
        den += w * std::abs(cont.rho[i]);
    }
    return den > 0.0 ? num / den : 0.0;
}

EnsembleResult run_ibm_ensemble(const Effective& e, NdjsonLog& log,
                                bool keep_fields) {
    const EnsembleResult ens =
        run_replicates(e.cfg.model, e.cfg.profile, e.times, e.replicates,
                       e.seed, e.threads, keep_fields);
    for (int r = 0; r < e.replicates; ++r) {
        const ReplicateResult& rep = ens.replicates[r];
        log_replicate(log, r, rep.seed, rep.max_rho_ratio,
                      rep.fields_nonnegative, rep.ecm_monotone);
    }
    return ens;
}

void write_ibm_artifacts(const Effective& e, const EnsembleResult& ens,
                         bool emit_full, RunOutcome& out) {
    const double rmax = e.cfg.model.params.rho_max;
    const double thr = e.cfg.tol.support_threshold_frac;
    for (int r = 0; r < e.replicates; ++r) {
        const std::string p =
            e.out + "/" + rep_name("ib_rep", r, "_summary.csv");
        write_summary_csv(p, ens.replicates[r].snapshots, rmax, thr);
        out.artifacts.push_back(p);
        if (emit_full) {
            const std::string pf =
                e.out + "/" + rep_name("ib_rep", r, "_field.csv");
            write_field_csv(pf, ens.replicates[r].snapshots);
            out.artifacts.push_back(pf);
        }
    }
    const std::string pm = e.out + "/ib_mean_summary.csv";
    write_summary_csv(pm, ens.mean, rmax, thr);
    out.artifacts.push_back(pm);
    const std::string pf = e.out + "/ib_mean_field.csv";
    write_field_csv(pf, ens.mean);
    out.artifacts.push_back(pf);
}

void mode_ibm(const Effective& e, const RunSpec& spec, RunOutcome& out) {
    NdjsonLog log(e.out + "/run.ndjson");
    log.record(run_start_record(e, "ibm").dump());
    const EnsembleResult ens = run_ibm_ensemble(e, log, true);
    write_ibm_artifacts(e, ens, spec.emit_full, out);
    log.record(json{{"event", "run_end"},
                    {"steps", steps_to(e.times.back(), e.cfg.model.params)}}
                   .dump());
    out.artifacts.push_back(e.out + "/run.ndjson");
}

void mode_continuum(const Effective& e, const RunSpec&, RunOutcome& out) {
    NdjsonLog log(e.out + "/run.ndjson");
    log.record(run_start_record(e, "continuum").dump());
    const ContinuumRun run = run_continuum(e.cfg.model, e.cfg.profile, e.times,
                                           e.cfg.cont_dx, e.cfg.cont_dy, true);
    const double rmax = e.cfg.model.params.rho_max;
    write_summary_csv(e.out + "/continuum_summary.csv", run.snapshots, rmax,
                      e.cfg.tol.support_threshold_frac);
    write_field_csv(e.out + "/continuum_field.csv", run.snapshots);
    out.artifacts.push_back(e.out + "/continuum_summary.csv");
    out.artifacts.push_back(e.out + "/continuum_field.csv");
    log.record(json{{"event", "run_end"}, {"steps", run.steps}}.dump());
    out.artifacts.push_back(e.out + "/run.ndjson");
}

void mode_compare(const Effective& e, const RunSpec& spec, RunOutcome& out) {
    NdjsonLog log(e.out + "/run.ndjson");
    log.record(run_start_record(e, "compare").dump());

    const EnsembleResult ens = run_ibm_ensemble(e, log, true);
    // comparison needs both engines on one grid: the IB lattice
    const ContinuumRun cont =
        run_continuum(e.cfg.model, e.cfg.profile, e.times, 0.0, 0.0, true);
    write_ibm_artifacts(e, ens, spec.emit_full, out);
    const double rmax = e.cfg.model.params.rho_max;
    write_summary_csv(e.out + "/continuum_summary.csv", cont.snapshots, rmax,
                      e.cfg.tol.support_threshold_frac);
    write_field_csv(e.out + "/continuum_field.csv", cont.snapshots);

    NdjsonLog report(e.out + "/compare_report.ndjson");
    const Model& model = e.cfg.model;
    const Tolerances& tol = e.cfg.tol;

    for (size_t s = 0; s < e.times.size(); ++s) {
        CheckRecord c;
        c.metric = "cross_engine_rho_l1_t" + std::to_string(e.times[s]);
        c.value = cross_engine_l1(ens.mean[s], cont.snapshots[s]);
        c.tolerance = tol.compare_tol_l1;
        c.pass = c.value <= c.tolerance;
        c.enforced = s + 1 == e.times.size();  // final time is the gate
        out.checks.push_back(c);
        log_check(report, c);
    }

    const FieldSnapshot& last = cont.snapshots.back();
    const OracleErrors err = compare_to_oracle(
        last, model, tol.support_threshold_frac, tol.edge_exclusion_frac);
    for (const auto& [name, value] :
         std::vector<std::pair<std::string, double>>{
             {"oracle_rho_linf", err.rho_linf},
             {"oracle_rho_l1", err.rho_l1},
             {"oracle_M_linf", err.M_linf},
             {"oracle_M_l1", err.M_l1},
             {"oracle_E_l1", err.E_l1}}) {
        CheckRecord c;
        c.metric = name;
        c.value = value;
        c.tolerance = 0.0;
        c.pass = true;
        c.enforced = false;  // informational at finite eps
        out.checks.push_back(c);
        log_check(report, c);
    }

    const WaveProfile prof =
        extract_profile(last, rmax, tol.support_threshold_frac);
    const StructureReport st = structure_checks(prof);
    CheckRecord cs;
    cs.metric = "continuum_structure_violations";
    cs.value = std::max(st.ybar_violation_frac, st.rho_violation_frac);
    cs.tolerance = tol.structure_violation_tol;
    cs.pass = st.pass(tol.structure_violation_tol);
    cs.enforced = false;
    out.checks.push_back(cs);
    log_check(report, cs);

    if (e.times.size() >= 2) {
        std::vector<double> ts, edges;
        for (size_t s = 0; s < e.times.size(); ++s) {
            const WaveProfile ps = extract_profile(cont.snapshots[s], rmax,
                                                   tol.support_threshold_frac);
            if (!ps.empty()) {
                ts.push_back(e.times[s]);
                edges.push_back(ps.ell);
            }
        }
        if (ts.size() >= 2) {
            const FrontSpeed fsp = front_speed(ts, edges);
            report.record(json{{"event", "front_speed"},
                               {"c", fsp.c},
                               {"residual", fsp.residual}}
                              .dump());
        }
    }

    // per-x oracle vs measured fields at the final time
    std::vector<OracleFieldRow> rows;
    const auto ybar = extract_ybar(last, rmax, tol.support_threshold_frac);
    for (int i = 0; i <= last.nx(); ++i) {
        OracleFieldRow r{};
        r.t = last.t;
        r.x = last.x[i];
        r.rho_ib = ens.mean.back().rho[i];
        r.rho_cont = last.rho[i];
        r.M_cont = last.M[i];
        r.E_cont = last.E[i];
        const double nan = std::numeric_limits<double>::quiet_NaN();
        if (ybar[i]) {
            r.ybar = *ybar[i];
            r.rho_oracle = oracle_rho(*ybar[i], model.laws, model.params);
            r.M_oracle = oracle_M(*ybar[i], model.laws, model.params);
        } else {
            r.ybar = nan;
            r.rho_oracle = 0.0;
            r.M_oracle = 0.0;
        }
        r.E_oracle = oracle_E(last.x[i], prof.ell, model.params);
        rows.push_back(r);
    }
    write_oracle_fields_csv(e.out + "/compare_fields.csv", rows);
    out.artifacts.push_back(e.out + "/compare_fields.csv");
    out.artifacts.push_back(e.out + "/compare_report.ndjson");

    for (const CheckRecord& c : out.checks) {
        if (c.enforced && !c.pass) out.exit_code = 1;
    }
    log.record(json{{"event", "run_end"}, {"exit", out.exit_code}}.dump());
    out.artifacts.push_back(e.out + "/run.ndjson");
}

void mode_sweep(const Effective& e, const RunSpec&, RunOutcome& out) {
    NdjsonLog log(e.out + "/run.ndjson");
    log.record(run_start_record(e, "sweep").dump());
    std::vector<double> eps_set = e.cfg.sweep_eps;
    if (eps_set.empty()) {
        throw ConfigError("sweep mode needs a sweep_eps list in the config");
    }

    struct SweepRow {
        double eps;
        OracleErrors err;
    };
    std::vector<SweepRow> rowset;
    NdjsonLog report(e.out + "/sweep_report.ndjson");

    for (size_t q = 0; q < eps_set.size(); ++q) {
        const double eps = eps_set[q];
        LoadedConfig cfg = e.cfg;
        cfg.model.params = e.cfg.model.params.with_eps(eps);
        cfg.profile.C = 0.0;  // Gaussian width follows eps; renormalize
        cfg.profile.normalize(cfg.model.params);
        if (!e.cfg.rho_max_explicit) {
            cfg.model.params.rho_max =
                rho_max_from_profile(cfg.profile, cfg.model.params);
        }
        const ValidationReport rep =
            validate_config(cfg.model.params, cfg.model.laws);
        if (!rep.ok()) {
            throw ConfigError("sweep eps=" + std::to_string(eps) +
                              " rejected:\n" + rep.to_string());
        }
        std::vector<double> times = e.times;
        if (!cfg.sweep_times.empty()) times = {cfg.sweep_times[q]};
        const double point_dx =
            cfg.sweep_cont_dx.empty() ? cfg.cont_dx : cfg.sweep_cont_dx[q];
        const ContinuumRun run = run_continuum(cfg.model, cfg.profile, times,
                                               point_dx, cfg.cont_dy, true);
        std::ostringstream tag;
        tag << "continuum_summary_eps" << eps << ".csv";
        write_summary_csv(e.out + "/" + tag.str(), run.snapshots,
                          cfg.model.params.rho_max,
                          cfg.tol.support_threshold_frac);
        out.artifacts.push_back(e.out + "/" + tag.str());
        const OracleErrors err = compare_to_oracle(
            run.snapshots.back(), cfg.model, cfg.tol.support_threshold_frac,
            cfg.tol.edge_exclusion_frac);
        rowset.push_back({eps, err});
        report.record(json{{"event", "sweep_point"},
                           {"eps", eps},
                           {"rho_linf", err.rho_linf},
                           {"rho_l1", err.rho_l1},
                           {"M_linf", err.M_linf},
                           {"M_l1", err.M_l1},
                           {"E_l1", err.E_l1}}
                          .dump());
    }

    {
        std::ofstream f(e.out + "/sweep_table.csv", std::ios::binary);
        f << "eps,metric,value\n";
        for (const SweepRow& r : rowset) {
            f << format_sci(r.eps) << ",rho_linf," << format_sci(r.err.rho_linf)
              << '\n';
            f << format_sci(r.eps) << ",rho_l1," << format_sci(r.err.rho_l1)
              << '\n';
            f << format_sci(r.eps) << ",M_l1," << format_sci(r.err.M_l1) << '\n';
            f << format_sci(r.eps) << ",E_l1," << format_sci(r.err.E_l1) << '\n';
        }
        out.artifacts.push_back(e.out + "/sweep_table.csv");
    }

    auto monotone = [&](auto pick, const std::string& name) {
        bool ok = true;
        for (size_t i = 0; i + 1 < rowset.size(); ++i) {
            if (!(pick(rowset[i + 1].err) < pick(rowset[i].err))) ok = false;
        }
        CheckRecord c;
        c.metric = "sweep_monotone_" + name;
        c.value = ok ? 1.0 : 0.0;
        c.tolerance = 1.0;
        c.pass = ok;
        out.checks.push_back(c);
        log_check(report, c);
    };
    // eps_set is expected largest-to-smallest; errors must shrink with eps
    monotone([](const OracleErrors& x) { return x.rho_l1; }, "rho_l1");
    monotone([](const OracleErrors& x) { return x.M_l1; }, "M_l1");
    monotone([](const OracleErrors& x) { return x.E_l1; }, "E_l1");

    CheckRecord c;
    c.metric = "sweep_final_rho_linf";
    c.value = rowset.back().err.rho_linf;
    c.tolerance = e.cfg.tol.sweep_rho_linf_tol;
    c.pass = c.value <= c.tolerance;
    out.checks.push_back(c);
    log_check(report, c);

    for (const CheckRecord& ck : out.checks) {
        if (ck.enforced && !ck.pass) out.exit_code = 1;
    }
    log.record(json{{"event", "run_end"}, {"exit", out.exit_code}}.dump());
    out.artifacts.push_back(e.out + "/sweep_report.ndjson");
    out.artifacts.push_back(e.out + "/run.ndjson");
}

void mode_ibm2d(const Effective& e, const RunSpec& spec, RunOutcome& out) {
    NdjsonLog log(e.out + "/run.ndjson");
    LoadedConfig cfg = e.cfg;
    if (!cfg.rho_max_explicit) {
        cfg.model.params.rho_max =
            rho_max_from_profile_2d(cfg.profile, cfg.model.params);
    }
    log.record(run_start_record(e, "ibm2d").dump());
    log.record(json{{"event", "rho_max_2d"},
                    {"rho_max", cfg.model.params.rho_max}}
                   .dump());

    const Ensemble2DResult ens =
        run_2d(cfg.model, cfg.profile, e.times, e.replicates, e.seed,
               e.threads, true);
    for (int r = 0; r < e.replicates; ++r) {
        const Replicate2DResult& rep = ens.replicates[r];
        log_replicate(log, r, rep.seed, rep.max_rho_ratio,
                      rep.fields_nonnegative, rep.ecm_monotone);
        const std::string p =
            e.out + "/" + rep_name("ib2d_rep", r, "_transect.csv");
        std::vector<TransectProfile> tps;
        for (const FieldSnapshot2D& s : rep.snapshots) {
            tps.push_back(radial_transect(s));
        }
        write_transect_csv(p, tps);
        out.artifacts.push_back(p);
        if (spec.emit_full) {
            const std::string pf =
                e.out + "/" + rep_name("ib2d_rep", r, "_field.csv");
            write_field_csv_2d(pf, rep.snapshots);
            out.artifacts.push_back(pf);
        }
    }
    write_summary_csv_2d(e.out + "/ib2d_mean_summary.csv", ens.mean,
                         cfg.model.params.rho_max,
                         cfg.tol.support_threshold_frac);
    write_transect_csv(e.out + "/ib2d_mean_transect.csv", ens.mean_transect);
    out.artifacts.push_back(e.out + "/ib2d_mean_summary.csv");
    out.artifacts.push_back(e.out + "/ib2d_mean_transect.csv");

    // informational: front structuring along the final mean transect
    const TransectProfile& tp = ens.mean_transect.back();
    WaveProfile prof;
    prof.t = tp.t;
    const double thr =
        cfg.tol.support_threshold_frac * cfg.model.params.rho_max;
    for (size_t b = 0; b < tp.r.size(); ++b) {
        if (tp.rho[b] > thr && std::isfinite(tp.ybar[b])) {
            prof.x.push_back(tp.r[b]);
            prof.rho.push_back(tp.rho[b]);
            prof.ybar.push_back(tp.ybar[b]);
            prof.sigma_y.push_back(tp.sigma_y[b]);
        }
    }
    if (!prof.x.empty()) {
        prof.ell = prof.x.back();
        const StructureReport st =
            structure_checks(prof, cfg.model.params.dy, 0.0);
        log.record(json{{"event", "transect_structure"},
                        {"ybar_violation_frac", st.ybar_violation_frac},
                        {"rho_violation_frac", st.rho_violation_frac},
                        {"rear_ybar", st.rear_ybar},
                        {"edge_ybar", st.edge_ybar}}
                       .dump());
    }
    log.record(json{{"event", "run_end"},
                    {"steps", steps_to(e.times.back(), cfg.model.params)}}
                   .dump());
    out.artifacts.push_back(e.out + "/run.ndjson");
}

}  // namespace

RunOutcome run(const RunSpec& spec) {
    RunOutcome out;
    const Effective e = resolve(spec);
    if (e.times.empty()) throw ConfigError("no snapshot times configured");
    if (spec.mode == "ibm") {
        mode_ibm(e, spec, out);
    } else if (spec.mode == "continuum") {
        mode_continuum(e, spec, out);
    } else if (spec.mode == "compare") {
        mode_compare(e, spec, out);
    } else if (spec.mode == "sweep") {
        mode_sweep(e, spec, out);
    } else if (spec.mode == "ibm2d") {
        mode_ibm2d(e, spec, out);
    } else {
        throw ConfigError("unknown mode '" + spec.mode + "'");
    }
    return out;
}

}  // namespace haptowave
