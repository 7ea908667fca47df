#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "haptowave/config.hpp"
#include "haptowave/continuum.hpp"
#include "haptowave/ib_engine.hpp"
#include "haptowave/ib_engine_2d.hpp"
#include "haptowave/runner.hpp"
#include "haptowave/wave.hpp"

namespace py = pybind11;
using namespace haptowave;

namespace {

py::array_t<double> vec_to_array(const std::vector<double>& v) {
    // explicit shape container; the scalar-count overloads resolve
    // differently across pybind11 majors
    return py::array_t<double>(
        std::vector<py::ssize_t>{static_cast<py::ssize_t>(v.size())},
        v.data());
}

py::array_t<double> field_to_array(const std::vector<double>& n, int nx,
                                   int ny) {
    return py::array_t<double>(
        std::vector<py::ssize_t>{nx + 1, ny + 1}, n.data());
}

LoadedConfig config_with_overrides(const std::string& config, double eps) {
    LoadedConfig cfg = load_config(config);
    if (eps > 0.0) {
        cfg.model.params = cfg.model.params.with_eps(eps);
        cfg.profile.C = 0.0;
        cfg.profile.normalize(cfg.model.params);
        if (!cfg.rho_max_explicit) {
            cfg.model.params.rho_max =
                rho_max_from_profile(cfg.profile, cfg.model.params);
        }
    }
    return cfg;
}

}  // namespace

PYBIND11_MODULE(_haptowave, m) {
    m.doc() =
        "lattice and finite-volume simulators for phenotype-structured "
        "haptotactic invasion";

    py::register_exception<ConfigError>(m, "ConfigError");
    py::register_exception<SchemeError>(m, "SchemeError");
    py::register_exception<InitError>(m, "InitError");

    m.def(
        "derive_scaled_params",
        [](double tau, double dx, double dy, double eps, double E_max) {
            const ScaledParams s = derive_scaled_params(tau, dx, dy, eps, E_max);
            return py::make_tuple(s.theta, s.eta, s.beta, s.D_M);
        },
        py::arg("tau"), py::arg("dx"), py::arg("dy"), py::arg("eps"),
        py::arg("E_max") = 1.0,
        "per-step probabilities (theta, eta, beta) and the MDE diffusivity "
        "for the diffusive-limit scaling");

    py::class_<ModelParams>(m, "ModelParams")
        .def_readonly("tau", &ModelParams::tau)
        .def_readonly("dx", &ModelParams::dx)
        .def_readonly("dy", &ModelParams::dy)
        .def_readonly("eps", &ModelParams::eps)
        .def_readonly("X", &ModelParams::X)
        .def_readonly("Y", &ModelParams::Y)
        .def_readonly("T", &ModelParams::T)
        .def_readonly("alpha", &ModelParams::alpha)
        .def_readonly("rho_max", &ModelParams::rho_max)
        .def_readonly("E_max", &ModelParams::E_max)
        .def_readonly("kappa_M", &ModelParams::kappa_M)
        .def_readonly("kappa_E", &ModelParams::kappa_E)
        .def_readonly("p_min", &ModelParams::p_min)
        .def_readonly("zeta", &ModelParams::zeta)
        .def_readonly("theta", &ModelParams::theta)
        .def_readonly("eta", &ModelParams::eta)
        .def_readonly("beta", &ModelParams::beta)
        .def_readonly("D_M", &ModelParams::D_M);

    py::class_<LoadedConfig>(m, "Config")
        .def_property_readonly(
            "params", [](const LoadedConfig& c) { return c.model.params; })
        .def_readonly("snapshot_times", &LoadedConfig::snapshot_times)
        .def_readonly("replicates", &LoadedConfig::replicates)
        .def_readonly("seed", &LoadedConfig::seed)
        .def_readonly("name", &LoadedConfig::name);

    m.def("load_config", &load_config, py::arg("path_or_preset"),
          "load and validate a config file or built-in preset");
    m.def("builtin_presets", &builtin_preset_names);

    py::class_<FieldSnapshot>(m, "Snapshot")
        .def_readonly("t", &FieldSnapshot::t)
        .def_property_readonly(
            "x", [](const FieldSnapshot& s) { return vec_to_array(s.x); })
        .def_property_readonly(
            "y", [](const FieldSnapshot& s) { return vec_to_array(s.y); })
        .def_property_readonly(
            "rho", [](const FieldSnapshot& s) { return vec_to_array(s.rho); })
        .def_property_readonly(
            "M", [](const FieldSnapshot& s) { return vec_to_array(s.M); })
        .def_property_readonly(
            "E", [](const FieldSnapshot& s) { return vec_to_array(s.E); })
        .def_property_readonly("n", [](const FieldSnapshot& s) {
            return field_to_array(s.n, s.nx(), s.ny());
        });

    m.def(
        "run_continuum",
        [](const std::string& config, std::vector<double> snapshots,
           double eps) {
            const LoadedConfig cfg = config_with_overrides(config, eps);
            const std::vector<double>& times =
                snapshots.empty() ? cfg.snapshot_times : snapshots;
            return run_continuum(cfg.model, cfg.profile, times, cfg.cont_dx,
                                 cfg.cont_dy, true)
                .snapshots;
        },
        py::arg("config"), py::arg("snapshots") = std::vector<double>{},
        py::arg("eps") = 0.0,
        py::call_guard<py::gil_scoped_release>(),
        "finite-volume solve; returns one Snapshot per requested time");

    m.def(
        "run_ibm",
        [](const std::string& config, std::vector<double> snapshots,
           int replicates, uint64_t seed, int threads) {
            const LoadedConfig cfg = config_with_overrides(config, 0.0);
            const std::vector<double>& times =
                snapshots.empty() ? cfg.snapshot_times : snapshots;
            const int reps = replicates > 0 ? replicates : cfg.replicates;
            const uint64_t s = seed > 0 ? seed : cfg.seed;
            EnsembleResult ens = run_replicates(cfg.model, cfg.profile, times,
                                                reps, s, threads, true);
            return ens.mean;
        },
        py::arg("config"), py::arg("snapshots") = std::vector<double>{},
        py::arg("replicates") = 0, py::arg("seed") = 0, py::arg("threads") = 1,
        py::call_guard<py::gil_scoped_release>(),
        "lattice ensemble; returns the replicate-mean Snapshot per time");

    m.def(
        "oracle_errors",
        [](const FieldSnapshot& snap, const std::string& config, double eps) {
            const LoadedConfig cfg = config_with_overrides(config, eps);
            const OracleErrors err =
                compare_to_oracle(snap, cfg.model, cfg.tol.support_threshold_frac,
                                  cfg.tol.edge_exclusion_frac);
            py::dict d;
            d["rho_linf"] = err.rho_linf;
            d["rho_l1"] = err.rho_l1;
            d["M_linf"] = err.M_linf;
            d["M_l1"] = err.M_l1;
            d["E_linf"] = err.E_linf;
            d["E_l1"] = err.E_l1;
            return d;
        },
        py::arg("snapshot"), py::arg("config"), py::arg("eps") = 0.0,
        "relative errors of a snapshot against the asymptotic front "
        "relations");

    m.def(
        "front_structure",
        [](const FieldSnapshot& snap, const std::string& config, double eps) {
            const LoadedConfig cfg = config_with_overrides(config, eps);
            const WaveProfile prof =
                extract_profile(snap, cfg.model.params.rho_max,
                                cfg.tol.support_threshold_frac);
            const StructureReport rep = structure_checks(prof);
            py::dict d;
            d["ell"] = prof.ell;
            d["rear_ybar"] = prof.empty() ? 0.0 : prof.rear_ybar();
            d["edge_ybar"] = prof.empty() ? 0.0 : prof.edge_ybar();
            d["ybar_violation_frac"] = rep.ybar_violation_frac;
            d["rho_violation_frac"] = rep.rho_violation_frac;
            d["single_interval"] = prof.single_interval;
            return d;
        },
        py::arg("snapshot"), py::arg("config"), py::arg("eps") = 0.0);

    m.def(
        "run_cli",
        [](const std::string& mode, const std::string& config,
           const std::string& out_dir, int replicates, uint64_t seed,
           int threads) {
            RunSpec spec;
            spec.mode = mode;
            spec.config = config;
            spec.out_dir = out_dir;
            spec.replicates = replicates;
            if (seed > 0) {
                spec.seed = seed;
                spec.seed_set = true;
            }
            spec.threads = threads;
            const RunOutcome out = run(spec);
            return out.exit_code;
        },
        py::arg("mode"), py::arg("config"), py::arg("out_dir"),
        py::arg("replicates") = 0, py::arg("seed") = 0, py::arg("threads") = 1,
        py::call_guard<py::gil_scoped_release>(),
        "same entry point as the command-line tool; writes artifacts and "
        "returns the exit code");
}
