#include "haptowave/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace haptowave {

namespace {

std::string trim(const std::string& s) {
    size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

double parse_num(const std::string& key, const std::string& v) {
    try {
        size_t pos = 0;
        const double d = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return d;
    } catch (const std::exception&) {
        throw ConfigError("config key '" + key + "': cannot parse number '" +
                          v + "'");
    }
}

std::vector<double> parse_list(const std::string& key, const std::string& v) {
    std::vector<double> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(parse_num(key, item));
    }
    return out;
}

const std::map<std::string, std::string>& preset_table() {
    static const std::map<std::string, std::string> presets = {
        {"paper-1d-eps1e2", R"(# 1D run, eps = 1e-2
dx = 0.05
dy = 0.02
eps = 0.01
X = 100
Y = 1
T = 30
alpha = 0.1
zeta = 1e-5
p_min = 1e-7
kappa_M = 1
kappa_E = 1
E_max = 1
A0 = 100
ybar0 = 0.2
mu_law = y_squared
r_law = one_minus_y_squared
p_law = quadratic
snapshots = 10,20,30
replicates = 5
seed = 1
)"},
        {"paper-1d-eps5e3", R"(# 1D run, eps = 5e-3
dx = 0.05
dy = 0.02
eps = 0.005
X = 100
Y = 1
T = 30
alpha = 0.1
zeta = 1e-5
p_min = 1e-7
kappa_M = 1
kappa_E = 1
E_max = 1
A0 = 100
ybar0 = 0.2
mu_law = y_squared
r_law = one_minus_y_squared
p_law = quadratic
snapshots = 10,20,30
replicates = 5
seed = 1
)"},
        {"paper-1d-eps1e3", R"(# 1D run, eps = 1e-3 (shorter horizon)
dx = 0.05
dy = 0.02
eps = 0.001
X = 100
Y = 1
T = 15
alpha = 0.1
zeta = 1e-5
p_min = 1e-7
kappa_M = 1
kappa_E = 1
E_max = 1
A0 = 100
ybar0 = 0.2
mu_law = y_squared
r_law = one_minus_y_squared
p_law = quadratic
snapshots = 5,10,15
replicates = 5
seed = 1
)"},
        {"desk-compare", R"(# reduced cross-engine comparison run
dx = 0.05
dy = 0.02
eps = 0.01
X = 50
Y = 1
T = 10
alpha = 0.1
zeta = 1e-5
p_min = 1e-7
kappa_M = 1
kappa_E = 1
E_max = 1
A0 = 100
ybar0 = 0.2
mu_law = y_squared
r_law = one_minus_y_squared
p_law = quadratic
snapshots = 5,10
replicates = 5
seed = 1
compare_tol_l1 = 0.15
)"},
        {"desk-sweep", R"(# reduced continuum eps sweep
dx = 0.05
dy = 0.02
eps = 0.01
X = 50
Y = 1
T = 10
alpha = 0.1
zeta = 1e-5
p_min = 1e-7
kappa_M = 1
kappa_E = 1
E_max = 1
A0 = 100
ybar0 = 0.2
mu_law = y_squared
r_law = one_minus_y_squared
p_law = quadratic
snapshots = 10
sweep_eps = 0.01,0.005,0.001
sweep_times = 10,10,6
sweep_cont_dx = 0.05,0.025,0.0125
replicates = 1
seed = 1
sweep_rho_linf_tol = 0.05
)"},
        {"desk-2d", R"(# reduced 2D run (radial transect); the seed population
# grows toward the carrying density of the 1D runs
dx = 0.1
dx2 = 0.1
dy = 0.02
eps = 0.01
X = 10
X2 = 10
Y = 1
T = 5
alpha = 0.1
zeta = 1e-5
p_min = 1e-7
kappa_M = 1
kappa_E = 1
E_max = 1
A0 = 1
ybar0 = 0.2
rho_max = 99880
mu_law = y_squared
r_law = one_minus_y_squared
p_law = quadratic
snapshots = 2.5,5
replicates = 5
seed = 1
)"},
        {"desk-determinism", R"(# tiny run for reproducibility checks
dx = 0.05
dy = 0.02
eps = 0.01
X = 20
Y = 1
T = 1
alpha = 0.1
zeta = 1e-5
p_min = 1e-7
kappa_M = 1
kappa_E = 1
E_max = 1
A0 = 100
ybar0 = 0.2
mu_law = y_squared
r_law = one_minus_y_squared
p_law = quadratic
snapshots = 0.5,1
replicates = 2
seed = 1
)"},
    };
    return presets;
}

const std::set<std::string>& known_keys() {
    static const std::set<std::string> keys = {
        "dx", "dy", "dx2", "tau", "eps", "X", "X2", "Y", "T", "alpha",
        "rho_max", "E_max", "kappa_M", "kappa_E", "p_min", "zeta", "mu_law",
        "r_law", "p_law", "A0", "ybar0", "profile_eps", "snapshots",
        "replicates", "seed", "cont_dx", "cont_dy", "sweep_eps",
        "sweep_times", "sweep_cont_dx",
        "support_threshold_frac", "edge_exclusion_frac",
        "structure_violation_tol", "compare_tol_l1", "sweep_rho_linf_tol",
    };
    return keys;
}

}  // namespace

std::vector<std::string> builtin_preset_names() {
    std::vector<std::string> names;
    for (const auto& [k, v] : preset_table()) names.push_back(k);
    return names;
}

std::string builtin_preset_text(const std::string& name) {
    const auto& t = preset_table();
    auto it = t.find(name);
    if (it == t.end()) throw ConfigError("unknown preset '" + name + "'");
    return it->second;
}

LoadedConfig parse_config(const std::string& text, const std::string& name) {
    std::map<std::string, std::string> kv;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const size_t eq = line.find('=');
        if (eq == std::string::npos) {
            std::ostringstream os;
            os << name << ":" << lineno << ": expected 'key = value'";
            throw ConfigError(os.str());
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        if (!known_keys().count(key)) {
            throw ConfigError("unknown config key '" + key + "' in " + name);
        }
        if (kv.count(key)) {
            throw ConfigError("duplicate config key '" + key + "' in " + name);
        }
        kv[key] = val;
    }

    auto num = [&](const char* key, double def,
                   bool* present = nullptr) -> double {
        auto it = kv.find(key);
        if (present) *present = it != kv.end();
        return it == kv.end() ? def : parse_num(key, it->second);
    };
    auto str = [&](const char* key, const std::string& def) -> std::string {
        auto it = kv.find(key);
        return it == kv.end() ? def : it->second;
    };

    LoadedConfig cfg;
    cfg.name = name;
    ModelParams& p = cfg.model.params;
    p.dx = num("dx", 0.05);
    p.dy = num("dy", 0.02);
    p.tau = num("tau", 0.5 * p.dx * p.dx);
    p.eps = num("eps", 0.01);
    p.X = num("X", 100.0);
    p.Y = num("Y", 1.0);
    p.T = num("T", 30.0);
    p.alpha = num("alpha", 0.1);
    p.E_max = num("E_max", 1.0);
    p.kappa_M = num("kappa_M", 1.0);
    p.kappa_E = num("kappa_E", 1.0);
    p.p_min = num("p_min", 1e-7);
    p.zeta = num("zeta", 1e-5);
    p.X2 = num("X2", 0.0);
    p.dx2 = num("dx2", 0.0);
    p.derive();  // throws if theta or beta leaves (0,1]

    cfg.model.laws =
        make_laws(str("mu_law", "y_squared"), str("r_law", "one_minus_y_squared"),
                  str("p_law", "quadratic"), p.p_min, p.zeta, p.Y);

    cfg.profile.A0 = num("A0", 100.0);
    cfg.profile.ybar0 = num("ybar0", 0.2);
    cfg.profile.eps = num("profile_eps", 0.0);
    cfg.profile.normalize(p);

    bool rho_present = false;
    p.rho_max = num("rho_max", 0.0, &rho_present);
    cfg.rho_max_explicit = rho_present;
    if (!rho_present) {
        p.rho_max = rho_max_from_profile(cfg.profile, p);
    }
    if (!(p.rho_max > 0.0)) {
        throw ConfigError("rho_max must be positive (profile too dilute?)");
    }

    cfg.cont_dx = num("cont_dx", 0.0);
    cfg.cont_dy = num("cont_dy", 0.0);
    if (auto it = kv.find("snapshots"); it != kv.end()) {
        cfg.snapshot_times = parse_list("snapshots", it->second);
    } else {
        cfg.snapshot_times = {p.T};
    }
    if (auto it = kv.find("sweep_eps"); it != kv.end()) {
        cfg.sweep_eps = parse_list("sweep_eps", it->second);
    }
    if (auto it = kv.find("sweep_times"); it != kv.end()) {
        cfg.sweep_times = parse_list("sweep_times", it->second);
        if (cfg.sweep_times.size() != cfg.sweep_eps.size()) {
            throw ConfigError("sweep_times must match sweep_eps in length");
        }
    }
    if (auto it = kv.find("sweep_cont_dx"); it != kv.end()) {
        cfg.sweep_cont_dx = parse_list("sweep_cont_dx", it->second);
        if (cfg.sweep_cont_dx.size() != cfg.sweep_eps.size()) {
            throw ConfigError("sweep_cont_dx must match sweep_eps in length");
        }
    }
    cfg.replicates = static_cast<int>(num("replicates", 1.0));
    cfg.seed = static_cast<uint64_t>(num("seed", 1.0));

    cfg.tol.support_threshold_frac =
        num("support_threshold_frac", cfg.tol.support_threshold_frac);
    cfg.tol.edge_exclusion_frac =
        num("edge_exclusion_frac", cfg.tol.edge_exclusion_frac);
    cfg.tol.structure_violation_tol =
        num("structure_violation_tol", cfg.tol.structure_violation_tol);
    cfg.tol.compare_tol_l1 = num("compare_tol_l1", cfg.tol.compare_tol_l1);
    cfg.tol.sweep_rho_linf_tol =
        num("sweep_rho_linf_tol", cfg.tol.sweep_rho_linf_tol);

    // run-spec sanity
    if (cfg.replicates < 1) throw ConfigError("replicates must be >= 1");
    for (size_t i = 0; i < cfg.snapshot_times.size(); ++i) {
        const double t = cfg.snapshot_times[i];
        if (t < 0.0 || t > p.T + 1e-12) {
            throw ConfigError("snapshot times must lie in [0, T]");
        }
        if (i > 0 && t < cfg.snapshot_times[i - 1]) {
            throw ConfigError("snapshot times must be sorted");
        }
    }

    const ValidationReport report = validate_config(p, cfg.model.laws);
    if (!report.ok()) {
        throw ConfigError("configuration rejected:\n" + report.to_string());
    }

    std::ostringstream canon;
    for (const auto& [k, v] : kv) canon << k << "=" << v << "\n";
    cfg.canonical = canon.str();
    return cfg;
}

LoadedConfig load_config(const std::string& path_or_preset) {
    std::ifstream f(path_or_preset);
    if (f) {
        std::ostringstream ss;
        ss << f.rdbuf();
        return parse_config(ss.str(), path_or_preset);
    }
    const auto& presets = preset_table();
    if (auto it = presets.find(path_or_preset); it != presets.end()) {
        return parse_config(it->second, path_or_preset);
    }
    throw IoError("config '" + path_or_preset +
                  "' is neither a readable file nor a built-in preset");
}

}  // namespace haptowave
