#include "haptowave/laws.hpp"

#include <sstream>

namespace haptowave {

PhenotypeLaws make_laws(const std::string& mu_name, const std::string& r_name,
                        const std::string& p_name, double p_min, double zeta,
                        double Y) {
    PhenotypeLaws laws;
    laws.mu_name = mu_name;
    laws.r_name = r_name;
    laws.p_name = p_name;

    if (mu_name == "y_squared") {
        laws.mu = [](double y) { return y * y; };
    } else if (mu_name == "linear") {
        laws.mu = [Y](double y) { return y / Y; };
    } else {
        throw ConfigError("unknown mu law '" + mu_name + "'");
    }

    if (r_name == "one_minus_y_squared") {
        laws.r = [Y](double y) { return 1.0 - (y / Y) * (y / Y); };
    } else if (r_name == "one_minus_y") {
        laws.r = [Y](double y) { return 1.0 - y / Y; };
    } else {
        throw ConfigError("unknown r law '" + r_name + "'");
    }

    if (p_name == "quadratic") {
        laws.p = [p_min, zeta](double y) { return p_min + zeta * y * y; };
    } else if (p_name == "linear") {
        laws.p = [p_min, zeta](double y) { return p_min + zeta * y; };
    } else {
        throw ConfigError("unknown p law '" + p_name + "'");
    }
    return laws;
}

std::vector<std::string> registered_mu_laws() { return {"y_squared", "linear"}; }
std::vector<std::string> registered_r_laws() {
    return {"one_minus_y_squared", "one_minus_y"};
}
std::vector<std::string> registered_p_laws() { return {"quadratic", "linear"}; }

std::string ValidationReport::to_string() const {
    std::ostringstream os;
    for (const auto& v : violations) {
        os << v.constraint << ": " << v.message << "\n";
    }
    return os.str();
}

}  // namespace haptowave
