#include "haptowave/params.hpp"

#include <sstream>

namespace haptowave {

ScaledParams derive_scaled_params(double tau, double dx, double dy, double eps,
                                  double E_max) {
    if (!(tau > 0.0) || !(dx > 0.0) || !(dy > 0.0) || !(eps > 0.0) ||
        !(E_max > 0.0)) {
        throw ConfigError("derive_scaled_params: all inputs must be positive");
    }
    ScaledParams s;
    s.theta = 2.0 * tau * eps * eps / (dx * dx);
    s.eta = 2.0 * E_max * tau * eps / (dx * dx);
    s.beta = 2.0 * tau * eps * eps / (dy * dy);
    s.D_M = eps;
    if (s.theta > 1.0) {
        std::ostringstream os;
        os << "derived random-movement probability theta = " << s.theta
           << " exceeds 1 (requires 2*tau*eps^2/dx^2 <= 1)";
        throw ConfigError(os.str());
    }
    if (s.beta > 1.0) {
        std::ostringstream os;
        os << "derived phenotype-switch probability beta = " << s.beta
           << " exceeds 1 (requires 2*tau*eps^2/dy^2 <= 1)";
        throw ConfigError(os.str());
    }
    return s;
}

}  // namespace haptowave
