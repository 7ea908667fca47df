#include "haptowave/profile.hpp"

namespace haptowave {

double rho_max_from_profile(const InitialProfile& prof_in,
                            const ModelParams& p) {
    InitialProfile prof = prof_in;
    if (prof.C <= 0.0) prof.normalize(p);
    const int nx = p.nx(), ny = p.ny();
    double best = 0.0;
    for (int i = 0; i <= nx; ++i) {
        const double x = p.x_of(i);
        long long c = 0;
        for (int j = 0; j <= ny; ++j) {
            c += static_cast<long long>(
                std::floor(prof.value(x * x, p.y_of(j), p)));
        }
        best = std::max(best, static_cast<double>(c) / p.dx);
    }
    return best;
}

double rho_max_from_profile_2d(const InitialProfile& prof_in,
                               const ModelParams& p) {
    InitialProfile prof = prof_in;
    if (prof.C <= 0.0) prof.normalize(p);
    const int n1 = p.nx(), n2 = p.nx2(), ny = p.ny();
    double best = 0.0;
    for (int i1 = 0; i1 <= n1; ++i1) {
        const double x1 = p.x_of(i1);
        for (int i2 = 0; i2 <= n2; ++i2) {
            const double x2 = i2 * p.dx2;
            const double rsq = x1 * x1 + x2 * x2;
            long long c = 0;
            for (int j = 0; j <= ny; ++j) {
                c += static_cast<long long>(
                    std::floor(prof.value(rsq, p.y_of(j), p)));
            }
            best = std::max(best, static_cast<double>(c) / (p.dx * p.dx2));
        }
    }
    return best;
}

}  // namespace haptowave
