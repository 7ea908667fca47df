#pragma once

#include <cmath>
#include <vector>

#include "haptowave/params.hpp"

namespace haptowave {

/// Initial cell distribution: N_ij = floor(A0 * C * e^{-x^2} *
/// e^{-(y-ybar0)^2/eps}) with C normalizing the phenotype Gaussian to unit
/// trapezoidal integral over [0,Y].
struct InitialProfile {
    double A0 = 100.0;
    double ybar0 = 0.2;
    double eps = 0.0;  // Gaussian variance parameter; 0 -> use params.eps
    double C = 0.0;    // normalization, filled by normalize()

    double gauss_eps(const ModelParams& p) const {
        return eps > 0.0 ? eps : p.eps;
    }

    /// Computes C so that C * trapz_y exp(-(y-ybar0)^2/eps) = 1 on the
    /// phenotype grid of `p`.
    void normalize(const ModelParams& p) {
        const int ny = p.ny();
        const double ge = gauss_eps(p);
        double integral = 0.0;
        for (int j = 0; j <= ny; ++j) {
            const double y = p.y_of(j);
            const double w = (j == 0 || j == ny) ? 0.5 : 1.0;
            integral += w * p.dy * std::exp(-(y - ybar0) * (y - ybar0) / ge);
        }
        C = 1.0 / integral;
    }

    double value(double x_sq, double y, const ModelParams& p) const {
        const double ge = gauss_eps(p);
        return A0 * C * std::exp(-x_sq) *
               std::exp(-(y - ybar0) * (y - ybar0) / ge);
    }
};

/// rho_max per the initial-condition convention: max over x of the initial
/// cell density computed from floored counts.
double rho_max_from_profile(const InitialProfile& prof, const ModelParams& p);
double rho_max_from_profile_2d(const InitialProfile& prof, const ModelParams& p);

}  // namespace haptowave
