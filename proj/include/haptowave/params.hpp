#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace haptowave {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct InitError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct SchemeError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Per-step probabilities and the MDE diffusivity implied by the
/// diffusive-limit scaling at a given eps.
struct ScaledParams {
    double theta;  // random-movement probability per step
    double eta;    // haptotactic scaling factor
    double beta;   // phenotype-switch probability per step
    double D_M;    // MDE diffusivity (original time units)
};

/// theta = 2 tau eps^2 / dx^2, eta = 2 E_max tau eps / dx^2,
/// beta = 2 tau eps^2 / dy^2, D_M = eps.
/// Throws ConfigError if theta or beta leaves (0,1].
ScaledParams derive_scaled_params(double tau, double dx, double dy, double eps,
                                  double E_max);

/// All model constants shared by both engines. Immutable after validation;
/// derived members come from derive_scaled_params().
struct ModelParams {
    // primitive
    double tau = 0.0;      // time-step, original time units
    double dx = 0.0;       // space-step (axis 1)
    double dy = 0.0;       // phenotype-step
    double eps = 0.0;      // scaling parameter
    double X = 0.0;        // spatial domain length [0,X]
    double Y = 1.0;        // phenotype domain length [0,Y]
    double T = 0.0;        // final rescaled time
    double alpha = 0.0;    // net-growth scale
    double rho_max = 0.0;  // carrying density
    double E_max = 1.0;    // initial ECM ceiling
    double kappa_M = 1.0;  // MDE decay rate
    double kappa_E = 1.0;  // ECM degradation rate
    double p_min = 0.0;    // baseline MDE secretion
    double zeta = 0.0;     // phenotype-sensitive secretion gain

    // 2D extension (ibm2d mode only); 0 means unused
    double X2 = 0.0;   // axis-2 domain length
    double dx2 = 0.0;  // axis-2 space-step

    // derived
    double theta = 0.0;
    double eta = 0.0;
    double beta = 0.0;
    double D_M = 0.0;

    void derive() {
        const ScaledParams s = derive_scaled_params(tau, dx, dy, eps, E_max);
        theta = s.theta;
        eta = s.eta;
        beta = s.beta;
        D_M = s.D_M;
    }

    /// Same primitive parameters re-derived at a different eps (sweep mode).
    ModelParams with_eps(double new_eps) const {
        ModelParams p = *this;
        p.eps = new_eps;
        p.derive();
        return p;
    }

    // lattice extents (number of intervals, grids carry index 0..n)
    int nx() const { return static_cast<int>(std::llround(X / dx)); }
    int ny() const { return static_cast<int>(std::llround(Y / dy)); }
    int nx2() const { return static_cast<int>(std::llround(X2 / dx2)); }

    double x_of(int i) const { return i * dx; }
    double y_of(int j) const { return j * dy; }
};

/// One IB step advances rescaled time by eps*tau.
inline double rescaled_time_of_step(long long k, const ModelParams& p) {
    return static_cast<double>(k) * p.eps * p.tau;
}

/// Number of steps needed to reach rescaled time T (ceil).
inline long long steps_to(double T, const ModelParams& p) {
    return static_cast<long long>(std::ceil(T / (p.eps * p.tau) - 1e-9));
}

}  // namespace haptowave
