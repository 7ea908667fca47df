#pragma once

#include <string>
#include <vector>

namespace haptowave {

/// Engine-agnostic view of the model fields at one rescaled time.
/// n is x-major: n[i*(ny+1)+j]. For IB snapshots n holds counts/(dx*dy).
struct FieldSnapshot {
    double t = 0.0;
    std::vector<double> x;    // nx+1 grid nodes
    std::vector<double> y;    // ny+1 grid nodes
    std::vector<double> n;    // (nx+1)*(ny+1), may be empty for summary-only
    std::vector<double> rho;  // nx+1
    std::vector<double> M;    // nx+1
    std::vector<double> E;    // nx+1

    int nx() const { return static_cast<int>(x.size()) - 1; }
    int ny() const { return static_cast<int>(y.size()) - 1; }
    double n_at(int i, int j) const { return n[i * (ny() + 1) + j]; }
};

/// 2D spatial fields (ibm2d mode). n is (i1,i2)-major then phenotype:
/// n[(i1*(nx2+1)+i2)*(ny+1)+j]; rho/M/E are per column (i1*(nx2+1)+i2).
struct FieldSnapshot2D {
    double t = 0.0;
    std::vector<double> x1, x2, y;
    std::vector<double> n;
    std::vector<double> rho, M, E;

    int nx1() const { return static_cast<int>(x1.size()) - 1; }
    int nx2() const { return static_cast<int>(x2.size()) - 1; }
    int ny() const { return static_cast<int>(y.size()) - 1; }
    int col(int i1, int i2) const { return i1 * (nx2() + 1) + i2; }
};

/// Radially binned fields from a 2D snapshot (transect from the origin).
struct TransectProfile {
    double t = 0.0;
    std::vector<double> r;      // bin centers
    std::vector<double> rho, M, E;
    std::vector<double> ybar;   // NaN where the bin holds no cells
    std::vector<double> sigma_y;
    std::vector<long long> cells;  // total cell count per bin
};

}  // namespace haptowave
