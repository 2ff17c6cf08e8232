#pragma once

#include "ordsens/common.hpp"
#include "ordsens/fock.hpp"

namespace ordsens::quasiprob {

/// Square phase-space grid, n even, samples at cell centers (midpoint rule).
struct PhaseGrid {
    double half_extent = 0.0;
    Index points = 0;

    static PhaseGrid make(double half_extent, Index points);
    double spacing() const { return 2.0 * half_extent / double(points); }
    double coord(Index i) const { return -half_extent + (double(i) + 0.5) * spacing(); }
};

/// R = 2 sqrt(nbar + 1) + 4, covering Gaussian tails below 1e-7.
double default_extent(const fock::DensityMatrix& rho);
PhaseGrid default_grid(const fock::DensityMatrix& rho, Index points = 256);

/// Sampled W_s; values are densities per unit phase-space area, row index is
/// the alpha_1 axis. `mass` is sum(values) * h^2.
struct QuasiProbGrid {
    double s = 0.0;
    PhaseGrid grid;
    RealMat values;
    double mass = 0.0;
    bool under_resolved = false;
};

/// chi_s sampled on a xi-grid (same cell-centered layout).
struct CharGrid {
    double s = 0.0;
    PhaseGrid grid;
    Mat values;
};

/// chi_0(xi) = Tr[rho D(xi)], evaluated from the closed-form Fock matrix
/// elements of D (associated Laguerre recurrence), pointwise exact up to
/// truncation.
Complex char_fn(const fock::DensityMatrix& rho, Complex xi);

CharGrid char_grid(const fock::DensityMatrix& rho, double s, const PhaseGrid& grid);

/// Displaced-parity evaluation W_0(alpha) = (2/pi) Tr[rho D(2 alpha) Pi].
double wigner_at(const fock::DensityMatrix& rho, Complex alpha);

/// Pointwise W_s for s <= 0 via the generalized-parity kernel
/// D(alpha) diag((2/(1-s)) ((s+1)/(s-1))^n) D(alpha)^dag. O(dim^3) per point;
/// serves as the independent oracle for ws_grid.
double ws_at(const fock::DensityMatrix& rho, double s, Complex alpha);

QuasiProbGrid wigner_grid(const fock::DensityMatrix& rho, const PhaseGrid& grid);

/// W_s for s <= 0: Gaussian convolution of W_0 with per-axis variance |s|/4,
/// matching d/ds W = -(1/8) Laplacian W over [s, 0]. The convolution runs on
/// an internally padded grid.
QuasiProbGrid ws_grid(const fock::DensityMatrix& rho, double s, const PhaseGrid& grid);

/// Several orderings from one padded W_0 evaluation.
std::vector<QuasiProbGrid> ws_grid_batch(const fock::DensityMatrix& rho,
                                         const std::vector<double>& s_values, const PhaseGrid& grid);

/// s-ordered entropy H(s, rho) = -ln(pi^{-1} Int e^{s|xi|^2} |chi_0|^2 d^2 xi),
/// computed in chi-space (trapezoid on an auto-sized xi-grid). s <= 0.
double entropy(const fock::DensityMatrix& rho, double s);

/// H'(s, rho) = -(Int |xi|^2 e^{s|xi|^2}|chi_0|^2) / (Int e^{s|xi|^2}|chi_0|^2) <= 0.
double entropy_derivative(const fock::DensityMatrix& rho, double s);

struct EntropyPoint {
    double s = 0.0;
    double h = 0.0;
    double hprime = 0.0;
    double bound_value = 0.0;  ///< -(1-s) H'(s)
};

/// Batched H/H' sharing one chi evaluation across all s values.
std::vector<EntropyPoint> entropy_curve(const fock::DensityMatrix& rho,
                                        const std::vector<double>& s_values);

struct GradRatioResult {
    double value = 0.0;
    bool under_resolved = false;
};

/// (1/4) |grad W_0|^2 / |W_0|^2 by central finite differences; equals S_o up
/// to grid error. Input must be an s = 0 grid.
GradRatioResult grad_ratio(const QuasiProbGrid& w);

}  // namespace ordsens::quasiprob
