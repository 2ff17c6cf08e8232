#pragma once

#include "ordsens/common.hpp"

namespace ordsens::fock {

// ---------------------------------------------------------------------------
// Truncated Fock-space representation. Basis |0>...|dim-1>, dimensionless
// quadratures Q = (a^dag + a)/sqrt(2), P = i(a^dag - a)/sqrt(2).
// ---------------------------------------------------------------------------

struct OperatorSet {
    Index dim = 0;
    Mat a;      ///< annihilation, <m|a|n> = sqrt(n) delta_{m,n-1}
    Mat a_dag;  ///< conjugate transpose of a
    Mat q;
    Mat p;
};

struct DensityMatrix;

struct StateVector {
    Index dim = 0;
    Vec amplitudes;  ///< unit Euclidean norm

    DensityMatrix projector() const;
};

/// Hermitian, PSD, unit-trace complex matrix; the central object.
struct DensityMatrix {
    Index dim = 0;
    Mat matrix;

    /// Full invariant check (Hermitian 1e-12, trace 1e-10, eigenvalues
    /// >= -1e-10); throws ValidationError. Used for raw ingestion and tests;
    /// library constructors are PSD by construction.
    static DensityMatrix validated(Mat m);

    double mean_photon_number() const;
    /// Mass carried by the top `levels` Fock levels.
    double edge_mass(Index levels = 3) const;
};

/// Eigenvalues descending, matching orthonormal eigenvectors as columns.
/// All dim pairs are kept (zeros included); consumers apply their own floors.
struct SpectralDecomposition {
    RealVec probs;
    Mat vectors;

    Mat reconstruct() const;
};

OperatorSet build_ladder(Index dim);

StateVector coherent_state(Complex alpha, Index dim);
StateVector fock_state(Index n, Index dim);

/// D(alpha) S(z) |0> in the truncated space, renormalized. The squeeze
/// operator is the matrix exponential of (z* a^2 - z a^dag^2)/2.
StateVector squeezed_state(Complex alpha, Complex z, Index dim);

/// N-component cat state |c_q>: superposition of coherent states at
/// alpha_0 e^{-i 2 pi m / N} with phases e^{i 2 pi m q / N}.
StateVector cat_state(Complex alpha0, Index n_components, Index q, Index dim);

DensityMatrix thermal_state(double nbar, Index dim);

/// S(z) rho_th(nbar) S(z)^dag.
DensityMatrix squeezed_thermal(double nbar, Complex z, Index dim);

DensityMatrix mix(const std::vector<DensityMatrix>& states, const std::vector<double>& weights);
DensityMatrix mix_pure(const std::vector<StateVector>& states, const std::vector<double>& weights);

double purity(const DensityMatrix& rho);

SpectralDecomposition spectral(const DensityMatrix& rho);

// -- supporting machinery ----------------------------------------------------

/// Displacement operator D(beta) = exp(beta a^dag - beta* a) from the
/// closed-form Fock matrix elements (associated Laguerre recurrence).
Mat displacement_matrix(Complex beta, Index dim);

/// Squeeze operator S(z) = exp((z* a^2 - z a^dag^2)/2) via matrix exponential
/// of the truncated generator.
Mat squeeze_matrix(Complex z, Index dim);

/// Discrete transform g~(q) of g(m) = exp(|a0|^2 (e^{i 2 pi m/N} - 1));
/// real and N-periodic in q.
double cat_gtilde(double alpha0_abs, Index n_components, Index q);

/// Cutoff heuristic dim >= nbar + 6 sigma_n + 10, by state kind.
Index auto_dim_coherent(Complex alpha);
Index auto_dim_fock(Index n);
Index auto_dim_squeezed(Complex alpha, Complex z);
Index auto_dim_cat(Complex alpha0);
Index auto_dim_thermal(double nbar);

}  // namespace ordsens::fock
