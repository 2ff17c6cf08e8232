#pragma once

#include "ordsens/common.hpp"
#include "ordsens/fock.hpp"

namespace ordsens::ordering {

enum class Route { commutator, kmatrix, charfn, grid };

/// S_o with the route that produced it. The flag witnesses nonclassicality:
/// S_o > 1 is sufficient (and necessary for pure states).
struct OrderingSensitivityResult {
    double so = 0.0;
    double norm = 0.0;  ///< sqrt(so), the value of the commutator norm of rho~
    Route route = Route::commutator;
    bool witness_flag = false;
};

/// Sandwich bounds max(0, sqrt(S_o) - 1) <= N(rho) <= sqrt(S_o) on the
/// distance to the classical set.
struct NonclassicalityBounds {
    double lower = 0.0;
    double upper = 0.0;
};

/// Quadratic form over the eigenbasis: diagonal holds quadrature variances
/// Delta Q_i^2 + Delta P_i^2, off-diagonal the (negated) transition strengths.
struct KMatrix {
    Index size = 0;
    RealMat entries;
};

/// <A, B> = (1/2) Tr([A^dag, Q][Q, B] + [A^dag, P][P, B]); linear in B,
/// anti-linear in A, positive for B = A.
Complex hs_inner(const Mat& a, const Mat& b, const fock::OperatorSet& ops);

OrderingSensitivityResult so_commutator(const fock::DensityMatrix& rho, const fock::OperatorSet& ops);

/// Pure-state shortcut S_o = 2(<a^dag a> - |<a>|^2) + 1.
OrderingSensitivityResult so_pure(const fock::StateVector& state, const fock::OperatorSet& ops);

KMatrix kmatrix(const fock::SpectralDecomposition& decomp, const fock::OperatorSet& ops);

OrderingSensitivityResult so_kmatrix(const fock::SpectralDecomposition& decomp,
                                     const fock::OperatorSet& ops);

/// chi-space route S_o = -H'(0, rho).
OrderingSensitivityResult so_charfn(const fock::DensityMatrix& rho);

NonclassicalityBounds nonclassicality_bounds(const OrderingSensitivityResult& so_result);

struct BoundSample {
    double s = 0.0;
    double value = 0.0;  ///< -(1-s) H'(s); > 1 certifies nonclassicality at this s
};

/// Classicality bound over s samples in [-1, 0]: classical states keep
/// every sample inside [0, 1].
std::vector<BoundSample> classical_bound_check(const fock::DensityMatrix& rho,
                                               const std::vector<double>& s_samples);

/// Commutators with Q, P amplify edge effects; S_o computations require the
/// top three Fock levels to carry < 1e-8 of the mass.
void require_truncation_headroom(const fock::DensityMatrix& rho);

}  // namespace ordsens::ordering
