#pragma once

#include "ordsens/common.hpp"
#include "ordsens/fock.hpp"
#include "ordsens/ordering.hpp"

#include <optional>

namespace ordsens::witnesses {

/// Normally ordered moments m_l = Tr rho (a^dag)^l a^l, l = 0..l_max.
struct MomentVector {
    RealVec values;
};

MomentVector moments(const fock::DensityMatrix& rho, const fock::OperatorSet& ops, Index l_max);

/// Hankel determinants D_n of the moment matrix, n = 1..n_max (D_1 = 1).
/// Negativity of any D_n witnesses nonclassicality. Rows/columns are
/// equilibrated for n >= 4, where moments span many orders of magnitude.
std::vector<double> moment_determinants(const MomentVector& mv, Index n_max);

/// Closed-form D_n(q) = |a0|^{2n(n-1)} det G~(q) / g~(q)^n for N-component
/// cat states; identically 0 for n > N.
double cat_dn_closed(double alpha0_abs, Index n_components, Index q, Index n);

/// Appendix-style decay envelope: |D_n| <= |a0|^{2n(n-1)}/g~(q)^n *
/// n! rbar^{n-1} (rbar + n/N).
double cat_dn_bound(double alpha0_abs, Index n_components, Index q, Index n);

struct MandelResult {
    double d2 = 0.0;                       ///< m_2 - m_1^2 (unnormalized form, equals D_2)
    std::optional<double> q_normalized;    ///< d2 / <n>; absent for vacuum
};

MandelResult mandel(const fock::DensityMatrix& rho, const fock::OperatorSet& ops);

/// Degree of squeezing S(phi); negativity witnesses nonclassicality.
double squeezing_degree(const fock::DensityMatrix& rho, const fock::OperatorSet& ops, double phi);

struct SqueezingScan {
    double min_value = 0.0;
    double phi_at_min = 0.0;
};

SqueezingScan squeezing_min(const fock::DensityMatrix& rho, const fock::OperatorSet& ops,
                            Index scan_points = 720);

/// Quantum Fisher information F(rho, A) = 2 sum (p_i-p_j)^2/(p_i+p_j) |<i|A|j>|^2,
/// pairs with p_i + p_j <= 1e-12 skipped. Equals 4 Var(A) on pure states.
double qfi(const fock::SpectralDecomposition& decomp, const Mat& a_observable);

/// F(rho, Q_theta) is exactly quadratic in (cos theta, sin theta); the
/// maximizer comes from the 2x2 form's eigenproblem.
struct QfiResult {
    double f_qq = 0.0;
    double f_pp = 0.0;
    double f_qp = 0.0;
    double m_qfi = 0.0;       ///< (1/4) max_theta F(rho, Q_theta)
    double theta_star = 0.0;  ///< maximizing angle in [0, pi)

    double f_at(double theta) const;
};

QfiResult m_qfi(const fock::SpectralDecomposition& decomp, const fock::OperatorSet& ops);

struct WitnessConfig {
    Index l_max = 6;
    Index n_max = 4;
    Index theta_scan = 64;
    Index squeeze_scan = 720;
};

struct WitnessFlags {
    bool so = false;
    bool mandel = false;  ///< D_2 < 0 (same sign as the normalized Q_M)
    bool d_n = false;     ///< any determinant D_n < 0
    bool squeezing = false;
    bool m_qfi = false;

    bool any() const { return so || mandel || d_n || squeezing || m_qfi; }
};

/// Aggregated diagnostics; all witnesses share one spectral decomposition.
struct WitnessReport {
    double so = 0.0;  ///< commutator route
    double so_kmatrix = 0.0;
    double so_charfn = 0.0;
    double so_route_agreement = 0.0;  ///< max pairwise |difference|
    ordering::NonclassicalityBounds bounds;
    std::vector<double> d_n;
    double mandel_d2 = 0.0;
    std::optional<double> mandel_q;
    double squeezing_min = 0.0;
    double squeezing_phi = 0.0;
    double m_qfi = 0.0;
    double theta_star = 0.0;
    double purity = 0.0;
    Index l_max_used = 0;
    Index n_max_used = 0;
    WitnessFlags flags;
};

WitnessReport build_report(const fock::DensityMatrix& rho, const fock::OperatorSet& ops,
                           const WitnessConfig& config = {});

}  // namespace ordsens::witnesses
