#pragma once

#include "ordsens/common.hpp"
#include "ordsens/fock.hpp"

namespace ordsens::channels {

/// Thermal-bath / beam-splitter input-output channel parameters.
struct BathParams {
    double lambda = 1.0;  ///< efficiency (transmissivity), in (0, 1]
    double nbar = 0.0;    ///< bath mean photon number

    static BathParams make(double lambda, double nbar);

    /// sbar = 1 - lambda^{-1} (1 + 2 (1 - lambda) nbar) <= 0.
    double sbar() const { return 1.0 - (1.0 + 2.0 * (1.0 - lambda) * nbar) / lambda; }

    /// Geometric-tail control at the 1e-10 level for nbar <= 5.
    Index default_anc_dim() const { return Index(std::ceil(8.0 * (nbar + 1.0))); }
};

/// Couples rho_in to a thermal ancilla through the beam splitter
/// exp(theta (a^dag b - a b^dag)), lambda = cos^2 theta, and traces the
/// ancilla out. Explicit oracle for the chi-space identities; memory scales
/// as (dim * anc_dim)^2.
fock::DensityMatrix apply_bath(const fock::DensityMatrix& rho_in, const BathParams& p,
                               Index anc_dim = 0);

/// Normally ordered output characteristic function
/// chi_out,1(xi) = chi_in,1(sqrt(lambda) xi) exp(-(1-lambda) nbar |xi|^2);
/// divide by e^{|xi|^2/2} for the chi_0 convention.
Complex char_out(const fock::DensityMatrix& rho_in, const BathParams& p, Complex xi);

/// S_o(rho_out) = -lambda^{-1} H'(sbar, rho_in), computed without building
/// the output state.
double so_out_identity(const fock::DensityMatrix& rho_in, const BathParams& p);

/// lim_{lambda -> 1} S_o(rho_out) = -H'(-2 ebar, rho_in).
double weak_coupling_limit(const fock::DensityMatrix& rho_in, double ebar);

}  // namespace ordsens::channels
