#pragma once

#include "ordsens/fock.hpp"

#include <random>

namespace ordsens::testing {

/// Ginibre-style random density matrix, optionally damped along the Fock
/// ladder so the photon-number envelope decays like e^{-2*damp*n}. `support`
/// (0 = dim) limits the populated block, leaving the top levels exactly
/// empty so the S_o truncation guard is satisfied.
inline fock::DensityMatrix random_density(Index dim, std::mt19937_64& rng, double damp = 0.0,
                                          Index support = 0) {
    if (support <= 0 || support > dim) support = dim;
    std::normal_distribution<double> gauss(0.0, 1.0);
    Mat x = Mat::Zero(dim, dim);
    for (Index i = 0; i < support; ++i)
        for (Index j = 0; j < support; ++j) x(i, j) = Complex(gauss(rng), gauss(rng));
    Mat rho = x * x.adjoint();
    if (damp > 0.0) {
        Vec envelope(dim);
        for (Index n = 0; n < dim; ++n) envelope(n) = std::exp(-damp * double(n));
        rho = envelope.asDiagonal() * rho * envelope.asDiagonal();
    }
    rho /= rho.trace().real();
    return fock::DensityMatrix{dim, std::move(rho)};
}

inline fock::StateVector random_pure(Index dim, std::mt19937_64& rng, double damp = 0.0,
                                     Index support = 0) {
    if (support <= 0 || support > dim) support = dim;
    std::normal_distribution<double> gauss(0.0, 1.0);
    Vec v = Vec::Zero(dim);
    for (Index n = 0; n < support; ++n)
        v(n) = Complex(gauss(rng), gauss(rng)) * std::exp(-damp * double(n));
    v /= v.norm();
    return fock::StateVector{dim, std::move(v)};
}

/// Random Titulaer-Glauber classical state: <= max_components coherent states
/// with |alpha| <= alpha_max and random convex weights.
inline fock::DensityMatrix random_coherent_mixture(std::mt19937_64& rng, Index dim,
                                                   Index max_components = 5,
                                                   double alpha_max = 3.0) {
    std::uniform_int_distribution<Index> count(1, max_components);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const Index k = count(rng);
    std::vector<fock::StateVector> comps;
    std::vector<double> weights;
    double wsum = 0.0;
    for (Index i = 0; i < k; ++i) {
        const double r = alpha_max * std::sqrt(unit(rng));
        const double phi = 2.0 * M_PI * unit(rng);
        comps.push_back(fock::coherent_state(std::polar(r, phi), dim));
        const double w = 0.05 + unit(rng);
        weights.push_back(w);
        wsum += w;
    }
    for (double& w : weights) w /= wsum;
    return fock::mix_pure(comps, weights);
}

}  // namespace ordsens::testing
