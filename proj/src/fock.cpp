#include "ordsens/fock.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <numbers>

namespace ordsens::fock {

namespace {

constexpr double kTailTol = 1e-10;

void require_dim(Index dim) {
    if (dim < 2) throw InvalidDimensionError("Fock cutoff must be at least 2, got " + std::to_string(dim));
}

/// Untruncated coherent amplitudes e^{-|a|^2/2} a^n / sqrt(n!) on the first
/// dim levels (no renormalization). Log-space magnitudes, phases separate.
Vec coherent_amplitudes_raw(Complex alpha, Index dim) {
    Vec amps = Vec::Zero(dim);
    const double x = std::norm(alpha);
    if (x == 0.0) {
        amps(0) = 1.0;
        return amps;
    }
    const double lr = std::log(std::abs(alpha));
    const double phi = std::arg(alpha);
    for (Index n = 0; n < dim; ++n) {
        const double mag = std::exp(-0.5 * x + n * lr - 0.5 * std::lgamma(double(n) + 1.0));
        amps(n) = std::polar(mag, phi * double(n));
    }
    return amps;
}

StateVector normalized_or_throw(Vec amps, Index suggested, const char* what) {
    const double nrm2 = amps.squaredNorm();
    if (nrm2 < 1.0 - kTailTol)
        throw TruncationError(std::string(what) + " does not fit the truncated space at tail tolerance 1e-10",
                              suggested);
    amps /= std::sqrt(nrm2);
    return StateVector{amps.size(), std::move(amps)};
}

}  // namespace

DensityMatrix StateVector::projector() const {
    return DensityMatrix{dim, amplitudes * amplitudes.adjoint()};
}

DensityMatrix DensityMatrix::validated(Mat m) {
    if (m.rows() != m.cols() || m.rows() < 2)
        throw ValidationError("density matrix must be square with dim >= 2");
    if ((m - m.adjoint()).cwiseAbs().maxCoeff() > 1e-12)
        throw ValidationError("density matrix is not Hermitian within 1e-12");
    if (std::abs(m.trace().real() - 1.0) > 1e-10 || std::abs(m.trace().imag()) > 1e-10)
        throw ValidationError("density matrix trace differs from 1 by more than 1e-10");
    Eigen::SelfAdjointEigenSolver<Mat> es((m + m.adjoint()) / 2.0, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -1e-10)
        throw ValidationError("density matrix has an eigenvalue below -1e-10");
    return DensityMatrix{m.rows(), std::move(m)};
}

double DensityMatrix::mean_photon_number() const {
    double nbar = 0.0;
    for (Index n = 0; n < dim; ++n) nbar += double(n) * matrix(n, n).real();
    return nbar;
}

double DensityMatrix::edge_mass(Index levels) const {
    double mass = 0.0;
    for (Index n = std::max<Index>(0, dim - levels); n < dim; ++n) mass += matrix(n, n).real();
    return mass;
}

Mat SpectralDecomposition::reconstruct() const {
    return vectors * probs.asDiagonal() * vectors.adjoint();
}

OperatorSet build_ladder(Index dim) {
    require_dim(dim);
    OperatorSet ops;
    ops.dim = dim;
    ops.a = Mat::Zero(dim, dim);
    for (Index n = 1; n < dim; ++n) ops.a(n - 1, n) = std::sqrt(double(n));
    ops.a_dag = ops.a.adjoint();
    const double inv_sqrt2 = 1.0 / std::numbers::sqrt2;
    ops.q = (ops.a_dag + ops.a) * inv_sqrt2;
    ops.p = Complex(0.0, 1.0) * (ops.a_dag - ops.a) * inv_sqrt2;
    return ops;
}

StateVector coherent_state(Complex alpha, Index dim) {
    require_dim(dim);
    return normalized_or_throw(coherent_amplitudes_raw(alpha, dim), auto_dim_coherent(alpha),
                               "coherent state");
}

StateVector fock_state(Index n, Index dim) {
    require_dim(dim);
    if (n < 0 || n >= dim)
        throw Error("Fock index " + std::to_string(n) + " out of range for dim " + std::to_string(dim));
    Vec amps = Vec::Zero(dim);
    amps(n) = 1.0;
    return StateVector{dim, std::move(amps)};
}

Mat squeeze_matrix(Complex z, Index dim) {
    require_dim(dim);
    Mat a2 = Mat::Zero(dim, dim);
    for (Index n = 2; n < dim; ++n) a2(n - 2, n) = std::sqrt(double(n) * double(n - 1));
    Mat gen = 0.5 * (std::conj(z) * a2 - z * a2.adjoint());
    return gen.exp();
}

StateVector squeezed_state(Complex alpha, Complex z, Index dim) {
    require_dim(dim);
    Vec v = Vec::Zero(dim);
    v(0) = 1.0;
    if (z != 0.0) v = squeeze_matrix(z, dim) * v;
    if (alpha != 0.0) v = displacement_matrix(alpha, dim) * v;
    // Truncated anti-Hermitian generators exponentiate to exact unitaries, so
    // the norm never drops; leakage shows up as edge mass instead.
    double edge = 0.0;
    for (Index n = dim - 3; n < dim; ++n) edge += std::norm(v(n));
    if (edge > kTailTol)
        throw TruncationError("squeezed state does not fit the truncated space at tail tolerance 1e-10",
                              std::max<Index>(auto_dim_squeezed(alpha, z), dim + dim / 2));
    v /= v.norm();
    return StateVector{dim, std::move(v)};
}

double cat_gtilde(double alpha0_abs, Index n_components, Index q) {
    const Index n_comp = n_components;
    const double x = alpha0_abs * alpha0_abs;
    Index qm = q % n_comp;
    if (qm < 0) qm += n_comp;
    Complex acc = 0.0;
    for (Index m = 0; m < n_comp; ++m) {
        const double ang = 2.0 * std::numbers::pi * double(m) / double(n_comp);
        const Complex g = std::exp(x * (Complex(std::cos(ang), std::sin(ang)) - 1.0));
        acc += g * std::polar(1.0, -ang * double(qm));
    }
    return acc.real() / double(n_comp);
}

StateVector cat_state(Complex alpha0, Index n_components, Index q, Index dim) {
    require_dim(dim);
    if (n_components < 2) throw Error("cat state needs at least 2 components");
    const double gq = cat_gtilde(std::abs(alpha0), n_components, q);
    if (gq <= 1e-14)
        throw DegenerateCatError("cat state undefined: g~(q) vanishes at this alpha_0");
    Vec v = Vec::Zero(dim);
    for (Index m = 0; m < n_components; ++m) {
        const double ang = 2.0 * std::numbers::pi * double(m) / double(n_components);
        const Complex comp_alpha = alpha0 * std::polar(1.0, -ang);
        v += std::polar(1.0, ang * double(q)) * coherent_amplitudes_raw(comp_alpha, dim);
    }
    v /= double(n_components) * std::sqrt(gq);
    return normalized_or_throw(std::move(v), auto_dim_cat(alpha0), "cat state");
}

DensityMatrix thermal_state(double nbar, Index dim) {
    require_dim(dim);
    if (nbar < 0.0) throw Error("thermal state needs nbar >= 0");
    Mat m = Mat::Zero(dim, dim);
    if (nbar == 0.0) {
        m(0, 0) = 1.0;
        return DensityMatrix{dim, std::move(m)};
    }
    const double x = nbar / (nbar + 1.0);
    if (std::pow(x, double(dim)) > kTailTol)
        throw TruncationError("thermal state tail beyond the cutoff exceeds 1e-10", auto_dim_thermal(nbar));
    double norm = 0.0;
    for (Index n = 0; n < dim; ++n) norm += std::pow(x, double(n));
    for (Index n = 0; n < dim; ++n) m(n, n) = std::pow(x, double(n)) / norm;
    return DensityMatrix{dim, std::move(m)};
}

DensityMatrix squeezed_thermal(double nbar, Complex z, Index dim) {
    DensityMatrix th = thermal_state(nbar, dim);
    if (z == 0.0) return th;
    const Mat s = squeeze_matrix(z, dim);
    DensityMatrix out{dim, s * th.matrix * s.adjoint()};
    if (out.edge_mass(3) > kTailTol)
        throw TruncationError("squeezed thermal state does not fit the truncated space",
                              std::max<Index>(dim + dim / 2, auto_dim_squeezed(0.0, z) + auto_dim_thermal(nbar)));
    return out;
}

DensityMatrix mix(const std::vector<DensityMatrix>& states, const std::vector<double>& weights) {
    if (states.empty() || states.size() != weights.size())
        throw Error("mix needs matching nonempty state and weight lists");
    double wsum = 0.0;
    for (double w : weights) {
        if (w < 0.0) throw ValidationError("mixture weights must be nonnegative");
        wsum += w;
    }
    if (std::abs(wsum - 1.0) > 1e-12)
        throw ValidationError("mixture weights must sum to 1 within 1e-12");
    const Index dim = states.front().dim;
    Mat m = Mat::Zero(dim, dim);
    for (std::size_t i = 0; i < states.size(); ++i) {
        if (states[i].dim != dim) throw DimensionMismatchError("mixture components must share one dim");
        m += weights[i] * states[i].matrix;
    }
    return DensityMatrix{dim, std::move(m)};
}

DensityMatrix mix_pure(const std::vector<StateVector>& states, const std::vector<double>& weights) {
    std::vector<DensityMatrix> projectors;
    projectors.reserve(states.size());
    for (const auto& s : states) projectors.push_back(s.projector());
    return mix(projectors, weights);
}

double purity(const DensityMatrix& rho) {
    return rho.matrix.squaredNorm();  // Tr rho^2 for Hermitian rho
}

SpectralDecomposition spectral(const DensityMatrix& rho) {
    if ((rho.matrix - rho.matrix.adjoint()).cwiseAbs().maxCoeff() > 1e-12)
        throw ValidationError("spectral: input is not Hermitian within 1e-12");
    Eigen::SelfAdjointEigenSolver<Mat> es((rho.matrix + rho.matrix.adjoint()) / 2.0);
    if (es.info() != Eigen::Success) throw Error("eigensolver failed");
    const Index dim = rho.dim;
    SpectralDecomposition sd;
    sd.probs = RealVec(dim);
    sd.vectors = Mat(dim, dim);
    // Eigen returns ascending order; flip to descending and clip noise at 0.
    for (Index i = 0; i < dim; ++i) {
        double p = es.eigenvalues()(dim - 1 - i);
        if (p < -1e-10) throw ValidationError("spectral: eigenvalue below -1e-10");
        sd.probs(i) = std::max(p, 0.0);
        sd.vectors.col(i) = es.eigenvectors().col(dim - 1 - i);
    }
    return sd;
}

Mat displacement_matrix(Complex beta, Index dim) {
    require_dim(dim);
    Mat d = Mat::Zero(dim, dim);
    const double x = std::norm(beta);
    if (x == 0.0) return Mat::Identity(dim, dim);
    const double lb = std::log(std::abs(beta));
    const double phi = std::arg(beta);
    // <m+k|D|m> = G_{m,k} e^{i k phi}, <m|D|m+k> = (-1)^k G_{m,k} e^{-i k phi},
    // with G the scaled associated-Laguerre table; every G is a matrix element
    // of a unitary, so the forward recurrence stays bounded.
    for (Index k = 0; k < dim; ++k) {
        const double g0 = std::exp(-0.5 * x + double(k) * lb - 0.5 * std::lgamma(double(k) + 1.0));
        const Complex phase = std::polar(1.0, phi * double(k));
        const Complex phase_conj = std::polar(double((k % 2 == 0) ? 1 : -1), -phi * double(k));
        double gm1 = 0.0, g = g0;
        for (Index m = 0; m + k < dim; ++m) {
            d(m + k, m) = g * phase;
            if (k > 0) d(m, m + k) = g * phase_conj;
            const double next = ((2.0 * double(m) + double(k) + 1.0 - x) * g -
                                 std::sqrt(double(m) * double(m + k)) * gm1) /
                                std::sqrt(double(m + 1) * double(m + 1 + k));
            gm1 = g;
            g = next;
        }
    }
    return d;
}

Index auto_dim_coherent(Complex alpha) {
    const double a = std::abs(alpha);
    return std::max<Index>(8, Index(std::ceil(a * a + 6.0 * a + 10.0)));
}

Index auto_dim_fock(Index n) { return std::max<Index>(8, n + 10); }

Index auto_dim_squeezed(Complex alpha, Complex z) {
    const double r = std::abs(z);
    const double a = std::abs(alpha);
    const double nbar = std::sinh(r) * std::sinh(r) + a * a;
    const double var = 0.5 * std::sinh(2.0 * r) * std::sinh(2.0 * r) + a * a * std::exp(2.0 * r) + nbar;
    // Squeezed tails decay like tanh(r)^n, slower than the 6-sigma rule
    // covers; add the geometric-tail term explicitly.
    double geom = 0.0;
    if (r > 1e-12) {
        const double t2 = std::tanh(r) * std::tanh(r);
        geom = 2.0 * 25.0 / std::max(-std::log(t2), 1e-6);
    }
    return std::max<Index>(8, Index(std::ceil(nbar + 6.0 * std::sqrt(var) + geom + 10.0)));
}

Index auto_dim_cat(Complex alpha0) { return auto_dim_coherent(alpha0) + 4; }

Index auto_dim_thermal(double nbar) {
    const double sigma = std::sqrt(nbar * (nbar + 1.0));
    Index dim = std::max<Index>(8, Index(std::ceil(nbar + 6.0 * sigma + 10.0)));
    if (nbar > 0.0) {
        const double x = nbar / (nbar + 1.0);
        const Index geom = Index(std::ceil(std::log(0.1 * kTailTol) / std::log(x))) + 1;
        dim = std::max(dim, geom);
    }
    return dim;
}

}  // namespace ordsens::fock
