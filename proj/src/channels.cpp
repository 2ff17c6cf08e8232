#include "ordsens/channels.hpp"

#include "ordsens/quasiprob.hpp"

#include <Eigen/SparseCore>
#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <map>
#include <mutex>

namespace ordsens::channels {

namespace {

using SparseMat = Eigen::SparseMatrix<Complex>;

Mat kron(const Mat& a, const Mat& b) {
    Mat out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Index i = 0; i < a.rows(); ++i)
        for (Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

/// exp(theta (a^dag b - a b^dag)) on the product space. The generator
/// conserves total photon number, so the exponential is computed exactly
/// block-by-block over the N = n + m sectors; the assembled unitary is
/// block-sparse and memoized, since it dominates sweep runtimes.
const SparseMat& beam_splitter(double theta, Index sys_dim, Index anc_dim) {
    struct Key {
        double theta;
        Index sys, anc;
        bool operator<(const Key& o) const {
            return std::tie(theta, sys, anc) < std::tie(o.theta, o.sys, o.anc);
        }
    };
    static std::map<Key, SparseMat> cache;
    static std::mutex mutex;
    std::lock_guard<std::mutex> lock(mutex);
    auto [it, fresh] = cache.try_emplace(Key{theta, sys_dim, anc_dim});
    if (fresh) {
        std::vector<Eigen::Triplet<Complex>> entries;
        for (Index total = 0; total <= sys_dim + anc_dim - 2; ++total) {
            const Index n_lo = std::max<Index>(0, total - (anc_dim - 1));
            const Index n_hi = std::min<Index>(sys_dim - 1, total);
            const Index len = n_hi - n_lo + 1;
            RealMat gen = RealMat::Zero(len, len);
            for (Index i = 0; i + 1 < len; ++i) {
                const Index n = n_lo + i;  // couples |n, total-n> and |n+1, total-n-1>
                const double g = theta * std::sqrt(double(n + 1) * double(total - n));
                gen(i + 1, i) = g;
                gen(i, i + 1) = -g;
            }
            const RealMat block = gen.exp();
            for (Index i = 0; i < len; ++i)
                for (Index j = 0; j < len; ++j) {
                    const Index row = (n_lo + i) * anc_dim + (total - n_lo - i);
                    const Index col = (n_lo + j) * anc_dim + (total - n_lo - j);
                    entries.emplace_back(row, col, Complex(block(i, j), 0.0));
                }
        }
        SparseMat u(sys_dim * anc_dim, sys_dim * anc_dim);
        u.setFromTriplets(entries.begin(), entries.end());
        it->second = std::move(u);
    }
    return it->second;
}

}  // namespace

BathParams BathParams::make(double lambda, double nbar) {
    if (!(lambda > 0.0) || lambda > 1.0) throw Error("bath efficiency must lie in (0, 1]");
    if (nbar < 0.0) throw Error("bath mean photon number must be nonnegative");
    return BathParams{lambda, nbar};
}

fock::DensityMatrix apply_bath(const fock::DensityMatrix& rho_in, const BathParams& p, Index anc_dim) {
    if (anc_dim <= 0) {
        // The ancilla must hold the bath input at the 1e-10 tail level and the
        // reflected part of the signal; 8 (nbar + 1) alone covers neither.
        const double n_refl = (1.0 - p.lambda) * rho_in.mean_photon_number() + p.nbar;
        const Index for_reflected =
            Index(std::ceil(n_refl + 6.0 * std::sqrt(n_refl * (n_refl + 1.0) + n_refl) + 10.0));
        anc_dim = std::max({p.default_anc_dim(), fock::auto_dim_thermal(p.nbar), for_reflected});
    }
    if (anc_dim < 2) anc_dim = 2;
    if (p.lambda == 1.0) return rho_in;  // transparent splitter

    fock::DensityMatrix bath = fock::thermal_state(p.nbar, anc_dim);  // throws on ancilla truncation
    const double theta = std::acos(std::sqrt(p.lambda));
    const SparseMat& u = beam_splitter(theta, rho_in.dim, anc_dim);
    const Mat full = u * Mat(kron(rho_in.matrix, bath.matrix) * u.adjoint());

    Mat out = Mat::Zero(rho_in.dim, rho_in.dim);
    for (Index m = 0; m < rho_in.dim; ++m)
        for (Index n = 0; n < rho_in.dim; ++n) {
            Complex acc = 0.0;
            for (Index k = 0; k < anc_dim; ++k) acc += full(m * anc_dim + k, n * anc_dim + k);
            out(m, n) = acc;
        }
    // Enforce exact Hermiticity against roundoff from the product-space sweep.
    out = (out + out.adjoint()) / 2.0;
    return fock::DensityMatrix{rho_in.dim, std::move(out)};
}

Complex char_out(const fock::DensityMatrix& rho_in, const BathParams& p, Complex xi) {
    const double x = std::norm(xi);
    const Complex chi0_in = quasiprob::char_fn(rho_in, std::sqrt(p.lambda) * xi);
    return std::exp(0.5 * p.lambda * x) * chi0_in * std::exp(-(1.0 - p.lambda) * p.nbar * x);
}

double so_out_identity(const fock::DensityMatrix& rho_in, const BathParams& p) {
    return -quasiprob::entropy_derivative(rho_in, p.sbar()) / p.lambda;
}

double weak_coupling_limit(const fock::DensityMatrix& rho_in, double ebar) {
    if (ebar < 0.0) throw Error("ebar must be nonnegative");
    return -quasiprob::entropy_derivative(rho_in, -2.0 * ebar);
}

}  // namespace ordsens::channels
