#include "ordsens/ordering.hpp"

#include "ordsens/quasiprob.hpp"

#include <cmath>

namespace ordsens::ordering {

namespace {

constexpr double kEigenvalueFloor = 1e-12;

OrderingSensitivityResult make_result(double so, Route route) {
    so = std::max(so, 0.0);
    return OrderingSensitivityResult{so, std::sqrt(so), route, so > 1.0};
}

}  // namespace

void require_truncation_headroom(const fock::DensityMatrix& rho) {
    const double edge = rho.edge_mass(3);
    if (edge > 1e-8)
        throw TruncationError("top three Fock levels carry " + std::to_string(edge) +
                                  " of the state's mass (limit 1e-8)",
                              rho.dim + rho.dim / 2);
}

Complex hs_inner(const Mat& a, const Mat& b, const fock::OperatorSet& ops) {
    if (a.rows() != a.cols() || b.rows() != b.cols() || a.rows() != b.rows() ||
        a.rows() != ops.dim)
        throw DimensionMismatchError("hs_inner needs square matrices matching the operator set");
    const Mat adag = a.adjoint();
    const Mat cq_a = adag * ops.q - ops.q * adag;
    const Mat cq_b = ops.q * b - b * ops.q;
    const Mat cp_a = adag * ops.p - ops.p * adag;
    const Mat cp_b = ops.p * b - b * ops.p;
    return 0.5 * ((cq_a * cq_b).trace() + (cp_a * cp_b).trace());
}

OrderingSensitivityResult so_commutator(const fock::DensityMatrix& rho, const fock::OperatorSet& ops) {
    if (rho.dim != ops.dim) throw DimensionMismatchError("state and operator set dims differ");
    require_truncation_headroom(rho);
    const double pur = fock::purity(rho);
    if (pur <= 1e-14) throw Error("degenerate input: Tr rho^2 vanishes");
    // [Q, rho] is anti-Hermitian, so -Tr[Q, rho]^2 is its squared Frobenius norm.
    const Mat cq = ops.q * rho.matrix - rho.matrix * ops.q;
    const Mat cp = ops.p * rho.matrix - rho.matrix * ops.p;
    const double so = 0.5 * (cq.squaredNorm() + cp.squaredNorm()) / pur;
    return make_result(so, Route::commutator);
}

OrderingSensitivityResult so_pure(const fock::StateVector& state, const fock::OperatorSet& ops) {
    if (state.dim != ops.dim) throw DimensionMismatchError("state and operator set dims differ");
    double edge = 0.0;
    for (Index n = state.dim - 3; n < state.dim; ++n) edge += std::norm(state.amplitudes(n));
    if (edge > 1e-8)
        throw TruncationError("top three Fock levels carry more than 1e-8 of the state",
                              state.dim + state.dim / 2);
    const Vec av = ops.a * state.amplitudes;
    const Complex mean_a = state.amplitudes.dot(av);
    const double so = 2.0 * (av.squaredNorm() - std::norm(mean_a)) + 1.0;
    return make_result(so, Route::commutator);
}

KMatrix kmatrix(const fock::SpectralDecomposition& decomp, const fock::OperatorSet& ops) {
    const Index dim = decomp.vectors.rows();
    if (dim != ops.dim) throw DimensionMismatchError("decomposition and operator set dims differ");

    std::vector<Index> kept;
    for (Index i = 0; i < decomp.probs.size(); ++i)
        if (decomp.probs(i) > kEigenvalueFloor) kept.push_back(i);
    const Index m = Index(kept.size());

    Mat v(dim, m);
    for (Index i = 0; i < m; ++i) v.col(i) = decomp.vectors.col(kept[i]);
    const Mat gram = v.adjoint() * v;
    if ((gram - Mat::Identity(m, m)).cwiseAbs().maxCoeff() > 1e-10)
        throw ValidationError("kmatrix: eigenvectors are not orthonormal within 1e-10");

    const Mat qv = ops.q * v;
    const Mat pv = ops.p * v;
    const Mat mq = v.adjoint() * qv;
    const Mat mp = v.adjoint() * pv;

    KMatrix k{m, RealMat(m, m)};
    for (Index i = 0; i < m; ++i) {
        for (Index j = 0; j < m; ++j) {
            if (i == j) continue;
            k.entries(i, j) = -(std::norm(mq(i, j)) + std::norm(mp(i, j)));
        }
        k.entries(i, i) = qv.col(i).squaredNorm() - mq(i, i).real() * mq(i, i).real() +
                          pv.col(i).squaredNorm() - mp(i, i).real() * mp(i, i).real();
    }
    return k;
}

OrderingSensitivityResult so_kmatrix(const fock::SpectralDecomposition& decomp,
                                     const fock::OperatorSet& ops) {
    const KMatrix k = kmatrix(decomp, ops);
    // p~ uses the full purity, so mass dropped at the eigenvalue floor is
    // renormalized into the denominator.
    double p2_all = 0.0;
    for (Index i = 0; i < decomp.probs.size(); ++i) p2_all += decomp.probs(i) * decomp.probs(i);
    if (p2_all <= 1e-14) throw Error("degenerate input: Tr rho^2 vanishes");

    RealVec p_kept(k.size);
    Index at = 0;
    for (Index i = 0; i < decomp.probs.size(); ++i)
        if (decomp.probs(i) > kEigenvalueFloor) p_kept(at++) = decomp.probs(i);
    const double so = p_kept.dot(k.entries * p_kept) / p2_all;
    return make_result(so, Route::kmatrix);
}

OrderingSensitivityResult so_charfn(const fock::DensityMatrix& rho) {
    return make_result(-quasiprob::entropy_derivative(rho, 0.0), Route::charfn);
}

NonclassicalityBounds nonclassicality_bounds(const OrderingSensitivityResult& so_result) {
    const double norm = std::sqrt(std::max(so_result.so, 0.0));
    return NonclassicalityBounds{std::max(0.0, norm - 1.0), norm};
}

std::vector<BoundSample> classical_bound_check(const fock::DensityMatrix& rho,
                                               const std::vector<double>& s_samples) {
    const auto curve = quasiprob::entropy_curve(rho, s_samples);
    std::vector<BoundSample> out;
    out.reserve(curve.size());
    for (const auto& pt : curve) out.push_back(BoundSample{pt.s, pt.bound_value});
    return out;
}

}  // namespace ordsens::ordering
