#include "ordsens/witnesses.hpp"

#include <cmath>
#include <numbers>

namespace ordsens::witnesses {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kPairFloor = 1e-12;
constexpr double kSignNoise = 1e-10;

double real_trace(const Mat& m) { return m.trace().real(); }

/// Determinant by partial-pivot elimination in long double; the Hankel
/// determinants cancel several orders of magnitude at large |alpha_0|.
double det_long(std::vector<std::vector<long double>> h) {
    const std::size_t n = h.size();
    long double det = 1.0L;
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t pivot = c;
        for (std::size_t r = c + 1; r < n; ++r)
            if (std::abs(h[r][c]) > std::abs(h[pivot][c])) pivot = r;
        if (pivot != c) {
            std::swap(h[pivot], h[c]);
            det = -det;
        }
        if (h[c][c] == 0.0L) return 0.0;
        det *= h[c][c];
        for (std::size_t r = c + 1; r < n; ++r) {
            const long double f = h[r][c] / h[c][c];
            for (std::size_t cc = c; cc < n; ++cc) h[r][cc] -= f * h[c][cc];
        }
    }
    return double(det);
}

/// Weighted transition sums shared by qfi and m_qfi.
struct QfiWeights {
    RealMat w;  ///< (p_i - p_j)^2 / (p_i + p_j), 0 below the pair floor

    explicit QfiWeights(const RealVec& p) : w(p.size(), p.size()) {
        for (Index i = 0; i < p.size(); ++i)
            for (Index j = 0; j < p.size(); ++j) {
                const double sum = p(i) + p(j);
                const double diff = p(i) - p(j);
                w(i, j) = sum > kPairFloor ? diff * diff / sum : 0.0;
            }
    }
};

}  // namespace

MomentVector moments(const fock::DensityMatrix& rho, const fock::OperatorSet& ops, Index l_max) {
    if (l_max < 0) throw Error("l_max must be nonnegative");
    if (l_max > rho.dim / 4)
        throw Error("l_max = " + std::to_string(l_max) + " exceeds dim/4 = " +
                    std::to_string(rho.dim / 4) + "; enlarge the cutoff");
    MomentVector mv{RealVec(l_max + 1)};
    Mat m = rho.matrix;  // a^l rho a^dag^l by iteration; trace is m_l
    mv.values(0) = real_trace(m);
    for (Index l = 1; l <= l_max; ++l) {
        m = ops.a * m * ops.a_dag;
        mv.values(l) = real_trace(m);
    }
    return mv;
}

std::vector<double> moment_determinants(const MomentVector& mv, Index n_max) {
    if (n_max < 1) throw Error("n_max must be at least 1");
    if (mv.values.size() < 2 * n_max - 1)
        throw Error("need moments up to m_" + std::to_string(2 * n_max - 2) + " for D_" +
                    std::to_string(n_max));
    std::vector<double> out;
    out.reserve(n_max);
    out.push_back(mv.values(0));  // D_1 = m_0 = 1
    for (Index n = 2; n <= n_max; ++n) {
        std::vector<std::vector<long double>> h(n, std::vector<long double>(n));
        for (Index i = 0; i < n; ++i)
            for (Index j = 0; j < n; ++j) h[i][j] = mv.values(i + j);
        if (n >= 4) {
            // Row/column equilibration keeps the elimination well-scaled when
            // moments span many orders of magnitude.
            std::vector<long double> scale(n);
            long double unscale = 1.0L;
            for (Index i = 0; i < n; ++i) {
                scale[i] = 1.0L / std::sqrt(std::max<long double>(h[i][i], 1e-300L));
                unscale *= scale[i] * scale[i];
            }
            for (Index i = 0; i < n; ++i)
                for (Index j = 0; j < n; ++j) h[i][j] *= scale[i] * scale[j];
            out.push_back(double(det_long(std::move(h)) / unscale));
        } else {
            out.push_back(det_long(std::move(h)));
        }
    }
    return out;
}

double cat_dn_closed(double alpha0_abs, Index n_components, Index q, Index n) {
    if (n < 1) throw Error("determinant order must be >= 1");
    const double gq = fock::cat_gtilde(alpha0_abs, n_components, q);
    if (gq <= 1e-14) throw DegenerateCatError("g~(q) vanishes at this alpha_0");
    std::vector<std::vector<long double>> gt(n, std::vector<long double>(n));
    for (Index i = 0; i < n; ++i)
        for (Index j = 0; j < n; ++j)
            gt[i][j] = fock::cat_gtilde(alpha0_abs, n_components, q - i - j);
    const double det = det_long(std::move(gt));
    return std::pow(alpha0_abs, 2.0 * double(n) * double(n - 1)) / std::pow(gq, double(n)) * det;
}

double cat_dn_bound(double alpha0_abs, Index n_components, Index q, Index n) {
    const double big_n = double(n_components);
    const double gq = fock::cat_gtilde(alpha0_abs, n_components, q);
    const double x = alpha0_abs * alpha0_abs;
    const double u = 2.0 * kPi / big_n;
    const double eta = 1.0 - u * u / 12.0;
    const double rbar = (big_n - 1.0) / big_n * std::exp(-0.5 * x * eta * u * u);
    return std::pow(alpha0_abs, 2.0 * double(n) * double(n - 1)) / std::pow(gq, double(n)) *
           std::tgamma(double(n) + 1.0) * std::pow(rbar, double(n - 1)) * (rbar + double(n) / big_n);
}

MandelResult mandel(const fock::DensityMatrix& rho, const fock::OperatorSet& ops) {
    const MomentVector mv = moments(rho, ops, 2);
    MandelResult r;
    r.d2 = mv.values(2) - mv.values(1) * mv.values(1);
    if (mv.values(1) > 1e-14) r.q_normalized = r.d2 / mv.values(1);
    return r;
}

double squeezing_degree(const fock::DensityMatrix& rho, const fock::OperatorSet& ops, double phi) {
    const Complex mean_a = (ops.a * rho.matrix).trace();
    const Complex mean_a2 = (ops.a * ops.a * rho.matrix).trace();
    const double mean_n = (ops.a_dag * ops.a * rho.matrix).trace().real();
    const Complex e1 = std::polar(1.0, phi);
    const double mean_quad = 2.0 * (e1 * mean_a).real();
    return 2.0 * (e1 * e1 * mean_a2).real() + 2.0 * mean_n - mean_quad * mean_quad;
}

SqueezingScan squeezing_min(const fock::DensityMatrix& rho, const fock::OperatorSet& ops,
                            Index scan_points) {
    if (scan_points < 2) throw Error("squeezing scan needs at least 2 points");
    SqueezingScan best{squeezing_degree(rho, ops, 0.0), 0.0};
    for (Index k = 1; k < scan_points; ++k) {
        const double phi = kPi * double(k) / double(scan_points);  // S has period pi
        const double s = squeezing_degree(rho, ops, phi);
        if (s < best.min_value) best = SqueezingScan{s, phi};
    }
    return best;
}

double qfi(const fock::SpectralDecomposition& decomp, const Mat& a_observable) {
    if (a_observable.rows() != decomp.vectors.rows() || a_observable.rows() != a_observable.cols())
        throw DimensionMismatchError("observable and decomposition dims differ");
    if ((a_observable - a_observable.adjoint()).cwiseAbs().maxCoeff() > 1e-10)
        throw ValidationError("qfi needs a Hermitian observable");
    const QfiWeights weights(decomp.probs);
    const Mat m = decomp.vectors.adjoint() * a_observable * decomp.vectors;
    double f = 0.0;
    for (Index i = 0; i < m.rows(); ++i)
        for (Index j = 0; j < m.cols(); ++j) f += weights.w(i, j) * std::norm(m(i, j));
    return 2.0 * f;
}

double QfiResult::f_at(double theta) const {
    const double c = std::cos(theta), s = std::sin(theta);
    return f_qq * c * c + f_pp * s * s + 2.0 * f_qp * c * s;
}

QfiResult m_qfi(const fock::SpectralDecomposition& decomp, const fock::OperatorSet& ops) {
    const QfiWeights weights(decomp.probs);
    const Mat mq = decomp.vectors.adjoint() * ops.q * decomp.vectors;
    const Mat mp = decomp.vectors.adjoint() * ops.p * decomp.vectors;
    double f_qq = 0.0, f_pp = 0.0, f_qp = 0.0;
    for (Index i = 0; i < mq.rows(); ++i)
        for (Index j = 0; j < mq.cols(); ++j) {
            const double w = weights.w(i, j);
            f_qq += w * std::norm(mq(i, j));
            f_pp += w * std::norm(mp(i, j));
            f_qp += w * (mq(i, j) * std::conj(mp(i, j))).real();
        }
    QfiResult r;
    r.f_qq = 2.0 * f_qq;
    r.f_pp = 2.0 * f_pp;
    r.f_qp = 2.0 * f_qp;
    const double mean = 0.5 * (r.f_qq + r.f_pp);
    const double half_diff = 0.5 * (r.f_qq - r.f_pp);
    const double lambda_max = mean + std::hypot(half_diff, r.f_qp);
    r.m_qfi = 0.25 * lambda_max;
    double theta = 0.5 * std::atan2(2.0 * r.f_qp, r.f_qq - r.f_pp);
    if (theta < 0.0) theta += kPi;
    if (theta >= kPi) theta -= kPi;
    r.theta_star = theta;
    return r;
}

WitnessReport build_report(const fock::DensityMatrix& rho, const fock::OperatorSet& ops,
                           const WitnessConfig& config) {
    WitnessReport rep;
    const fock::SpectralDecomposition decomp = fock::spectral(rho);

    const auto so_c = ordering::so_commutator(rho, ops);
    const auto so_k = ordering::so_kmatrix(decomp, ops);
    const auto so_x = ordering::so_charfn(rho);
    rep.so = so_c.so;
    rep.so_kmatrix = so_k.so;
    rep.so_charfn = so_x.so;
    rep.so_route_agreement = std::max({std::abs(so_c.so - so_k.so), std::abs(so_c.so - so_x.so),
                                       std::abs(so_k.so - so_x.so)});
    rep.bounds = ordering::nonclassicality_bounds(so_c);

    rep.l_max_used = std::min(config.l_max, rho.dim / 4);
    rep.n_max_used = std::min(config.n_max, (rep.l_max_used + 2) / 2);
    const MomentVector mv = moments(rho, ops, rep.l_max_used);
    rep.d_n = moment_determinants(mv, rep.n_max_used);

    const MandelResult mr = mandel(rho, ops);
    rep.mandel_d2 = mr.d2;
    rep.mandel_q = mr.q_normalized;

    const SqueezingScan sq = squeezing_min(rho, ops, config.squeeze_scan);
    rep.squeezing_min = sq.min_value;
    rep.squeezing_phi = sq.phi_at_min;

    const QfiResult qr = m_qfi(decomp, ops);
    rep.m_qfi = qr.m_qfi;
    rep.theta_star = qr.theta_star;

    rep.purity = fock::purity(rho);

    rep.flags.so = so_c.witness_flag;
    rep.flags.mandel = rep.mandel_d2 < -kSignNoise;
    for (double dn : rep.d_n) rep.flags.d_n = rep.flags.d_n || dn < -kSignNoise;
    rep.flags.squeezing = rep.squeezing_min < -kSignNoise;
    rep.flags.m_qfi = rep.m_qfi > 0.5;
    return rep;
}

}  // namespace ordsens::witnesses
