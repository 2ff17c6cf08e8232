#include "ordsens/quasiprob.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace ordsens::quasiprob {

namespace {

constexpr double kPi = std::numbers::pi;

/// Evaluates Tr[rho D(beta) Pi^parity] for Hermitian rho, pointwise exact up
/// to truncation. rho is packed by superdiagonal (diag[k][m] = rho(m, m+k))
/// and the three-term recurrence for the scaled Laguerre values
/// G_{m,k} = sqrt(m!/(m+k)!) |beta|^k e^{-x/2} L_m^{(k)}(x), x = |beta|^2,
/// uses coefficient tables built once per evaluation sweep; every iterate is
/// a matrix element of a unitary and stays bounded.
struct DisplacementEvaluator {
    Index dim = 0;
    bool parity = false;
    std::vector<std::vector<Complex>> diag;  // parity signs pre-folded
    std::vector<std::vector<double>> ca;     // (2m+k+1) / sqrt((m+1)(m+k+1))
    std::vector<std::vector<double>> cb;     // sqrt(m(m+k))  / sqrt((m+1)(m+k+1))
    std::vector<std::vector<double>> cc;     // 1 / sqrt((m+1)(m+k+1))
    std::vector<double> start_step;          // 1 / sqrt(k+1)

    DisplacementEvaluator(const Mat& rho, bool with_parity)
        : dim(rho.rows()), parity(with_parity), diag(dim), ca(dim), cb(dim), cc(dim),
          start_step(dim) {
        for (Index k = 0; k < dim; ++k) {
            const Index len = dim - k;
            diag[k].resize(len);
            ca[k].resize(len);
            cb[k].resize(len);
            cc[k].resize(len);
            for (Index m = 0; m < len; ++m) {
                diag[k][m] = (parity && (m & 1)) ? -rho(m, m + k) : rho(m, m + k);
                const double inv = 1.0 / std::sqrt(double(m + 1) * double(m + 1 + k));
                ca[k][m] = (2.0 * double(m) + double(k) + 1.0) * inv;
                cb[k][m] = std::sqrt(double(m) * double(m + k)) * inv;
                cc[k][m] = inv;
            }
            start_step[k] = 1.0 / std::sqrt(double(k + 1));
        }
    }

    Complex eval(Complex beta) const {
        const double x = std::norm(beta);
        if (x == 0.0) {  // D(0) = I
            Complex total = 0.0;
            for (Index m = 0; m < dim; ++m) total += diag[0][m];
            return total;
        }
        const double r = std::abs(beta);
        const Complex eiphi = beta / r;

        Complex total = 0.0;
        Complex phase = 1.0;                 // e^{i k phi}
        double start = std::exp(-0.5 * x);   // G_{0,k}, marched as r^k/sqrt(k!)
        for (Index k = 0; k < dim; ++k) {
            double gm1 = 0.0, g = start;
            Complex acc = 0.0;
            const Complex* d = diag[k].data();
            const double* a = ca[k].data();
            const double* b = cb[k].data();
            const double* cx = cc[k].data();
            const Index len = dim - k;
            for (Index m = 0; m < len; ++m) {
                acc += g * d[m];
                const double next = (a[m] - x * cx[m]) * g - b[m] * gm1;
                gm1 = g;
                g = next;
            }
            if (k == 0) {
                total += acc;
            } else {
                const Complex z = phase * acc;
                // n = m+k and n = m-k branches combine; with parity both fold
                // to 2 Re, without it the odd-k conjugate picks up (-1)^k.
                if (parity || (k & 1) == 0)
                    total += 2.0 * z.real();
                else
                    total += Complex(0.0, 2.0 * z.imag());
            }
            phase *= eiphi;
            start *= r * start_step[k];
        }
        return total;
    }
};

double state_support_radius(double nbar) { return 2.0 * std::sqrt(nbar + 1.0) + 4.0; }

struct XiGrid {
    PhaseGrid grid;
};

/// Radius per the decay-rate rule sqrt(2 ln(1/eps) / (|s| + 1/(2 nbar + 1))),
/// eps = 1e-12; step from the integrand's Fourier bandwidth (the transform of
/// |chi_0|^2 is the autocorrelation of W, supported within ~2 alpha_supp).
XiGrid xi_grid_for(const fock::DensityMatrix& rho, double min_rate_s) {
    const double nbar = rho.mean_photon_number();
    const double rate = std::abs(min_rate_s) + 1.0 / (2.0 * nbar + 1.0);
    const double radius = std::sqrt(2.0 * std::log(1e12) / rate);
    const double h_target = 2.0 * kPi / (2.0 * state_support_radius(nbar) + 10.0);
    Index n = Index(std::ceil(2.0 * radius / h_target));
    n += n & 1;
    n = std::max<Index>(n, 32);
    return XiGrid{PhaseGrid::make(radius, n)};
}

void require_s_domain(double s) {
    if (s > 0.0)
        throw DivergenceError("s-ordered integrals are restricted to s <= 0 (integrand decay is not "
                              "certified for s > 0); got s = " + std::to_string(s));
}

struct ChiMoments {
    double i0 = 0.0;  ///< Int e^{s|xi|^2} |chi_0|^2
    double i1 = 0.0;  ///< Int |xi|^2 e^{s|xi|^2} |chi_0|^2
};

/// One chi_0 sweep, reduced against every requested s weight. Rows are
/// evaluated in parallel; reductions are pairwise and sequential.
std::vector<ChiMoments> chi_moments(const fock::DensityMatrix& rho, const std::vector<double>& s_values) {
    double widest_s = s_values.front();
    for (double s : s_values) {
        require_s_domain(s);
        if (std::abs(s) < std::abs(widest_s)) widest_s = s;  // smallest |s|: widest grid
    }
    const XiGrid xi = xi_grid_for(rho, widest_s);
    const Index n = xi.grid.points;
    const double h2 = xi.grid.spacing() * xi.grid.spacing();
    const DisplacementEvaluator diags(rho.matrix, false);

    RealMat chi2(n, n);  // |chi_0|^2
    parallel_for(n, [&](Index row_begin, Index row_end) {
        for (Index i = row_begin; i < row_end; ++i) {
            const double x1 = xi.grid.coord(i);
            for (Index j = 0; j < n; ++j) {
                const Complex xi_pt(x1, xi.grid.coord(j));
                chi2(i, j) = std::norm(diags.eval(xi_pt));
            }
        }
    });

    std::vector<ChiMoments> out(s_values.size());
    std::vector<double> row0(n), row1(n), acc0(n), acc1(n);
    for (std::size_t si = 0; si < s_values.size(); ++si) {
        const double s = s_values[si];
        for (Index i = 0; i < n; ++i) {
            const double x1 = xi.grid.coord(i);
            for (Index j = 0; j < n; ++j) {
                const double r2 = x1 * x1 + xi.grid.coord(j) * xi.grid.coord(j);
                const double w = std::exp(s * r2) * chi2(i, j);
                row0[j] = w;
                row1[j] = r2 * w;
            }
            acc0[i] = pairwise_sum(row0);
            acc1[i] = pairwise_sum(row1);
        }
        out[si].i0 = pairwise_sum(acc0) * h2;
        out[si].i1 = pairwise_sum(acc1) * h2;
    }
    return out;
}

}  // namespace

PhaseGrid PhaseGrid::make(double half_extent, Index points) {
    if (half_extent <= 0.0) throw Error("phase grid half extent must be positive");
    if (points < 2 || points % 2 != 0) throw Error("phase grid needs an even point count >= 2");
    return PhaseGrid{half_extent, points};
}

double default_extent(const fock::DensityMatrix& rho) {
    return state_support_radius(rho.mean_photon_number());
}

PhaseGrid default_grid(const fock::DensityMatrix& rho, Index points) {
    return PhaseGrid::make(default_extent(rho), points);
}

Complex char_fn(const fock::DensityMatrix& rho, Complex xi) {
    return DisplacementEvaluator(rho.matrix, false).eval(xi);
}

CharGrid char_grid(const fock::DensityMatrix& rho, double s, const PhaseGrid& grid) {
    require_s_domain(s);
    const Index n = grid.points;
    const DisplacementEvaluator diags(rho.matrix, false);
    CharGrid out{s, grid, Mat(n, n)};
    parallel_for(n, [&](Index row_begin, Index row_end) {
        for (Index i = row_begin; i < row_end; ++i) {
            const double x1 = grid.coord(i);
            for (Index j = 0; j < n; ++j) {
                const Complex xi_pt(x1, grid.coord(j));
                out.values(i, j) = std::exp(0.5 * s * std::norm(xi_pt)) * diags.eval(xi_pt);
            }
        }
    });
    return out;
}

double wigner_at(const fock::DensityMatrix& rho, Complex alpha) {
    return (2.0 / kPi) * DisplacementEvaluator(rho.matrix, true).eval(2.0 * alpha).real();
}

double ws_at(const fock::DensityMatrix& rho, double s, Complex alpha) {
    if (s > 0.0)
        throw UnsupportedOrderingError("W_s is computed for s <= 0 only; antidiffusion (s > 0) is ill-posed");
    const Index dim = rho.dim;
    const Mat d = fock::displacement_matrix(alpha, dim);
    const Mat m = d.adjoint() * rho.matrix * d;
    const double ratio = (s + 1.0) / (s - 1.0);
    double acc = 0.0, t = 2.0 / (1.0 - s);
    for (Index n = 0; n < dim; ++n) {
        acc += t * m(n, n).real();
        t *= ratio;
    }
    return acc / kPi;
}

namespace {

QuasiProbGrid finish_grid(double s, const PhaseGrid& grid, RealMat values,
                          const fock::DensityMatrix& rho) {
    const Index n = grid.points;
    std::vector<double> row(n), rows(n);
    for (Index i = 0; i < n; ++i) {
        for (Index j = 0; j < n; ++j) row[j] = values(i, j);
        rows[i] = pairwise_sum(row);
    }
    const double mass = pairwise_sum(rows) * grid.spacing() * grid.spacing();
    if (mass < 0.999)
        throw MassDeficitError("grid captures only " + std::to_string(mass) +
                               " of the state's mass; enlarge the extent");

    Index n_eff = 0;
    for (Index k = 0; k < rho.dim; ++k)
        if (rho.matrix(k, k).real() > 1e-8) n_eff = k;
    const double freq_max = 2.0 * std::sqrt(2.0 * double(n_eff) + 1.0);
    const bool under_resolved = grid.spacing() > kPi / (4.0 * freq_max);
    return QuasiProbGrid{s, grid, std::move(values), mass, under_resolved};
}

RealMat wigner_values(const fock::DensityMatrix& rho, const PhaseGrid& grid) {
    const Index n = grid.points;
    const DisplacementEvaluator diags(rho.matrix, true);
    RealMat values(n, n);
    parallel_for(n, [&](Index row_begin, Index row_end) {
        for (Index i = row_begin; i < row_end; ++i) {
            const double a1 = grid.coord(i);
            for (Index j = 0; j < n; ++j) {
                const Complex beta(2.0 * a1, 2.0 * grid.coord(j));
                values(i, j) = (2.0 / kPi) * diags.eval(beta).real();
            }
        }
    });
    return values;
}

}  // namespace

QuasiProbGrid wigner_grid(const fock::DensityMatrix& rho, const PhaseGrid& grid) {
    return finish_grid(0.0, grid, wigner_values(rho, grid), rho);
}

std::vector<QuasiProbGrid> ws_grid_batch(const fock::DensityMatrix& rho,
                                         const std::vector<double>& s_values,
                                         const PhaseGrid& grid) {
    for (double s : s_values)
        if (s > 0.0)
            throw UnsupportedOrderingError(
                "W_s is computed for s <= 0 only; antidiffusion (s > 0) is ill-posed");
    if (s_values.empty()) return {};

    const double h = grid.spacing();
    const Index n = grid.points;
    auto sigma_of = [](double s) { return 0.5 * std::sqrt(-s); };
    auto reach_of = [&](double s) { return Index(std::ceil(8.0 * sigma_of(s) / h)) + 1; };
    Index reach_max = 0;
    for (double s : s_values) reach_max = std::max(reach_max, s < 0.0 ? reach_of(s) : 0);

    // One W_0 evaluation on a grid padded for the widest kernel; every crop
    // and convolution below reads from it.
    const Index np = n + 2 * reach_max;
    const PhaseGrid padded{grid.half_extent + double(reach_max) * h, np};
    const RealMat w0 = reach_max > 0 ? wigner_values(rho, padded) : wigner_values(rho, grid);

    std::vector<QuasiProbGrid> out;
    out.reserve(s_values.size());
    for (double s : s_values) {
        if (s == 0.0) {
            out.push_back(finish_grid(0.0, grid, w0.block(reach_max, reach_max, n, n), rho));
            continue;
        }
        const double sigma = sigma_of(s);
        const Index reach = reach_of(s);
        const Index off = reach_max - reach;

        // Point-sampled kernel (midpoint rule): spectrally accurate once
        // sigma covers a few cells. Below that, fall back to cell-integrated
        // masses, which stay a partition of unity however thin the kernel.
        std::vector<double> kernel(2 * reach + 1);
        if (sigma >= 3.0 * h) {
            double total = 0.0;
            for (Index j = -reach; j <= reach; ++j) {
                const double y = double(j) * h / sigma;
                kernel[j + reach] = std::exp(-0.5 * y * y);
                total += kernel[j + reach];
            }
            for (double& k : kernel) k /= total;
        } else {
            const double inv = 1.0 / (sigma * std::numbers::sqrt2);
            for (Index j = -reach; j <= reach; ++j)
                kernel[j + reach] = 0.5 * (std::erf((double(j) + 0.5) * h * inv) -
                                           std::erf((double(j) - 0.5) * h * inv));
        }

        RealMat tmp = RealMat::Zero(n + 2 * reach, n);
        parallel_for(n + 2 * reach, [&](Index row_begin, Index row_end) {
            for (Index i = row_begin; i < row_end; ++i)
                for (Index j = 0; j < n; ++j) {
                    double acc = 0.0;
                    for (Index k = -reach; k <= reach; ++k)
                        acc += kernel[k + reach] * w0(off + i, off + j + reach + k);
                    tmp(i, j) = acc;
                }
        });
        RealMat values = RealMat::Zero(n, n);
        parallel_for(n, [&](Index col_begin, Index col_end) {
            for (Index j = col_begin; j < col_end; ++j)
                for (Index i = 0; i < n; ++i) {
                    double acc = 0.0;
                    for (Index k = -reach; k <= reach; ++k)
                        acc += kernel[k + reach] * tmp(i + reach + k, j);
                    values(i, j) = acc;
                }
        });
        out.push_back(finish_grid(s, grid, std::move(values), rho));
    }
    return out;
}

QuasiProbGrid ws_grid(const fock::DensityMatrix& rho, double s, const PhaseGrid& grid) {
    if (s == 0.0) return wigner_grid(rho, grid);
    return std::move(ws_grid_batch(rho, {s}, grid).front());
}

double entropy(const fock::DensityMatrix& rho, double s) {
    const auto m = chi_moments(rho, {s});
    return -std::log(m[0].i0 / kPi);
}

double entropy_derivative(const fock::DensityMatrix& rho, double s) {
    const auto m = chi_moments(rho, {s});
    return -m[0].i1 / m[0].i0;
}

std::vector<EntropyPoint> entropy_curve(const fock::DensityMatrix& rho,
                                        const std::vector<double>& s_values) {
    if (s_values.empty()) return {};
    const auto ms = chi_moments(rho, s_values);
    std::vector<EntropyPoint> out(s_values.size());
    for (std::size_t i = 0; i < s_values.size(); ++i) {
        const double s = s_values[i];
        const double hprime = -ms[i].i1 / ms[i].i0;
        out[i] = EntropyPoint{s, -std::log(ms[i].i0 / kPi), hprime, -(1.0 - s) * hprime};
    }
    return out;
}

GradRatioResult grad_ratio(const QuasiProbGrid& w) {
    if (w.s != 0.0) throw Error("grad_ratio expects an s = 0 grid");
    const Index n = w.grid.points;
    const RealMat& v = w.values;
    const double h = w.grid.spacing();

    // 4th-order central in the interior, 2nd-order central one row in,
    // one-sided at the edge.
    auto deriv = [&](auto&& at, Index idx) -> double {
        if (idx >= 2 && idx + 2 < n)
            return (8.0 * (at(idx + 1) - at(idx - 1)) - (at(idx + 2) - at(idx - 2))) / (12.0 * h);
        if (idx >= 1 && idx + 1 < n) return (at(idx + 1) - at(idx - 1)) / (2.0 * h);
        if (idx == 0) return (-3.0 * at(0) + 4.0 * at(1) - at(2)) / (2.0 * h);
        return (3.0 * at(n - 1) - 4.0 * at(n - 2) + at(n - 3)) / (2.0 * h);
    };

    std::vector<double> grad_rows(n), norm_rows(n), grad_row(n), norm_row(n);
    for (Index i = 0; i < n; ++i) {
        for (Index j = 0; j < n; ++j) {
            const bool boundary = (i == 0 || j == 0 || i == n - 1 || j == n - 1);
            if (boundary && std::abs(v(i, j)) < 1e-12) {
                grad_row[j] = 0.0;
                norm_row[j] = 0.0;
                continue;
            }
            const double gx = deriv([&](Index k) { return v(k, j); }, i);
            const double gy = deriv([&](Index k) { return v(i, k); }, j);
            grad_row[j] = gx * gx + gy * gy;
            norm_row[j] = v(i, j) * v(i, j);
        }
        grad_rows[i] = pairwise_sum(grad_row);
        norm_rows[i] = pairwise_sum(norm_row);
    }
    const double grad2 = pairwise_sum(grad_rows);
    const double norm2 = pairwise_sum(norm_rows);
    return GradRatioResult{0.25 * grad2 / norm2, w.under_resolved};
}

}  // namespace ordsens::quasiprob
