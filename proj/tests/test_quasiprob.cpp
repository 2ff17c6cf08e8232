#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "helpers.hpp"
#include "ordsens/quasiprob.hpp"

#include <cmath>
#include <numbers>

using namespace ordsens;
using namespace ordsens::fock;
using namespace ordsens::quasiprob;

namespace {

constexpr double kPi = std::numbers::pi;

double grid_norm2(const QuasiProbGrid& w) {
    const double h2 = w.grid.spacing() * w.grid.spacing();
    return w.values.squaredNorm() * h2;
}

}  // namespace

TEST_CASE("characteristic function closed forms") {
    const auto vac = fock_state(0, 12).projector();
    CHECK(std::abs(char_fn(vac, 0.0) - Complex(1.0)) < 1e-14);
    CHECK(std::abs(char_fn(vac, 1.0) - Complex(std::exp(-0.5))) < 1e-12);

    const auto th = thermal_state(1.0, 80);
    CHECK(std::abs(char_fn(th, 0.0) - Complex(1.0)) < 1e-12);
    CHECK(std::abs(char_fn(th, 1.0) - Complex(std::exp(-1.5))) < 1e-10);
}

TEST_CASE("characteristic function matches the displacement-matrix trace") {
    std::mt19937_64 rng(11);
    const Index dim = 24;
    const auto rho = testing::random_density(dim, rng, 0.1);
    for (Complex xi : {Complex(0.4, 0.0), Complex(-0.8, 1.3), Complex(0.0, 2.2), Complex(1.7, -2.5)}) {
        const Mat d = displacement_matrix(xi, dim);
        const Complex expected = (rho.matrix * d).trace();
        CHECK(std::abs(char_fn(rho, xi) - expected) < 1e-11);
    }
}

TEST_CASE("wigner pointwise values") {
    const auto vac = fock_state(0, 12).projector();
    CHECK(wigner_at(vac, 0.0) == doctest::Approx(2.0 / kPi).epsilon(1e-12));

    const auto one = fock_state(1, 12).projector();
    CHECK(wigner_at(one, 0.0) == doctest::Approx(-2.0 / kPi).epsilon(1e-12));

    // displaced-parity oracle via the explicit displacement matrix
    std::mt19937_64 rng(5);
    const Index dim = 20;
    const auto rho = testing::random_density(dim, rng, 0.15);
    Mat parity = Mat::Zero(dim, dim);
    for (Index n = 0; n < dim; ++n) parity(n, n) = (n % 2 == 0) ? 1.0 : -1.0;
    for (Complex alpha : {Complex(0.3, -0.2), Complex(-1.1, 0.8), Complex(0.0, 1.9)}) {
        const Mat d2a = displacement_matrix(2.0 * alpha, dim);
        const double expected = (2.0 / kPi) * (rho.matrix * d2a * parity).trace().real();
        CHECK(wigner_at(rho, alpha) == doctest::Approx(expected).epsilon(1e-10));
    }
}

TEST_CASE("wigner grid mass and Plancherel purity") {
    const auto vac = fock_state(0, 12).projector();
    const auto w = wigner_grid(vac, PhaseGrid::make(6.0, 256));
    CHECK(std::abs(w.mass - 1.0) < 1e-6);
    CHECK(kPi * grid_norm2(w) == doctest::Approx(1.0).epsilon(1e-6));

    std::mt19937_64 rng(23);
    std::vector<DensityMatrix> states;
    states.push_back(thermal_state(1.0, 64));
    states.push_back(cat_state(1.5, 2, 0, 32).projector());
    states.push_back(testing::random_density(16, rng, 0.2));
    for (const auto& rho : states) {
        const auto grid = default_grid(rho, 384);
        const auto wg = wigner_grid(rho, grid);
        CHECK(std::abs(wg.mass - 1.0) < 1e-4);
        CHECK(kPi * grid_norm2(wg) == doctest::Approx(purity(rho)).epsilon(1e-4));
    }

    CHECK_THROWS_AS(wigner_grid(thermal_state(3.0, 128), PhaseGrid::make(2.0, 64)), MassDeficitError);
}

TEST_CASE("ws grids: Husimi limits and convolution-kernel oracle") {
    const auto vac = fock_state(0, 12).projector();
    CHECK(ws_at(vac, -1.0, 0.0) == doctest::Approx(1.0 / kPi).epsilon(1e-10));
    CHECK(ws_at(vac, 0.0, Complex(0.4, 0.1)) ==
          doctest::Approx(wigner_at(vac, Complex(0.4, 0.1))).epsilon(1e-12));

    const auto th = thermal_state(1.0, 64);
    CHECK(ws_at(th, -1.0, 0.0) == doctest::Approx(1.0 / (kPi * 2.0)).epsilon(1e-8));

    // Husimi is <alpha|rho|alpha>/pi for any state
    const auto cat = cat_state(1.5, 2, 0, 32).projector();
    const Complex alpha(0.9, -0.4);
    const auto coh = coherent_state(alpha, 32);
    const double husimi = (coh.amplitudes.adjoint() * cat.matrix * coh.amplitudes)(0).real() / kPi;
    CHECK(ws_at(cat, -1.0, alpha) == doctest::Approx(husimi).epsilon(1e-9));

    // grid route vs pointwise kernel route
    const auto grid = PhaseGrid::make(6.0, 256);
    for (double s : {-0.4, -1.0}) {
        const auto wg = ws_grid(cat, s, grid);
        CHECK(std::abs(wg.mass - 1.0) < 1e-4);
        for (Index i : {64, 128, 190})
            for (Index j : {80, 127}) {
                const Complex a(grid.coord(i), grid.coord(j));
                CHECK(wg.values(i, j) == doctest::Approx(ws_at(cat, s, a)).epsilon(5e-5));
            }
    }

    const auto w0 = ws_grid(cat, 0.0, grid);
    const auto wref = wigner_grid(cat, grid);
    CHECK((w0.values - wref.values).cwiseAbs().maxCoeff() == 0.0);

    CHECK_THROWS_AS(ws_grid(vac, 0.1, grid), UnsupportedOrderingError);
}

TEST_CASE("backward diffusion residual") {
    // (W_{s+d} - W_{s-d})/(2d) + (1/8) Laplacian W_s = 0
    const auto grid = PhaseGrid::make(6.0, 512);
    const double h = grid.spacing();
    const double delta = 1e-3;
    const auto vac = fock_state(0, 12).projector();
    for (double s : {-0.5, -1.0}) {
        const auto wm = ws_grid(vac, s - delta, grid);
        const auto wp = ws_grid(vac, s + delta, grid);
        const auto wc = ws_grid(vac, s, grid);
        double worst = 0.0;
        for (Index i = 2; i < grid.points - 2; ++i)
            for (Index j = 2; j < grid.points - 2; ++j) {
                const double ds = (wp.values(i, j) - wm.values(i, j)) / (2.0 * delta);
                const double lap = (wc.values(i + 1, j) + wc.values(i - 1, j) +
                                    wc.values(i, j + 1) + wc.values(i, j - 1) -
                                    4.0 * wc.values(i, j)) /
                                   (h * h);
                worst = std::max(worst, std::abs(ds + 0.125 * lap));
            }
        CHECK(worst < 1e-3);
    }
}

TEST_CASE("char grid symmetry") {
    const auto cat = cat_state(1.2, 2, 1, 24).projector();
    const auto grid = PhaseGrid::make(4.0, 64);
    const auto cg = char_grid(cat, -0.5, grid);
    // chi_s(-xi) = conj(chi_s(xi)); cell centers come in symmetric pairs
    const Index n = grid.points;
    double worst = 0.0;
    for (Index i = 0; i < n; ++i)
        for (Index j = 0; j < n; ++j)
            worst = std::max(worst,
                             std::abs(cg.values(i, j) - std::conj(cg.values(n - 1 - i, n - 1 - j))));
    CHECK(worst < 1e-9);
    CHECK(std::abs(char_fn(cat, 0.0) - Complex(1.0)) < 1e-12);
}

TEST_CASE("entropy closed forms") {
    const auto pure = cat_state(1.3, 2, 0, 28).projector();
    CHECK(entropy(pure, 0.0) == doctest::Approx(0.0).epsilon(1e-8));

    const auto th = thermal_state(1.0, 80);
    CHECK(entropy(th, 0.0) == doctest::Approx(std::log(3.0)).epsilon(1e-8));
    CHECK(entropy(th, -1.0) == doctest::Approx(std::log(4.0)).epsilon(1e-8));
    CHECK(entropy_derivative(th, -1.0) == doctest::Approx(-0.25).epsilon(1e-8));

    const auto coh = coherent_state(1.3, 32).projector();
    CHECK(entropy_derivative(coh, -0.5) == doctest::Approx(-2.0 / 3.0).epsilon(1e-6));

    const auto one = fock_state(1, 16).projector();
    CHECK(entropy_derivative(one, 0.0) == doctest::Approx(-3.0).epsilon(1e-8));

    CHECK_THROWS_AS(entropy(th, 0.25), DivergenceError);
}

TEST_CASE("entropy is decreasing and concave in s") {
    std::mt19937_64 rng(31);
    std::vector<DensityMatrix> states;
    states.push_back(thermal_state(0.8, 64));
    states.push_back(fock_state(2, 16).projector());
    states.push_back(cat_state(1.4, 3, 1, 32).projector());
    states.push_back(testing::random_density(14, rng, 0.2));
    std::vector<double> s_values;
    for (int k = 0; k <= 8; ++k) s_values.push_back(-2.0 + 0.25 * k);
    for (const auto& rho : states) {
        const auto curve = entropy_curve(rho, s_values);
        for (std::size_t i = 1; i < curve.size(); ++i) CHECK(curve[i].h < curve[i - 1].h);
        for (std::size_t i = 1; i + 1 < curve.size(); ++i) {
            const double second = curve[i + 1].h - 2.0 * curve[i].h + curve[i - 1].h;
            CHECK(second <= 1e-9);
        }
        // H' really is the s-derivative of H
        const auto fd = entropy_curve(rho, {-1.0 - 1e-4, -1.0 + 1e-4, -1.0});
        CHECK(fd[2].hprime == doctest::Approx((fd[1].h - fd[0].h) / 2e-4).epsilon(1e-5));
    }
}

TEST_CASE("grad ratio reproduces S_o on grids") {
    const auto vac = fock_state(0, 12).projector();
    const auto w_vac = wigner_grid(vac, PhaseGrid::make(6.0, 256));
    const auto g_vac = grad_ratio(w_vac);
    CHECK(g_vac.value == doctest::Approx(1.0).epsilon(1e-3));
    CHECK_FALSE(g_vac.under_resolved);

    const auto f3 = fock_state(3, 16).projector();
    const auto g3 = grad_ratio(wigner_grid(f3, PhaseGrid::make(8.0, 512)));
    CHECK(std::abs(g3.value - 7.0) < 1e-2);

    // rho_even,M with M = 10: equal weights on |2>, |4>, ..., |20>
    std::vector<StateVector> evens;
    for (Index n = 2; n <= 20; n += 2) evens.push_back(fock_state(n, 26));
    const auto rho_even = mix_pure(evens, std::vector<double>(10, 0.1));
    const auto ge = grad_ratio(wigner_grid(rho_even, PhaseGrid::make(12.0, 1024)));
    CHECK(std::abs(ge.value - 23.0) < 1e-1);

    // refinement: halving h cuts the error by at least 2x
    const auto coarse = grad_ratio(wigner_grid(f3, PhaseGrid::make(8.0, 128)));
    const auto fine = grad_ratio(wigner_grid(f3, PhaseGrid::make(8.0, 256)));
    CHECK(std::abs(fine.value - 7.0) * 2.0 <= std::abs(coarse.value - 7.0));

    // resolution warning on a coarse grid for a fast-oscillating state
    const auto f9 = fock_state(9, 24).projector();
    const auto gw = grad_ratio(wigner_grid(f9, PhaseGrid::make(8.0, 64)));
    CHECK(gw.under_resolved);
}
