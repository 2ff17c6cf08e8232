#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "helpers.hpp"
#include "ordsens/channels.hpp"
#include "ordsens/ordering.hpp"
#include "ordsens/quasiprob.hpp"

#include <cmath>

using namespace ordsens;
using namespace ordsens::fock;
using namespace ordsens::channels;

TEST_CASE("bath parameters") {
    const auto p = BathParams::make(0.5, 1.0);
    CHECK(p.sbar() == doctest::Approx(-3.0).epsilon(1e-14));
    CHECK(BathParams::make(1.0, 7.0).sbar() == doctest::Approx(0.0));
    CHECK(BathParams::make(0.25, 0.0).sbar() < 0.0);
    CHECK(p.default_anc_dim() == 16);

    CHECK_THROWS(BathParams::make(0.0, 1.0));
    CHECK_THROWS(BathParams::make(1.2, 1.0));
    CHECK_THROWS(BathParams::make(0.5, -0.1));
}

TEST_CASE("apply_bath limits") {
    const auto coh = coherent_state(1.2, 24).projector();

    // transparent splitter
    const auto same = apply_bath(coh, BathParams::make(1.0, 3.0));
    CHECK((same.matrix - coh.matrix).cwiseAbs().maxCoeff() < 1e-10);

    // pure loss sends |alpha> to |sqrt(lambda) alpha>
    const auto lossy = apply_bath(coh, BathParams::make(0.5, 0.0));
    const auto expected = coherent_state(std::sqrt(0.5) * 1.2, 24).projector();
    CHECK((lossy.matrix - expected.matrix).cwiseAbs().maxCoeff() < 1e-8);

    // vacuum picks up (1 - lambda) nbar thermal photons
    const auto vac = fock_state(0, 24).projector();
    const auto heated = apply_bath(vac, BathParams::make(0.5, 1.0));
    const auto th_half = thermal_state(0.5, 24);
    CHECK((heated.matrix - th_half.matrix).cwiseAbs().maxCoeff() < 1e-8);

    // outputs stay valid density matrices
    for (const auto& out : {lossy, heated}) {
        CHECK((out.matrix - out.matrix.adjoint()).cwiseAbs().maxCoeff() < 1e-9);
        CHECK(std::abs(out.matrix.trace().real() - 1.0) < 1e-9);
        Eigen::SelfAdjointEigenSolver<Mat> es(out.matrix, Eigen::EigenvaluesOnly);
        CHECK(es.eigenvalues().minCoeff() > -1e-9);
    }

    // ancilla truncation guard
    CHECK_THROWS_AS(apply_bath(coh, BathParams::make(0.5, 3.0), 8), TruncationError);
}

TEST_CASE("semigroup composition of pure losses") {
    const auto cat = cat_state(1.4, 2, 0, 28).projector();
    const auto once = apply_bath(apply_bath(cat, BathParams::make(0.8, 0.0)),
                                 BathParams::make(0.7, 0.0));
    const auto direct = apply_bath(cat, BathParams::make(0.8 * 0.7, 0.0));
    CHECK((once.matrix - direct.matrix).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("output characteristic function") {
    const auto coh = coherent_state(Complex(0.9, -0.3), 24).projector();
    CHECK(std::abs(char_out(coh, BathParams::make(0.6, 1.3), 0.0) - Complex(1.0)) < 1e-12);

    // pure loss: chi_0 of the output equals chi_0 of the attenuated state
    const auto p = BathParams::make(0.5, 0.0);
    const auto attenuated = coherent_state(std::sqrt(0.5) * Complex(0.9, -0.3), 24).projector();
    for (Complex xi : {Complex(0.5, 0.2), Complex(-1.1, 0.9)}) {
        const Complex chi0_out = char_out(coh, p, xi) * std::exp(-0.5 * std::norm(xi));
        CHECK(std::abs(chi0_out - quasiprob::char_fn(attenuated, xi)) < 1e-8);
    }

    // thermal nbar = 1 through (0.5, 1): output is thermal nbar = 1
    const auto th = thermal_state(1.0, 80);
    const auto pt = BathParams::make(0.5, 1.0);
    for (Complex xi : {Complex(0.7, 0.0), Complex(0.3, -0.6)}) {
        const Complex chi0_out = char_out(th, pt, xi) * std::exp(-0.5 * std::norm(xi));
        CHECK(std::abs(chi0_out - Complex(std::exp(-1.5 * std::norm(xi)))) < 1e-8);
    }
}

TEST_CASE("S_o transport identity") {
    const auto coh = coherent_state(1.1, 24).projector();
    const auto ops = build_ladder(24);

    // lambda = 1: sbar = 0, identity channel
    CHECK(so_out_identity(coh, BathParams::make(1.0, 2.0)) ==
          doctest::Approx(ordering::so_commutator(coh, ops).so).epsilon(1e-6));

    // coherent input, closed form -lambda^{-1} / (sbar - 1)
    CHECK(so_out_identity(coh, BathParams::make(0.5, 1.0)) == doctest::Approx(0.5).epsilon(1e-6));

    // two-route agreement on |1>
    const auto one = fock_state(1, 16).projector();
    const auto p = BathParams::make(0.9, 2.0);
    const auto via_bath = ordering::so_commutator(apply_bath(one, p), build_ladder(16)).so;
    CHECK(so_out_identity(one, p) == doctest::Approx(via_bath).epsilon(1e-5));
}

TEST_CASE("contraction inequality") {
    const Index dim = 40;
    const auto ops = build_ladder(dim);
    std::vector<DensityMatrix> states;
    states.push_back(coherent_state(1.2, dim).projector());
    states.push_back(fock_state(2, dim).projector());
    states.push_back(cat_state(1.3, 2, 0, dim).projector());
    for (const auto& rho : states) {
        const double so_in = ordering::so_commutator(rho, ops).so;
        for (double lambda : {0.4, 0.8}) {
            for (double nbar : {0.0, 0.5}) {
                const auto out = apply_bath(rho, BathParams::make(lambda, nbar));
                const double so_out = ordering::so_commutator(out, ops).so;
                CHECK(so_out <= so_in / lambda + 1e-6);
            }
        }
    }
}

TEST_CASE("weak coupling limit") {
    const auto coh = coherent_state(0.8, 24).projector();
    const auto ops = build_ladder(24);
    CHECK(weak_coupling_limit(coh, 0.0) ==
          doctest::Approx(ordering::so_commutator(coh, ops).so).epsilon(1e-6));
    CHECK(weak_coupling_limit(coh, 1.0) == doctest::Approx(1.0 / 3.0).epsilon(1e-6));

    const auto one = fock_state(1, 16).projector();
    const double damped = weak_coupling_limit(one, 0.5);
    CHECK(damped < 3.0);
    CHECK(damped > 0.0);

    // monotone non-increasing in ebar
    double prev = weak_coupling_limit(one, 0.0);
    for (double ebar : {0.2, 0.5, 1.0, 2.0}) {
        const double cur = weak_coupling_limit(one, ebar);
        CHECK(cur <= prev + 1e-9);
        prev = cur;
    }
}
