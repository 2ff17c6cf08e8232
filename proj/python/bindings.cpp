#include "ordsens/channels.hpp"
#include "ordsens/fock.hpp"
#include "ordsens/ordering.hpp"
#include "ordsens/quasiprob.hpp"
#include "ordsens/statespec.hpp"
#include "ordsens/witnesses.hpp"

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace pybind11::literals;
using namespace ordsens;

namespace {

const char* route_name(ordering::Route r) {
    switch (r) {
        case ordering::Route::commutator: return "commutator";
        case ordering::Route::kmatrix: return "kmatrix";
        case ordering::Route::charfn: return "charfn";
        case ordering::Route::grid: return "grid";
    }
    return "unknown";
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Truncated Fock-space nonclassicality analysis: ordering sensitivity, "
              "quasiprobability grids, witness suite, thermal-bath channel";

    py::register_exception<TruncationError>(m, "TruncationError");
    py::register_exception<ValidationError>(m, "ValidationError");
    py::register_exception<DivergenceError>(m, "DivergenceError");
    py::register_exception<ParseError>(m, "SpecParseError");

    // ---- fock ---------------------------------------------------------------
    py::class_<fock::OperatorSet>(m, "OperatorSet")
        .def_readonly("dim", &fock::OperatorSet::dim)
        .def_readonly("a", &fock::OperatorSet::a)
        .def_readonly("a_dag", &fock::OperatorSet::a_dag)
        .def_readonly("q", &fock::OperatorSet::q)
        .def_readonly("p", &fock::OperatorSet::p);

    py::class_<fock::StateVector>(m, "StateVector")
        .def_readonly("dim", &fock::StateVector::dim)
        .def_readonly("amplitudes", &fock::StateVector::amplitudes)
        .def("projector", &fock::StateVector::projector);

    py::class_<fock::DensityMatrix>(m, "DensityMatrix")
        .def_readonly("dim", &fock::DensityMatrix::dim)
        .def_readonly("matrix", &fock::DensityMatrix::matrix)
        .def("mean_photon_number", &fock::DensityMatrix::mean_photon_number)
        .def("edge_mass", &fock::DensityMatrix::edge_mass, "levels"_a = 3);

    py::class_<fock::SpectralDecomposition>(m, "SpectralDecomposition")
        .def_readonly("probs", &fock::SpectralDecomposition::probs)
        .def_readonly("vectors", &fock::SpectralDecomposition::vectors)
        .def("reconstruct", &fock::SpectralDecomposition::reconstruct);

    m.def("build_ladder", &fock::build_ladder, "dim"_a);
    m.def("coherent_state", &fock::coherent_state, "alpha"_a, "dim"_a);
    m.def("fock_state", &fock::fock_state, "n"_a, "dim"_a);
    m.def("squeezed_state", &fock::squeezed_state, "alpha"_a, "z"_a, "dim"_a);
    m.def("cat_state", &fock::cat_state, "alpha0"_a, "n_components"_a, "q"_a, "dim"_a);
    m.def("thermal_state", &fock::thermal_state, "nbar"_a, "dim"_a);
    m.def("squeezed_thermal", &fock::squeezed_thermal, "nbar"_a, "z"_a, "dim"_a);
    m.def("mix", &fock::mix, "states"_a, "weights"_a);
    m.def("mix_pure", &fock::mix_pure, "states"_a, "weights"_a);
    m.def("purity", &fock::purity, "rho"_a);
    m.def("spectral", &fock::spectral, "rho"_a);
    m.def("displacement_matrix", &fock::displacement_matrix, "beta"_a, "dim"_a);
    m.def("cat_gtilde", &fock::cat_gtilde, "alpha0_abs"_a, "n_components"_a, "q"_a);
    m.def(
        "density_matrix",
        [](Mat matrix) { return fock::DensityMatrix::validated(std::move(matrix)); }, "matrix"_a,
        "Validates a raw matrix (Hermitian, unit trace, PSD) into a DensityMatrix");

    // ---- quasiprob ----------------------------------------------------------
    py::class_<quasiprob::PhaseGrid>(m, "PhaseGrid")
        .def(py::init(&quasiprob::PhaseGrid::make), "half_extent"_a, "points"_a)
        .def_readonly("half_extent", &quasiprob::PhaseGrid::half_extent)
        .def_readonly("points", &quasiprob::PhaseGrid::points)
        .def("spacing", &quasiprob::PhaseGrid::spacing)
        .def("coord", &quasiprob::PhaseGrid::coord, "i"_a);

    py::class_<quasiprob::QuasiProbGrid>(m, "QuasiProbGrid")
        .def_readonly("s", &quasiprob::QuasiProbGrid::s)
        .def_readonly("grid", &quasiprob::QuasiProbGrid::grid)
        .def_readonly("values", &quasiprob::QuasiProbGrid::values)
        .def_readonly("mass", &quasiprob::QuasiProbGrid::mass)
        .def_readonly("under_resolved", &quasiprob::QuasiProbGrid::under_resolved);

    py::class_<quasiprob::EntropyPoint>(m, "EntropyPoint")
        .def_readonly("s", &quasiprob::EntropyPoint::s)
        .def_readonly("h", &quasiprob::EntropyPoint::h)
        .def_readonly("hprime", &quasiprob::EntropyPoint::hprime)
        .def_readonly("bound_value", &quasiprob::EntropyPoint::bound_value);

    py::class_<quasiprob::GradRatioResult>(m, "GradRatioResult")
        .def_readonly("value", &quasiprob::GradRatioResult::value)
        .def_readonly("under_resolved", &quasiprob::GradRatioResult::under_resolved);

    m.def("default_grid", &quasiprob::default_grid, "rho"_a, "points"_a = 256);
    m.def("char_fn", &quasiprob::char_fn, "rho"_a, "xi"_a);
    m.def("wigner_at", &quasiprob::wigner_at, "rho"_a, "alpha"_a);
    m.def("ws_at", &quasiprob::ws_at, "rho"_a, "s"_a, "alpha"_a);
    m.def("wigner_grid", &quasiprob::wigner_grid, "rho"_a, "grid"_a);
    m.def("ws_grid", &quasiprob::ws_grid, "rho"_a, "s"_a, "grid"_a);
    m.def("entropy", &quasiprob::entropy, "rho"_a, "s"_a);
    m.def("entropy_derivative", &quasiprob::entropy_derivative, "rho"_a, "s"_a);
    m.def("entropy_curve", &quasiprob::entropy_curve, "rho"_a, "s_values"_a);
    m.def("grad_ratio", &quasiprob::grad_ratio, "w"_a);

    // ---- ordering -----------------------------------------------------------
    py::class_<ordering::OrderingSensitivityResult>(m, "OrderingSensitivityResult")
        .def_readonly("so", &ordering::OrderingSensitivityResult::so)
        .def_readonly("norm", &ordering::OrderingSensitivityResult::norm)
        .def_readonly("witness_flag", &ordering::OrderingSensitivityResult::witness_flag)
        .def_property_readonly("route", [](const ordering::OrderingSensitivityResult& r) {
            return route_name(r.route);
        });

    py::class_<ordering::NonclassicalityBounds>(m, "NonclassicalityBounds")
        .def_readonly("lower", &ordering::NonclassicalityBounds::lower)
        .def_readonly("upper", &ordering::NonclassicalityBounds::upper);

    py::class_<ordering::KMatrix>(m, "KMatrix")
        .def_readonly("size", &ordering::KMatrix::size)
        .def_readonly("entries", &ordering::KMatrix::entries);

    m.def("hs_inner", &ordering::hs_inner, "a"_a, "b"_a, "ops"_a);
    m.def("so_commutator", &ordering::so_commutator, "rho"_a, "ops"_a);
    m.def("so_pure", &ordering::so_pure, "state"_a, "ops"_a);
    m.def("kmatrix", &ordering::kmatrix, "decomp"_a, "ops"_a);
    m.def("so_kmatrix", &ordering::so_kmatrix, "decomp"_a, "ops"_a);
    m.def("so_charfn", &ordering::so_charfn, "rho"_a);
    m.def("nonclassicality_bounds", &ordering::nonclassicality_bounds, "so_result"_a);
    m.def(
        "classical_bound_check",
        [](const fock::DensityMatrix& rho, const std::vector<double>& s_samples) {
            std::vector<std::pair<double, double>> out;
            for (const auto& b : ordering::classical_bound_check(rho, s_samples))
                out.emplace_back(b.s, b.value);
            return out;
        },
        "rho"_a, "s_samples"_a,
        "Returns (s, -(1-s) H'(s)) pairs; values above 1 certify nonclassicality");

    // ---- witnesses ----------------------------------------------------------
    py::class_<witnesses::WitnessConfig>(m, "WitnessConfig")
        .def(py::init<>())
        .def_readwrite("l_max", &witnesses::WitnessConfig::l_max)
        .def_readwrite("n_max", &witnesses::WitnessConfig::n_max)
        .def_readwrite("theta_scan", &witnesses::WitnessConfig::theta_scan)
        .def_readwrite("squeeze_scan", &witnesses::WitnessConfig::squeeze_scan);

    py::class_<witnesses::QfiResult>(m, "QfiResult")
        .def_readonly("f_qq", &witnesses::QfiResult::f_qq)
        .def_readonly("f_pp", &witnesses::QfiResult::f_pp)
        .def_readonly("f_qp", &witnesses::QfiResult::f_qp)
        .def_readonly("m_qfi", &witnesses::QfiResult::m_qfi)
        .def_readonly("theta_star", &witnesses::QfiResult::theta_star)
        .def("f_at", &witnesses::QfiResult::f_at, "theta"_a);

    py::class_<witnesses::WitnessFlags>(m, "WitnessFlags")
        .def_readonly("so", &witnesses::WitnessFlags::so)
        .def_readonly("mandel", &witnesses::WitnessFlags::mandel)
        .def_readonly("d_n", &witnesses::WitnessFlags::d_n)
        .def_readonly("squeezing", &witnesses::WitnessFlags::squeezing)
        .def_readonly("m_qfi", &witnesses::WitnessFlags::m_qfi)
        .def("any", &witnesses::WitnessFlags::any);

    py::class_<witnesses::WitnessReport>(m, "WitnessReport")
        .def_readonly("so", &witnesses::WitnessReport::so)
        .def_readonly("so_kmatrix", &witnesses::WitnessReport::so_kmatrix)
        .def_readonly("so_charfn", &witnesses::WitnessReport::so_charfn)
        .def_readonly("so_route_agreement", &witnesses::WitnessReport::so_route_agreement)
        .def_readonly("bounds", &witnesses::WitnessReport::bounds)
        .def_readonly("d_n", &witnesses::WitnessReport::d_n)
        .def_readonly("mandel_d2", &witnesses::WitnessReport::mandel_d2)
        .def_readonly("mandel_q", &witnesses::WitnessReport::mandel_q)
        .def_readonly("squeezing_min", &witnesses::WitnessReport::squeezing_min)
        .def_readonly("squeezing_phi", &witnesses::WitnessReport::squeezing_phi)
        .def_readonly("m_qfi", &witnesses::WitnessReport::m_qfi)
        .def_readonly("theta_star", &witnesses::WitnessReport::theta_star)
        .def_readonly("purity", &witnesses::WitnessReport::purity)
        .def_readonly("flags", &witnesses::WitnessReport::flags);

    m.def(
        "moments",
        [](const fock::DensityMatrix& rho, const fock::OperatorSet& ops, Index l_max) {
            return witnesses::moments(rho, ops, l_max).values;
        },
        "rho"_a, "ops"_a, "l_max"_a);
    m.def(
        "moment_determinants",
        [](const RealVec& moments, Index n_max) {
            return witnesses::moment_determinants(witnesses::MomentVector{moments}, n_max);
        },
        "moments"_a, "n_max"_a);
    m.def("cat_dn_closed", &witnesses::cat_dn_closed, "alpha0_abs"_a, "n_components"_a, "q"_a,
          "n"_a);
    m.def("cat_dn_bound", &witnesses::cat_dn_bound, "alpha0_abs"_a, "n_components"_a, "q"_a, "n"_a);
    m.def(
        "mandel",
        [](const fock::DensityMatrix& rho, const fock::OperatorSet& ops) {
            const auto r = witnesses::mandel(rho, ops);
            return std::make_pair(r.d2, r.q_normalized);
        },
        "rho"_a, "ops"_a, "Returns (d2, q_normalized); q_normalized is None for vacuum");
    m.def("squeezing_degree", &witnesses::squeezing_degree, "rho"_a, "ops"_a, "phi"_a);
    m.def(
        "squeezing_min",
        [](const fock::DensityMatrix& rho, const fock::OperatorSet& ops, Index scan_points) {
            const auto r = witnesses::squeezing_min(rho, ops, scan_points);
            return std::make_pair(r.min_value, r.phi_at_min);
        },
        "rho"_a, "ops"_a, "scan_points"_a = 720);
    m.def("qfi", &witnesses::qfi, "decomp"_a, "observable"_a);
    m.def("m_qfi", &witnesses::m_qfi, "decomp"_a, "ops"_a);
    m.def("build_report", &witnesses::build_report, "rho"_a, "ops"_a,
          "config"_a = witnesses::WitnessConfig{});

    // ---- channels -----------------------------------------------------------
    py::class_<channels::BathParams>(m, "BathParams")
        .def(py::init(&channels::BathParams::make), "lambda_"_a, "nbar"_a)
        .def_readonly("lambda_", &channels::BathParams::lambda)
        .def_readonly("nbar", &channels::BathParams::nbar)
        .def("sbar", &channels::BathParams::sbar)
        .def("default_anc_dim", &channels::BathParams::default_anc_dim);

    m.def("apply_bath", &channels::apply_bath, "rho_in"_a, "params"_a, "anc_dim"_a = 0);
    m.def("char_out", &channels::char_out, "rho_in"_a, "params"_a, "xi"_a);
    m.def("so_out_identity", &channels::so_out_identity, "rho_in"_a, "params"_a);
    m.def("weak_coupling_limit", &channels::weak_coupling_limit, "rho_in"_a, "ebar"_a);

    // ---- spec ingestion -------------------------------------------------------
    m.def(
        "state_from_json",
        [](const std::string& text, Index dim) {
            nlohmann::json spec;
            try {
                spec = nlohmann::json::parse(text);
            } catch (const nlohmann::json::parse_error& e) {
                throw ParseError(e.what());
            }
            auto built = io::build_state(spec, dim);
            return std::make_pair(std::move(built.rho), built.dim);
        },
        "text"_a, "dim"_a = 0,
        "Builds a (DensityMatrix, dim) pair from a state-spec JSON document");
}
