#include "ordsens/channels.hpp"
#include "ordsens/fock.hpp"
#include "ordsens/ordering.hpp"
#include "ordsens/quasiprob.hpp"
#include "ordsens/statespec.hpp"
#include "ordsens/witnesses.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <iostream>
#include <sstream>

namespace {

using namespace ordsens;

struct CommonOpts {
    std::string spec_path;
    std::string out_path;
    Index dim = 0;
    double extent = 0.0;
    Index points = 256;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--spec", o.spec_path, "state spec JSON file")->required();
    cmd->add_option("--out", o.out_path, "output file")->required();
    cmd->add_option("--dim", o.dim, "Fock cutoff override (wins over auto-sizing)");
    cmd->add_option("--extent", o.extent, "phase-space half extent R (default: auto)");
    cmd->add_option("--points", o.points, "grid points per axis");
}

quasiprob::PhaseGrid grid_for(const fock::DensityMatrix& rho, const CommonOpts& o) {
    if (o.extent > 0.0) return quasiprob::PhaseGrid::make(o.extent, o.points);
    return quasiprob::default_grid(rho, o.points);
}

int cmd_analyze(const CommonOpts& o, const std::string& dump_path) {
    io::BuiltState state = io::load_state_file(o.spec_path, o.dim);
    const auto ops = fock::build_ladder(state.dim);

    io::AnalysisConfig cfg;
    cfg.grid_extent = o.extent;
    cfg.grid_points = o.points;
    const auto report = witnesses::build_report(state.rho, ops, cfg.witness);

    io::atomic_write(o.out_path, io::report_json(report, state, cfg).dump(2) + "\n");
    const std::string raw_path = dump_path.empty() ? o.out_path + ".rho.json" : dump_path;
    io::atomic_write(raw_path, io::raw_state_json(state.rho).dump() + "\n");
    return report.flags.any() ? 2 : 0;
}

int cmd_wigner(const CommonOpts& o, bool radial) {
    io::BuiltState state = io::load_state_file(o.spec_path, o.dim);
    std::ostringstream csv;
    if (radial) {
        const double r_max = o.extent > 0.0 ? o.extent : quasiprob::default_extent(state.rho);
        const Index n = std::max<Index>(o.points, 2);
        csv << "# s=0 R=" << io::format_g17(r_max) << " n=" << n << "\n";
        for (Index j = 0; j < n; ++j) {
            const double r = r_max * double(j) / double(n - 1);
            csv << io::format_g17(r) << "," << io::format_g17(quasiprob::wigner_at(state.rho, r))
                << "\n";
        }
    } else {
        const auto grid = grid_for(state.rho, o);
        const auto w = quasiprob::wigner_grid(state.rho, grid);
        csv << "# s=0 R=" << io::format_g17(grid.half_extent) << " n=" << grid.points << "\n";
        for (Index i = 0; i < grid.points; ++i)
            for (Index j = 0; j < grid.points; ++j)
                csv << io::format_g17(grid.coord(i)) << "," << io::format_g17(grid.coord(j)) << ","
                    << io::format_g17(w.values(i, j)) << "\n";
    }
    io::atomic_write(o.out_path, csv.str());
    return 0;
}

int cmd_entropy_curve(const CommonOpts& o, double s_min, double s_max, Index steps) {
    io::BuiltState state = io::load_state_file(o.spec_path, o.dim);
    if (steps < 1) throw Error("steps must be positive");
    std::vector<double> s_values;
    for (Index i = 0; i < steps; ++i)
        s_values.push_back(steps == 1 ? s_min
                                      : s_min + (s_max - s_min) * double(i) / double(steps - 1));

    // Rows outside the state's s-domain are emitted as nan and flagged in the
    // exit code; valid rows share one batched chi evaluation.
    std::vector<double> valid;
    for (double s : s_values)
        if (s <= 0.0) valid.push_back(s);
    const auto curve = quasiprob::entropy_curve(state.rho, valid);

    std::ostringstream csv;
    csv << "# s,H,Hprime,bound_value\n";
    std::size_t at = 0;
    bool any_nan = false;
    for (double s : s_values) {
        if (s <= 0.0) {
            const auto& pt = curve[at++];
            csv << io::format_g17(pt.s) << "," << io::format_g17(pt.h) << ","
                << io::format_g17(pt.hprime) << "," << io::format_g17(pt.bound_value) << "\n";
        } else {
            csv << io::format_g17(s) << ",nan,nan,nan\n";
            any_nan = true;
        }
    }
    io::atomic_write(o.out_path, csv.str());
    return any_nan ? 1 : 0;
}

int cmd_channel_sweep(const CommonOpts& o, const std::vector<double>& lambdas,
                      const std::vector<double>& nbars, Index anc_dim) {
    io::BuiltState state = io::load_state_file(o.spec_path, o.dim);

    // Heated outputs carry longer tails than the input; grow the cutoff so
    // the S_o truncation guard holds across the sweep (explicit --dim wins).
    if (o.dim <= 0 && state.spec.value("kind", "") != "raw") {
        const double n_in = state.rho.mean_photon_number();
        Index target = state.dim;
        for (double lambda : lambdas)
            for (double nbar : nbars) {
                const double n_out = lambda * n_in + (1.0 - lambda) * nbar;
                if (n_out < 1e-9) continue;
                const double x = n_out / (n_out + 1.0);
                target = std::max(target, Index(std::ceil(std::log(1e-9) / std::log(x))) + 8);
            }
        if (target > state.dim) state = io::build_state(state.spec, target);
    }
    const auto ops = fock::build_ladder(state.dim);
    const double so_in = ordering::so_commutator(state.rho, ops).so;

    std::ostringstream csv;
    csv << "# lambda,nbar,so_in,so_out,bound,so_out_bs\n";
    for (double lambda : lambdas)
        for (double nbar : nbars) {
            const auto p = channels::BathParams::make(lambda, nbar);
            const double so_out = channels::so_out_identity(state.rho, p);
            const auto rho_out = channels::apply_bath(state.rho, p, anc_dim);
            const double so_out_bs = ordering::so_commutator(rho_out, ops).so;
            csv << io::format_g17(lambda) << "," << io::format_g17(nbar) << ","
                << io::format_g17(so_in) << "," << io::format_g17(so_out) << ","
                << io::format_g17(so_in / lambda) << "," << io::format_g17(so_out_bs) << "\n";
        }
    io::atomic_write(o.out_path, csv.str());
    return 0;
}

int dispatch(int argc, char** argv) {
    CLI::App app{"Single-mode bosonic nonclassicality analysis"};
    app.require_subcommand(1);

    CommonOpts analyze_opts, wigner_opts, entropy_opts, sweep_opts;
    std::string dump_path;
    bool radial = false;
    double s_min = -1.0, s_max = 0.0;
    Index steps = 21;
    std::vector<double> lambdas, nbars;
    Index anc_dim = 0;

    auto* analyze = app.add_subcommand("analyze", "witness report (JSON)");
    add_common(analyze, analyze_opts);
    analyze->add_option("--dump-state", dump_path,
                        "path for the raw-matrix dump (default: <out>.rho.json)");

    auto* wigner = app.add_subcommand("wigner", "Wigner grid or radial profile (CSV)");
    add_common(wigner, wigner_opts);
    wigner->add_flag("--radial", radial, "emit |alpha|,value pairs along a radius");

    auto* entropy = app.add_subcommand("entropy-curve", "s-ordered entropy curve (CSV)");
    add_common(entropy, entropy_opts);
    entropy->add_option("--s-min", s_min, "lowest s (default -1)");
    entropy->add_option("--s-max", s_max, "highest s (default 0)");
    entropy->add_option("--steps", steps, "number of rows (default 21)");

    auto* sweep = app.add_subcommand("channel-sweep", "thermal-bath sweep (CSV)");
    add_common(sweep, sweep_opts);
    sweep->add_option("--lambda", lambdas, "efficiencies in (0, 1]")->required();
    sweep->add_option("--nbar", nbars, "bath mean photon numbers")->required();
    sweep->add_option("--anc-dim", anc_dim, "ancilla cutoff (default: 8 (nbar + 1))");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return e.get_exit_code() == 0 ? 0 : 64;
    }

    if (analyze->parsed()) return cmd_analyze(analyze_opts, dump_path);
    if (wigner->parsed()) return cmd_wigner(wigner_opts, radial);
    if (entropy->parsed()) return cmd_entropy_curve(entropy_opts, s_min, s_max, steps);
    return cmd_channel_sweep(sweep_opts, lambdas, nbars, anc_dim);
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return dispatch(argc, argv);
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return 64;
    } catch (const TruncationError& e) {
        std::cerr << "truncation error: " << e.what() << "\n";
        return 70;
    } catch (const ValidationError& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return 65;
    } catch (const InvalidDimensionError& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return 65;
    } catch (const DimensionMismatchError& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return 65;
    } catch (const DegenerateCatError& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return 65;
    } catch (const UnsupportedOrderingError& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return 65;
    } catch (const MassDeficitError& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return 65;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
