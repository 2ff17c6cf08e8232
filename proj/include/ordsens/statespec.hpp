#pragma once

#include "ordsens/common.hpp"
#include "ordsens/fock.hpp"
#include "ordsens/witnesses.hpp"

#include <json.hpp>

#include <string>

namespace ordsens::io {

/// Declarative state description ingested from JSON. Exactly one constructor
/// call per spec; `dim` is auto-sized when absent.
///
///   {"kind":"coherent", "alpha": 1.5}            alpha may be x or [re, im]
///   {"kind":"fock", "n": 3}
///   {"kind":"squeezed", "alpha": 0, "z": {"r": 0.5, "phi": 0}}
///   {"kind":"cat", "alpha0": 2, "N": 2, "q": 0}
///   {"kind":"thermal", "nbar": 1}
///   {"kind":"mixture", "components": [{"weight": w, "state": {...}}, ...]}
///   {"kind":"raw", "dim": d, "matrix": [[[re,im], ...], ...]}
struct BuiltState {
    fock::DensityMatrix rho;
    nlohmann::json spec;  ///< normalized echo of the parsed spec
    Index dim = 0;
    bool dim_was_auto = true;
};

/// Smallest adequate cutoff for a state spec (before any override).
Index auto_dim(const nlohmann::json& spec);

/// Builds the density matrix; dim_override > 0 wins over auto-sizing.
BuiltState build_state(const nlohmann::json& spec, Index dim_override = 0);

BuiltState load_state_file(const std::string& path, Index dim_override = 0);

/// Analysis knobs with the documented defaults; echoed into report provenance.
struct AnalysisConfig {
    double grid_extent = 0.0;  ///< 0 = auto: 2 sqrt(nbar + 1) + 4
    Index grid_points = 256;
    std::vector<double> s_samples{-1.0, -0.5, 0.0};
    witnesses::WitnessConfig witness;
};

nlohmann::json report_json(const witnesses::WitnessReport& rep, const BuiltState& state,
                           const AnalysisConfig& config);

/// Raw-kind spec for re-ingestion of the exact analyzed matrix.
nlohmann::json raw_state_json(const fock::DensityMatrix& rho);

/// Writes via a temp file in the same directory plus rename.
void atomic_write(const std::string& path, const std::string& content);

std::string format_g17(double v);

}  // namespace ordsens::io
