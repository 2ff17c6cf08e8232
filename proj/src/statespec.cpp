#include "ordsens/statespec.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

namespace ordsens::io {

using nlohmann::json;

namespace {

Complex parse_complex(const json& j, const char* name) {
    if (j.is_number()) return Complex(j.get<double>(), 0.0);
    if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
        return Complex(j[0].get<double>(), j[1].get<double>());
    throw ParseError(std::string(name) + " must be a number or an [re, im] pair");
}

json dump_complex(Complex z) { return json::array({z.real(), z.imag()}); }

const json& field(const json& spec, const char* name) {
    auto it = spec.find(name);
    if (it == spec.end()) throw ParseError(std::string("state spec is missing field '") + name + "'");
    return *it;
}

double number_field(const json& spec, const char* name) {
    const json& j = field(spec, name);
    if (!j.is_number()) throw ParseError(std::string("field '") + name + "' must be a number");
    return j.get<double>();
}

Index integer_field(const json& spec, const char* name) {
    const json& j = field(spec, name);
    if (!j.is_number_integer()) throw ParseError(std::string("field '") + name + "' must be an integer");
    return j.get<Index>();
}

Complex squeeze_param(const json& spec) {
    const json& z = field(spec, "z");
    if (!z.is_object()) throw ParseError("field 'z' must be an object {\"r\":..., \"phi\":...}");
    const double r = number_field(z, "r");
    const double phi = z.contains("phi") ? number_field(z, "phi") : 0.0;
    return std::polar(r, phi);
}

std::string kind_of(const json& spec) {
    if (!spec.is_object()) throw ParseError("state spec must be a JSON object");
    const json& k = field(spec, "kind");
    if (!k.is_string()) throw ParseError("field 'kind' must be a string");
    return k.get<std::string>();
}

Mat parse_raw_matrix(const json& spec) {
    const Index dim = integer_field(spec, "dim");
    if (dim < 2) throw ValidationError("raw matrix needs dim >= 2");
    const json& rows = field(spec, "matrix");
    if (!rows.is_array() || Index(rows.size()) != dim)
        throw ParseError("raw matrix must be an array of dim rows");
    Mat m(dim, dim);
    for (Index i = 0; i < dim; ++i) {
        const json& row = rows[i];
        if (!row.is_array() || Index(row.size()) != dim)
            throw ParseError("raw matrix row " + std::to_string(i) + " must have dim entries");
        for (Index j = 0; j < dim; ++j) m(i, j) = parse_complex(row[j], "matrix entry");
    }
    return m;
}

}  // namespace

Index auto_dim(const json& spec) {
    const std::string kind = kind_of(spec);
    if (kind == "coherent") return fock::auto_dim_coherent(parse_complex(field(spec, "alpha"), "alpha"));
    if (kind == "fock") return fock::auto_dim_fock(integer_field(spec, "n"));
    if (kind == "squeezed")
        return fock::auto_dim_squeezed(parse_complex(field(spec, "alpha"), "alpha"), squeeze_param(spec));
    if (kind == "cat") return fock::auto_dim_cat(parse_complex(field(spec, "alpha0"), "alpha0"));
    if (kind == "thermal") return fock::auto_dim_thermal(number_field(spec, "nbar"));
    if (kind == "mixture") {
        const json& comps = field(spec, "components");
        if (!comps.is_array() || comps.empty()) throw ParseError("mixture needs a nonempty component list");
        Index dim = 2;
        for (const json& c : comps) dim = std::max(dim, auto_dim(field(c, "state")));
        return dim;
    }
    if (kind == "raw") return integer_field(spec, "dim");
    throw ParseError("unknown state kind '" + kind + "'");
}

namespace {

fock::DensityMatrix build_at(const json& spec, Index dim) {
    const std::string kind = kind_of(spec);
    if (kind == "coherent")
        return fock::coherent_state(parse_complex(field(spec, "alpha"), "alpha"), dim).projector();
    if (kind == "fock") {
        const Index n = integer_field(spec, "n");
        if (n < 0) throw ValidationError("fock index must be nonnegative");
        return fock::fock_state(n, dim).projector();
    }
    if (kind == "squeezed")
        return fock::squeezed_state(parse_complex(field(spec, "alpha"), "alpha"), squeeze_param(spec), dim)
            .projector();
    if (kind == "cat") {
        const Index n_comp = integer_field(spec, "N");
        const Index q = integer_field(spec, "q");
        if (n_comp < 2) throw ValidationError("cat state needs N >= 2");
        return fock::cat_state(parse_complex(field(spec, "alpha0"), "alpha0"), n_comp, q, dim).projector();
    }
    if (kind == "thermal") {
        const double nbar = number_field(spec, "nbar");
        if (nbar < 0.0) throw ValidationError("thermal nbar must be nonnegative");
        return fock::thermal_state(nbar, dim);
    }
    if (kind == "mixture") {
        const json& comps = field(spec, "components");
        std::vector<fock::DensityMatrix> states;
        std::vector<double> weights;
        double wsum = 0.0;
        for (const json& c : comps) {
            const double w = number_field(c, "weight");
            if (w < 0.0) throw ValidationError("mixture weights must be nonnegative");
            weights.push_back(w);
            wsum += w;
            states.push_back(build_at(field(c, "state"), dim));
        }
        if (std::abs(wsum - 1.0) > 1e-9)
            throw ValidationError("mixture weights must sum to 1 within 1e-9");
        for (double& w : weights) w /= wsum;  // exact renormalization for mix()
        return fock::mix(states, weights);
    }
    if (kind == "raw") {
        if (dim != integer_field(spec, "dim"))
            throw ValidationError("raw states cannot be re-dimensioned; drop the dim override");
        return fock::DensityMatrix::validated(parse_raw_matrix(spec));
    }
    throw ParseError("unknown state kind '" + kind + "'");
}

}  // namespace

BuiltState build_state(const json& spec, Index dim_override) {
    Index dim = dim_override;
    bool was_auto = false;
    if (dim <= 0) {
        if (spec.is_object() && spec.contains("dim")) {
            dim = integer_field(spec, "dim");
            if (dim < 2) throw ValidationError("dim must be at least 2");
        } else {
            dim = auto_dim(spec);
            was_auto = true;
        }
    }
    BuiltState out{build_at(spec, dim), spec, dim, was_auto};
    return out;
}

BuiltState load_state_file(const std::string& path, Index dim_override) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open state spec file '" + path + "'");
    json spec;
    try {
        in >> spec;
    } catch (const json::parse_error& e) {
        throw ParseError("malformed JSON in '" + path + "': " + e.what());
    }
    return build_state(spec, dim_override);
}

std::string format_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

json report_json(const witnesses::WitnessReport& rep, const BuiltState& state,
                 const AnalysisConfig& config) {
    json j;
    j["state"] = state.spec;
    j["dim"] = state.dim;
    j["purity"] = rep.purity;
    j["so"] = rep.so;
    j["so_route_agreement"] = rep.so_route_agreement;

    json bounds;
    bounds["lower"] = rep.bounds.lower;
    bounds["upper"] = rep.bounds.upper;
    // The sandwich justifies a point estimate only deep outside the classical
    // ball (relative gap below a third).
    bounds["estimate"] = rep.bounds.upper > 3.0 ? json(rep.bounds.upper) : json(nullptr);
    j["nonclassicality_bounds"] = bounds;

    json w;
    w["d2"] = rep.mandel_d2;
    w["q_mandel"] = rep.mandel_q ? json(*rep.mandel_q) : json(nullptr);
    w["d_n"] = rep.d_n;
    w["squeezing_min"] = rep.squeezing_min;
    w["squeezing_phi"] = rep.squeezing_phi;
    w["m_qfi"] = rep.m_qfi;
    w["theta_star"] = rep.theta_star;
    j["witnesses"] = w;

    json flags;
    flags["so"] = rep.flags.so;
    flags["d2"] = rep.flags.mandel;
    flags["d_n"] = rep.flags.d_n;
    flags["squeezing"] = rep.flags.squeezing;
    flags["m_qfi"] = rep.flags.m_qfi;
    flags["any"] = rep.flags.any();
    j["flags"] = flags;

    json prov;
    prov["dim"] = state.dim;
    prov["dim_was_auto"] = state.dim_was_auto;
    prov["grid_extent"] = config.grid_extent;
    prov["grid_points"] = config.grid_points;
    prov["s_samples"] = config.s_samples;
    prov["l_max"] = rep.l_max_used;
    prov["n_max"] = rep.n_max_used;
    prov["theta_scan"] = config.witness.theta_scan;
    prov["squeeze_scan"] = config.witness.squeeze_scan;
    j["provenance"] = prov;
    return j;
}

json raw_state_json(const fock::DensityMatrix& rho) {
    json rows = json::array();
    for (Index i = 0; i < rho.dim; ++i) {
        json row = json::array();
        for (Index j = 0; j < rho.dim; ++j) row.push_back(dump_complex(rho.matrix(i, j)));
        rows.push_back(row);
    }
    json j;
    j["kind"] = "raw";
    j["dim"] = rho.dim;
    j["matrix"] = rows;
    return j;
}

void atomic_write(const std::string& path, const std::string& content) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("cannot write to '" + tmp.string() + "'");
        out << content;
    }
    fs::rename(tmp, target);
}

}  // namespace ordsens::io
