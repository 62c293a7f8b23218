#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "corrosim/units.hpp"

namespace corrosim {

// All parameter structs store SI values only (m, s, Pa, mol, A, kg).
// Objects are immutable after validation and safe to share across threads.

struct ConcreteParams {
    double porosity = 0.0;            // phi, (0,1)
    double youngs_modulus = 0.0;      // E, Pa
    double poisson_ratio = 0.0;       // nu, [0, 0.5)
    double tensile_strength = 0.0;    // f_t, Pa
    double water_diffusivity = 0.0;   // D_w, m2/s (Fe2+ in free water)
    double diffusivity_exponent = 0.0;// m, >= 0
    double transport_depth = 0.0;     // t_c, m
    double solid_density = 0.0;       // rho_s, kg/m3 (skeletal)

    void validate() const; // throws ValidationError naming the field
};

struct RustParams {
    double expansion_ratio = 0.0;      // kappa, > 1
    double youngs_modulus = 0.0;       // E_r, Pa
    double poisson_ratio = 0.0;        // nu_r, [0, 0.5)
    double diffusivity = 0.0;          // D_r, m2/s
    double rate_precipitation = 0.0;   // k_r(II->o), 1/s
    double rate_oxidation = 0.0;       // k_r(II->III), m3/(mol s)
    double oxygen_concentration = 0.0; // c_ox, mol/m3

    // Combined first-order sink: k_r(II->o) + c_ox * k_r(II->III).
    double rate_sum() const {
        return rate_precipitation + oxygen_concentration * rate_oxidation;
    }

    void validate() const;
};

struct SteelParams {
    double molar_mass = 0.0;               // M_Fe, kg/mol
    double density = 0.0;                  // rho_Fe, kg/m3
    double electrons = 2.0;                // z_a, fixed at 2
    double faraday_constant = 0.0;         // F, C/mol
    double corrosion_current_density = 0.0;// i_a, A/m2

    void validate() const;
};

struct Geometry {
    double rebar_radius = 0.0; // r_i, m
    double outer_radius = 0.0; // r_o, m
    double rebar_length = 1.0; // L, m; cancels in all pressure ratios

    double cover() const { return outer_radius - rebar_radius; }

    void validate() const;
};

struct SolverSettings {
    double dt_cor_max = 1e-6;       // marching step cap on t_cor, m
    double pressure_match_tol = 1e-6; // relative, on |p_thermo - p_mech|
    double t_cor_max = 2e-3;        // marching horizon, m
    int fd_verify_every = 0;        // cross-check cadence in steps, 0 = off
    int grid_n = 1000;              // finite-difference verifier intervals
    double kf_step_tol = 0.01;      // max |Delta k_f| accepted per step

    void validate() const;
};

struct ParameterSet {
    ConcreteParams concrete;
    RustParams rust;
    SteelParams steel;
    Geometry geometry;
    SolverSettings solver;
    // "user" or "default", keyed by "section.field"; filled by the loader.
    std::map<std::string, std::string> provenance;

    void validate() const;
};

// One row of the default ledger. Values marked as placeholders are not
// measured quantities; override them for quantitative work.
struct LedgerEntry {
    std::string key;        // "section.field"
    double value_si;        // value in SI units
    units::Dim dim;
    std::string display;    // human-readable value with unit
    std::string provenance;
};

const std::vector<LedgerEntry>& default_ledger();
ParameterSet default_parameters();

// Loads a JSON configuration document. Missing fields are filled from the
// default ledger; every field is validated before the set is returned
// (no partially valid configuration ever escapes). Values are either JSON
// numbers (taken as SI) or strings "value unit".
ParameterSet load_config(const std::filesystem::path& path);
ParameterSet config_from_json(const nlohmann::json& doc);

// Resolved parameter echo, SI numbers plus the provenance map.
nlohmann::json to_json(const ParameterSet& params);

// Applies a dotted-path override ("concrete.porosity=0.6") onto a raw config
// document. Throws ConfigError if the key does not name a known field.
void apply_override(nlohmann::json& doc, const std::string& dotted_key,
                    const std::string& value);

// Returns true iff "section.field" names a known configuration key.
bool is_known_config_key(const std::string& dotted_key);

// Linear density <-> porosity map with configurable skeletal density rho_s:
// phi = 1 - rho_dry/rho_s. Throws ValidationError on non-physical input.
double porosity_from_density(double rho_dry, double rho_s);
double density_from_porosity(double phi, double rho_s);

} // namespace corrosim
