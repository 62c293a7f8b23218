#include "corrosim/params.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>

#include <nlohmann/json.hpp>

#include "corrosim/errors.hpp"

namespace corrosim {

using nlohmann::json;
using units::Dim;

namespace {

void require(bool ok, const std::string& field, const std::string& rule,
             double got) {
    if (!ok) {
        std::ostringstream os;
        os << field << ": " << rule << " (got " << got << ")";
        throw ValidationError(os.str());
    }
}

} // namespace

void ConcreteParams::validate() const {
    require(porosity > 0.0 && porosity < 1.0, "concrete.porosity",
            "must lie strictly inside (0, 1)", porosity);
    require(youngs_modulus > 0.0, "concrete.youngs_modulus",
            "must be positive", youngs_modulus);
    require(poisson_ratio >= 0.0 && poisson_ratio < 0.5,
            "concrete.poisson_ratio", "must satisfy 0 <= nu < 0.5",
            poisson_ratio);
    require(tensile_strength > 0.0, "concrete.tensile_strength",
            "must be positive", tensile_strength);
    require(water_diffusivity > 0.0, "concrete.water_diffusivity",
            "must be positive", water_diffusivity);
    require(diffusivity_exponent >= 0.0, "concrete.diffusivity_exponent",
            "must be non-negative", diffusivity_exponent);
    require(transport_depth > 0.0, "concrete.transport_depth",
            "must be positive", transport_depth);
    require(solid_density > 0.0, "concrete.solid_density", "must be positive",
            solid_density);
}

void RustParams::validate() const {
    require(expansion_ratio > 1.0, "rust.expansion_ratio",
            "must exceed 1 (rust occupies more volume than steel)",
            expansion_ratio);
    require(youngs_modulus > 0.0, "rust.youngs_modulus", "must be positive",
            youngs_modulus);
    require(poisson_ratio >= 0.0 && poisson_ratio < 0.5, "rust.poisson_ratio",
            "must satisfy 0 <= nu_r < 0.5", poisson_ratio);
    require(diffusivity > 0.0, "rust.diffusivity", "must be positive",
            diffusivity);
    require(rate_precipitation >= 0.0, "rust.rate_precipitation",
            "must be non-negative", rate_precipitation);
    require(rate_oxidation >= 0.0, "rust.rate_oxidation",
            "must be non-negative", rate_oxidation);
    require(oxygen_concentration >= 0.0, "rust.oxygen_concentration",
            "must be non-negative", oxygen_concentration);
    require(rate_sum() > 0.0, "rust.rate_precipitation",
            "combined sink k_r(II->o) + c_ox*k_r(II->III) must be positive",
            rate_sum());
}

void SteelParams::validate() const {
    require(molar_mass > 0.0, "steel.molar_mass", "must be positive",
            molar_mass);
    require(density > 0.0, "steel.density", "must be positive", density);
    require(electrons == 2.0, "steel.electrons",
            "anodic electron count is fixed at 2", electrons);
    require(faraday_constant > 0.0, "steel.faraday_constant",
            "must be positive", faraday_constant);
    require(corrosion_current_density > 0.0,
            "steel.corrosion_current_density", "must be positive",
            corrosion_current_density);
}

void Geometry::validate() const {
    require(rebar_radius > 0.0, "geometry.rebar_radius", "must be positive",
            rebar_radius);
    require(outer_radius > rebar_radius, "geometry.outer_radius",
            "must exceed the rebar radius", outer_radius);
    require(rebar_length > 0.0, "geometry.rebar_length", "must be positive",
            rebar_length);
}

void SolverSettings::validate() const {
    require(dt_cor_max > 0.0, "solver.dt_cor_max", "must be positive",
            dt_cor_max);
    require(pressure_match_tol > 0.0 && pressure_match_tol <= 1e-3,
            "solver.pressure_match_tol", "must lie in (0, 1e-3]",
            pressure_match_tol);
    require(t_cor_max > 0.0, "solver.t_cor_max", "must be positive",
            t_cor_max);
    require(fd_verify_every >= 0, "solver.fd_verify_every",
            "must be non-negative", fd_verify_every);
    require(grid_n >= 100, "solver.grid_n", "must be at least 100", grid_n);
    require(kf_step_tol > 0.0 && kf_step_tol <= 1.0, "solver.kf_step_tol",
            "must lie in (0, 1]", kf_step_tol);
}

void ParameterSet::validate() const {
    concrete.validate();
    rust.validate();
    steel.validate();
    geometry.validate();
    solver.validate();
}

const std::vector<LedgerEntry>& default_ledger() {
    static const std::vector<LedgerEntry> ledger = {
        {"concrete.porosity", 0.30, Dim::Dimensionless, "0.30",
         "example material - user input expected"},
        {"concrete.youngs_modulus", 2.0e9, Dim::Pressure, "2 GPa",
         "example material (aerated-concrete scale) - user input expected"},
        {"concrete.poisson_ratio", 0.2, Dim::Dimensionless, "0.2",
         "example material - user input expected"},
        {"concrete.tensile_strength", 0.5e6, Dim::Pressure, "0.5 MPa",
         "example material (aerated-concrete scale) - user input expected"},
        {"concrete.water_diffusivity", 7.19e-10, Dim::Diffusivity,
         "7.19e-10 m2/s", "literature value for Fe2+ diffusivity in water"},
        {"concrete.diffusivity_exponent", 4.0, Dim::Dimensionless, "4.0",
         "placeholder - calibrate against measured t_crit data"},
        {"concrete.transport_depth", 5e-3, Dim::Length, "5 mm",
         "placeholder - override for quantitative work"},
        {"concrete.solid_density", 2550.0, Dim::MassDensity, "2550 kg/m3",
         "typical skeletal density of cementitious solids"},

        {"rust.expansion_ratio", 2.1, Dim::Dimensionless, "2.1",
         "placeholder - typical molar volume ratio of iron oxides"},
        {"rust.youngs_modulus", 6e10, Dim::Pressure, "60 GPa",
         "placeholder - indentation-scale stiffness of dense oxide"},
        {"rust.poisson_ratio", 0.3, Dim::Dimensionless, "0.3",
         "placeholder - override for quantitative work"},
        {"rust.diffusivity", 7.19e-10, Dim::Diffusivity, "7.19e-10 m2/s",
         "placeholder - water-filled porous layer, taken equal to free "
         "water"},
        {"rust.rate_precipitation", 5e-2, Dim::Rate, "5e-2 1/s",
         "placeholder - override for quantitative work"},
        {"rust.rate_oxidation", 1e-3, Dim::RateSecondOrder,
         "1e-3 m3/(mol*s)", "placeholder - override for quantitative work"},
        {"rust.oxygen_concentration", 0.26, Dim::Concentration,
         "0.26 mol/m3",
         "placeholder - air-saturated pore solution estimate"},

        {"steel.molar_mass", 0.05585, Dim::MolarMass, "55.85 g/mol",
         "physical constant (iron)"},
        {"steel.density", 7870.0, Dim::MassDensity, "7870 kg/m3",
         "physical constant (iron)"},
        {"steel.electrons", 2.0, Dim::Dimensionless, "2",
         "anodic half-cell electron count"},
        {"steel.faraday_constant", 96485.33212, Dim::Dimensionless,
         "96485.33212 C/mol", "physical constant (CODATA)"},
        {"steel.corrosion_current_density", 0.01, Dim::CurrentDensity,
         "1 uA/cm2", "typical natural corrosion current density"},

        {"geometry.rebar_radius", 5e-3, Dim::Length, "5 mm",
         "example geometry - user input expected"},
        {"geometry.cover", 30e-3, Dim::Length, "30 mm",
         "example geometry - user input expected"},
        {"geometry.rebar_length", 1.0, Dim::Length, "1 m",
         "unit length; cancels in all pressure ratios"},

        {"solver.dt_cor_max", 1e-6, Dim::Length, "1 um",
         "numerical default"},
        {"solver.pressure_match_tol", 1e-6, Dim::Dimensionless, "1e-6",
         "numerical default"},
        {"solver.t_cor_max", 2e-3, Dim::Length, "2 mm", "numerical default"},
        {"solver.fd_verify_every", 0.0, Dim::Dimensionless, "0",
         "numerical default (0 = off)"},
        {"solver.grid_n", 1000.0, Dim::Dimensionless, "1000",
         "numerical default"},
        {"solver.kf_step_tol", 0.01, Dim::Dimensionless, "0.01",
         "numerical default"},
    };
    return ledger;
}

namespace {

double ledger_value(const std::string& key) {
    for (const auto& e : default_ledger())
        if (e.key == key) return e.value_si;
    throw ConfigError("internal: no default for " + key);
}

struct FieldSpec {
    const char* section;
    const char* field;
    Dim dim;
};

// Canonical scalar fields; geometry aliases (rebar_diameter, outer_radius)
// are handled separately.
const FieldSpec kFields[] = {
    {"concrete", "porosity", Dim::Dimensionless},
    {"concrete", "youngs_modulus", Dim::Pressure},
    {"concrete", "poisson_ratio", Dim::Dimensionless},
    {"concrete", "tensile_strength", Dim::Pressure},
    {"concrete", "water_diffusivity", Dim::Diffusivity},
    {"concrete", "diffusivity_exponent", Dim::Dimensionless},
    {"concrete", "transport_depth", Dim::Length},
    {"concrete", "solid_density", Dim::MassDensity},
    {"rust", "expansion_ratio", Dim::Dimensionless},
    {"rust", "youngs_modulus", Dim::Pressure},
    {"rust", "poisson_ratio", Dim::Dimensionless},
    {"rust", "diffusivity", Dim::Diffusivity},
    {"rust", "rate_precipitation", Dim::Rate},
    {"rust", "rate_oxidation", Dim::RateSecondOrder},
    {"rust", "oxygen_concentration", Dim::Concentration},
    {"steel", "molar_mass", Dim::MolarMass},
    {"steel", "density", Dim::MassDensity},
    {"steel", "electrons", Dim::Dimensionless},
    {"steel", "faraday_constant", Dim::Dimensionless},
    {"steel", "corrosion_current_density", Dim::CurrentDensity},
    {"geometry", "rebar_radius", Dim::Length},
    {"geometry", "rebar_diameter", Dim::Length},
    {"geometry", "outer_radius", Dim::Length},
    {"geometry", "cover", Dim::Length},
    {"geometry", "rebar_length", Dim::Length},
    {"solver", "dt_cor_max", Dim::Length},
    {"solver", "pressure_match_tol", Dim::Dimensionless},
    {"solver", "t_cor_max", Dim::Length},
    {"solver", "fd_verify_every", Dim::Dimensionless},
    {"solver", "grid_n", Dim::Dimensionless},
    {"solver", "kf_step_tol", Dim::Dimensionless},
};

// CLI-level sections read by the sweep and calibrate subcommands; the
// parameter loader leaves them alone but overrides may target them.
const char* kAuxKeys[] = {
    "sweep.threshold",   "sweep.workers",
    "calibration.dataset", "calibration.m_min", "calibration.m_max",
    "calibration.fit_rate_multiplier", "calibration.rate_multiplier_min",
    "calibration.rate_multiplier_max",
};

const FieldSpec* find_field(const std::string& section,
                            const std::string& field) {
    for (const auto& f : kFields)
        if (section == f.section && field == f.field) return &f;
    return nullptr;
}

double value_from_json(const json& v, Dim dim, const std::string& field) {
    if (v.is_number()) return v.get<double>();
    if (v.is_string())
        return units::parse_quantity_string(v.get<std::string>(), dim, field);
    throw ConfigError(field + ": expected a number (SI) or 'value unit' string");
}

// Reads section.field from the user document when present, else the ledger
// default; records provenance.
double resolve(const json& doc, const std::string& section,
               const std::string& field, Dim dim,
               std::map<std::string, std::string>& provenance) {
    const std::string key = section + "." + field;
    if (doc.contains(section) && doc.at(section).contains(field)) {
        provenance[key] = "user";
        return value_from_json(doc.at(section).at(field), dim, key);
    }
    provenance[key] = "default";
    return ledger_value(key);
}

void reject_unknown_keys(const json& doc) {
    for (const auto& [section, body] : doc.items()) {
        if (section == "sweep" || section == "calibration") continue;
        if (section != "concrete" && section != "rust" && section != "steel" &&
            section != "geometry" && section != "solver")
            throw ConfigError("unknown config section '" + section + "'");
        if (!body.is_object())
            throw ConfigError("config section '" + section +
                              "' must be an object");
        for (const auto& [field, _] : body.items())
            if (!find_field(section, field))
                throw ConfigError("unknown config key '" + section + "." +
                                  field + "'");
    }
}

Geometry resolve_geometry(const json& doc,
                          std::map<std::string, std::string>& provenance) {
    const json section = doc.contains("geometry") ? doc.at("geometry")
                                                  : json::object();
    const bool has_radius = section.contains("rebar_radius");
    const bool has_diameter = section.contains("rebar_diameter");
    const bool has_outer = section.contains("outer_radius");
    const bool has_cover = section.contains("cover");
    if (has_radius && has_diameter)
        throw ConfigError(
            "geometry: give either rebar_radius or rebar_diameter, not both");
    if (has_outer && has_cover)
        throw ConfigError(
            "geometry: give either outer_radius or cover, not both");

    Geometry g;
    if (has_diameter) {
        g.rebar_radius = 0.5 * value_from_json(section.at("rebar_diameter"),
                                               Dim::Length,
                                               "geometry.rebar_diameter");
        provenance["geometry.rebar_radius"] = "user";
    } else if (has_radius) {
        g.rebar_radius = value_from_json(section.at("rebar_radius"),
                                         Dim::Length, "geometry.rebar_radius");
        provenance["geometry.rebar_radius"] = "user";
    } else {
        g.rebar_radius = ledger_value("geometry.rebar_radius");
        provenance["geometry.rebar_radius"] = "default";
    }

    if (has_outer) {
        g.outer_radius = value_from_json(section.at("outer_radius"),
                                         Dim::Length, "geometry.outer_radius");
        provenance["geometry.outer_radius"] = "user";
    } else if (has_cover) {
        g.outer_radius = g.rebar_radius +
                         value_from_json(section.at("cover"), Dim::Length,
                                         "geometry.cover");
        provenance["geometry.outer_radius"] = "user";
    } else {
        g.outer_radius = g.rebar_radius + ledger_value("geometry.cover");
        provenance["geometry.outer_radius"] = "default";
    }
    provenance["geometry.cover"] = provenance["geometry.outer_radius"];

    if (section.contains("rebar_length")) {
        g.rebar_length = value_from_json(section.at("rebar_length"),
                                         Dim::Length, "geometry.rebar_length");
        provenance["geometry.rebar_length"] = "user";
    } else {
        g.rebar_length = ledger_value("geometry.rebar_length");
        provenance["geometry.rebar_length"] = "default";
    }
    return g;
}

} // namespace

ParameterSet config_from_json(const json& doc) {
    if (!doc.is_object())
        throw ConfigError("config document must be a JSON object");
    reject_unknown_keys(doc);

    ParameterSet p;
    auto& prov = p.provenance;

    auto c = [&](const char* f, Dim d) {
        return resolve(doc, "concrete", f, d, prov);
    };
    p.concrete.porosity = c("porosity", Dim::Dimensionless);
    p.concrete.youngs_modulus = c("youngs_modulus", Dim::Pressure);
    p.concrete.poisson_ratio = c("poisson_ratio", Dim::Dimensionless);
    p.concrete.tensile_strength = c("tensile_strength", Dim::Pressure);
    p.concrete.water_diffusivity = c("water_diffusivity", Dim::Diffusivity);
    p.concrete.diffusivity_exponent =
        c("diffusivity_exponent", Dim::Dimensionless);
    p.concrete.transport_depth = c("transport_depth", Dim::Length);
    p.concrete.solid_density = c("solid_density", Dim::MassDensity);

    auto r = [&](const char* f, Dim d) {
        return resolve(doc, "rust", f, d, prov);
    };
    p.rust.expansion_ratio = r("expansion_ratio", Dim::Dimensionless);
    p.rust.youngs_modulus = r("youngs_modulus", Dim::Pressure);
    p.rust.poisson_ratio = r("poisson_ratio", Dim::Dimensionless);
    p.rust.diffusivity = r("diffusivity", Dim::Diffusivity);
    p.rust.rate_precipitation = r("rate_precipitation", Dim::Rate);
    p.rust.rate_oxidation = r("rate_oxidation", Dim::RateSecondOrder);
    p.rust.oxygen_concentration =
        r("oxygen_concentration", Dim::Concentration);

    auto s = [&](const char* f, Dim d) {
        return resolve(doc, "steel", f, d, prov);
    };
    p.steel.molar_mass = s("molar_mass", Dim::MolarMass);
    p.steel.density = s("density", Dim::MassDensity);
    p.steel.electrons = s("electrons", Dim::Dimensionless);
    p.steel.faraday_constant = s("faraday_constant", Dim::Dimensionless);
    p.steel.corrosion_current_density =
        s("corrosion_current_density", Dim::CurrentDensity);

    p.geometry = resolve_geometry(doc, prov);

    auto v = [&](const char* f, Dim d) {
        return resolve(doc, "solver", f, d, prov);
    };
    p.solver.dt_cor_max = v("dt_cor_max", Dim::Length);
    p.solver.pressure_match_tol = v("pressure_match_tol", Dim::Dimensionless);
    p.solver.t_cor_max = v("t_cor_max", Dim::Length);
    p.solver.fd_verify_every =
        static_cast<int>(v("fd_verify_every", Dim::Dimensionless));
    p.solver.grid_n = static_cast<int>(v("grid_n", Dim::Dimensionless));
    p.solver.kf_step_tol = v("kf_step_tol", Dim::Dimensionless);

    p.validate();
    return p;
}

ParameterSet default_parameters() {
    return config_from_json(json::object());
}

ParameterSet load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open config file '" + path.string() + "'");
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("config parse failure in '" + path.string() +
                          "': " + e.what());
    }
    return config_from_json(doc);
}

nlohmann::json to_json(const ParameterSet& p) {
    json doc;
    doc["concrete"] = {
        {"porosity", p.concrete.porosity},
        {"youngs_modulus", p.concrete.youngs_modulus},
        {"poisson_ratio", p.concrete.poisson_ratio},
        {"tensile_strength", p.concrete.tensile_strength},
        {"water_diffusivity", p.concrete.water_diffusivity},
        {"diffusivity_exponent", p.concrete.diffusivity_exponent},
        {"transport_depth", p.concrete.transport_depth},
        {"solid_density", p.concrete.solid_density},
    };
    doc["rust"] = {
        {"expansion_ratio", p.rust.expansion_ratio},
        {"youngs_modulus", p.rust.youngs_modulus},
        {"poisson_ratio", p.rust.poisson_ratio},
        {"diffusivity", p.rust.diffusivity},
        {"rate_precipitation", p.rust.rate_precipitation},
        {"rate_oxidation", p.rust.rate_oxidation},
        {"oxygen_concentration", p.rust.oxygen_concentration},
    };
    doc["steel"] = {
        {"molar_mass", p.steel.molar_mass},
        {"density", p.steel.density},
        {"electrons", p.steel.electrons},
        {"faraday_constant", p.steel.faraday_constant},
        {"corrosion_current_density", p.steel.corrosion_current_density},
    };
    doc["geometry"] = {
        {"rebar_radius", p.geometry.rebar_radius},
        {"outer_radius", p.geometry.outer_radius},
        {"cover", p.geometry.cover()},
        {"rebar_length", p.geometry.rebar_length},
    };
    doc["solver"] = {
        {"dt_cor_max", p.solver.dt_cor_max},
        {"pressure_match_tol", p.solver.pressure_match_tol},
        {"t_cor_max", p.solver.t_cor_max},
        {"fd_verify_every", p.solver.fd_verify_every},
        {"grid_n", p.solver.grid_n},
        {"kf_step_tol", p.solver.kf_step_tol},
    };
    doc["provenance"] = p.provenance;
    return doc;
}

bool is_known_config_key(const std::string& dotted_key) {
    auto dot = dotted_key.find('.');
    if (dot == std::string::npos) return false;
    const std::string section = dotted_key.substr(0, dot);
    const std::string field = dotted_key.substr(dot + 1);
    if (find_field(section, field)) return true;
    for (const char* aux : kAuxKeys)
        if (dotted_key == aux) return true;
    return false;
}

void apply_override(json& doc, const std::string& dotted_key,
                    const std::string& value) {
    if (!is_known_config_key(dotted_key))
        throw ConfigError("unknown override key '" + dotted_key + "'");
    auto dot = dotted_key.find('.');
    const std::string section = dotted_key.substr(0, dot);
    const std::string field = dotted_key.substr(dot + 1);

    json parsed;
    if (value == "true") {
        parsed = true;
    } else if (value == "false") {
        parsed = false;
    } else {
        const char* begin = value.c_str();
        char* end = nullptr;
        double num = std::strtod(begin, &end);
        if (end != begin && *end == '\0' && !value.empty())
            parsed = num;
        else
            parsed = value; // "value unit" string or a path
    }
    doc[section][field] = parsed;
}

double porosity_from_density(double rho_dry, double rho_s) {
    require(rho_s > 0.0, "solid_density", "must be positive", rho_s);
    require(rho_dry > 0.0, "dry_density", "must be positive", rho_dry);
    require(rho_dry < rho_s, "dry_density",
            "must be below the skeletal density", rho_dry);
    double phi = 1.0 - rho_dry / rho_s;
    // guard rounding at the extremes; inputs were validated above
    return std::min(std::max(phi, std::numeric_limits<double>::min()),
                    1.0 - 1e-16);
}

double density_from_porosity(double phi, double rho_s) {
    require(rho_s > 0.0, "solid_density", "must be positive", rho_s);
    require(phi > 0.0 && phi < 1.0, "porosity",
            "must lie strictly inside (0, 1)", phi);
    return rho_s * (1.0 - phi);
}

} // namespace corrosim
