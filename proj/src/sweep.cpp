#include "corrosim/sweep.hpp"

#include <cmath>
#include <map>
#include <ostream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "corrosim/errors.hpp"
#include "corrosim/io_util.hpp"
#include "corrosim/parallel.hpp"
#include "corrosim/simulator.hpp"
#include "corrosim/version.hpp"

namespace corrosim {

const char* axis_name(AxisQuantity q) {
    switch (q) {
        case AxisQuantity::Porosity: return "porosity";
        case AxisQuantity::DryDensity: return "rho_dry";
        case AxisQuantity::Cover: return "cover";
        case AxisQuantity::RebarDiameter: return "rebar_diameter";
    }
    return "?";
}

std::vector<double> AxisSpec::values() const {
    std::vector<double> v;
    v.reserve(count);
    if (count == 1) {
        v.push_back(min);
        return v;
    }
    if (log_scale) {
        const double lmin = std::log(min), lmax = std::log(max);
        for (int i = 0; i < count; ++i)
            v.push_back(std::exp(lmin + (lmax - lmin) * i / (count - 1)));
    } else {
        for (int i = 0; i < count; ++i)
            v.push_back(min + (max - min) * i / (count - 1));
    }
    v.front() = min;
    v.back() = max;
    return v;
}

void SweepGrid::validate() const {
    if (axes.empty() || axes.size() > 3)
        throw ValidationError("sweep: needs between 1 and 3 axes");
    for (const auto& a : axes) {
        if (a.count < 1)
            throw ValidationError("sweep: axis count must be at least 1");
        if (a.count >= 2 && !(a.min < a.max))
            throw ValidationError("sweep: axis requires min < max");
        if (a.count == 1 && a.min != a.max)
            throw ValidationError(
                "sweep: single-point axis requires min == max");
        if (a.log_scale && a.min <= 0.0)
            throw ValidationError("sweep: log axis requires positive min");
    }
    if (threshold <= 0.0)
        throw ValidationError("sweep: threshold must be positive");
}

std::size_t SweepGrid::cell_count() const {
    std::size_t n = 1;
    for (const auto& a : axes) n *= static_cast<std::size_t>(a.count);
    return n;
}

const char* to_string(SafetyClass c) {
    switch (c) {
        case SafetyClass::AtRiskConcealed: return "at_risk_concealed";
        case SafetyClass::CracksFirst: return "cracks_first";
        case SafetyClass::Undetermined: return "undetermined";
        case SafetyClass::Error: return "error";
    }
    return "error";
}

namespace {

ParameterSet cell_params(const ParameterSet& base,
                         const std::vector<AxisSpec>& axes,
                         const std::vector<double>& coords) {
    double porosity = base.concrete.porosity;
    double cover = base.geometry.cover();
    double diameter = 2.0 * base.geometry.rebar_radius;
    for (std::size_t a = 0; a < axes.size(); ++a) {
        switch (axes[a].quantity) {
            case AxisQuantity::Porosity: porosity = coords[a]; break;
            case AxisQuantity::DryDensity:
                porosity = porosity_from_density(coords[a],
                                                 base.concrete.solid_density);
                break;
            case AxisQuantity::Cover: cover = coords[a]; break;
            case AxisQuantity::RebarDiameter: diameter = coords[a]; break;
        }
    }
    ParameterSet p = base;
    p.concrete.porosity = porosity;
    p.geometry.rebar_radius = 0.5 * diameter;
    p.geometry.outer_radius = 0.5 * diameter + cover;
    return p;
}

} // namespace

SweepResult run_sweep(const SweepGrid& grid, const ParameterSet& params,
                      int workers) {
    grid.validate();
    params.validate();

    std::vector<std::vector<double>> axis_values;
    for (const auto& a : grid.axes) axis_values.push_back(a.values());

    SweepResult result;
    result.grid = grid;
    result.cells.resize(grid.cell_count());

    run_indexed(result.cells.size(), workers, [&](std::size_t idx) {
        // row-major decode, last axis fastest
        std::vector<double> coords(grid.axes.size());
        std::size_t rem = idx;
        for (std::size_t a = grid.axes.size(); a-- > 0;) {
            const std::size_t n = axis_values[a].size();
            coords[a] = axis_values[a][rem % n];
            rem /= n;
        }
        SafetyCell& cell = result.cells[idx];
        cell.coords = coords;
        try {
            ParameterSet p = cell_params(params, grid.axes, coords);
            SimulationOutcome out = run_simulation(p);
            switch (out.termination) {
                case Termination::ReachedCriterion:
                    cell.t_crit = out.t_crit;
                    cell.T_crit = out.T_crit;
                    cell.classification = *out.t_crit >= grid.threshold
                                              ? SafetyClass::AtRiskConcealed
                                              : SafetyClass::CracksFirst;
                    break;
                case Termination::HorizonExhausted:
                    cell.classification = SafetyClass::Undetermined;
                    break;
                case Termination::Error:
                    cell.classification = SafetyClass::Error;
                    cell.message = out.message;
                    break;
            }
        } catch (const std::exception& e) {
            cell.classification = SafetyClass::Error;
            cell.message = e.what();
        }
    });

    for (const auto& c : result.cells)
        if (c.classification == SafetyClass::Error) ++result.error_count;
    return result;
}

ExponentialFit exponential_fit(const std::vector<double>& phi,
                               const std::vector<double>& t_crit) {
    if (phi.size() != t_crit.size())
        throw ValidationError("exponential_fit: size mismatch");
    if (phi.size() < 3)
        throw ValidationError("exponential_fit: needs at least 3 points");
    std::vector<double> ln_t;
    ln_t.reserve(t_crit.size());
    for (double t : t_crit) {
        if (t <= 0.0)
            throw ValidationError("exponential_fit: t_crit must be positive");
        ln_t.push_back(std::log(t));
    }
    LinearFit fit;
    try {
        fit = fit_line(phi, ln_t);
    } catch (const SolverError&) {
        throw ValidationError(
            "exponential_fit: degenerate porosity values (all equal)");
    }
    return {std::exp(fit.intercept), fit.slope, fit.r_squared};
}

namespace {

struct AxisDisplay {
    std::string header;
    double factor; // SI -> display
};

AxisDisplay axis_display(AxisQuantity q) {
    switch (q) {
        case AxisQuantity::Porosity: return {"phi", 1.0};
        case AxisQuantity::DryDensity: return {"rho_dry_kg_m3", 1.0};
        case AxisQuantity::Cover: return {"cover_mm", 1e3};
        case AxisQuantity::RebarDiameter: return {"diameter_mm", 1e3};
    }
    return {"?", 1.0};
}

} // namespace

void write_safety_map_csv(std::ostream& out, const SweepResult& result,
                          const ParameterSet& params) {
    out << "# corrosim " << version << "\n";
    out << "# params " << to_json(params).dump() << "\n";
    out << "# threshold_m " << fmt_double(result.grid.threshold) << "\n";
    std::vector<AxisDisplay> disp;
    for (std::size_t a = 0; a < result.grid.axes.size(); ++a) {
        disp.push_back(axis_display(result.grid.axes[a].quantity));
        out << disp.back().header << ',';
    }
    out << "t_crit_um,T_crit_years,class\n";
    for (const auto& cell : result.cells) {
        for (std::size_t a = 0; a < cell.coords.size(); ++a)
            out << fmt_double(cell.coords[a] * disp[a].factor) << ',';
        if (cell.t_crit)
            out << fmt_double(*cell.t_crit * 1e6);
        out << ',';
        if (cell.T_crit)
            out << fmt_double(*cell.T_crit / (365.25 * 86400.0));
        out << ',' << to_string(cell.classification) << '\n';
    }
}

nlohmann::json sweep_summary_json(const SweepResult& result,
                                  const ParameterSet& params) {
    nlohmann::json doc;
    doc["version"] = version;

    nlohmann::json axes = nlohmann::json::array();
    for (const auto& a : result.grid.axes)
        axes.push_back({{"name", axis_name(a.quantity)},
                        {"min", a.min},
                        {"max", a.max},
                        {"count", a.count},
                        {"scale", a.log_scale ? "log" : "linear"}});
    doc["grid"] = {{"axes", axes},
                   {"threshold_m", result.grid.threshold}};
    doc["density_porosity_map"] = {
        {"form", "phi = 1 - rho_dry/rho_s"},
        {"rho_s_kg_m3", params.concrete.solid_density}};

    std::map<std::string, int> counts;
    for (const auto& c : result.cells) ++counts[to_string(c.classification)];
    doc["classification_counts"] = counts;
    doc["error_count"] = result.error_count;

    // exponential fits along the porosity (or density-derived) axis
    int phi_axis = -1;
    for (std::size_t a = 0; a < result.grid.axes.size(); ++a) {
        const auto q = result.grid.axes[a].quantity;
        if (q == AxisQuantity::Porosity || q == AxisQuantity::DryDensity)
            phi_axis = static_cast<int>(a);
    }
    nlohmann::json fits = nlohmann::json::array();
    if (phi_axis >= 0 && result.grid.axes[phi_axis].count >= 3) {
        std::vector<std::size_t> strides(result.grid.axes.size(), 1);
        for (std::size_t a = result.grid.axes.size() - 1; a-- > 0;)
            strides[a] = strides[a + 1] *
                         static_cast<std::size_t>(
                             result.grid.axes[a + 1].count);
        const std::size_t phi_count =
            static_cast<std::size_t>(result.grid.axes[phi_axis].count);
        const std::size_t lines = result.cells.size() / phi_count;
        for (std::size_t line = 0; line < lines; ++line) {
            // base index of this line: distribute `line` over non-phi axes
            std::size_t base = 0, rem = line;
            for (std::size_t a = result.grid.axes.size(); a-- > 0;) {
                if (static_cast<int>(a) == phi_axis) continue;
                const std::size_t n =
                    static_cast<std::size_t>(result.grid.axes[a].count);
                base += (rem % n) * strides[a];
                rem /= n;
            }
            std::vector<double> phis, tcrits;
            nlohmann::json fixed = nlohmann::json::object();
            for (std::size_t i = 0; i < phi_count; ++i) {
                const auto& cell =
                    result.cells[base + i * strides[phi_axis]];
                if (!cell.t_crit) continue;
                double phi = cell.coords[phi_axis];
                if (result.grid.axes[phi_axis].quantity ==
                    AxisQuantity::DryDensity)
                    phi = porosity_from_density(
                        phi, params.concrete.solid_density);
                phis.push_back(phi);
                tcrits.push_back(*cell.t_crit);
                for (std::size_t a = 0; a < cell.coords.size(); ++a)
                    if (static_cast<int>(a) != phi_axis)
                        fixed[axis_name(result.grid.axes[a].quantity)] =
                            cell.coords[a];
            }
            if (phis.size() < 3) continue;
            try {
                ExponentialFit f = exponential_fit(phis, tcrits);
                fits.push_back({{"fixed", fixed},
                                {"points", phis.size()},
                                {"prefactor_m", f.prefactor},
                                {"growth_rate", f.growth_rate},
                                {"r_squared", f.r_squared}});
            } catch (const ValidationError&) {
                // degenerate line, skip
            }
        }
    }
    doc["exponential_fits"] = fits;
    doc["params"] = to_json(params);
    return doc;
}

SweepGrid sweep_grid_from_json(const nlohmann::json& doc) {
    if (!doc.contains("sweep"))
        throw ConfigError(
            "config has no 'sweep' section (required by the sweep command)");
    const nlohmann::json& sw = doc.at("sweep");

    auto quantity_value = [](const nlohmann::json& v, units::Dim dim,
                             const std::string& field) {
        if (v.is_number()) return v.get<double>();
        if (v.is_string())
            return units::parse_quantity_string(v.get<std::string>(), dim,
                                                field);
        throw ConfigError(field + ": expected a number or 'value unit'");
    };

    SweepGrid grid;
    if (sw.contains("threshold"))
        grid.threshold = quantity_value(sw.at("threshold"),
                                        units::Dim::Length,
                                        "sweep.threshold");
    if (!sw.contains("axes") || !sw.at("axes").is_array())
        throw ConfigError("sweep.axes must be an array");
    for (const auto& a : sw.at("axes")) {
        AxisSpec spec;
        const std::string name = a.value("name", "");
        units::Dim dim = units::Dim::Dimensionless;
        if (name == "porosity" || name == "phi") {
            spec.quantity = AxisQuantity::Porosity;
        } else if (name == "rho_dry" || name == "dry_density") {
            spec.quantity = AxisQuantity::DryDensity;
            dim = units::Dim::MassDensity;
        } else if (name == "cover") {
            spec.quantity = AxisQuantity::Cover;
            dim = units::Dim::Length;
        } else if (name == "rebar_diameter" || name == "diameter") {
            spec.quantity = AxisQuantity::RebarDiameter;
            dim = units::Dim::Length;
        } else {
            throw ConfigError("sweep axis name '" + name +
                              "' is not one of porosity|rho_dry|cover|"
                              "rebar_diameter");
        }
        if (!a.contains("min") || !a.contains("max"))
            throw ConfigError("sweep axis '" + name +
                              "' requires min and max");
        spec.min = quantity_value(a.at("min"), dim, "sweep axis min");
        spec.max = quantity_value(a.at("max"), dim, "sweep axis max");
        spec.count = a.value("count", 2);
        const std::string scale = a.value("scale", "linear");
        if (scale == "log")
            spec.log_scale = true;
        else if (scale != "linear")
            throw ConfigError("sweep axis scale must be linear or log");
        grid.axes.push_back(spec);
    }
    grid.validate();
    return grid;
}

} // namespace corrosim
