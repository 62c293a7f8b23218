#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "corrosim/numerics.hpp"
#include "corrosim/params.hpp"

namespace corrosim {

enum class AxisQuantity {
    Porosity,     // phi, dimensionless
    DryDensity,   // rho_dry, kg/m3 (mapped to phi via the linear map)
    Cover,        // m
    RebarDiameter // m
};

const char* axis_name(AxisQuantity q);

struct AxisSpec {
    AxisQuantity quantity = AxisQuantity::Porosity;
    double min = 0.0; // SI
    double max = 0.0; // SI
    int count = 2;
    bool log_scale = false;

    std::vector<double> values() const;
};

struct SweepGrid {
    std::vector<AxisSpec> axes;      // 1 to 3 axes
    double threshold = 100e-6;       // t_crit classification threshold, m

    void validate() const;
    std::size_t cell_count() const;
};

enum class SafetyClass {
    AtRiskConcealed, // t_crit >= threshold: cracks warn too late
    CracksFirst,     // t_crit < threshold: surface cracking precedes risk
    Undetermined,    // horizon exhausted without criterion
    Error,
};

const char* to_string(SafetyClass c);

struct SafetyCell {
    std::vector<double> coords;     // SI, one per axis
    std::optional<double> t_crit;   // m
    std::optional<double> T_crit;   // s
    SafetyClass classification = SafetyClass::Error;
    std::string message;            // set for Error cells
};

struct SweepResult {
    SweepGrid grid;
    std::vector<SafetyCell> cells;  // row-major over axes, last axis fastest
    std::size_t error_count = 0;
};

// One simulation per grid cell, executed concurrently over a work queue;
// cell ordering in the result is row-major and independent of scheduling.
// Per-cell failures are recorded in the cell, never aborting the sweep.
SweepResult run_sweep(const SweepGrid& grid, const ParameterSet& params,
                      int workers = 0);

// Least-squares fit of ln(t_crit) against phi: t_crit ~ prefactor *
// exp(growth_rate * phi).
struct ExponentialFit {
    double prefactor = 0.0;
    double growth_rate = 0.0;
    double r_squared = 0.0;
};

ExponentialFit exponential_fit(const std::vector<double>& phi,
                               const std::vector<double>& t_crit);

// Safety-map CSV: one column per axis (named, display units), then
// t_crit_um,T_crit_years,class.
void write_safety_map_csv(std::ostream& out, const SweepResult& result,
                          const ParameterSet& params);

// Grid spec, parameter echo and per-line exponential fits (taken along the
// porosity/density axis at each combination of the remaining axes).
nlohmann::json sweep_summary_json(const SweepResult& result,
                                  const ParameterSet& params);

// Reads the "sweep" config section:
//   {"threshold": "100 um",
//    "axes": [{"name": "porosity", "min": 0.1, "max": 0.8,
//              "count": 10, "scale": "linear"}, ...]}
SweepGrid sweep_grid_from_json(const nlohmann::json& doc);

} // namespace corrosim
