#pragma once

#include <string>
#include <string_view>

namespace corrosim::units {

// Physical dimension of a configuration field. Internal storage is strictly
// SI (m, s, Pa, mol, A, kg); user-facing values may carry a unit token.
enum class Dim {
    Dimensionless,
    Length,
    Pressure,
    Time,
    CurrentDensity,
    Diffusivity,
    MassDensity,
    MolarMass,
    Concentration,
    Rate,            // 1/s
    RateSecondOrder, // m3/(mol s)
};

const char* si_unit(Dim dim);

// Multiplier that converts one `token` of `dim` into the SI unit.
// Throws UnitError for unknown tokens or tokens of the wrong dimension.
double si_factor(Dim dim, std::string_view token);

inline double to_si(double value, std::string_view token, Dim dim) {
    return value * si_factor(dim, token);
}

// Parses "<number> <unit>" (e.g. "30 mm", "1 uA/cm2") into an SI value.
// `field` is used verbatim in error messages.
double parse_quantity_string(std::string_view text, Dim dim,
                             std::string_view field);

} // namespace corrosim::units
