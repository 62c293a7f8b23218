#include "corrosim/units.hpp"

#include <array>
#include <cstdlib>
#include <string>

#include "corrosim/errors.hpp"

namespace corrosim::units {

namespace {

struct UnitEntry {
    const char* token;
    double factor;
};

// One Julian year = 365.25 days; "year" tokens use this throughout.
constexpr double kYear = 365.25 * 86400.0;

constexpr std::array kLength = {
    UnitEntry{"m", 1.0},    UnitEntry{"cm", 1e-2},
    UnitEntry{"mm", 1e-3},  UnitEntry{"um", 1e-6},
    UnitEntry{"nm", 1e-9},
};
constexpr std::array kPressure = {
    UnitEntry{"Pa", 1.0},  UnitEntry{"kPa", 1e3},
    UnitEntry{"MPa", 1e6}, UnitEntry{"GPa", 1e9},
};
constexpr std::array kTime = {
    UnitEntry{"s", 1.0},        UnitEntry{"min", 60.0},
    UnitEntry{"h", 3600.0},     UnitEntry{"hour", 3600.0},
    UnitEntry{"d", 86400.0},    UnitEntry{"day", 86400.0},
    UnitEntry{"yr", kYear},     UnitEntry{"year", kYear},
    UnitEntry{"years", kYear},
};
constexpr std::array kCurrentDensity = {
    UnitEntry{"A/m2", 1.0},     UnitEntry{"mA/m2", 1e-3},
    UnitEntry{"uA/m2", 1e-6},   UnitEntry{"A/cm2", 1e4},
    UnitEntry{"mA/cm2", 10.0},  UnitEntry{"uA/cm2", 1e-2},
};
constexpr std::array kDiffusivity = {
    UnitEntry{"m2/s", 1.0},   UnitEntry{"cm2/s", 1e-4},
    UnitEntry{"mm2/s", 1e-6}, UnitEntry{"um2/s", 1e-12},
};
constexpr std::array kMassDensity = {
    UnitEntry{"kg/m3", 1.0},
    UnitEntry{"g/cm3", 1e3},
    UnitEntry{"t/m3", 1e3},
};
constexpr std::array kMolarMass = {
    UnitEntry{"kg/mol", 1.0},
    UnitEntry{"g/mol", 1e-3},
};
constexpr std::array kConcentration = {
    UnitEntry{"mol/m3", 1.0},
    UnitEntry{"mol/L", 1e3},
    UnitEntry{"mmol/L", 1.0},
};
constexpr std::array kRate = {
    UnitEntry{"1/s", 1.0},
    UnitEntry{"1/h", 1.0 / 3600.0},
    UnitEntry{"1/day", 1.0 / 86400.0},
    UnitEntry{"1/year", 1.0 / kYear},
};
constexpr std::array kRateSecondOrder = {
    UnitEntry{"m3/(mol*s)", 1.0}, UnitEntry{"m3/(mol s)", 1.0},
    UnitEntry{"m3/mol/s", 1.0},   UnitEntry{"L/(mol*s)", 1e-3},
    UnitEntry{"L/(mol s)", 1e-3}, UnitEntry{"L/mol/s", 1e-3},
};

template <std::size_t N>
const UnitEntry* lookup(const std::array<UnitEntry, N>& table,
                        std::string_view token) {
    for (const auto& e : table)
        if (token == e.token) return &e;
    return nullptr;
}

} // namespace

const char* si_unit(Dim dim) {
    switch (dim) {
        case Dim::Dimensionless: return "-";
        case Dim::Length: return "m";
        case Dim::Pressure: return "Pa";
        case Dim::Time: return "s";
        case Dim::CurrentDensity: return "A/m2";
        case Dim::Diffusivity: return "m2/s";
        case Dim::MassDensity: return "kg/m3";
        case Dim::MolarMass: return "kg/mol";
        case Dim::Concentration: return "mol/m3";
        case Dim::Rate: return "1/s";
        case Dim::RateSecondOrder: return "m3/(mol*s)";
    }
    return "?";
}

double si_factor(Dim dim, std::string_view token) {
    const UnitEntry* e = nullptr;
    switch (dim) {
        case Dim::Dimensionless:
            if (token == "-" || token.empty()) return 1.0;
            break;
        case Dim::Length: e = lookup(kLength, token); break;
        case Dim::Pressure: e = lookup(kPressure, token); break;
        case Dim::Time: e = lookup(kTime, token); break;
        case Dim::CurrentDensity: e = lookup(kCurrentDensity, token); break;
        case Dim::Diffusivity: e = lookup(kDiffusivity, token); break;
        case Dim::MassDensity: e = lookup(kMassDensity, token); break;
        case Dim::MolarMass: e = lookup(kMolarMass, token); break;
        case Dim::Concentration: e = lookup(kConcentration, token); break;
        case Dim::Rate: e = lookup(kRate, token); break;
        case Dim::RateSecondOrder: e = lookup(kRateSecondOrder, token); break;
    }
    if (!e)
        throw UnitError("unknown unit token '" + std::string(token) +
                        "' (expected a unit of " + si_unit(dim) + ")");
    return e->factor;
}

double parse_quantity_string(std::string_view text, Dim dim,
                             std::string_view field) {
    std::string s(text);
    const char* begin = s.c_str();
    char* end = nullptr;
    double value = std::strtod(begin, &end);
    if (end == begin)
        throw UnitError(std::string(field) + ": cannot parse quantity '" + s +
                        "'");
    std::string_view rest(end);
    while (!rest.empty() && (rest.front() == ' ' || rest.front() == '\t'))
        rest.remove_prefix(1);
    while (!rest.empty() && (rest.back() == ' ' || rest.back() == '\t'))
        rest.remove_suffix(1);
    if (rest.empty())
        throw UnitError(std::string(field) +
                        ": quantity string requires a unit token (got '" + s +
                        "'); use a plain number for SI values");
    try {
        return to_si(value, rest, dim);
    } catch (const UnitError& e) {
        throw UnitError(std::string(field) + ": " + e.what());
    }
}

} // namespace corrosim::units
