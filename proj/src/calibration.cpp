#include "corrosim/calibration.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>

#include "corrosim/errors.hpp"
#include "corrosim/numerics.hpp"
#include "corrosim/parallel.hpp"
#include "corrosim/simulator.hpp"

namespace corrosim {

void CalibrationRecord::validate(std::size_t index) const {
    auto fail = [&](const std::string& what) {
        throw DatasetError("record " + std::to_string(index) + ": " + what);
    };
    if (!(porosity > 0.0 && porosity < 1.0))
        fail("porosity must lie strictly inside (0, 1)");
    if (cover <= 0.0) fail("cover must be positive");
    if (rebar_diameter <= 0.0) fail("rebar diameter must be positive");
    if (current_density <= 0.0) fail("current density must be positive");
    if (t_crit_observed <= 0.0) fail("observed t_crit must be positive");
    if (weight <= 0.0) fail("weight must be positive");
}

namespace {

ParameterSet instantiate(const ParameterSet& base,
                         const CalibrationRecord& rec, double m,
                         double rate_multiplier) {
    ParameterSet p = base;
    p.concrete.porosity = rec.porosity;
    p.concrete.diffusivity_exponent = m;
    p.geometry.rebar_radius = 0.5 * rec.rebar_diameter;
    p.geometry.outer_radius = p.geometry.rebar_radius + rec.cover;
    p.steel.corrosion_current_density = rec.current_density;
    p.rust.rate_precipitation *= rate_multiplier;
    p.rust.rate_oxidation *= rate_multiplier;
    return p;
}

// Simulated t_crit for every record; nullopt where the horizon is exhausted.
std::vector<std::optional<double>> simulate_all(
    const std::vector<CalibrationRecord>& records, const ParameterSet& base,
    double m, double rate_multiplier, int workers) {
    std::vector<std::optional<double>> t(records.size());
    run_indexed(records.size(), workers, [&](std::size_t i) {
        ParameterSet p = instantiate(base, records[i], m, rate_multiplier);
        SimulationOutcome out = run_simulation(p);
        if (out.termination == Termination::Error)
            throw SolverError("calibration: simulation failed on record " +
                              std::to_string(i) + ": " + out.message);
        if (out.t_crit) t[i] = *out.t_crit;
    });
    return t;
}

} // namespace

CalibrationResult fit_exponent(const std::vector<CalibrationRecord>& records,
                               const ParameterSet& base,
                               const CalibrationOptions& options) {
    if (records.empty())
        throw DatasetError("calibration: empty dataset");
    for (std::size_t i = 0; i < records.size(); ++i)
        records[i].validate(i);
    if (options.m_min < 0.0 || options.m_min >= options.m_max)
        throw ValidationError(
            "calibration: m bounds must satisfy 0 <= m_min < m_max");

    // Records that cannot reach the criterion anywhere in the search box are
    // excluded up front; t_crit is largest at the low-m / low-rate corner,
    // so one probe there decides.
    const double probe_mult =
        options.fit_rate_multiplier ? options.rate_multiplier_min : 1.0;
    auto probe = simulate_all(records, base, options.m_min, probe_mult,
                              options.workers);
    std::vector<std::size_t> active;
    std::vector<std::size_t> skipped;
    for (std::size_t i = 0; i < records.size(); ++i)
        (probe[i] ? active : skipped).push_back(i);
    if (active.empty())
        throw SolverError(
            "calibration: no record reaches the cracking criterion within "
            "the horizon anywhere in the search bounds");

    CalibrationResult result;
    result.skipped_records = skipped;

    auto objective_at = [&](double m, double mult) {
        auto sim = simulate_all(records, base, m, mult, options.workers);
        double obj = 0.0;
        for (std::size_t i : active) {
            if (!sim[i])
                throw SolverError(
                    "calibration: record " + std::to_string(i) +
                    " exhausted the horizon during the search (m = " +
                    std::to_string(m) + ")");
            const double r =
                std::log(*sim[i]) - std::log(records[i].t_crit_observed);
            obj += records[i].weight * r * r;
        }
        return obj;
    };

    auto objective_m = [&](double m) {
        if (!options.fit_rate_multiplier) {
            double obj = objective_at(m, 1.0);
            result.trace.emplace_back(m, obj);
            return obj;
        }
        // nested search over the rate multiplier (log-spaced)
        const double lo = std::log(options.rate_multiplier_min);
        const double hi = std::log(options.rate_multiplier_max);
        MinResult inner = golden_section_min(
            [&](double lg) { return objective_at(m, std::exp(lg)); }, lo, hi,
            1e-4 * (1.0 + std::abs(lo) + std::abs(hi)));
        result.trace.emplace_back(m, inner.fx);
        return inner.fx;
    };

    // three overlapping sub-brackets guard against local dips
    const double w = options.m_max - options.m_min;
    const std::pair<double, double> brackets[3] = {
        {options.m_min, options.m_min + 0.5 * w},
        {options.m_min + 0.25 * w, options.m_min + 0.75 * w},
        {options.m_min + 0.5 * w, options.m_max},
    };
    double best_m = options.m_min;
    double best_obj = std::numeric_limits<double>::infinity();
    for (const auto& [lo, hi] : brackets) {
        const double x_tol = options.m_tol * (1.0 + 0.5 * (lo + hi));
        MinResult r = golden_section_min(objective_m, lo, hi, x_tol);
        if (r.fx < best_obj) {
            best_obj = r.fx;
            best_m = r.x;
        }
    }

    result.m = best_m;
    if (options.fit_rate_multiplier) {
        const double lo = std::log(options.rate_multiplier_min);
        const double hi = std::log(options.rate_multiplier_max);
        MinResult inner = golden_section_min(
            [&](double lg) { return objective_at(best_m, std::exp(lg)); }, lo,
            hi, 1e-4 * (1.0 + std::abs(lo) + std::abs(hi)));
        result.rate_multiplier = std::exp(inner.x);
    }

    const double mult = result.rate_multiplier.value_or(1.0);
    auto sim = simulate_all(records, base, best_m, mult, options.workers);
    result.objective = 0.0;
    result.residuals.assign(records.size(),
                            std::numeric_limits<double>::quiet_NaN());
    for (std::size_t i : active) {
        const double r =
            std::log(*sim[i]) - std::log(records[i].t_crit_observed);
        result.residuals[i] = r;
        result.objective += records[i].weight * r * r;
    }
    return result;
}

namespace {

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur += c;
        }
    }
    out.push_back(cur);
    for (auto& s : out) {
        while (!s.empty() && (s.front() == ' ' || s.front() == '\t'))
            s.erase(s.begin());
        while (!s.empty() && (s.back() == ' ' || s.back() == '\t'))
            s.pop_back();
    }
    return out;
}

double parse_number(const std::string& token, int line_no,
                    const std::string& column) {
    const char* begin = token.c_str();
    char* end = nullptr;
    double v = std::strtod(begin, &end);
    if (end == begin || *end != '\0')
        throw DatasetError("line " + std::to_string(line_no) + ": column '" +
                           column + "' is not a number (got '" + token +
                           "')");
    return v;
}

} // namespace

std::vector<CalibrationRecord> load_dataset(
    const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw DatasetError("cannot open dataset '" + path.string() + "'");

    std::string line;
    int line_no = 0;
    // header
    std::vector<std::string> header;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        header = split_csv(line);
        break;
    }
    const std::vector<std::string> base_um = {"phi", "cover_mm",
                                              "diameter_mm", "ia_uA_cm2",
                                              "tcrit_um"};
    const std::vector<std::string> base_m = {"phi", "cover_mm", "diameter_mm",
                                             "ia_uA_cm2", "tcrit_m"};
    bool tcrit_in_um;
    bool has_weight;
    auto matches = [&](const std::vector<std::string>& want) {
        if (header.size() == want.size())
            return std::equal(want.begin(), want.end(), header.begin());
        if (header.size() == want.size() + 1 && header.back() == "weight")
            return std::equal(want.begin(), want.end(), header.begin());
        return false;
    };
    if (matches(base_um)) {
        tcrit_in_um = true;
    } else if (matches(base_m)) {
        tcrit_in_um = false;
    } else {
        throw DatasetError(
            "line " + std::to_string(line_no) +
            ": header must be phi,cover_mm,diameter_mm,ia_uA_cm2,tcrit_um"
            "[,weight] (tcrit_m accepted in place of tcrit_um)");
    }
    has_weight = header.size() == 6;

    std::vector<CalibrationRecord> records;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        auto cols = split_csv(line);
        const std::size_t expected = has_weight ? 6 : 5;
        if (cols.size() != expected)
            throw DatasetError("line " + std::to_string(line_no) +
                               ": expected " + std::to_string(expected) +
                               " columns, got " + std::to_string(cols.size()));
        CalibrationRecord rec;
        rec.porosity = parse_number(cols[0], line_no, "phi");
        rec.cover = 1e-3 * parse_number(cols[1], line_no, "cover_mm");
        rec.rebar_diameter =
            1e-3 * parse_number(cols[2], line_no, "diameter_mm");
        rec.current_density =
            1e-2 * parse_number(cols[3], line_no, "ia_uA_cm2");
        const double t = parse_number(cols[4], line_no, header[4]);
        rec.t_crit_observed = tcrit_in_um ? 1e-6 * t : t;
        if (has_weight) rec.weight = parse_number(cols[5], line_no, "weight");
        try {
            rec.validate(records.size());
        } catch (const DatasetError& e) {
            throw DatasetError("line " + std::to_string(line_no) + ": " +
                               e.what());
        }
        records.push_back(rec);
    }
    if (records.empty())
        throw DatasetError("dataset '" + path.string() +
                           "' contains no records");
    return records;
}

} // namespace corrosim
