#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "corrosim/params.hpp"

namespace corrosim {

struct CalibrationRecord {
    double porosity = 0.0;       // phi
    double cover = 0.0;          // m
    double rebar_diameter = 0.0; // m
    double current_density = 0.0;// i_a, A/m2
    double t_crit_observed = 0.0;// m
    double weight = 1.0;

    void validate(std::size_t index) const;
};

struct CalibrationResult {
    double m = 0.0;
    std::optional<double> rate_multiplier; // set when co-fitted
    double objective = 0.0;                // sum of squared log-residuals
    std::vector<double> residuals;         // ln t_sim - ln t_obs per record
    // (m, objective) pairs in evaluation order, concatenated over starts
    std::vector<std::pair<double, double>> trace;
    std::vector<std::size_t> skipped_records; // horizon-exhausted, excluded
};

struct CalibrationOptions {
    double m_min = 0.5;
    double m_max = 6.0;
    // relative tolerance on m: search stops at x_tol = m_tol * (1 + m)
    double m_tol = 1e-4;
    bool fit_rate_multiplier = false;
    double rate_multiplier_min = 0.1;
    double rate_multiplier_max = 10.0;
    int workers = 0; // 0 = hardware concurrency
};

// Least-squares fit of the diffusivity exponent m (optionally nested with a
// multiplicative factor on the reaction-rate sum) against observed critical
// penetrations. The objective sums w * (ln t_sim - ln t_obs)^2 over records;
// log residuals keep high-porosity records from dominating and make the fit
// invariant to the unit t_crit is recorded in. Golden-section search from
// three sub-bracket starts; each objective evaluation simulates all records.
CalibrationResult fit_exponent(const std::vector<CalibrationRecord>& records,
                               const ParameterSet& base,
                               const CalibrationOptions& options = {});

// CSV dataset, header: phi,cover_mm,diameter_mm,ia_uA_cm2,tcrit_um[,weight]
// (tcrit_m accepted in place of tcrit_um). Errors cite the offending line.
std::vector<CalibrationRecord> load_dataset(
    const std::filesystem::path& path);

} // namespace corrosim
