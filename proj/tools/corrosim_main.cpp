#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "corrosim/calibration.hpp"
#include "corrosim/errors.hpp"
#include "corrosim/io_util.hpp"
#include "corrosim/mechanics.hpp"
#include "corrosim/params.hpp"
#include "corrosim/simulator.hpp"
#include "corrosim/sweep.hpp"
#include "corrosim/transport.hpp"
#include "corrosim/version.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// Exit codes (also listed in the README):
//   0 success, 1 self-test/generic failure, 2 configuration error,
//   3 I/O error, 4 dataset error, 5 solver error
constexpr int kExitOk = 0;
constexpr int kExitFail = 1;
constexpr int kExitConfig = 2;
constexpr int kExitIo = 3;
constexpr int kExitDataset = 4;
constexpr int kExitSolver = 5;

struct CommonArgs {
    std::string config_path;
    std::string out_dir = ".";
    std::vector<std::string> overrides;
    int workers = 0;
    bool verbose = false;
};

void add_common(CLI::App* cmd, CommonArgs& args, bool config_required) {
    auto* c = cmd->add_option("--config", args.config_path,
                              "configuration file (JSON)");
    if (config_required) c->required();
    cmd->add_option("--out", args.out_dir, "output directory");
    cmd->add_option("--set", args.overrides,
                    "override a config key, e.g. concrete.porosity=0.6");
    cmd->add_option("--workers", args.workers,
                    "worker threads for the sweep (0 = hardware)");
    cmd->add_flag("-v,--verbose", args.verbose, "progress on stderr");
}

json load_raw_config(const CommonArgs& args) {
    json doc = json::object();
    if (!args.config_path.empty()) {
        std::ifstream in(args.config_path);
        if (!in)
            throw corrosim::ConfigError("cannot open config file '" +
                                        args.config_path + "'");
        try {
            doc = json::parse(in);
        } catch (const json::parse_error& e) {
            throw corrosim::ConfigError("config parse failure in '" +
                                        args.config_path + "': " + e.what());
        }
    }
    for (const auto& ov : args.overrides) {
        auto eq = ov.find('=');
        if (eq == std::string::npos)
            throw corrosim::ConfigError("override '" + ov +
                                        "' is not of the form key=value");
        corrosim::apply_override(doc, ov.substr(0, eq), ov.substr(eq + 1));
    }
    return doc;
}

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::ios_base::failure("cannot open '" + path.string() +
                                           "' for writing");
    out << content;
    if (!out) throw std::ios_base::failure("write failed on '" +
                                           path.string() + "'");
}

int cmd_simulate(const CommonArgs& args) {
    json raw = load_raw_config(args);
    corrosim::ParameterSet params = corrosim::config_from_json(raw);
    if (args.verbose)
        std::cerr << "simulate: horizon " << params.solver.t_cor_max
                  << " m, step cap " << params.solver.dt_cor_max << " m\n";

    auto t0 = std::chrono::steady_clock::now();
    corrosim::SimulationOutcome out = corrosim::run_simulation(params);
    if (args.verbose) {
        auto ms = std::chrono::duration<double, std::milli>(
                      std::chrono::steady_clock::now() - t0)
                      .count();
        std::cerr << "simulate: " << out.series.size() << " states in " << ms
                  << " ms\n";
    }

    fs::create_directories(args.out_dir);
    {
        std::ostringstream csv;
        corrosim::write_series_csv(csv, out, params);
        write_file(fs::path(args.out_dir) / "series.csv", csv.str());
    }
    write_file(fs::path(args.out_dir) / "summary.json",
               corrosim::summary_json(out, params).dump(2) + "\n");

    std::cout << "termination: " << corrosim::to_string(out.termination)
              << "\n";
    if (out.t_crit)
        std::cout << "t_crit: " << corrosim::fmt_double(*out.t_crit * 1e6)
                  << " um\nT_crit: "
                  << corrosim::fmt_double(*out.T_crit / (365.25 * 86400.0))
                  << " years\n";
    if (out.termination == corrosim::Termination::Error) {
        std::cerr << "error: " << out.message << "\n";
        return kExitSolver;
    }
    return kExitOk;
}

int cmd_sweep(const CommonArgs& args) {
    json raw = load_raw_config(args);
    corrosim::ParameterSet params = corrosim::config_from_json(raw);
    corrosim::SweepGrid grid = corrosim::sweep_grid_from_json(raw);
    int workers = args.workers;
    if (workers == 0 && raw.contains("sweep") &&
        raw.at("sweep").contains("workers"))
        workers = raw.at("sweep").at("workers").get<int>();

    if (args.verbose)
        std::cerr << "sweep: " << grid.cell_count() << " cells, workers="
                  << workers << "\n";
    corrosim::SweepResult result = corrosim::run_sweep(grid, params, workers);

    fs::create_directories(args.out_dir);
    {
        std::ostringstream csv;
        corrosim::write_safety_map_csv(csv, result, params);
        write_file(fs::path(args.out_dir) / "safety_map.csv", csv.str());
    }
    write_file(fs::path(args.out_dir) / "sweep_summary.json",
               corrosim::sweep_summary_json(result, params).dump(2) + "\n");

    std::cout << "cells: " << result.cells.size() << "\n";
    if (result.error_count > 0)
        std::cerr << "warning: " << result.error_count
                  << " cell(s) failed; see class=error rows\n";
    return kExitOk;
}

int cmd_calibrate(const CommonArgs& args) {
    json raw = load_raw_config(args);
    corrosim::ParameterSet params = corrosim::config_from_json(raw);
    if (!raw.contains("calibration") ||
        !raw.at("calibration").contains("dataset"))
        throw corrosim::ConfigError(
            "calibrate requires calibration.dataset in the config (path to "
            "the CSV dataset); set it via --set calibration.dataset=...");
    const json& cal = raw.at("calibration");

    corrosim::CalibrationOptions opts;
    opts.m_min = cal.value("m_min", opts.m_min);
    opts.m_max = cal.value("m_max", opts.m_max);
    opts.fit_rate_multiplier =
        cal.value("fit_rate_multiplier", opts.fit_rate_multiplier);
    opts.rate_multiplier_min =
        cal.value("rate_multiplier_min", opts.rate_multiplier_min);
    opts.rate_multiplier_max =
        cal.value("rate_multiplier_max", opts.rate_multiplier_max);
    opts.workers = args.workers;

    auto records =
        corrosim::load_dataset(cal.at("dataset").get<std::string>());
    if (args.verbose)
        std::cerr << "calibrate: " << records.size() << " records, m in ["
                  << opts.m_min << ", " << opts.m_max << "]\n";

    corrosim::CalibrationResult fit =
        corrosim::fit_exponent(records, params, opts);

    json doc;
    doc["version"] = corrosim::version;
    doc["m"] = fit.m;
    if (fit.rate_multiplier) doc["rate_multiplier"] = *fit.rate_multiplier;
    doc["objective"] = fit.objective;
    doc["residuals_ln"] = fit.residuals;
    doc["skipped_records"] = fit.skipped_records;
    doc["evaluations"] = fit.trace.size();
    doc["params"] = corrosim::to_json(params);

    fs::create_directories(args.out_dir);
    write_file(fs::path(args.out_dir) / "calibration.json",
               doc.dump(2) + "\n");

    std::cout << "m: " << corrosim::fmt_double(fit.m) << "\n";
    if (fit.rate_multiplier)
        std::cout << "rate_multiplier: "
                  << corrosim::fmt_double(*fit.rate_multiplier) << "\n";
    for (std::size_t i : fit.skipped_records)
        std::cerr << "warning: record " << i
                  << " never reaches the criterion; excluded\n";
    return kExitOk;
}

bool nearly(double a, double b, double rel) {
    return std::abs(a - b) <= rel * std::max(std::abs(a), std::abs(b));
}

int cmd_check(const CommonArgs& args) {
    json raw = load_raw_config(args);
    corrosim::ParameterSet params = corrosim::config_from_json(raw);

    std::cout << "corrosim " << corrosim::version
              << " -- resolved parameter ledger\n";
    std::cout << "  [key] = value (origin; default provenance)\n";
    const json echo = corrosim::to_json(params);
    for (const auto& entry : corrosim::default_ledger()) {
        const auto it = params.provenance.find(entry.key);
        const std::string origin =
            it != params.provenance.end() ? it->second : "default";
        const auto dot = entry.key.find('.');
        const json& v = echo.at(entry.key.substr(0, dot))
                            .at(entry.key.substr(dot + 1));
        std::cout << "  " << entry.key << " = " << v.dump() << " ["
                  << corrosim::units::si_unit(entry.dim) << "] (" << origin
                  << "; " << entry.provenance << ")\n";
    }

    // fast self-test battery
    const bool tamper = std::getenv("CORROSIM_SELFTEST_TAMPER") != nullptr;
    int failures = 0;
    auto report = [&](const char* name, bool ok) {
        std::cout << (ok ? "  [ok]   " : "  [FAIL] ") << name << "\n";
        if (!ok) ++failures;
    };

    std::cout << "self-tests:\n";
    {
        const double kf0 = corrosim::flux_reduction_coefficient(
            0.0, params.concrete, params.rust);
        report("k_f(0) = 1", kf0 == 1.0);

        double prev = kf0;
        bool monotone = true;
        for (int i = 1; i <= 32; ++i) {
            const double kf = corrosim::flux_reduction_coefficient(
                i * 2e-5, params.concrete, params.rust);
            if (kf >= prev) monotone = false;
            prev = kf;
        }
        report("k_f strictly decreasing in t_cor", monotone);

        // e^{-A_r} identity in the D_r = D_c, large-A_c limit
        corrosim::ConcreteParams c = params.concrete;
        corrosim::RustParams r = params.rust;
        c.porosity = 0.5;
        c.diffusivity_exponent = 0.0;
        c.water_diffusivity = r.diffusivity;
        c.transport_depth = 1.0;
        const double k_sum = r.rate_sum();
        const double t1 = std::sqrt(r.diffusivity / k_sum); // A_r = 1
        double kf1 = corrosim::flux_reduction_coefficient(t1, c, r);
        if (tamper) kf1 *= 1.001;
        report("k_f = e^{-A_r} in the matched-diffusivity limit",
               nearly(kf1, std::exp(-1.0), 1e-9));

        const double huge = 1e4 * t1;
        const double kf_huge =
            corrosim::flux_reduction_coefficient(huge, c, r);
        report("k_f finite at A_r = 1e4",
               std::isfinite(kf_huge) && kf_huge >= 0.0 && kf_huge <= 1.0);
    }
    {
        const double p0 =
            corrosim::crack_initiation_pressure(params.geometry,
                                                params.concrete);
        auto field = corrosim::elastic_lame(0.5 * p0, params.geometry,
                                            params.concrete, 200);
        const double ri2 =
            params.geometry.rebar_radius * params.geometry.rebar_radius;
        const double ro2 =
            params.geometry.outer_radius * params.geometry.outer_radius;
        const double hoop_expected =
            0.5 * p0 * (ro2 + ri2) / (ro2 - ri2);
        report("Lame hoop stress at the rebar",
               nearly(field.sigma_theta.front(), hoop_expected, 1e-12));
        report("Lame traction-free outer boundary",
               field.sigma_r.back() == 0.0);
    }
    {
        const double p_lim =
            corrosim::limit_pressure(params.geometry, params.concrete);
        const auto pt = corrosim::cracked_point(
            params.geometry.outer_radius, params.geometry, params.concrete);
        report("full-wall cracked solution reaches p_lim",
               nearly(pt.p, p_lim, 1e-12));
        const auto p0_pt = corrosim::cracked_point(
            params.geometry.rebar_radius, params.geometry, params.concrete);
        report("collapsed cracked zone recovers the elastic limit",
               nearly(p0_pt.p,
                      corrosim::crack_initiation_pressure(params.geometry,
                                                          params.concrete),
                      1e-12));
    }

    if (failures > 0) {
        std::cerr << failures << " self-test(s) failed\n";
        return kExitFail;
    }
    std::cout << "all self-tests passed\n";
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"corrosim -- corrosion-induced cracking and concealment "
                 "simulator for porous reinforced concrete"};
    app.set_version_flag("--version", corrosim::version);
    app.require_subcommand(1);

    CommonArgs sim_args, sweep_args, cal_args, check_args;
    auto* sim = app.add_subcommand(
        "simulate", "run one simulation; writes series.csv + summary.json");
    add_common(sim, sim_args, true);
    auto* swp = app.add_subcommand(
        "sweep",
        "run a parameter grid; writes safety_map.csv + sweep_summary.json");
    add_common(swp, sweep_args, true);
    auto* cal = app.add_subcommand(
        "calibrate",
        "fit the diffusivity exponent; writes calibration.json");
    add_common(cal, cal_args, true);
    auto* chk = app.add_subcommand(
        "check", "validate config, print the parameter ledger, self-test");
    add_common(chk, check_args, false);

    CLI11_PARSE(app, argc, argv);

    try {
        if (sim->parsed()) return cmd_simulate(sim_args);
        if (swp->parsed()) return cmd_sweep(sweep_args);
        if (cal->parsed()) return cmd_calibrate(cal_args);
        if (chk->parsed()) return cmd_check(check_args);
    } catch (const corrosim::DatasetError& e) {
        std::cerr << "dataset error: " << e.what() << "\n";
        return kExitDataset;
    } catch (const corrosim::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const corrosim::SolverError& e) {
        std::cerr << "solver error: " << e.what() << "\n";
        return kExitSolver;
    } catch (const std::ios_base::failure& e) {
        std::cerr << "i/o error: " << e.what() << "\n";
        return kExitIo;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitFail;
    }
    return kExitFail;
}
