// Acceptance suite: one line per criterion, every tolerance pinned in code.
// Exit status is the number of failed criteria.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "corrosim/calibration.hpp"
#include "corrosim/mechanics.hpp"
#include "corrosim/numerics.hpp"
#include "corrosim/params.hpp"
#include "corrosim/simulator.hpp"
#include "corrosim/sweep.hpp"
#include "corrosim/transport.hpp"

using namespace corrosim;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;

struct Timer {
    std::chrono::steady_clock::time_point t0 =
        std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(
                   std::chrono::steady_clock::now() - t0)
            .count();
    }
};

void report(int criterion, const std::string& what, bool pass,
            const std::string& detail) {
    std::printf("[%s] criterion %2d: %s -- %s\n", pass ? "PASS" : "FAIL",
                criterion, what.c_str(), detail.c_str());
    if (!pass) ++g_failures;
}

double uniform(std::mt19937_64& eng, double lo, double hi) {
    return lo + (hi - lo) * (static_cast<double>(eng() >> 11) * 0x1.0p-53);
}

// ---------------------------------------------------------------------------

void criterion_1_faraday_anchor() {
    Timer timer;
    SteelParams steel;
    steel.molar_mass = 0.05585;
    steel.density = 7870.0;
    steel.electrons = 2.0;
    steel.faraday_constant = 96485.33212;
    steel.corrosion_current_density = 0.01; // 1 uA/cm2

    const double year = 365.25 * 86400.0;
    const double rate_um_per_year = penetration_rate(steel) * year * 1e6;
    const double years_for_100um =
        100e-6 / penetration_rate(steel) / year;

    const bool rate_ok = std::abs(rate_um_per_year - 11.6) <= 0.01 * 11.6;
    const bool years_ok = std::abs(years_for_100um - 8.6) <= 0.1;
    const double elapsed = timer.seconds();
    const bool time_ok = elapsed < 1e-3;

    std::ostringstream os;
    os << "rate = " << rate_um_per_year << " um/year (11.6 +- 1%), 100 um in "
       << years_for_100um << " years (8.6 +- 0.1), " << elapsed * 1e6
       << " us";
    report(1, "Faraday anchor at 1 uA/cm2", rate_ok && years_ok && time_ok,
           os.str());
}

void criterion_2_mechanics_identities() {
    Timer timer;
    ConcreteParams concrete;
    concrete.porosity = 0.3;
    concrete.youngs_modulus = 2e9;
    concrete.poisson_ratio = 0.2;
    concrete.tensile_strength = 0.5e6;
    concrete.water_diffusivity = 7.19e-10;
    concrete.diffusivity_exponent = 4.0;
    concrete.transport_depth = 5e-3;
    concrete.solid_density = 2550.0;

    std::mt19937_64 eng(20240811ull);
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
        Geometry g;
        g.rebar_radius = uniform(eng, 2e-3, 25e-3);
        g.outer_radius = g.rebar_radius + uniform(eng, 4e-3, 90e-3);
        ConcreteParams c = concrete;
        c.tensile_strength = uniform(eng, 0.2e6, 6e6);
        c.youngs_modulus = uniform(eng, 1e9, 40e9);

        const double ri2 = g.rebar_radius * g.rebar_radius;
        const double ro2 = g.outer_radius * g.outer_radius;
        const double p0_formula =
            c.tensile_strength * (ro2 - ri2) / (ro2 + ri2);
        const double plim_formula =
            c.tensile_strength * (g.outer_radius - g.rebar_radius) /
            g.rebar_radius;

        // route 1: the closed-form operations
        const double p0_a = crack_initiation_pressure(g, c);
        const double plim_a = limit_pressure(g, c);
        // route 2: the cracked-cylinder solver at its two seams
        const double p0_b = cracked_point(g.rebar_radius, g, c).p;
        const double plim_b = cracked_point(g.outer_radius, g, c).p;

        worst = std::max(worst, std::abs(p0_a - p0_formula) / p0_formula);
        worst = std::max(worst, std::abs(p0_b - p0_formula) / p0_formula);
        worst = std::max(worst,
                         std::abs(plim_a - plim_formula) / plim_formula);
        worst = std::max(worst,
                         std::abs(plim_b - plim_formula) / plim_formula);
    }

    // reference geometry: c = 30 mm, d = 10 mm
    Geometry ref;
    ref.rebar_radius = 5e-3;
    ref.outer_radius = 35e-3;
    const double p0_ref = crack_initiation_pressure(ref, concrete) /
                          concrete.tensile_strength;
    const double plim_ref =
        limit_pressure(ref, concrete) / concrete.tensile_strength;
    const bool ref_ok = std::abs(p0_ref - 0.96) < 1e-14 &&
                        std::abs(plim_ref - 6.0) < 1e-14;

    const double elapsed = timer.seconds();
    std::ostringstream os;
    os << "max rel dev " << worst << " (<= 1e-12), reference geometry p0 = "
       << p0_ref << " f_t, p_lim = " << plim_ref << " f_t, " << elapsed
       << " s";
    report(2, "mechanics identities on 100 random geometries",
           worst <= 1e-12 && ref_ok && elapsed < 1.0, os.str());
}

void criterion_3_oracle_equivalence() {
    Timer timer;
    ParameterSet params = default_parameters();
    const Geometry& g = params.geometry;
    const ConcreteParams& c = params.concrete;
    const double p_lim = limit_pressure(g, c);
    const double u_sat = cracked_point(g.outer_radius, g, c).u_c;

    double worst = 0.0;
    std::vector<double> cracked_samples;
    for (int i = 0; i < 50; ++i) {
        const double u = 0.98 * u_sat * (i + 1) / 50.0;
        const auto semi = pressure_from_displacement(u, g, c);
        FdOptions o;
        o.grid_n = 1000;
        const auto fd = fd_bvp_verify(u, g, c, o);
        worst = std::max(worst, std::abs(semi.p - fd.point.p) / p_lim);
        if (semi.r_c > g.rebar_radius * 1.0001 && cracked_samples.size() < 8)
            cracked_samples.push_back(u);
    }
    const bool agree_ok = worst <= 5e-3;

    // observed convergence order under grid doubling
    std::vector<double> ratios;
    for (double u : cracked_samples) {
        const double p_exact = pressure_from_displacement(u, g, c).p;
        FdOptions o1, o2;
        o1.grid_n = 500;
        o2.grid_n = 1000;
        const double e1 =
            std::abs(fd_bvp_verify(u, g, c, o1).point.p - p_exact);
        const double e2 =
            std::abs(fd_bvp_verify(u, g, c, o2).point.p - p_exact);
        if (e2 > 0.0) ratios.push_back(e1 / e2);
    }
    std::sort(ratios.begin(), ratios.end());
    const double median = ratios.empty() ? 0.0 : ratios[ratios.size() / 2];
    const bool order_ok = median >= 3.0; // ~4 for O(n^-2)

    const double elapsed = timer.seconds();
    std::ostringstream os;
    os << "max |p_semi - p_fd| / p_lim = " << worst
       << " (<= 5e-3) over 50 samples at n = 1000, median doubling ratio "
       << median << " (>= 3), " << elapsed << " s";
    report(3, "finite-difference verifier vs semi-analytic solution",
           agree_ok && order_ok && elapsed < 30.0, os.str());
}

void criterion_4_kf_properties() {
    Timer timer;
    ParameterSet params = default_parameters();
    const ConcreteParams& c = params.concrete;
    const RustParams& r = params.rust;

    const bool unity_ok = flux_reduction_coefficient(0.0, c, r) == 1.0;

    bool monotone_ok = true;
    double prev = 1.0;
    for (int i = 1; i <= 200; ++i) {
        const double kf = flux_reduction_coefficient(i * 2e-6, c, r);
        if (!(kf < prev)) monotone_ok = false;
        prev = kf;
    }

    // e^{-A_r} identity in the matched-diffusivity, deep-concrete limit
    ConcreteParams cm = c;
    cm.diffusivity_exponent = 0.0;
    cm.water_diffusivity = r.diffusivity;
    cm.transport_depth = 1.0;
    const double t1 = std::sqrt(r.diffusivity / r.rate_sum());
    const double kf1 = flux_reduction_coefficient(t1, cm, r);
    const bool identity_ok = std::abs(kf1 - std::exp(-1.0)) <= 1e-9;

    const double kf_huge =
        flux_reduction_coefficient(1e4 * t1, cm, r);
    const bool overflow_ok =
        std::isfinite(kf_huge) && kf_huge >= 0.0 && kf_huge <= 1.0;

    const double elapsed = timer.seconds();
    std::ostringstream os;
    os << "k_f(0) = 1: " << (unity_ok ? "yes" : "NO")
       << ", strict decrease: " << (monotone_ok ? "yes" : "NO")
       << ", |k_f - e^{-1}| = " << std::abs(kf1 - std::exp(-1.0))
       << " (<= 1e-9), k_f(A_r=1e4) = " << kf_huge << ", " << elapsed
       << " s";
    report(4, "flux reduction coefficient property suite",
           unity_ok && monotone_ok && identity_ok && overflow_ok &&
               elapsed < 1.0,
           os.str());
}

void criterion_5_mass_balance() {
    Timer timer;
    bool ok = true;
    double worst = 0.0;
    for (double phi : {0.15, 0.45, 0.75}) {
        ParameterSet params = default_parameters();
        params.concrete.porosity = phi;
        SimulationOutcome out = run_simulation(params);
        const double flux = faraday_flux(params.steel);
        const double kappa = params.rust.expansion_ratio;
        const double vol = params.steel.molar_mass / params.steel.density;
        for (const auto& s : out.series) {
            if (s.t_cor == 0.0) continue;
            const double total = flux * s.time;
            const double escaped = total - s.t_unc / (kappa * vol);
            const double balance = kappa * vol * (total - escaped);
            const double rel = std::abs(balance - s.t_unc) /
                               std::max(s.t_unc, 1e-30);
            worst = std::max(worst, rel);
            if (rel > 1e-10) ok = false;
        }
    }
    std::ostringstream os;
    os << "max relative imbalance " << worst << " (<= 1e-10), "
       << timer.seconds() << " s";
    report(5, "dense-layer / escaped-iron mass balance at every step", ok,
           os.str());
}

void criterion_6_two_stage() {
    Timer timer;
    bool ok = true;
    std::ostringstream os;
    for (double phi = 0.1; phi <= 0.801; phi += 0.1) {
        ParameterSet params = default_parameters();
        params.concrete.porosity = phi;
        Timer run_timer;
        SimulationOutcome out = run_simulation(params);
        const double run_s = run_timer.seconds();

        bool reached = out.termination == Termination::ReachedCriterion;
        std::size_t stress_free = 0;
        bool monotone = true, phase_ok = true;
        double prev_pn = 0.0;
        for (std::size_t i = 1; i < out.series.size(); ++i) {
            const auto& s = out.series[i];
            if (s.p == 0.0) {
                ++stress_free;
                if (s.t_unc > s.t_cor * (1.0 + 1e-12)) phase_ok = false;
            }
            if (s.p_n < prev_pn - 1e-9) monotone = false;
            prev_pn = s.p_n;
        }
        const bool ends_at_unity =
            reached && std::abs(out.series.back().p_n - 1.0) <= 1e-6;
        const bool this_ok = reached && stress_free > 0 && monotone &&
                             phase_ok && ends_at_unity && run_s < 10.0;
        if (!this_ok) {
            ok = false;
            os << " phi=" << phi << " FAILED;";
        }
    }
    os << " " << timer.seconds() << " s total";
    report(6, "two-stage pressure history for phi in [0.1, 0.8]", ok,
           os.str());
}

void criterion_7_porosity_scaling() {
    Timer timer;
    std::vector<double> phis, ln_t;
    bool increasing = true;
    double prev = 0.0;
    for (int i = 0; i < 10; ++i) {
        const double phi = 0.1 + 0.7 * i / 9.0;
        ParameterSet params = default_parameters();
        params.concrete.porosity = phi;
        SimulationOutcome out = run_simulation(params);
        if (!out.t_crit) {
            report(7, "porosity scaling", false,
                   "no t_crit at phi = " + std::to_string(phi));
            return;
        }
        if (*out.t_crit <= prev) increasing = false;
        prev = *out.t_crit;
        phis.push_back(phi);
        ln_t.push_back(std::log(*out.t_crit));
    }
    const LinearFit fit = fit_line(phis, ln_t);
    const bool fit_ok = fit.r_squared >= 0.95;
    const double elapsed = timer.seconds();
    std::ostringstream os;
    os << "strictly increasing: " << (increasing ? "yes" : "NO")
       << ", log-linear R^2 = " << fit.r_squared << " (>= 0.95), growth rate "
       << fit.slope << ", " << elapsed << " s";
    report(7, "t_crit grows exponentially with porosity",
           increasing && fit_ok && elapsed < 120.0, os.str());
}

void criterion_8_cover_scaling() {
    Timer timer;
    bool ok = true;
    std::ostringstream os;
    for (double phi : {0.15, 0.6}) {
        double prev = 0.0;
        for (double cover_mm : {20.0, 30.0, 40.0, 50.0}) {
            ParameterSet params = default_parameters();
            params.concrete.porosity = phi;
            params.geometry.outer_radius =
                params.geometry.rebar_radius + cover_mm * 1e-3;
            SimulationOutcome out = run_simulation(params);
            if (!out.t_crit || *out.t_crit <= prev) {
                ok = false;
                os << " phi=" << phi << " c=" << cover_mm << " FAILED;";
            }
            if (out.t_crit) prev = *out.t_crit;
        }
    }
    const double elapsed = timer.seconds();
    os << " " << elapsed << " s";
    report(8, "t_crit strictly increasing in cover at two porosities",
           ok && elapsed < 60.0, os.str());
}

void criterion_9_calibration_round_trip() {
    Timer timer;
    bool ok = true;
    std::ostringstream os;
    for (double m_true : {1.5, 2.5, 4.0}) {
        ParameterSet base = default_parameters();
        std::vector<CalibrationRecord> records;
        for (int i = 0; i < 5; ++i) {
            CalibrationRecord rec;
            rec.porosity = 0.15 + 0.4 * i / 4.0;
            rec.cover = 30e-3;
            rec.rebar_diameter = 10e-3;
            rec.current_density = 0.01;
            ParameterSet p = base;
            p.concrete.porosity = rec.porosity;
            p.concrete.diffusivity_exponent = m_true;
            SimulationOutcome out = run_simulation(p);
            if (!out.t_crit) {
                ok = false;
                os << " synthesis failed at m=" << m_true << ";";
                continue;
            }
            rec.t_crit_observed = *out.t_crit;
            records.push_back(rec);
        }
        CalibrationOptions opts;
        opts.m_min = 0.5;
        opts.m_max = 6.0;
        CalibrationResult fit = fit_exponent(records, base, opts);
        const double err = std::abs(fit.m - m_true);
        const bool this_ok =
            err <= 1e-3 * (1.0 + m_true) && fit.skipped_records.empty();
        os << " m*=" << m_true << " -> " << fit.m << " (|dm|=" << err
           << ");";
        if (!this_ok) ok = false;
    }
    const double elapsed = timer.seconds();
    os << " " << elapsed << " s";
    report(9, "calibration recovers m* in {1.5, 2.5, 4.0}",
           ok && elapsed < 300.0, os.str());
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void criterion_10_determinism() {
    Timer timer;
    const fs::path dir =
        fs::temp_directory_path() / "corrosim_acceptance_det";
    fs::remove_all(dir);
    fs::create_directories(dir);
    {
        std::ofstream cfg(dir / "config.json");
        cfg << R"({"sweep": {"axes": [
                 {"name": "porosity", "min": 0.2, "max": 0.6, "count": 3},
                 {"name": "cover", "min": "30 mm", "max": "50 mm",
                  "count": 2}]}})";
    }
    auto run = [&](const std::string& args) {
        const std::string cmd = std::string("\"") + CORROSIM_CLI_PATH +
                                "\" " + args + " > /dev/null 2> /dev/null";
        return std::system(cmd.c_str()) == 0;
    };
    const std::string cfg = (dir / "config.json").string();
    bool ok = run("simulate --config " + cfg + " --out " +
                  (dir / "a").string());
    ok = ok && run("simulate --config " + cfg + " --out " +
                   (dir / "b").string());
    ok = ok && run("sweep --config " + cfg + " --out " +
                   (dir / "w1").string() + " --workers 1");
    ok = ok && run("sweep --config " + cfg + " --out " +
                   (dir / "w8").string() + " --workers 8");
    ok = ok && run("sweep --config " + cfg + " --out " +
                   (dir / "w1b").string() + " --workers 1");

    const bool sim_identical =
        ok && slurp(dir / "a" / "series.csv") ==
                  slurp(dir / "b" / "series.csv") &&
        slurp(dir / "a" / "summary.json") ==
            slurp(dir / "b" / "summary.json");
    const bool sweep_identical =
        ok && slurp(dir / "w1" / "safety_map.csv") ==
                  slurp(dir / "w8" / "safety_map.csv") &&
        slurp(dir / "w1" / "safety_map.csv") ==
            slurp(dir / "w1b" / "safety_map.csv") &&
        slurp(dir / "w1" / "sweep_summary.json") ==
            slurp(dir / "w8" / "sweep_summary.json");

    const double elapsed = timer.seconds();
    std::ostringstream os;
    os << "simulate byte-identical: " << (sim_identical ? "yes" : "NO")
       << ", sweep byte-identical across reruns and worker counts: "
       << (sweep_identical ? "yes" : "NO") << ", " << elapsed << " s";
    report(10, "byte-level determinism of simulate and sweep outputs",
           ok && sim_identical && sweep_identical && elapsed < 60.0,
           os.str());
}

void criterion_11_marching_convergence() {
    Timer timer;
    ParameterSet coarse = default_parameters();
    ParameterSet fine = coarse;
    fine.solver.dt_cor_max = 0.5 * coarse.solver.dt_cor_max;

    const auto out_coarse = run_simulation(coarse);
    const auto out_fine = run_simulation(fine);
    bool ok = out_coarse.t_crit && out_fine.t_crit;
    double rel = 1.0;
    if (ok) {
        rel = std::abs(*out_fine.t_crit - *out_coarse.t_crit) /
              *out_coarse.t_crit;
        ok = rel < 1e-3;
    }
    const double elapsed = timer.seconds();
    std::ostringstream os;
    os << "relative t_crit change under step halving " << rel
       << " (< 1e-3), " << elapsed << " s";
    report(11, "t_crit is insensitive to the marching step", ok && elapsed < 60.0,
           os.str());
}

} // namespace

int main() {
    std::printf("corrosim acceptance suite\n");
    criterion_1_faraday_anchor();
    criterion_2_mechanics_identities();
    criterion_3_oracle_equivalence();
    criterion_4_kf_properties();
    criterion_5_mass_balance();
    criterion_6_two_stage();
    criterion_7_porosity_scaling();
    criterion_8_cover_scaling();
    criterion_9_calibration_round_trip();
    criterion_10_determinism();
    criterion_11_marching_convergence();

    if (g_failures == 0)
        std::printf("all 11 criteria passed\n");
    else
        std::printf("%d criterion/criteria FAILED\n", g_failures);
    return g_failures;
}
