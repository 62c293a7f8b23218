#include <doctest.h>

#include <cmath>
#include <sstream>

#include <nlohmann/json.hpp>

#include "corrosim/errors.hpp"
#include "corrosim/rust_layer.hpp"
#include "corrosim/simulator.hpp"
#include "test_util.hpp"

using namespace corrosim;

TEST_CASE("current schedule maps penetration to time") {
    SteelParams s = test::reference_steel();
    const double rate1 = penetration_rate(s); // at 0.01 A/m2

    SUBCASE("constant current") {
        CurrentSchedule sched(s.corrosion_current_density);
        CHECK(sched.time_at_penetration(0.0, s) == 0.0);
        CHECK(sched.time_at_penetration(1e-4, s) ==
              doctest::Approx(1e-4 / rate1).epsilon(1e-14));
    }

    SUBCASE("piecewise-constant current") {
        // 1 year at i_a, then double current
        const double year = 365.25 * 86400.0;
        CurrentSchedule sched(std::vector<CurrentSchedule::Segment>{
            {0.0, 0.01}, {year, 0.02}});
        const double t1 = rate1 * year; // penetration after year one
        CHECK(sched.time_at_penetration(0.5 * t1, s) ==
              doctest::Approx(0.5 * year).epsilon(1e-12));
        CHECK(sched.time_at_penetration(3.0 * t1, s) ==
              doctest::Approx(2.0 * year).epsilon(1e-12));
        CHECK(sched.current_at(0.5 * year) == 0.01);
        CHECK(sched.current_at(2.0 * year) == 0.02);
    }

    SUBCASE("invalid schedules are rejected") {
        CHECK_THROWS_AS(CurrentSchedule(0.0), ValidationError);
        CHECK_THROWS_AS(
            CurrentSchedule(std::vector<CurrentSchedule::Segment>{
                {1.0, 0.01}}),
            ValidationError);
    }
}

TEST_CASE("equilibrium solve") {
    ParameterSet params = default_parameters();
    const Geometry& g = params.geometry;

    SUBCASE("stress-free while rust fits the vacated space") {
        const auto eq = equilibrium_solve(50e-6, 50e-6, params);
        CHECK(eq.u_c == 0.0);
        CHECK(eq.p == 0.0);
        CHECK(eq.r_c == g.rebar_radius);
        const auto eq2 = equilibrium_solve(50e-6, 20e-6, params);
        CHECK(eq2.p == 0.0);
    }

    SUBCASE("no concrete resistance: free expansion to u_c*") {
        const double t_cor = 50e-6, t_unc = 70e-6;
        const auto eq = equilibrium_solve_with(
            t_cor, t_unc, params.rust, g, [](double) { return 0.0; }, 1e-6);
        CHECK(eq.u_c == doctest::Approx(t_unc - t_cor).epsilon(1e-12));
        CHECK(eq.p == doctest::Approx(0.0).epsilon(1e-6));
    }

    SUBCASE("balanced state matches both pressure branches") {
        const double t_cor = 60e-6, t_unc = 100e-6;
        const auto eq = equilibrium_solve(t_cor, t_unc, params);
        CHECK(eq.u_c > 0.0);
        CHECK(eq.u_c < t_unc - t_cor);
        const double p_t =
            thermo_pressure(eq.u_c, t_cor, t_unc, params.rust, g);
        const double p_m =
            pressure_from_displacement(eq.u_c, g, params.concrete).p;
        CHECK(std::abs(p_t - p_m) <=
              params.solver.pressure_match_tol * std::max(p_t, p_m));
        CHECK(eq.p == doctest::Approx(p_m));
    }

    SUBCASE("incompressible limit pushes u_c to t_unc - t_cor") {
        const double t_cor = 60e-6, t_unc = 100e-6;
        const double u_star = t_unc - t_cor;
        double prev_gap = u_star;
        for (double scale : {10.0, 100.0, 1000.0}) {
            ParameterSet p = params;
            p.rust.youngs_modulus *= scale;
            const auto eq = equilibrium_solve(t_cor, t_unc, p);
            const double gap = u_star - eq.u_c;
            CHECK(gap >= 0.0);
            CHECK(gap < prev_gap); // monotone approach
            prev_gap = gap;
        }
        // extrapolated limit: gap scales like 1/K_r
        CHECK(prev_gap < u_star * 1e-4);
        // and the pressure approaches the mechanical response at u_c*
        ParameterSet p = params;
        p.rust.youngs_modulus *= 1000.0;
        const auto eq = equilibrium_solve(t_cor, t_unc, p);
        const double p_star =
            pressure_from_displacement(u_star, p.geometry, p.concrete).p;
        CHECK(eq.p == doctest::Approx(p_star).epsilon(1e-3));
    }
}

TEST_CASE("simulation reaches the criterion with a two-stage history") {
    ParameterSet params = default_parameters();
    SimulationOutcome out = run_simulation(params);

    REQUIRE(out.termination == Termination::ReachedCriterion);
    REQUIRE(out.t_crit.has_value());
    REQUIRE(out.T_crit.has_value());

    // nonempty stress-free phase (p = 0 while t_unc <= t_cor), then
    // monotone pressurisation
    std::size_t stress_free = 0;
    bool pressurised_seen = false;
    for (std::size_t i = 1; i < out.series.size(); ++i) {
        const auto& s = out.series[i];
        if (s.p == 0.0) {
            CHECK(s.t_unc <= s.t_cor * (1.0 + 1e-12));
            CHECK_FALSE(pressurised_seen); // no re-entry into stress-free
            ++stress_free;
        } else {
            pressurised_seen = true;
            CHECK(s.t_unc > s.t_cor);
        }
    }
    CHECK(stress_free > 0);
    CHECK(pressurised_seen);
    CHECK(out.series.back().p_n == doctest::Approx(1.0).epsilon(1e-6));

    // series invariants
    for (std::size_t i = 1; i < out.series.size(); ++i) {
        const auto& a = out.series[i - 1];
        const auto& b = out.series[i];
        CHECK(b.time > a.time);
        CHECK(b.t_cor > a.t_cor);
        CHECK(b.p_n >= a.p_n - 1e-9);
        CHECK(b.u_c >= a.u_c - 1e-15);
        CHECK(b.k_f <= a.k_f);
        CHECK(b.r_c >= a.r_c - 1e-12); // crack front only advances
    }
}

TEST_CASE("porosity and cover shift t_crit in the expected directions") {
    ParameterSet base = default_parameters();

    ParameterSet lo = base, hi = base;
    lo.concrete.porosity = 0.15;
    hi.concrete.porosity = 0.60;
    const auto out_lo = run_simulation(lo);
    const auto out_hi = run_simulation(hi);
    REQUIRE(out_lo.t_crit);
    REQUIRE(out_hi.t_crit);
    CHECK(*out_hi.t_crit > *out_lo.t_crit);

    ParameterSet thick = base;
    thick.geometry.outer_radius = thick.geometry.rebar_radius + 50e-3;
    const auto out_thick = run_simulation(thick);
    const auto out_base = run_simulation(base);
    REQUIRE(out_thick.t_crit);
    REQUIRE(out_base.t_crit);
    CHECK(*out_thick.t_crit > *out_base.t_crit);
}

TEST_CASE("mass balance holds along a full simulation") {
    ParameterSet params = default_parameters();
    SimulationOutcome out = run_simulation(params);
    const double flux = faraday_flux(params.steel);
    const double kappa = params.rust.expansion_ratio;
    const double vol = params.steel.molar_mass / params.steel.density;
    for (const auto& s : out.series) {
        const double total = flux * s.time;
        // escaped moles reconstructed from t_unc
        const double escaped = total - s.t_unc / (kappa * vol);
        const double balance = kappa * vol * (total - escaped);
        CHECK(std::abs(balance - s.t_unc) <=
              1e-10 * std::max(s.t_unc, 1e-30));
        CHECK(s.t_unc >= 0.0);
        CHECK(s.t_unc <= kappa * s.t_cor + 1e-20);
    }
}

TEST_CASE("near-unity expansion ratio stays stress-free to the horizon") {
    ParameterSet params = default_parameters();
    params.rust.expansion_ratio = 1.01;
    params.solver.t_cor_max = 50e-6;
    SimulationOutcome out = run_simulation(params);
    CHECK(out.termination == Termination::HorizonExhausted);
    CHECK_FALSE(out.t_crit.has_value());
    for (const auto& s : out.series) {
        CHECK(s.p == 0.0);
        CHECK(s.t_unc <= s.t_cor * (1.0 + 1e-12));
    }
}

TEST_CASE("simulation is deterministic") {
    ParameterSet params = default_parameters();
    const auto a = run_simulation(params);
    const auto b = run_simulation(params);
    REQUIRE(a.series.size() == b.series.size());
    std::ostringstream csv_a, csv_b;
    write_series_csv(csv_a, a, params);
    write_series_csv(csv_b, b, params);
    CHECK(csv_a.str() == csv_b.str());
    CHECK(summary_json(a, params).dump() == summary_json(b, params).dump());
}

TEST_CASE("concealment time") {
    ParameterSet params = default_parameters();
    SimulationOutcome out = run_simulation(params);
    REQUIRE(out.t_crit);

    const double T = concealment_time(out, params.steel);
    CHECK(T == doctest::Approx(*out.T_crit).epsilon(1e-9));

    // doubling the current halves the concealment time at fixed t_crit
    SteelParams fast = params.steel;
    fast.corrosion_current_density *= 2.0;
    CHECK(concealment_time(out, fast) ==
          doctest::Approx(0.5 * T).epsilon(1e-12));

    // t_crit = 100 um at 1 uA/cm2 conceals for about 8.6 years
    SimulationOutcome synthetic;
    synthetic.t_crit = 100e-6;
    synthetic.termination = Termination::ReachedCriterion;
    SteelParams s = test::reference_steel();
    CHECK(concealment_time(synthetic, s) / (365.25 * 86400.0) ==
          doctest::Approx(8.617).epsilon(1e-3));

    SimulationOutcome none;
    none.termination = Termination::HorizonExhausted;
    CHECK_THROWS_AS(concealment_time(none, s), SolverError);
}

TEST_CASE("series CSV carries version, parameters and the exact header") {
    ParameterSet params = default_parameters();
    params.solver.t_cor_max = 10e-6;
    SimulationOutcome out = run_simulation(params);
    std::ostringstream os;
    write_series_csv(os, out, params);
    const std::string text = os.str();
    CHECK(text.find("# corrosim ") == 0);
    CHECK(text.find("# params {") != std::string::npos);
    CHECK(text.find("T_s,t_cor_m,t_unc_m,u_c_m,p_Pa,p_n,k_f,r_c_m\n") !=
          std::string::npos);
}

TEST_CASE("periodic finite-difference cross-checks are recorded") {
    ParameterSet params = default_parameters();
    params.solver.fd_verify_every = 25;
    params.solver.grid_n = 400;
    SimulationOutcome out = run_simulation(params);
    REQUIRE(!out.fd_checks.empty());
    for (const auto& c : out.fd_checks) CHECK(c.rel_diff < 5e-3);

    auto doc = summary_json(out, params);
    CHECK(doc.contains("fd_checks"));
}
