#include <doctest.h>

#include <cmath>
#include <cstring>
#include <sstream>

#include <nlohmann/json.hpp>

#include "corrosim/errors.hpp"
#include "corrosim/simulator.hpp"
#include "corrosim/sweep.hpp"

using namespace corrosim;
using nlohmann::json;

namespace {

SweepGrid porosity_cover_grid() {
    SweepGrid grid;
    AxisSpec phi;
    phi.quantity = AxisQuantity::Porosity;
    phi.min = 0.15;
    phi.max = 0.60;
    phi.count = 2;
    AxisSpec cover;
    cover.quantity = AxisQuantity::Cover;
    cover.min = 30e-3;
    cover.max = 50e-3;
    cover.count = 2;
    grid.axes = {phi, cover};
    return grid;
}

} // namespace

TEST_CASE("axis value generation") {
    AxisSpec a;
    a.min = 1.0;
    a.max = 3.0;
    a.count = 5;
    auto v = a.values();
    REQUIRE(v.size() == 5);
    CHECK(v.front() == 1.0);
    CHECK(v.back() == 3.0);
    CHECK(v[2] == doctest::Approx(2.0));

    a.log_scale = true;
    a.min = 1.0;
    a.max = 100.0;
    a.count = 3;
    v = a.values();
    CHECK(v[1] == doctest::Approx(10.0));

    a.count = 1;
    a.max = a.min;
    CHECK(a.values() == std::vector<double>{1.0});
}

TEST_CASE("grid validation") {
    SweepGrid g = porosity_cover_grid();
    CHECK_NOTHROW(g.validate());
    CHECK(g.cell_count() == 4);

    SweepGrid bad = g;
    bad.axes[0].min = bad.axes[0].max;
    CHECK_THROWS_AS(bad.validate(), ValidationError);

    bad = g;
    bad.threshold = 0.0;
    CHECK_THROWS_AS(bad.validate(), ValidationError);

    bad = g;
    bad.axes.clear();
    CHECK_THROWS_AS(bad.validate(), ValidationError);
}

TEST_CASE("2x2 sweep is monotone along both axes") {
    ParameterSet params = default_parameters();
    SweepResult res = run_sweep(porosity_cover_grid(), params, 2);
    REQUIRE(res.cells.size() == 4);
    REQUIRE(res.error_count == 0);
    for (const auto& c : res.cells) REQUIRE(c.t_crit.has_value());

    // row-major, cover fastest: [phi0c0, phi0c1, phi1c0, phi1c1]
    CHECK(*res.cells[1].t_crit > *res.cells[0].t_crit); // cover direction
    CHECK(*res.cells[3].t_crit > *res.cells[2].t_crit);
    CHECK(*res.cells[2].t_crit > *res.cells[0].t_crit); // porosity direction
    CHECK(*res.cells[3].t_crit > *res.cells[1].t_crit);
}

TEST_CASE("threshold classification boundary") {
    ParameterSet params = default_parameters();
    SweepGrid grid = porosity_cover_grid();

    grid.threshold = 1.0; // far above every t_crit
    SweepResult res = run_sweep(grid, params, 0);
    for (const auto& c : res.cells)
        CHECK(c.classification == SafetyClass::CracksFirst);

    grid.threshold = 1e-9; // below every t_crit
    res = run_sweep(grid, params, 0);
    for (const auto& c : res.cells)
        CHECK(c.classification == SafetyClass::AtRiskConcealed);
}

TEST_CASE("single-cell sweep reproduces run_simulation bit for bit") {
    ParameterSet params = default_parameters();
    SweepGrid grid;
    AxisSpec phi;
    phi.quantity = AxisQuantity::Porosity;
    phi.min = phi.max = 0.42;
    phi.count = 1;
    grid.axes = {phi};

    SweepResult res = run_sweep(grid, params, 1);
    REQUIRE(res.cells.size() == 1);

    ParameterSet direct = params;
    direct.concrete.porosity = 0.42;
    SimulationOutcome out = run_simulation(direct);
    REQUIRE(out.t_crit);
    REQUIRE(res.cells[0].t_crit);
    CHECK(std::memcmp(&*res.cells[0].t_crit, &*out.t_crit,
                      sizeof(double)) == 0);
    CHECK(std::memcmp(&*res.cells[0].T_crit, &*out.T_crit,
                      sizeof(double)) == 0);
}

TEST_CASE("sweep output is independent of the worker count") {
    ParameterSet params = default_parameters();
    SweepGrid grid = porosity_cover_grid();
    grid.axes[0].count = 3;

    SweepResult serial = run_sweep(grid, params, 1);
    SweepResult parallel = run_sweep(grid, params, 8);

    std::ostringstream a, b;
    write_safety_map_csv(a, serial, params);
    write_safety_map_csv(b, parallel, params);
    CHECK(a.str() == b.str());
    CHECK(sweep_summary_json(serial, params).dump() ==
          sweep_summary_json(parallel, params).dump());
}

TEST_CASE("per-cell failures never abort the sweep") {
    ParameterSet params = default_parameters();
    SweepGrid grid;
    AxisSpec rho;
    rho.quantity = AxisQuantity::DryDensity;
    rho.min = 1000.0;
    rho.max = 5000.0; // beyond the skeletal density: non-physical cells
    rho.count = 3;
    grid.axes = {rho};

    SweepResult res = run_sweep(grid, params, 2);
    REQUIRE(res.cells.size() == 3);
    CHECK(res.error_count > 0);
    CHECK(res.cells[0].classification != SafetyClass::Error);
    CHECK(res.cells[2].classification == SafetyClass::Error);
    CHECK(!res.cells[2].message.empty());

    std::ostringstream os;
    write_safety_map_csv(os, res, params);
    CHECK(os.str().find("error") != std::string::npos);
}

TEST_CASE("density axis classification is auditable in the summary") {
    ParameterSet params = default_parameters();
    SweepGrid grid;
    AxisSpec rho;
    rho.quantity = AxisQuantity::DryDensity;
    rho.min = 800.0;
    rho.max = 2000.0;
    rho.count = 3;
    grid.axes = {rho};

    SweepResult res = run_sweep(grid, params, 0);
    json doc = sweep_summary_json(res, params);
    CHECK(doc["density_porosity_map"]["rho_s_kg_m3"] ==
          params.concrete.solid_density);
    // low density = high porosity: t_crit decreasing along the axis
    REQUIRE(res.cells[0].t_crit);
    REQUIRE(res.cells[2].t_crit);
    CHECK(*res.cells[0].t_crit > *res.cells[2].t_crit);
}

TEST_CASE("exponential fit") {
    SUBCASE("exact exponential data gives R^2 = 1") {
        std::vector<double> phi = {0.1, 0.3, 0.5, 0.7};
        std::vector<double> t;
        for (double x : phi) t.push_back(2e-5 * std::exp(3.0 * x));
        ExponentialFit f = exponential_fit(phi, t);
        CHECK(f.growth_rate == doctest::Approx(3.0).epsilon(1e-12));
        CHECK(f.prefactor == doctest::Approx(2e-5).epsilon(1e-12));
        CHECK(f.r_squared == doctest::Approx(1.0).epsilon(1e-12));
    }

    SUBCASE("a perturbed point moves the slope by the recomputed amount") {
        std::vector<double> phi = {0.1, 0.3, 0.5, 0.7};
        std::vector<double> t;
        for (double x : phi) t.push_back(2e-5 * std::exp(3.0 * x));
        t[2] *= 1.01;
        ExponentialFit f = exponential_fit(phi, t);
        // independent recomputation from the normal equations
        std::vector<double> ln_t;
        for (double v : t) ln_t.push_back(std::log(v));
        LinearFit direct = fit_line(phi, ln_t);
        CHECK(f.growth_rate == doctest::Approx(direct.slope).epsilon(1e-14));
        CHECK(f.r_squared < 1.0);
        CHECK(f.growth_rate != doctest::Approx(3.0).epsilon(1e-6));
    }

    SUBCASE("degenerate inputs") {
        CHECK_THROWS_AS(
            exponential_fit({0.2, 0.2, 0.2}, {1e-5, 2e-5, 3e-5}),
            ValidationError);
        CHECK_THROWS_AS(exponential_fit({0.1, 0.2}, {1e-5, 2e-5}),
                        ValidationError);
        CHECK_THROWS_AS(
            exponential_fit({0.1, 0.2, 0.3}, {1e-5, -2e-5, 3e-5}),
            ValidationError);
    }
}

TEST_CASE("sweep grid from config JSON") {
    json doc = {{"sweep",
                 {{"threshold", "50 um"},
                  {"axes",
                   json::array(
                       {{{"name", "porosity"},
                         {"min", 0.1},
                         {"max", 0.8},
                         {"count", 10}},
                        {{"name", "cover"},
                         {"min", "20 mm"},
                         {"max", "50 mm"},
                         {"count", 4},
                         {"scale", "linear"}}})}}}};
    SweepGrid grid = sweep_grid_from_json(doc);
    CHECK(grid.threshold == doctest::Approx(50e-6));
    REQUIRE(grid.axes.size() == 2);
    CHECK(grid.axes[0].quantity == AxisQuantity::Porosity);
    CHECK(grid.axes[1].quantity == AxisQuantity::Cover);
    CHECK(grid.axes[1].min == doctest::Approx(20e-3));
    CHECK(grid.cell_count() == 40);

    CHECK_THROWS_AS(sweep_grid_from_json(json::object()), ConfigError);
    json bad = doc;
    bad["sweep"]["axes"][0]["name"] = "temperature";
    CHECK_THROWS_AS(sweep_grid_from_json(bad), ConfigError);
}

TEST_CASE("summary embeds exponential fits along the porosity axis") {
    ParameterSet params = default_parameters();
    SweepGrid grid;
    AxisSpec phi;
    phi.quantity = AxisQuantity::Porosity;
    phi.min = 0.2;
    phi.max = 0.6;
    phi.count = 4;
    AxisSpec cover;
    cover.quantity = AxisQuantity::Cover;
    cover.min = 30e-3;
    cover.max = 40e-3;
    cover.count = 2;
    grid.axes = {phi, cover};

    SweepResult res = run_sweep(grid, params, 0);
    json doc = sweep_summary_json(res, params);
    REQUIRE(doc["exponential_fits"].size() == 2);
    for (const auto& fit : doc["exponential_fits"]) {
        CHECK(fit["points"] == 4);
        CHECK(fit["growth_rate"].get<double>() > 0.0);
        CHECK(fit["r_squared"].get<double>() > 0.8);
    }
}
