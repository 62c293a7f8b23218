#include "corrosim/rust_layer.hpp"

#include <cmath>
#include <numbers>

#include "corrosim/errors.hpp"

namespace corrosim {

namespace {
constexpr double pi = std::numbers::pi;
}

double bulk_modulus(const RustParams& rust) {
    if (rust.poisson_ratio >= 0.5)
        throw ValidationError(
            "rust.poisson_ratio: incompressible limit nu_r = 0.5 is not "
            "representable by a finite bulk modulus");
    return rust.youngs_modulus / (3.0 * (1.0 - 2.0 * rust.poisson_ratio));
}

double confined_volume(double u_c, double t_cor, const Geometry& geom) {
    if (t_cor >= geom.rebar_radius)
        throw SolverError(
            "confined_volume: t_cor >= rebar radius (rebar fully consumed; "
            "the simulation should have terminated earlier)");
    const double outer = geom.rebar_radius + u_c;
    const double inner = geom.rebar_radius - t_cor;
    return pi * (outer * outer - inner * inner) * geom.rebar_length;
}

double unconstrained_volume(double t_unc, double t_cor, const Geometry& geom,
                            V0Convention convention) {
    if (t_cor >= geom.rebar_radius)
        throw SolverError("unconstrained_volume: t_cor >= rebar radius");
    const double inner = geom.rebar_radius - t_cor;
    const double outer =
        convention == V0Convention::CorrodedSurfaceAnchored
            ? inner + t_unc
            : geom.rebar_radius + t_unc;
    return pi * (outer * outer - inner * inner) * geom.rebar_length;
}

double thermo_pressure(double u_c, double t_cor, double t_unc,
                       const RustParams& rust, const Geometry& geom,
                       V0Convention convention) {
    const double v_rd = confined_volume(u_c, t_cor, geom);
    if (v_rd <= 0.0)
        throw SolverError("thermo_pressure: confined volume is not positive");
    const double v_0 = unconstrained_volume(t_unc, t_cor, geom, convention);
    if (v_0 <= v_rd) return 0.0;
    return bulk_modulus(rust) * std::log(v_0 / v_rd);
}

} // namespace corrosim
