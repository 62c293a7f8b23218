#pragma once

#include "corrosim/params.hpp"

namespace corrosim {

// Anchoring convention for the unconstrained rust volume V_0.
//
// CorrodedSurfaceAnchored places a layer of thickness t_unc on the corroded
// steel surface (outer radius r_i - t_cor + t_unc). This makes the
// stress-free condition exact: p = 0 whenever t_unc <= t_cor + u_c, so the
// stress-free period ends exactly when accumulated rust overfills the
// vacated space. OriginalInterfaceAnchored keeps the layer on the original
// steel-concrete interface (outer radius r_i + t_unc); it is retained as a
// compatibility switch and agrees with the anchored form to first order in
// t_cor/r_i.
enum class V0Convention {
    CorrodedSurfaceAnchored,
    OriginalInterfaceAnchored,
};

// Bulk modulus of rust K_r = E_r / (3 (1 - 2 nu_r)).
double bulk_modulus(const RustParams& rust);

// Volume occupied by the confined dense rust layer:
// V_rd = pi ((r_i + u_c)^2 - (r_i - t_cor)^2) L.
double confined_volume(double u_c, double t_cor, const Geometry& geom);

// Volume the rust would occupy at zero pressure.
double unconstrained_volume(
    double t_unc, double t_cor, const Geometry& geom,
    V0Convention convention = V0Convention::CorrodedSurfaceAnchored);

// Thermodynamic pressure of the confined layer, p = K_r ln(V_0 / V_rd),
// clamped at zero: unconfined rust cannot pull on the concrete.
double thermo_pressure(
    double u_c, double t_cor, double t_unc, const RustParams& rust,
    const Geometry& geom,
    V0Convention convention = V0Convention::CorrodedSurfaceAnchored);

} // namespace corrosim
