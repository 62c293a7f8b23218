#pragma once

#include <functional>

#include "corrosim/params.hpp"

namespace corrosim {

// State of the iron release / escape bookkeeping. All quantities SI.
struct TransportState {
    double t_cor = 0.0;                  // corroded steel thickness, m
    double escaped_moles_per_area = 0.0; // integral of k_f*i_a/(z_a F) dt, mol/m2
    double t_unc = 0.0;                  // unconstrained dense-layer thickness, m
    double k_f = 1.0;                    // flux reduction coefficient at t_cor
    double time = 0.0;                   // s
};

// Faraday molar flux of released iron: i_a / (z_a F), mol/(m2 s).
double faraday_flux(const SteelParams& steel);

// Constant steel loss rate dt_cor/dT = i_a M_Fe / (z_a F rho_Fe), m/s.
double penetration_rate(const SteelParams& steel);

// Porosity power law D_c = D_w * phi^m.
double concrete_diffusivity(const ConcreteParams& concrete);

// Fraction of the Faraday flux escaping into the concrete pore space for a
// dense layer of thickness t_cor. Evaluated in the sech/tanh/coth form,
// which stays finite for arbitrarily thick layers:
//   k_f = sech(A_r) * sqrt(D_c) coth(A_c)
//         / (sqrt(D_c) coth(A_c) + sqrt(D_r) tanh(A_r))
// with A_r = t_cor * sqrt(k_sum/D_r), A_c = t_c * sqrt(k_sum/D_c) and
// k_sum = k_r(II->o) + c_ox * k_r(II->III).
double flux_reduction_coefficient(double t_cor, const ConcreteParams& concrete,
                                  const RustParams& rust);

// One marching step of the escape integral: advances t_cor by dt_cor,
// accumulates escaped moles by the trapezoidal rule, recomputes
// t_unc = kappa * (t_cor - (M_Fe/rho_Fe) * escaped_moles). Throws
// SolverError when |k_f(new) - k_f(old)| exceeds kf_step_tol; the caller
// must subdivide the step.
TransportState advance_transport(const TransportState& state, double dt_cor,
                                 const ConcreteParams& concrete,
                                 const RustParams& rust,
                                 const SteelParams& steel,
                                 double kf_step_tol);

// Same marching rule with an arbitrary k_f(t_cor); used by tests to probe
// the bookkeeping with prescribed escape behaviour.
TransportState advance_transport_with(const TransportState& state,
                                      double dt_cor,
                                      const std::function<double(double)>& kf,
                                      const RustParams& rust,
                                      const SteelParams& steel,
                                      double kf_step_tol);

} // namespace corrosim
