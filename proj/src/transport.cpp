#include "corrosim/transport.hpp"

#include <cmath>
#include <sstream>

#include "corrosim/errors.hpp"

namespace corrosim {

double faraday_flux(const SteelParams& steel) {
    return steel.corrosion_current_density /
           (steel.electrons * steel.faraday_constant);
}

double penetration_rate(const SteelParams& steel) {
    return faraday_flux(steel) * steel.molar_mass / steel.density;
}

double concrete_diffusivity(const ConcreteParams& concrete) {
    return concrete.water_diffusivity *
           std::pow(concrete.porosity, concrete.diffusivity_exponent);
}

namespace {

// coth with a series fallback near zero; 1/tanh is accurate elsewhere.
double coth(double x) {
    if (x < 1e-6) return 1.0 / x + x / 3.0;
    return 1.0 / std::tanh(x);
}

} // namespace

double flux_reduction_coefficient(double t_cor,
                                  const ConcreteParams& concrete,
                                  const RustParams& rust) {
    if (t_cor < 0.0)
        throw SolverError("flux_reduction_coefficient: negative t_cor");
    const double k_sum = rust.rate_sum();
    if (k_sum <= 0.0)
        throw SolverError(
            "flux_reduction_coefficient: degenerate reaction rates "
            "(k_r(II->o) + c_ox*k_r(II->III) must be positive)");

    const double d_c = concrete_diffusivity(concrete);
    const double d_r = rust.diffusivity;
    const double a_r = t_cor * std::sqrt(k_sum / d_r);
    const double a_c = concrete.transport_depth * std::sqrt(k_sum / d_c);

    // sech evaluated via exp(-a_r) so thick layers underflow to 0 instead of
    // overflowing the verbatim 2 e^{A_r}/(1+e^{2A_r}) prefactor.
    const double em = std::exp(-a_r);
    const double sech = 2.0 * em / (1.0 + em * em);
    const double concrete_side = std::sqrt(d_c) * coth(a_c);
    const double rust_side = std::sqrt(d_r) * std::tanh(a_r);
    return sech * concrete_side / (concrete_side + rust_side);
}

TransportState advance_transport_with(const TransportState& state,
                                      double dt_cor,
                                      const std::function<double(double)>& kf,
                                      const RustParams& rust,
                                      const SteelParams& steel,
                                      double kf_step_tol) {
    if (dt_cor <= 0.0)
        throw SolverError("advance_transport: step must be positive");

    TransportState next = state;
    next.t_cor = state.t_cor + dt_cor;
    next.k_f = kf(next.t_cor);

    if (std::abs(next.k_f - state.k_f) > kf_step_tol) {
        std::ostringstream os;
        os << "advance_transport: step rejected, k_f changed by "
           << std::abs(next.k_f - state.k_f) << " > " << kf_step_tol
           << " over dt_cor = " << dt_cor << " (subdivide the step)";
        throw SolverError(os.str());
    }

    // Trapezoidal quadrature of k_f * i_a/(z_a F) over the step; the time
    // step follows from the constant Faraday penetration rate.
    const double rate = penetration_rate(steel);
    const double dt = dt_cor / rate;
    next.time = state.time + dt;
    next.escaped_moles_per_area =
        state.escaped_moles_per_area +
        0.5 * (state.k_f + next.k_f) * faraday_flux(steel) * dt;

    const double escaped_thickness =
        steel.molar_mass / steel.density * next.escaped_moles_per_area;
    next.t_unc = rust.expansion_ratio * (next.t_cor - escaped_thickness);
    return next;
}

TransportState advance_transport(const TransportState& state, double dt_cor,
                                 const ConcreteParams& concrete,
                                 const RustParams& rust,
                                 const SteelParams& steel,
                                 double kf_step_tol) {
    return advance_transport_with(
        state, dt_cor,
        [&](double t) {
            return flux_reduction_coefficient(t, concrete, rust);
        },
        rust, steel, kf_step_tol);
}

} // namespace corrosim
