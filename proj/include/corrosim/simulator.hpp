#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "corrosim/mechanics.hpp"
#include "corrosim/params.hpp"
#include "corrosim/rust_layer.hpp"
#include "corrosim/transport.hpp"

namespace corrosim {

// Piecewise-constant corrosion current density i_a(T). The penetration-domain
// physics (k_f, t_unc, t_crit) is independent of the schedule -- Faraday's
// law ties moles to penetration -- so the schedule only maps t_cor to time.
class CurrentSchedule {
public:
    struct Segment {
        double start_time;      // s
        double current_density; // A/m2
    };

    explicit CurrentSchedule(double constant_current);
    explicit CurrentSchedule(std::vector<Segment> segments);

    double current_at(double time) const;
    double time_at_penetration(double t_cor, const SteelParams& steel) const;
    const std::vector<Segment>& segments() const { return segments_; }

private:
    std::vector<Segment> segments_;
};

struct CorrosionState {
    double time = 0.0;  // T, s
    double t_cor = 0.0; // m
    double t_unc = 0.0; // m
    double u_c = 0.0;   // m
    double p = 0.0;     // Pa
    double p_n = 0.0;   // p r_i / (f_t (r_o - r_i))
    double k_f = 1.0;
    double r_c = 0.0;   // m
};

enum class Termination {
    ReachedCriterion,
    HorizonExhausted,
    Error,
};

const char* to_string(Termination t);

// Periodic cross-check of the semi-analytic mechanics against the
// finite-difference verifier, recorded along the march.
struct FdCheck {
    double t_cor = 0.0;
    double p_semi = 0.0;
    double p_fd = 0.0;
    double rel_diff = 0.0; // |p_semi - p_fd| / p_lim
};

struct SimulationOutcome {
    std::vector<CorrosionState> series;
    std::optional<double> t_crit; // m
    std::optional<double> T_crit; // s
    Termination termination = Termination::Error;
    std::string message;
    std::vector<FdCheck> fd_checks;
};

struct EquilibriumPoint {
    double u_c = 0.0;
    double p = 0.0;
    double r_c = 0.0;
    bool saturated = false;
};

// Displacement at which the thermodynamic rust pressure equals the
// mechanical resistance of the (cracking) concrete cylinder. Stress-free
// states (t_unc <= t_cor) return (0, 0, r_i).
EquilibriumPoint equilibrium_solve(double t_cor, double t_unc,
                                   const ParameterSet& params);

// Same balance with an arbitrary mechanical response p_mech(u_c); used by
// tests to probe limits (e.g. no concrete resistance).
EquilibriumPoint equilibrium_solve_with(
    double t_cor, double t_unc, const RustParams& rust, const Geometry& geom,
    const std::function<double(double)>& mech_pressure, double rel_tol);

// Marches corrosion in t_cor until the full-wall cracking criterion
// p >= p_lim (t_crit located by bracketed refinement) or until the horizon.
SimulationOutcome run_simulation(const ParameterSet& params);
SimulationOutcome run_simulation(const ParameterSet& params,
                                 const CurrentSchedule& schedule);

// T_crit = t_crit / penetration_rate for constant i_a. Throws when the
// outcome carries no t_crit.
double concealment_time(const SimulationOutcome& outcome,
                        const SteelParams& steel);

// Columnar export, header: T_s,t_cor_m,t_unc_m,u_c_m,p_Pa,p_n,k_f,r_c_m.
void write_series_csv(std::ostream& out, const SimulationOutcome& outcome,
                      const ParameterSet& params);

nlohmann::json summary_json(const SimulationOutcome& outcome,
                            const ParameterSet& params);

} // namespace corrosim
