#include "corrosim/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "corrosim/errors.hpp"
#include "corrosim/io_util.hpp"
#include "corrosim/numerics.hpp"
#include "corrosim/version.hpp"

namespace corrosim {

CurrentSchedule::CurrentSchedule(double constant_current)
    : segments_{{0.0, constant_current}} {
    if (constant_current <= 0.0)
        throw ValidationError(
            "schedule: corrosion current density must be positive");
}

CurrentSchedule::CurrentSchedule(std::vector<Segment> segments)
    : segments_(std::move(segments)) {
    if (segments_.empty())
        throw ValidationError("schedule: needs at least one segment");
    if (segments_.front().start_time != 0.0)
        throw ValidationError("schedule: first segment must start at T = 0");
    for (std::size_t i = 0; i < segments_.size(); ++i) {
        if (segments_[i].current_density < 0.0)
            throw ValidationError("schedule: negative current density");
        if (i > 0 && segments_[i].start_time <= segments_[i - 1].start_time)
            throw ValidationError(
                "schedule: segment start times must be strictly increasing");
    }
}

double CurrentSchedule::current_at(double time) const {
    double current = segments_.front().current_density;
    for (const auto& s : segments_) {
        if (s.start_time > time) break;
        current = s.current_density;
    }
    return current;
}

double CurrentSchedule::time_at_penetration(double t_cor,
                                            const SteelParams& steel) const {
    if (t_cor <= 0.0) return 0.0;
    // rate per unit current density
    SteelParams unit = steel;
    unit.corrosion_current_density = 1.0;
    const double rate_per_current = penetration_rate(unit);

    double remaining = t_cor;
    for (std::size_t i = 0; i < segments_.size(); ++i) {
        const double rate =
            rate_per_current * segments_[i].current_density;
        const bool last = i + 1 == segments_.size();
        if (!last) {
            const double duration =
                segments_[i + 1].start_time - segments_[i].start_time;
            const double gained = rate * duration;
            if (gained < remaining) {
                remaining -= gained;
                continue;
            }
        }
        if (rate <= 0.0)
            throw SolverError(
                "schedule: corrosion stalls (zero current) before the "
                "requested penetration is reached");
        return segments_[i].start_time + remaining / rate;
    }
    throw SolverError("schedule: unreachable penetration");
}

const char* to_string(Termination t) {
    switch (t) {
        case Termination::ReachedCriterion: return "reached_criterion";
        case Termination::HorizonExhausted: return "horizon_exhausted";
        case Termination::Error: return "error";
    }
    return "error";
}

EquilibriumPoint equilibrium_solve_with(
    double t_cor, double t_unc, const RustParams& rust, const Geometry& geom,
    const std::function<double(double)>& mech_pressure, double rel_tol) {
    EquilibriumPoint pt;
    pt.r_c = geom.rebar_radius;
    if (t_unc <= t_cor) return pt; // stress-free: rust fits the vacated space

    const double u_star = t_unc - t_cor; // zero-pressure displacement
    auto thermo = [&](double u) {
        return thermo_pressure(u, t_cor, t_unc, rust, geom);
    };
    auto balance = [&](double u) { return thermo(u) - mech_pressure(u); };

    const double g0 = balance(0.0);
    if (g0 <= 0.0) {
        // rust pressure already balanced by (zero) resistance at u = 0
        pt.p = thermo(0.0);
        return pt;
    }

    const double x_tol = std::max(1e-18, 1e-13 * u_star);
    RootResult root = find_root(balance, 0.0, u_star, x_tol, 0.0, 300);
    const double p_t = thermo(root.x);
    const double p_m = mech_pressure(root.x);
    const double scale = std::max(std::abs(p_t), std::abs(p_m));
    if (scale > 0.0 && std::abs(p_t - p_m) > rel_tol * scale &&
        !root.converged) {
        std::ostringstream os;
        os << "equilibrium_solve: pressure match not reached (t_cor=" << t_cor
           << ", t_unc=" << t_unc << ", u=" << root.x << ", p_thermo=" << p_t
           << ", p_mech=" << p_m << ")";
        throw SolverError(os.str());
    }
    pt.u_c = root.x;
    pt.p = p_m;
    return pt;
}

EquilibriumPoint equilibrium_solve(double t_cor, double t_unc,
                                   const ParameterSet& params) {
    auto mech = [&](double u) {
        return pressure_from_displacement(u, params.geometry, params.concrete)
            .p;
    };
    EquilibriumPoint pt = equilibrium_solve_with(
        t_cor, t_unc, params.rust, params.geometry, mech,
        params.solver.pressure_match_tol);
    if (t_unc <= t_cor) {
        pt.r_c = params.geometry.rebar_radius;
        return pt;
    }
    // re-evaluate the mechanical point at the equilibrium displacement so
    // r_c/saturated describe the returned state
    PressureDisplacementPoint m =
        pressure_from_displacement(pt.u_c, params.geometry, params.concrete);
    pt.r_c = m.r_c;
    pt.saturated = m.saturated;
    if (m.saturated) {
        // beyond full-wall cracking the mechanical branch is capped; report
        // the thermodynamic pressure so the criterion crossing stays sharp
        pt.p = thermo_pressure(pt.u_c, t_cor, t_unc, params.rust,
                               params.geometry);
    }
    return pt;
}

namespace {

CorrosionState make_state(const TransportState& ts, const EquilibriumPoint& eq,
                          const ParameterSet& params,
                          const CurrentSchedule& schedule) {
    CorrosionState s;
    s.time = schedule.time_at_penetration(ts.t_cor, params.steel);
    s.t_cor = ts.t_cor;
    s.t_unc = ts.t_unc;
    s.u_c = eq.u_c;
    s.p = eq.p;
    s.p_n = nondimensional_pressure(eq.p, params.geometry, params.concrete);
    s.k_f = ts.k_f;
    s.r_c = eq.r_c;
    return s;
}

// Advances transport by dt_cor, halving the step as needed to keep the
// per-step k_f change within tolerance. Returns the accepted state; dt_cor
// is updated to the step actually taken.
TransportState advance_adaptive(const TransportState& from, double& dt_cor,
                                const ParameterSet& params) {
    const double floor = params.solver.dt_cor_max * 0x1p-24;
    double dt = dt_cor;
    for (;;) {
        try {
            TransportState next =
                advance_transport(from, dt, params.concrete, params.rust,
                                  params.steel, params.solver.kf_step_tol);
            dt_cor = dt;
            return next;
        } catch (const SolverError&) {
            dt *= 0.5;
            if (dt < floor) throw;
        }
    }
}

} // namespace

SimulationOutcome run_simulation(const ParameterSet& params) {
    return run_simulation(
        params, CurrentSchedule(params.steel.corrosion_current_density));
}

SimulationOutcome run_simulation(const ParameterSet& params,
                                 const CurrentSchedule& schedule) {
    params.validate();
    const double p_lim = limit_pressure(params.geometry, params.concrete);
    // Full-wall cracking in displacement form: p = p_lim exactly when the
    // crack front reaches r_o, i.e. u_c = u_sat. The pressure approaches
    // p_lim tangentially (dp/dr_c -> 0 at r_o), so the crossing is located
    // on u_c, where it is transversal; |p(t_crit) - p_lim| still lands
    // within the pressure tolerance.
    const double u_sat =
        cracked_point(params.geometry.outer_radius, params.geometry,
                      params.concrete)
            .u_c;

    SimulationOutcome out;
    TransportState ts;
    ts.k_f = flux_reduction_coefficient(0.0, params.concrete, params.rust);
    out.series.push_back(
        make_state(ts, EquilibriumPoint{0, 0, params.geometry.rebar_radius},
                   params, schedule));

    int step = 0;
    try {
        while (ts.t_cor < params.solver.t_cor_max) {
            ++step;
            const double last_pn = out.series.back().p_n;
            double dt = params.solver.dt_cor_max;
            if (last_pn >= 0.9) dt *= 0.25;
            dt = std::min(dt, params.solver.t_cor_max - ts.t_cor);

            TransportState next = advance_adaptive(ts, dt, params);
            EquilibriumPoint eq =
                equilibrium_solve(next.t_cor, next.t_unc, params);

            if (eq.saturated || eq.u_c >= u_sat || eq.p >= p_lim) {
                // bracketed refinement of the criterion crossing inside
                // [ts.t_cor, ts.t_cor + dt]
                auto overshoot = [&](double d) {
                    TransportState trial = advance_transport(
                        ts, d, params.concrete, params.rust, params.steel,
                        2.0 * params.solver.kf_step_tol);
                    return equilibrium_solve(trial.t_cor, trial.t_unc, params)
                               .u_c -
                           u_sat;
                };
                const double d_lo = std::min(1e-6 * dt, 0.5 * dt);
                const double d_tol = std::max(1e-15, 1e-7 * dt);
                double d_crit;
                if (overshoot(d_lo) >= 0.0) {
                    d_crit = d_lo; // crossing within the first sliver
                } else {
                    RootResult root = find_root(overshoot, d_lo, dt, d_tol,
                                                1e-10 * u_sat, 300);
                    d_crit = root.x;
                }
                TransportState final_ts = advance_transport(
                    ts, d_crit, params.concrete, params.rust, params.steel,
                    2.0 * params.solver.kf_step_tol);
                EquilibriumPoint final_eq = equilibrium_solve(
                    final_ts.t_cor, final_ts.t_unc, params);
                out.series.push_back(
                    make_state(final_ts, final_eq, params, schedule));
                out.t_crit = final_ts.t_cor;
                out.T_crit = out.series.back().time;
                out.termination = Termination::ReachedCriterion;
                return out;
            }

            ts = next;
            out.series.push_back(make_state(ts, eq, params, schedule));

            if (params.solver.fd_verify_every > 0 &&
                step % params.solver.fd_verify_every == 0 && eq.u_c > 0.0) {
                FdOptions opts;
                opts.grid_n = params.solver.grid_n;
                FdResult fd = fd_bvp_verify(eq.u_c, params.geometry,
                                            params.concrete, opts);
                out.fd_checks.push_back(
                    {ts.t_cor, eq.p, fd.point.p,
                     std::abs(eq.p - fd.point.p) / p_lim});
            }
        }
        out.termination = Termination::HorizonExhausted;
    } catch (const Error& e) {
        out.termination = Termination::Error;
        std::ostringstream os;
        os << e.what() << " [at step " << step << ", t_cor = " << ts.t_cor
           << " m, t_unc = " << ts.t_unc << " m]";
        out.message = os.str();
    }
    return out;
}

double concealment_time(const SimulationOutcome& outcome,
                        const SteelParams& steel) {
    if (!outcome.t_crit)
        throw SolverError(
            "concealment_time: the outcome carries no t_crit (termination: " +
            std::string(to_string(outcome.termination)) + ")");
    return *outcome.t_crit / penetration_rate(steel);
}

void write_series_csv(std::ostream& out, const SimulationOutcome& outcome,
                      const ParameterSet& params) {
    out << "# corrosim " << version << "\n";
    out << "# params " << to_json(params).dump() << "\n";
    out << "T_s,t_cor_m,t_unc_m,u_c_m,p_Pa,p_n,k_f,r_c_m\n";
    for (const auto& s : outcome.series)
        out << fmt_double(s.time) << ',' << fmt_double(s.t_cor) << ','
            << fmt_double(s.t_unc) << ',' << fmt_double(s.u_c) << ','
            << fmt_double(s.p) << ',' << fmt_double(s.p_n) << ','
            << fmt_double(s.k_f) << ',' << fmt_double(s.r_c) << '\n';
}

nlohmann::json summary_json(const SimulationOutcome& outcome,
                            const ParameterSet& params) {
    nlohmann::json doc;
    doc["version"] = version;
    doc["termination"] = to_string(outcome.termination);
    if (!outcome.message.empty()) doc["message"] = outcome.message;
    doc["steps"] = outcome.series.size();
    if (outcome.t_crit) {
        doc["t_crit_m"] = *outcome.t_crit;
        doc["t_crit_um"] = *outcome.t_crit * 1e6;
    } else {
        doc["t_crit_m"] = nullptr;
    }
    if (outcome.T_crit) {
        doc["T_crit_s"] = *outcome.T_crit;
        doc["T_crit_years"] = *outcome.T_crit / (365.25 * 86400.0);
    } else {
        doc["T_crit_s"] = nullptr;
    }
    if (!outcome.fd_checks.empty()) {
        double worst = 0.0;
        for (const auto& c : outcome.fd_checks)
            worst = std::max(worst, c.rel_diff);
        doc["fd_checks"] = {{"count", outcome.fd_checks.size()},
                            {"max_rel_diff", worst}};
    }
    doc["params"] = to_json(params);
    return doc;
}

} // namespace corrosim
