#pragma once

#include <iosfwd>
#include <vector>

#include "corrosim/params.hpp"

namespace corrosim {

// Radial profiles over the cylinder wall [r_i, r_o]. Sign conventions:
// u outward-positive, tension-positive stresses (so sigma_r <= 0 under
// internal pressure and the inner-boundary pressure is p = -sigma_r(r_i)).
struct MechanicalField {
    std::vector<double> r;
    std::vector<double> u;
    std::vector<double> sigma_r;
    std::vector<double> sigma_theta;
    std::vector<double> eps_cr;
    double crack_front = 0.0; // r_c; equals r_i when uncracked
};

struct PressureDisplacementPoint {
    double u_c = 0.0;  // inner-boundary displacement, m
    double p = 0.0;    // inner-boundary pressure, Pa
    double p_n = 0.0;  // p * r_i / (f_t (r_o - r_i))
    double r_c = 0.0;  // crack front radius, m
    bool saturated = false; // p_n capped at 1 (full-wall cracking)
};

// Pressure at which the inner boundary first reaches sigma_theta = f_t:
// p0 = f_t (r_o^2 - r_i^2) / (r_o^2 + r_i^2).
double crack_initiation_pressure(const Geometry& geom,
                                 const ConcreteParams& concrete);

// Full-wall cracking pressure p_lim = f_t (r_o - r_i) / r_i; p_n(p_lim) = 1.
double limit_pressure(const Geometry& geom, const ConcreteParams& concrete);

double nondimensional_pressure(double p, const Geometry& geom,
                               const ConcreteParams& concrete);

// Closed-form inner displacement of the uncracked annulus under pressure p.
double elastic_inner_displacement(double p, const Geometry& geom,
                                  const ConcreteParams& concrete);

// Classical plane-stress Lame field of the uncracked annulus. Throws if p
// exceeds the crack initiation pressure.
MechanicalField elastic_lame(double p, const Geometry& geom,
                             const ConcreteParams& concrete, int grid_n = 200);

// Exact solution with an ideally plastic cracked zone [r_i, r_c] where
// sigma_theta = f_t, matched to an elastic annulus [r_c, r_o]:
//   p_c      = f_t (r_o^2 - r_c^2) / (r_o^2 + r_c^2)
//   sigma_r  = f_t - r_c (p_c + f_t) / r          on [r_i, r_c]
//   p        = r_c (p_c + f_t) / r_i - f_t
PressureDisplacementPoint cracked_point(double r_c, const Geometry& geom,
                                        const ConcreteParams& concrete);

MechanicalField cracked_field(double r_c, const Geometry& geom,
                              const ConcreteParams& concrete,
                              int grid_n = 200);

struct CrackedSolution {
    PressureDisplacementPoint point;
    MechanicalField field;
};

CrackedSolution cracked_solution(double r_c, const Geometry& geom,
                                 const ConcreteParams& concrete,
                                 int grid_n = 200);

// Inverts the u_c -> p relation. Elastic inversion below the cracking seam;
// otherwise bracketed root-finding on the crack front (u_c(r_c) is monotone
// increasing). Displacements beyond full-wall cracking return the capped
// point (p = p_lim, p_n = 1) flagged saturated.
PressureDisplacementPoint pressure_from_displacement(
    double u_c, const Geometry& geom, const ConcreteParams& concrete);

struct FdOptions {
    int grid_n = 1000;   // intervals; must be >= 100
    int max_sweeps = 200;
    // Sub-cell crack-front refinement. The per-node fixed point quantises
    // the front to the grid, which caps convergence at O(h) near the front;
    // the refinement re-solves on two matched subdomains with the interface
    // position root-found from the front condition, restoring O(h^2).
    bool refine_front = true;
};

struct FdResult {
    PressureDisplacementPoint point;
    MechanicalField field;
    int sweeps = 0; // cracked-set fixed-point iterations used
};

// Independent verifier: second-order finite differences on the displacement
// form of the equilibrium equations with a per-node plasticity condition
// (node cracked iff trial sigma_theta > f_t), iterated to a fixed point of
// the cracked set.
FdResult fd_bvp_verify(double u_c, const Geometry& geom,
                       const ConcreteParams& concrete, FdOptions opts = {});

// Columnar dump, header: r,u,sigma_r,sigma_theta,eps_cr (SI units).
void write_field_csv(std::ostream& out, const MechanicalField& field);

} // namespace corrosim
