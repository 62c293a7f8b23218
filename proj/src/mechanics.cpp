#include "corrosim/mechanics.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <ostream>
#include <sstream>

#include "corrosim/errors.hpp"
#include "corrosim/io_util.hpp"
#include "corrosim/numerics.hpp"

namespace corrosim {

namespace {

std::vector<double> radial_grid(const Geometry& geom, int grid_n) {
    if (grid_n < 1) throw SolverError("mechanics: grid_n must be positive");
    std::vector<double> r(static_cast<std::size_t>(grid_n) + 1);
    const double h = geom.cover() / grid_n;
    for (int j = 0; j <= grid_n; ++j) r[j] = geom.rebar_radius + j * h;
    r.back() = geom.outer_radius;
    return r;
}

// Pressure on the elastic annulus [r_c, r_o] that holds its inner boundary
// exactly at the cracking limit sigma_theta(r_c) = f_t.
double interface_pressure(double r_c, const Geometry& geom,
                          const ConcreteParams& concrete) {
    const double ro2 = geom.outer_radius * geom.outer_radius;
    const double rc2 = r_c * r_c;
    return concrete.tensile_strength * (ro2 - rc2) / (ro2 + rc2);
}

// Lame displacement of an annulus [a, r_o] under inner pressure q,
// evaluated at radius r (plane stress).
double lame_u(double r, double a, double q, const Geometry& geom,
              const ConcreteParams& concrete) {
    const double ro2 = geom.outer_radius * geom.outer_radius;
    const double coef = q * a * a / (concrete.youngs_modulus * (ro2 - a * a));
    return coef * ((1.0 - concrete.poisson_ratio) * r +
                   (1.0 + concrete.poisson_ratio) * ro2 / r);
}

} // namespace

double crack_initiation_pressure(const Geometry& geom,
                                 const ConcreteParams& concrete) {
    const double ri2 = geom.rebar_radius * geom.rebar_radius;
    const double ro2 = geom.outer_radius * geom.outer_radius;
    return concrete.tensile_strength * (ro2 - ri2) / (ro2 + ri2);
}

double limit_pressure(const Geometry& geom, const ConcreteParams& concrete) {
    return concrete.tensile_strength * geom.cover() / geom.rebar_radius;
}

double nondimensional_pressure(double p, const Geometry& geom,
                               const ConcreteParams& concrete) {
    return p * geom.rebar_radius /
           (concrete.tensile_strength * geom.cover());
}

double elastic_inner_displacement(double p, const Geometry& geom,
                                  const ConcreteParams& concrete) {
    return lame_u(geom.rebar_radius, geom.rebar_radius, p, geom, concrete);
}

MechanicalField elastic_lame(double p, const Geometry& geom,
                             const ConcreteParams& concrete, int grid_n) {
    if (p < 0.0) throw SolverError("elastic_lame: negative pressure");
    const double p0 = crack_initiation_pressure(geom, concrete);
    if (p > p0 * (1.0 + 1e-12))
        throw SolverError(
            "elastic_lame: pressure exceeds the crack initiation pressure; "
            "use the cracked solver");

    MechanicalField f;
    f.r = radial_grid(geom, grid_n);
    f.crack_front = geom.rebar_radius;
    const double ri2 = geom.rebar_radius * geom.rebar_radius;
    const double ro2 = geom.outer_radius * geom.outer_radius;
    const double coef = p * ri2 / (ro2 - ri2);
    f.u.reserve(f.r.size());
    f.sigma_r.reserve(f.r.size());
    f.sigma_theta.reserve(f.r.size());
    f.eps_cr.assign(f.r.size(), 0.0);
    for (double r : f.r) {
        const double ratio = ro2 / (r * r);
        f.sigma_r.push_back(coef * (1.0 - ratio));
        f.sigma_theta.push_back(coef * (1.0 + ratio));
        f.u.push_back(lame_u(r, geom.rebar_radius, p, geom, concrete));
    }
    f.sigma_r.back() = 0.0; // exact boundary condition
    return f;
}

PressureDisplacementPoint cracked_point(double r_c, const Geometry& geom,
                                        const ConcreteParams& concrete) {
    if (r_c < geom.rebar_radius * (1.0 - 1e-12) ||
        r_c > geom.outer_radius * (1.0 + 1e-12))
        throw SolverError("cracked_point: crack front outside [r_i, r_o]");
    r_c = std::clamp(r_c, geom.rebar_radius, geom.outer_radius);

    const double f_t = concrete.tensile_strength;
    const double E = concrete.youngs_modulus;
    const double nu = concrete.poisson_ratio;
    const double r_i = geom.rebar_radius;
    const double ro2 = geom.outer_radius * geom.outer_radius;

    const double p_c = interface_pressure(r_c, geom, concrete);
    const double p = r_c * (p_c + f_t) / r_i - f_t;

    // u at the crack front from the elastic annulus, then inward integration
    // of du/dr = (sigma_r - nu f_t)/E through the cracked zone.
    const double u_rc = f_t * r_c / E *
                        ((1.0 - nu) * r_c * r_c + (1.0 + nu) * ro2) /
                        (ro2 + r_c * r_c);
    const double u_c = u_rc +
                       (r_c * (p_c + f_t) * std::log(r_c / r_i) -
                        (1.0 - nu) * f_t * (r_c - r_i)) /
                           E;

    PressureDisplacementPoint pt;
    pt.u_c = u_c;
    pt.p = p;
    pt.p_n = nondimensional_pressure(p, geom, concrete);
    pt.r_c = r_c;
    return pt;
}

MechanicalField cracked_field(double r_c, const Geometry& geom,
                              const ConcreteParams& concrete, int grid_n) {
    const double f_t = concrete.tensile_strength;
    const double E = concrete.youngs_modulus;
    const double nu = concrete.poisson_ratio;
    const double ro2 = geom.outer_radius * geom.outer_radius;
    const double p_c = interface_pressure(r_c, geom, concrete);
    const double u_rc = f_t * r_c / E *
                        ((1.0 - nu) * r_c * r_c + (1.0 + nu) * ro2) /
                        (ro2 + r_c * r_c);

    MechanicalField f;
    f.r = radial_grid(geom, grid_n);
    f.crack_front = r_c;
    const std::size_t n = f.r.size();
    f.u.resize(n);
    f.sigma_r.resize(n);
    f.sigma_theta.resize(n);
    f.eps_cr.assign(n, 0.0);
    const double rc2 = r_c * r_c;
    const double elastic_coef = p_c * rc2 / (ro2 - rc2);
    for (std::size_t j = 0; j < n; ++j) {
        const double r = f.r[j];
        if (r <= r_c) {
            f.sigma_theta[j] = f_t;
            f.sigma_r[j] = f_t - r_c * (p_c + f_t) / r;
            f.u[j] = u_rc + (r_c * (p_c + f_t) * std::log(r_c / r) -
                             (1.0 - nu) * f_t * (r_c - r)) /
                                E;
            f.eps_cr[j] =
                f.u[j] / r + nu * f.sigma_r[j] / E - f_t / E;
        } else {
            const double ratio = ro2 / (r * r);
            f.sigma_r[j] = elastic_coef * (1.0 - ratio);
            f.sigma_theta[j] = elastic_coef * (1.0 + ratio);
            f.u[j] = lame_u(r, r_c, p_c, geom, concrete);
        }
    }
    f.sigma_r.back() = 0.0;
    return f;
}

CrackedSolution cracked_solution(double r_c, const Geometry& geom,
                                 const ConcreteParams& concrete, int grid_n) {
    return {cracked_point(r_c, geom, concrete),
            cracked_field(r_c, geom, concrete, grid_n)};
}

PressureDisplacementPoint pressure_from_displacement(
    double u_c, const Geometry& geom, const ConcreteParams& concrete) {
    if (u_c < 0.0)
        throw SolverError("pressure_from_displacement: negative u_c");

    const double p0 = crack_initiation_pressure(geom, concrete);
    const double u0 = elastic_inner_displacement(p0, geom, concrete);

    if (u_c <= u0) {
        PressureDisplacementPoint pt;
        pt.u_c = u_c;
        pt.p = u0 > 0.0 ? p0 * (u_c / u0) : 0.0;
        pt.p_n = nondimensional_pressure(pt.p, geom, concrete);
        pt.r_c = geom.rebar_radius;
        return pt;
    }

    const double u_sat =
        cracked_point(geom.outer_radius, geom, concrete).u_c;
    if (u_c >= u_sat) {
        PressureDisplacementPoint pt;
        pt.u_c = u_c;
        pt.p = limit_pressure(geom, concrete);
        pt.p_n = 1.0;
        pt.r_c = geom.outer_radius;
        pt.saturated = true;
        return pt;
    }

    // u_c(r_c) is monotone increasing, so the root is bracketed by
    // [r_i, r_o]; resolve the front to 1e-9 m.
    auto fn = [&](double rc) {
        return cracked_point(rc, geom, concrete).u_c - u_c;
    };
    RootResult root = find_root(fn, geom.rebar_radius, geom.outer_radius,
                                1e-9, 0.0, 200);
    if (!root.converged) {
        std::ostringstream os;
        os << "pressure_from_displacement: crack-front search did not "
              "converge (last r_c = "
           << root.x << ", residual = " << root.fx << " after "
           << root.iterations << " iterations)";
        throw SolverError(os.str());
    }
    PressureDisplacementPoint pt = cracked_point(root.x, geom, concrete);
    pt.u_c = u_c;
    return pt;
}

namespace {

struct FdWork {
    std::vector<double> u;
    std::vector<double> du;
    std::vector<char> cracked;
};

// Assembles and solves the tridiagonal system for a fixed cracked set.
// Elastic node:  u'' + u'/r - u/r^2 = 0
// Cracked node:  u'' + u'/r = (1 - nu) f_t / (E r)
// with u(r_i) = u_c and sigma_r(r_o) = 0 eliminated through a ghost node.
std::vector<double> fd_solve(const std::vector<double>& r, double h,
                             double u_c, const std::vector<char>& cracked,
                             const ConcreteParams& concrete) {
    const std::size_t n = r.size();
    const double f_t = concrete.tensile_strength;
    const double E = concrete.youngs_modulus;
    const double nu = concrete.poisson_ratio;

    std::vector<double> lower(n, 0.0), diag(n, 0.0), upper(n, 0.0),
        rhs(n, 0.0);

    diag[0] = 1.0;
    rhs[0] = u_c;

    const double inv_h2 = 1.0 / (h * h);
    for (std::size_t j = 1; j + 1 < n; ++j) {
        const double rj = r[j];
        lower[j] = inv_h2 - 1.0 / (2.0 * h * rj);
        upper[j] = inv_h2 + 1.0 / (2.0 * h * rj);
        if (cracked[j]) {
            diag[j] = -2.0 * inv_h2;
            rhs[j] = (1.0 - nu) * f_t / (E * rj);
        } else {
            diag[j] = -2.0 * inv_h2 - 1.0 / (rj * rj);
        }
    }

    const std::size_t last = n - 1;
    const double rn = r[last];
    lower[last] = 2.0 * inv_h2;
    if (cracked[last]) {
        diag[last] = -2.0 * inv_h2;
        rhs[last] = f_t / E * (2.0 * nu / h + 1.0 / rn);
    } else {
        diag[last] = -2.0 * inv_h2 - 2.0 * nu / (h * rn) -
                     (1.0 + nu) / (rn * rn);
    }

    return solve_tridiagonal(std::move(lower), std::move(diag),
                             std::move(upper), std::move(rhs));
}

std::vector<double> fd_derivative(const std::vector<double>& u, double h) {
    const std::size_t n = u.size();
    std::vector<double> du(n);
    du[0] = (-3.0 * u[0] + 4.0 * u[1] - u[2]) / (2.0 * h);
    for (std::size_t j = 1; j + 1 < n; ++j)
        du[j] = (u[j + 1] - u[j - 1]) / (2.0 * h);
    du[n - 1] = (3.0 * u[n - 1] - 4.0 * u[n - 2] + u[n - 3]) / (2.0 * h);
    return du;
}

std::size_t flags_hash(const std::vector<char>& flags) {
    std::size_t h = 1469598103934665603ull;
    for (char c : flags) {
        h ^= static_cast<std::size_t>(c);
        h *= 1099511628211ull;
    }
    return h;
}

// --- sub-cell front refinement -------------------------------------------
//
// Two matched FD subdomains: cracked ODE on [r_i, rho], elastic ODE on
// [rho, r_o]. Both interface conditions (u and sigma_r continuous) are
// linear, so each subdomain is solved for a unit interface displacement and
// superposed; the front position rho is then the root of the remaining
// condition sigma_theta(rho+) = f_t.

// Cracked ODE with Dirichlet values at both ends.
std::vector<double> solve_cracked_dirichlet(double a, double b, int n,
                                            double u_a, double u_b,
                                            const ConcreteParams& concrete) {
    const double h = (b - a) / n;
    const double inv_h2 = 1.0 / (h * h);
    const std::size_t m = static_cast<std::size_t>(n) + 1;
    std::vector<double> lower(m, 0.0), diag(m, 0.0), upper(m, 0.0),
        rhs(m, 0.0);
    diag[0] = 1.0;
    rhs[0] = u_a;
    for (std::size_t j = 1; j + 1 < m; ++j) {
        const double rj = a + static_cast<double>(j) * h;
        lower[j] = inv_h2 - 1.0 / (2.0 * h * rj);
        diag[j] = -2.0 * inv_h2;
        upper[j] = inv_h2 + 1.0 / (2.0 * h * rj);
        rhs[j] = (1.0 - concrete.poisson_ratio) * concrete.tensile_strength /
                 (concrete.youngs_modulus * rj);
    }
    diag[m - 1] = 1.0;
    rhs[m - 1] = u_b;
    return solve_tridiagonal(std::move(lower), std::move(diag),
                             std::move(upper), std::move(rhs));
}

// Elastic ODE with Dirichlet value at the inner end and sigma_r = 0 at r_o.
std::vector<double> solve_elastic_robin(double a, double b, int n, double u_a,
                                        const ConcreteParams& concrete) {
    const double h = (b - a) / n;
    const double inv_h2 = 1.0 / (h * h);
    const double nu = concrete.poisson_ratio;
    const std::size_t m = static_cast<std::size_t>(n) + 1;
    std::vector<double> lower(m, 0.0), diag(m, 0.0), upper(m, 0.0),
        rhs(m, 0.0);
    diag[0] = 1.0;
    rhs[0] = u_a;
    for (std::size_t j = 1; j + 1 < m; ++j) {
        const double rj = a + static_cast<double>(j) * h;
        lower[j] = inv_h2 - 1.0 / (2.0 * h * rj);
        diag[j] = -2.0 * inv_h2 - 1.0 / (rj * rj);
        upper[j] = inv_h2 + 1.0 / (2.0 * h * rj);
    }
    lower[m - 1] = 2.0 * inv_h2;
    diag[m - 1] = -2.0 * inv_h2 - 2.0 * nu / (h * b) - (1.0 + nu) / (b * b);
    return solve_tridiagonal(std::move(lower), std::move(diag),
                             std::move(upper), std::move(rhs));
}

struct FrontSolve {
    double rho = 0.0;
    double u_interface = 0.0;
    double sigma_theta_residual = 0.0; // sigma_theta(rho+) - f_t
    std::vector<double> left;          // includes interface node
    std::vector<double> right;         // starts at interface node
    int n_left = 0;
    int n_right = 0;
};

FrontSolve solve_with_front(double rho, double u_c, int grid_n,
                            const Geometry& geom,
                            const ConcreteParams& concrete) {
    const double f_t = concrete.tensile_strength;
    const double E = concrete.youngs_modulus;
    const double nu = concrete.poisson_ratio;
    const double span = geom.cover();

    FrontSolve fs;
    fs.rho = rho;
    fs.n_left = std::max(
        2, static_cast<int>(std::llround(grid_n * (rho - geom.rebar_radius) /
                                         span)));
    fs.n_right = std::max(2, grid_n - fs.n_left);
    const double h_l = (rho - geom.rebar_radius) / fs.n_left;
    const double h_r = (geom.outer_radius - rho) / fs.n_right;

    // Left solutions for interface values 0 and 1; affine superposition.
    const auto l0 = solve_cracked_dirichlet(geom.rebar_radius, rho, fs.n_left,
                                            u_c, 0.0, concrete);
    const auto l1 = solve_cracked_dirichlet(geom.rebar_radius, rho, fs.n_left,
                                            u_c, 1.0, concrete);
    // Right solution for a unit interface value; homogeneous otherwise.
    const auto r1 =
        solve_elastic_robin(rho, geom.outer_radius, fs.n_right, 1.0, concrete);

    const std::size_t nl = l0.size();
    auto left_slope_at_interface = [&](const std::vector<double>& u) {
        return (3.0 * u[nl - 1] - 4.0 * u[nl - 2] + u[nl - 3]) / (2.0 * h_l);
    };
    // sigma_r on the cracked side: E u' + nu f_t = s0 + s1 * u_I
    const double s0 = E * left_slope_at_interface(l0) + nu * f_t;
    const double s1 = E * (left_slope_at_interface(l1) -
                           left_slope_at_interface(l0));
    // sigma_r on the elastic side: E/(1-nu^2) (u' + nu u/rho) = t1 * u_I
    const double du_r_unit = (-3.0 * r1[0] + 4.0 * r1[1] - r1[2]) / (2.0 * h_r);
    const double t1 = E / (1.0 - nu * nu) * (du_r_unit + nu / rho);

    const double denom = t1 - s1;
    if (denom == 0.0)
        throw SolverError("fd_bvp_verify: singular interface matching");
    fs.u_interface = s0 / denom;

    // Front condition: elastic-side tangential stress reaches f_t at rho.
    const double sigma_theta_unit =
        E / (1.0 - nu * nu) * (1.0 / rho + nu * du_r_unit);
    fs.sigma_theta_residual = sigma_theta_unit * fs.u_interface - f_t;

    fs.left.resize(nl);
    for (std::size_t j = 0; j < nl; ++j)
        fs.left[j] = l0[j] + fs.u_interface * (l1[j] - l0[j]);
    fs.right.resize(r1.size());
    for (std::size_t j = 0; j < r1.size(); ++j)
        fs.right[j] = fs.u_interface * r1[j];
    return fs;
}

FdResult assemble_front_result(const FrontSolve& fs, double u_c,
                               const Geometry& geom,
                               const ConcreteParams& concrete, int sweeps) {
    const double f_t = concrete.tensile_strength;
    const double E = concrete.youngs_modulus;
    const double nu = concrete.poisson_ratio;
    const double h_l = (fs.rho - geom.rebar_radius) / fs.n_left;
    const double h_r = (geom.outer_radius - fs.rho) / fs.n_right;

    MechanicalField field;
    field.crack_front = fs.rho;
    const std::size_t nl = fs.left.size();
    const std::size_t nr = fs.right.size();
    field.r.reserve(nl + nr - 1);
    field.u.reserve(nl + nr - 1);
    for (std::size_t j = 0; j < nl; ++j) {
        field.r.push_back(geom.rebar_radius + static_cast<double>(j) * h_l);
        field.u.push_back(fs.left[j]);
    }
    field.r.back() = fs.rho;
    for (std::size_t j = 1; j < nr; ++j) {
        field.r.push_back(fs.rho + static_cast<double>(j) * h_r);
        field.u.push_back(fs.right[j]);
    }
    field.r.back() = geom.outer_radius;

    const std::size_t n = field.r.size();
    field.sigma_r.resize(n);
    field.sigma_theta.resize(n);
    field.eps_cr.assign(n, 0.0);

    auto du_left = [&](std::size_t j) {
        if (j == 0)
            return (-3.0 * fs.left[0] + 4.0 * fs.left[1] - fs.left[2]) /
                   (2.0 * h_l);
        if (j == nl - 1)
            return (3.0 * fs.left[j] - 4.0 * fs.left[j - 1] +
                    fs.left[j - 2]) /
                   (2.0 * h_l);
        return (fs.left[j + 1] - fs.left[j - 1]) / (2.0 * h_l);
    };
    auto du_right = [&](std::size_t j) {
        if (j == 0)
            return (-3.0 * fs.right[0] + 4.0 * fs.right[1] - fs.right[2]) /
                   (2.0 * h_r);
        if (j == nr - 1)
            return (3.0 * fs.right[j] - 4.0 * fs.right[j - 1] +
                    fs.right[j - 2]) /
                   (2.0 * h_r);
        return (fs.right[j + 1] - fs.right[j - 1]) / (2.0 * h_r);
    };

    for (std::size_t j = 0; j < nl; ++j) {
        const double r = field.r[j];
        field.sigma_r[j] = E * du_left(j) + nu * f_t;
        field.sigma_theta[j] = f_t;
        field.eps_cr[j] =
            field.u[j] / r + nu * field.sigma_r[j] / E - f_t / E;
    }
    for (std::size_t j = 1; j < nr; ++j) {
        const std::size_t k = nl - 1 + j;
        const double r = field.r[k];
        field.sigma_r[k] =
            E / (1.0 - nu * nu) * (du_right(j) + nu * field.u[k] / r);
        field.sigma_theta[k] =
            E / (1.0 - nu * nu) * (field.u[k] / r + nu * du_right(j));
    }

    FdResult res;
    res.field = std::move(field);
    res.sweeps = sweeps;
    res.point.u_c = u_c;
    res.point.p = -res.field.sigma_r.front();
    res.point.p_n = nondimensional_pressure(res.point.p, geom, concrete);
    res.point.r_c = fs.rho;
    return res;
}

} // namespace

FdResult fd_bvp_verify(double u_c, const Geometry& geom,
                       const ConcreteParams& concrete, FdOptions opts) {
    if (u_c < 0.0) throw SolverError("fd_bvp_verify: negative u_c");
    if (opts.grid_n < 100)
        throw SolverError("fd_bvp_verify: grid_n must be at least 100");

    const std::vector<double> r = radial_grid(geom, opts.grid_n);
    const double h = geom.cover() / opts.grid_n;
    const std::size_t n = r.size();
    const double f_t = concrete.tensile_strength;
    const double E = concrete.youngs_modulus;
    const double nu = concrete.poisson_ratio;

    std::vector<char> cracked(n, 0);
    std::vector<double> u, du;
    std::vector<std::size_t> seen;
    int sweeps = 0;
    for (;; ++sweeps) {
        if (sweeps > opts.max_sweeps)
            throw SolverError(
                "fd_bvp_verify: cracked-set iteration exceeded the sweep "
                "cap without reaching a fixed point");
        u = fd_solve(r, h, u_c, cracked, concrete);
        du = fd_derivative(u, h);

        std::vector<char> next(n, 0);
        for (std::size_t j = 0; j < n; ++j) {
            const double sigma_theta_trial =
                E / (1.0 - nu * nu) * (u[j] / r[j] + nu * du[j]);
            next[j] = sigma_theta_trial > f_t ? 1 : 0;
        }
        if (next == cracked) break;
        const std::size_t hsh = flags_hash(next);
        if (std::find(seen.begin(), seen.end(), hsh) != seen.end())
            throw SolverError(
                "fd_bvp_verify: cracked-set iteration entered a cycle");
        seen.push_back(hsh);
        cracked = std::move(next);
    }

    std::size_t last_cracked = 0;
    bool any_cracked = false;
    for (std::size_t j = 0; j < n; ++j)
        if (cracked[j]) {
            last_cracked = j;
            any_cracked = true;
        }

    // Sub-cell refinement of the crack front. The fixed point above brackets
    // the front to one cell; re-solving on matched subdomains with the front
    // position as the root of sigma_theta(rho+) = f_t removes the O(h)
    // quantisation error.
    if (opts.refine_front && any_cracked && !cracked.back()) {
        const double r_front = r[last_cracked];
        const double lo =
            std::max(geom.rebar_radius + 0.5 * h, r_front - 2.0 * h);
        const double hi =
            std::min(geom.outer_radius - 0.5 * h, r_front + 2.0 * h);
        auto residual = [&](double rho) {
            return solve_with_front(rho, u_c, opts.grid_n, geom, concrete)
                .sigma_theta_residual;
        };
        double g_lo = residual(lo);
        double g_hi = residual(hi);
        if (std::signbit(g_lo) != std::signbit(g_hi)) {
            RootResult root =
                find_root(residual, lo, hi, 1e-13, 1e-9 * f_t, 100);
            if (root.converged) {
                FrontSolve fs = solve_with_front(root.x, u_c, opts.grid_n,
                                                 geom, concrete);
                return assemble_front_result(fs, u_c, geom, concrete, sweeps);
            }
        }
        // fall through to the unrefined per-node solution
    }

    MechanicalField field;
    field.r = r;
    field.u = u;
    field.sigma_r.resize(n);
    field.sigma_theta.resize(n);
    field.eps_cr.assign(n, 0.0);
    field.crack_front = geom.rebar_radius;
    for (std::size_t j = 0; j < n; ++j) {
        if (cracked[j]) {
            field.sigma_r[j] = E * du[j] + nu * f_t;
            field.sigma_theta[j] = f_t;
            field.eps_cr[j] =
                u[j] / r[j] + nu * field.sigma_r[j] / E - f_t / E;
            field.crack_front = r[j];
        } else {
            field.sigma_r[j] =
                E / (1.0 - nu * nu) * (du[j] + nu * u[j] / r[j]);
            field.sigma_theta[j] =
                E / (1.0 - nu * nu) * (u[j] / r[j] + nu * du[j]);
        }
    }

    FdResult res;
    res.field = std::move(field);
    res.sweeps = sweeps;
    res.point.u_c = u_c;
    res.point.p = -res.field.sigma_r.front();
    res.point.p_n = nondimensional_pressure(res.point.p, geom, concrete);
    res.point.r_c = res.field.crack_front;
    res.point.saturated = cracked.back() != 0;
    return res;
}

void write_field_csv(std::ostream& out, const MechanicalField& field) {
    out << "r,u,sigma_r,sigma_theta,eps_cr\n";
    for (std::size_t j = 0; j < field.r.size(); ++j)
        out << fmt_double(field.r[j]) << ',' << fmt_double(field.u[j]) << ','
            << fmt_double(field.sigma_r[j]) << ','
            << fmt_double(field.sigma_theta[j]) << ','
            << fmt_double(field.eps_cr[j]) << '\n';
}

} // namespace corrosim
