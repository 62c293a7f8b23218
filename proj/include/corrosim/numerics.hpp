#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "corrosim/errors.hpp"

namespace corrosim {

struct RootResult {
    double x = 0.0;
    double fx = 0.0;
    int iterations = 0;
    bool converged = false;
};

// Bracketed scalar root finder: bisection refined by secant steps.
// The bracket [a,b] must satisfy sign(f(a)) != sign(f(b)); the bracket is
// never abandoned, so convergence is guaranteed for continuous f. A secant
// candidate is taken when it falls comfortably inside the bracket and the
// bracket has been shrinking; otherwise the midpoint is used.
template <class F>
RootResult find_root(F&& f, double a, double b, double x_tol, double f_tol,
                     int max_iter = 200) {
    double fa = f(a);
    double fb = f(b);
    if (fa == 0.0) return {a, 0.0, 0, true};
    if (fb == 0.0) return {b, 0.0, 0, true};
    if (std::signbit(fa) == std::signbit(fb))
        throw SolverError("find_root: endpoints do not bracket a root (f(" +
                          std::to_string(a) + ")=" + std::to_string(fa) + ", f(" +
                          std::to_string(b) + ")=" + std::to_string(fb) + ")");

    RootResult res;
    double w_prev = std::abs(b - a);
    double w_prev2 = 2.0 * w_prev;
    for (int it = 1; it <= max_iter; ++it) {
        double width = std::abs(b - a);
        double x;
        // secant step unless the bracket failed to halve over two rounds
        bool stalled = width > 0.5 * w_prev2;
        if (fb != fa && !stalled) {
            x = (a * fb - b * fa) / (fb - fa);
            double lo = std::min(a, b), hi = std::max(a, b);
            double margin = 1e-3 * width;
            if (!(x > lo + margin && x < hi - margin)) x = 0.5 * (a + b);
        } else {
            x = 0.5 * (a + b);
        }
        w_prev2 = w_prev;
        w_prev = width;

        double fx = f(x);
        res = {x, fx, it, false};
        if (std::abs(fx) <= f_tol || width <= x_tol) {
            res.converged = true;
            return res;
        }
        if (std::signbit(fx) == std::signbit(fa)) {
            a = x;
            fa = fx;
        } else {
            b = x;
            fb = fx;
        }
    }
    return res;
}

struct MinResult {
    double x = 0.0;
    double fx = 0.0;
    int evaluations = 0;
};

// Golden-section minimisation on [a,b]; deterministic, derivative-free.
template <class F>
MinResult golden_section_min(F&& f, double a, double b, double x_tol,
                             int max_iter = 500) {
    constexpr double invphi = 0.6180339887498949;
    double c = b - invphi * (b - a);
    double d = a + invphi * (b - a);
    double fc = f(c);
    double fd = f(d);
    int evals = 2;
    for (int it = 0; it < max_iter && (b - a) > x_tol; ++it) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - invphi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + invphi * (b - a);
            fd = f(d);
        }
        ++evals;
    }
    return fc < fd ? MinResult{c, fc, evals} : MinResult{d, fd, evals};
}

struct LinearFit {
    double intercept = 0.0;
    double slope = 0.0;
    double r_squared = 0.0;
};

// Ordinary least-squares line through (x,y). Throws on degenerate x.
inline LinearFit fit_line(const std::vector<double>& x,
                          const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2)
        throw SolverError("fit_line: need at least two matched points");
    const auto n = static_cast<double>(x.size());
    double sx = 0, sy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
    }
    const double mx = sx / n, my = sy / n;
    double sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    // degenerate abscissae up to round-off of the mean
    const double x_scale = std::abs(mx) + 1e-300;
    if (sxx <= n * (1e-14 * x_scale) * (1e-14 * x_scale))
        throw SolverError("fit_line: all abscissae are equal");
    LinearFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    double ss_res = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        double r = y[i] - (fit.intercept + fit.slope * x[i]);
        ss_res += r * r;
    }
    fit.r_squared = syy > 0.0 ? 1.0 - ss_res / syy : 1.0;
    return fit;
}

// Thomas algorithm; diag/rhs are overwritten. No pivoting -- callers must
// supply diagonally dominant systems.
inline std::vector<double> solve_tridiagonal(std::vector<double> lower,
                                             std::vector<double> diag,
                                             std::vector<double> upper,
                                             std::vector<double> rhs) {
    const std::size_t n = diag.size();
    if (lower.size() != n || upper.size() != n || rhs.size() != n)
        throw SolverError("solve_tridiagonal: band size mismatch");
    for (std::size_t i = 1; i < n; ++i) {
        double w = lower[i] / diag[i - 1];
        diag[i] -= w * upper[i - 1];
        rhs[i] -= w * rhs[i - 1];
    }
    std::vector<double> x(n);
    x[n - 1] = rhs[n - 1] / diag[n - 1];
    for (std::size_t i = n - 1; i-- > 0;)
        x[i] = (rhs[i] - upper[i] * x[i + 1]) / diag[i];
    return x;
}

} // namespace corrosim
