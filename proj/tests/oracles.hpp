#pragma once

// Brute-force reference computations used by the tests. They only call
// ScalarField::eval and share no code with the library's quadrature.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <tuple>
#include <vector>

#include "polarproj/fields.hpp"

namespace oracle {

using polarproj::ScalarField;
using polarproj::Vec;

// Gauss-Legendre nodes/weights on [-1, 1] by Newton iteration.
inline void gl_rule(int m, std::vector<double>& x, std::vector<double>& w) {
    x.assign(static_cast<std::size_t>(m), 0.0);
    w.assign(static_cast<std::size_t>(m), 0.0);
    for (int i = 0; i < m; ++i) {
        double z = std::cos(std::numbers::pi * (i + 0.75) / (m + 0.5));
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 1; j <= m; ++j) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j - 1.0) * z * p1 - (j - 1.0) * p2) / j;
            }
            const double dp = m * (z * p0 - p1) / (z * z - 1.0);
            const double dz = p0 / dp;
            z -= dz;
            if (std::abs(dz) < 1e-16) {
                w[static_cast<std::size_t>(i)] = 2.0 / ((1.0 - z * z) * dp * dp);
                break;
            }
        }
        x[static_cast<std::size_t>(i)] = z;
    }
}

// Composite tensor Gauss rule on a planar box, points and weights.
struct Rule2 {
    std::vector<double> x0, x1, w;
};

inline Rule2 box_rule(double a0, double b0, double a1, double b1, int cells, int m) {
    std::vector<double> gx, gw;
    gl_rule(m, gx, gw);
    auto axis = [&](double a, double b, std::vector<double>& px, std::vector<double>& pw) {
        const double h = (b - a) / cells;
        for (int c = 0; c < cells; ++c)
            for (int k = 0; k < m; ++k) {
                px.push_back(a + h * (c + 0.5 * (gx[static_cast<std::size_t>(k)] + 1.0)));
                pw.push_back(0.5 * h * gw[static_cast<std::size_t>(k)]);
            }
    };
    std::vector<double> p0, w0, p1, w1;
    axis(a0, b0, p0, w0);
    axis(a1, b1, p1, w1);
    Rule2 r;
    for (std::size_t i = 0; i < p0.size(); ++i)
        for (std::size_t j = 0; j < p1.size(); ++j) {
            r.x0.push_back(p0[i]);
            r.x1.push_back(p1[j]);
            r.w.push_back(w0[i] * w1[j]);
        }
    return r;
}

// Extent of the support of f along the unit direction u (planar fields with
// a centrally symmetric support): h(u) + h(-u).
inline double support_width(const ScalarField& f, const Vec& u) {
    Vec m{-u[0], -u[1]};
    return f.support_function(u) + f.support_function(m);
}

// FracLp gauge of a planar field at a unit direction u, by a tensor Gauss rule
// in x and a composite Gauss rule in log t. With t = e^v,
//   ||u||^{ps} = p (1-s) int dv int (|f(x + t u) - f(x)| / t^s)^p dx,
// and both cut-off tails are closed-form: below t_lo the integrand is
// proportional to t^{p(1-s)}, beyond the support width it is 2 ||f||_p^p t^{-ps}.
inline double frac_lp_gauge(const ScalarField& f, double s, double p, const Vec& u, int x_cells = 160,
                            int t_panels = 48, double t_lo = 1e-4) {
    const double width = support_width(f, u);
    const Vec hw = f.bounding_half_widths();
    std::vector<double> gx, gw;
    gl_rule(8, gx, gw);
    auto phi = [&](double t) {
        const double a0 = -hw[0] - std::max(0.0, t * u[0]), b0 = hw[0] - std::min(0.0, t * u[0]);
        const double a1 = -hw[1] - std::max(0.0, t * u[1]), b1 = hw[1] - std::min(0.0, t * u[1]);
        const Rule2 r = box_rule(a0, b0, a1, b1, x_cells, 3);
        const double ts = std::pow(t, s);
        double sum = 0.0;
        for (std::size_t i = 0; i < r.w.size(); ++i) {
            const double x[2] = {r.x0[i], r.x1[i]};
            const double y[2] = {x[0] + t * u[0], x[1] + t * u[1]};
            const double d = std::abs(f.eval(y) - f.eval(x)) / ts;
            if (d > 0.0) sum += r.w[i] * std::pow(d, p);
        }
        return sum;
    };
    // Breakpoints in v at log t_lo, the octave below the width, and the width.
    const double v0 = std::log(t_lo), v1 = std::log(0.5 * width), v2 = std::log(width);
    double total = 0.0;
    for (auto [a, b, panels] : {std::tuple{v0, v1, t_panels}, std::tuple{v1, v2, t_panels / 2}}) {
        const double h = (b - a) / panels;
        for (int c = 0; c < panels; ++c)
            for (std::size_t k = 0; k < gx.size(); ++k) {
                const double v = a + h * (c + 0.5 * (gx[k] + 1.0));
                total += 0.5 * h * gw[k] * phi(std::exp(v));
            }
    }
    total += phi(t_lo) / (p * (1.0 - s));
    total += phi(width) / (p * s);
    return std::exp(std::log(p * (1.0 - s) * total) / (p * s));
}

// FracLInf gauge of a planar field at a unit direction u by a dense scan:
// x over the nodes of a 256 x 256 cell grid on the support box, t over 512 log-spaced
// points t_k = t_max 2^{-k/64} with t_max the support width along u, plus
// the exterior branch ||f||_inf / t_max^s.
inline double frac_linf_gauge(const ScalarField& f, double s, const Vec& u, int x_cells = 256,
                              int t_points = 512) {
    const double t_max = support_width(f, u);
    const Vec hw = f.bounding_half_widths();
    std::vector<double> ts(static_cast<std::size_t>(t_points));
    for (int k = 0; k < t_points; ++k) ts[static_cast<std::size_t>(k)] = t_max * std::exp2(-k / 64.0);
    std::vector<double> xs0, xs1;
    for (int i = 0; i <= x_cells; ++i) {
        const double r = static_cast<double>(i) / x_cells;
        xs0.push_back(-hw[0] + 2.0 * hw[0] * r);
        xs1.push_back(-hw[1] + 2.0 * hw[1] * r);
    }
    double best = f.sup_norm() / std::pow(t_max, s);
    for (double t : ts) {
        const double inv = 1.0 / std::pow(t, s);
        for (double a : xs0)
            for (double b : xs1) {
                const double x[2] = {a, b};
                const double y[2] = {a + t * u[0], b + t * u[1]};
                const double fx = f.eval(x), fy = f.eval(y);
                best = std::max(best, std::abs(fy - fx) * inv);
            }
    }
    return std::pow(best, 1.0 / s);
}

}  // namespace oracle
