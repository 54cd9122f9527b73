#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <queue>
#include <span>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "polarproj/linalg.hpp"

namespace polarproj {

struct QuadConfig {
    double rel_tol = 1e-7;
    double abs_tol = 1e-12;
    double t_split = 1.0;
    int max_subdivisions = 60;
    int x_cells_per_axis = 64;
    std::uint64_t seed = 0x5eed;

    void validate() const;
};

struct Estimate {
    double value = 0.0;
    double error_bound = 0.0;
    bool converged = true;
};

// Raised when an integrand or objective produces a non-finite value.
class NumericalError : public std::runtime_error {
public:
    NumericalError(const std::string& what, Vec where)
        : std::runtime_error(what + " at " + format_point(where)), where_(std::move(where)) {}
    const Vec& where() const { return where_; }

private:
    static std::string format_point(const Vec& p);
    Vec where_;
};

// Value plus an inner error density, for nested quadrature.
struct Val2 {
    double v = 0.0;
    double e = 0.0;
};

namespace detail {

inline constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct GkSegment {
    double a, b, val, err, side;
    bool operator<(const GkSegment& o) const { return err < o.err; }
};

template <class F>
Val2 call_val2(F& f, double x) {
    using R = std::invoke_result_t<F&, double>;
    if constexpr (std::is_same_v<R, Val2>) {
        Val2 r = f(x);
        if (!std::isfinite(r.v) || !std::isfinite(r.e))
            throw NumericalError("non-finite integrand", Vec{x});
        return r;
    } else {
        const double v = static_cast<double>(f(x));
        if (!std::isfinite(v)) throw NumericalError("non-finite integrand", Vec{x});
        return Val2{v, 0.0};
    }
}

template <class F>
GkSegment gk15(F& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    const Val2 fc = call_val2(f, c);
    double resg = fc.v * kWg[3];
    double resk = fc.v * kWgk[7];
    double side = fc.e * kWgk[7];
    double resabs = std::abs(resk);
    std::array<double, 7> f1{}, f2{};
    for (int j = 0; j < 7; ++j) {
        const double dx = h * kXgk[static_cast<std::size_t>(j)];
        const Val2 l = call_val2(f, c - dx);
        const Val2 r = call_val2(f, c + dx);
        f1[static_cast<std::size_t>(j)] = l.v;
        f2[static_cast<std::size_t>(j)] = r.v;
        const double w = kWgk[static_cast<std::size_t>(j)];
        resk += w * (l.v + r.v);
        side += w * (l.e + r.e);
        resabs += w * (std::abs(l.v) + std::abs(r.v));
        if (j % 2 == 1) resg += kWg[static_cast<std::size_t>(j / 2)] * (l.v + r.v);
    }
    const double mean = 0.5 * resk;
    double resasc = kWgk[7] * std::abs(fc.v - mean);
    for (int j = 0; j < 7; ++j)
        resasc += kWgk[static_cast<std::size_t>(j)] *
                  (std::abs(f1[static_cast<std::size_t>(j)] - mean) +
                   std::abs(f2[static_cast<std::size_t>(j)] - mean));
    const double ah = std::abs(h);
    resk *= h;
    resabs *= ah;
    resasc *= ah;
    double err = std::abs((resk - resg * h));
    if (resasc != 0.0 && err != 0.0) err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
    constexpr double eps = std::numeric_limits<double>::epsilon();
    if (resabs > std::numeric_limits<double>::min() / (50.0 * eps))
        err = std::max(50.0 * eps * resabs, err);
    return GkSegment{a, b, resk, err, std::abs(side * h)};
}

}  // namespace detail

// Globally adaptive Gauss-Kronrod (7/15) quadrature. The integrand may return
// double or Val2; in the latter case the e-channel is integrated and added to
// the error bound. Breakpoints strictly inside (a, b) seed the partition.
template <class F>
Estimate adaptive_gauss_kronrod(F&& f, double a, double b, std::span<const double> breaks,
                                double rel_tol, double abs_tol, int max_subdivisions) {
    if (!(a < b)) {
        if (a == b) return Estimate{0.0, 0.0, true};
        throw std::domain_error("adaptive_gauss_kronrod: requires a < b");
    }
    std::vector<double> cuts{a};
    for (double x : breaks)
        if (x > a && x < b) cuts.push_back(x);
    cuts.push_back(b);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    std::priority_queue<detail::GkSegment> heap;
    double total = 0.0, total_err = 0.0, total_side = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        auto seg = detail::gk15(f, cuts[i], cuts[i + 1]);
        total += seg.val;
        total_err += seg.err;
        total_side += seg.side;
        heap.push(seg);
    }
    int splits = 0;
    bool converged = true;
    while (true) {
        // Inner (side) error is not reduced by splitting here, so aim the own
        // error at what remains of the budget.
        const double tol = std::max(abs_tol, rel_tol * std::abs(total));
        if (total_err <= std::max(tol - total_side, 0.25 * tol)) break;
        if (splits >= max_subdivisions) {
            converged = false;
            break;
        }
        auto worst = heap.top();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b)) {
            converged = false;
            break;
        }
        heap.pop();
        auto left = detail::gk15(f, worst.a, mid);
        auto right = detail::gk15(f, mid, worst.b);
        total += left.val + right.val - worst.val;
        total_err += left.err + right.err - worst.err;
        total_side += left.side + right.side - worst.side;
        heap.push(left);
        heap.push(right);
        ++splits;
    }
    // Resum to shed accumulated cancellation.
    total = total_err = total_side = 0.0;
    while (!heap.empty()) {
        total += heap.top().val;
        total_err += heap.top().err;
        total_side += heap.top().side;
        heap.pop();
    }
    const double bound = total_err + total_side;
    if (bound > std::max(abs_tol, rel_tol * std::abs(total))) converged = false;
    return Estimate{total, bound, converged};
}

Estimate integrate_1d_adaptive(const std::function<double(double)>& g, double a, double b,
                               const QuadConfig& cfg, std::span<const double> breaks = {});

// Result of a normalized singular t-integral, carried in log form.
struct LogEstimate {
    double log_value = -std::numeric_limits<double>::infinity();
    double rel_error = 0.0;
    bool converged = true;
};

// Tail information for the normalized integral
//   I = int_0^inf tau^{-ps-1} min(tau,1)^p J(tau) dtau,
// where J(tau) <= cx for all tau.
struct TailInfo {
    double cx = 1.0;
    std::optional<double> j_zero;   // lim_{tau->0} J(tau)
    std::optional<double> tau_far;  // J(tau) = j_far for tau >= tau_far
    double j_far = 0.0;
    std::vector<double> tau_breaks;
};

LogEstimate singular_t_integral_normalized(const std::function<Val2(double)>& J, double p,
                                           double s, const TailInfo& tails,
                                           const QuadConfig& cfg);

// int_0^inf t^{-sp-1} h(t) dt for h(t) <= cx (L t)^p and h(t) <= cx (2M)^p.
Estimate singular_t_integral(const std::function<double(double)>& h, double p, double s,
                             double L, double M, double cx, const QuadConfig& cfg);

// Integral of g over [-R, R]^n (g vanishes outside R B^n).
Estimate cubature_support(const std::function<double(std::span<const double>)>& g, double R,
                          int n, const QuadConfig& cfg);

// (1/p) log sum_i w_i exp(p l_i).
double log_domain_mean_p(std::span<const std::pair<double, double>> samples, double p);

struct Box {
    Vec lo, hi;
    int dim() const { return static_cast<int>(lo.size()); }
};

struct SupResult {
    double value = -std::numeric_limits<double>::infinity();
    Vec x;
    double t = 0.0;
    double grid_best = -std::numeric_limits<double>::infinity();
    double spread = 0.0;  // objective spread of the final simplex
};

// sup of g(x, t) over x in box, t in (t_lo, t_hi].
SupResult sup_search(const std::function<double(std::span<const double>, double)>& g,
                     const Box& x_box, double t_lo, double t_hi, const QuadConfig& cfg);

// sup of g(x) over a box.
SupResult sup_search_box(const std::function<double(std::span<const double>)>& g,
                         const Box& box, const QuadConfig& cfg);

struct NelderMeadResult {
    Vec x;
    double value;
    double spread;
    int iterations;
};

// Maximizes fn inside [lo, hi] (coordinates clamped).
NelderMeadResult nelder_mead_max(const std::function<double(std::span<const double>)>& fn,
                                 Vec x0, std::span<const double> step, std::span<const double> lo,
                                 std::span<const double> hi, double ftol, int max_iter);

// Maximizer of a unimodal function on [a, b].
std::pair<double, double> golden_section_max(const std::function<double(double)>& fn, double a,
                                             double b, double xtol);

enum class SphereScheme { Uniform1D, Trapezoid, ProductGauss, MonteCarlo };

struct SphereGrid {
    int dim = 0;
    std::vector<Vec> nodes;
    Vec weights;
    SphereScheme scheme = SphereScheme::Uniform1D;
    int resolution = 0;
    std::uint64_t seed = 0;
    // ProductGauss layout: node index = iz * n_phi + iphi.
    Vec z_nodes;
    int n_phi = 0;
    std::vector<int> antipode;  // -1 when absent

    std::size_t size() const { return nodes.size(); }
    double total_weight() const;
    // Sub-rule on a coarser grid (every other node in the periodic direction),
    // used for refinement error estimates. Empty when unavailable.
    std::vector<std::pair<std::size_t, double>> coarse_rule() const;
};

SphereGrid make_sphere_grid(int n, int resolution, std::uint64_t seed = 0);

// Gauss-Legendre nodes and weights on [-1, 1].
std::pair<Vec, Vec> gauss_legendre(int m);

}  // namespace polarproj
