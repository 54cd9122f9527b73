#include <algorithm>
#include <numeric>

#include "polarproj/numerics.hpp"

namespace polarproj {

NelderMeadResult nelder_mead_max(const std::function<double(std::span<const double>)>& fn,
                                 Vec x0, std::span<const double> step, std::span<const double> lo,
                                 std::span<const double> hi, double ftol, int max_iter) {
    const std::size_t d = x0.size();
    auto clamp = [&](Vec& x) {
        for (std::size_t i = 0; i < d; ++i) x[i] = std::clamp(x[i], lo[i], hi[i]);
    };
    auto eval = [&](const Vec& x) {
        const double v = fn(x);
        if (std::isnan(v)) throw NumericalError("nelder_mead_max: NaN objective", x);
        return v;
    };
    if (d == 0) {
        const double v = eval(x0);
        return NelderMeadResult{x0, v, 0.0, 0};
    }
    clamp(x0);
    std::vector<Vec> simplex{x0};
    for (std::size_t i = 0; i < d; ++i) {
        Vec v = x0;
        v[i] += step[i];
        if (v[i] > hi[i]) v[i] = x0[i] - step[i];
        clamp(v);
        simplex.push_back(v);
    }
    Vec fv(d + 1);
    for (std::size_t i = 0; i <= d; ++i) fv[i] = eval(simplex[i]);

    std::vector<std::size_t> order(d + 1);
    int it = 0;
    for (; it < max_iter; ++it) {
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return fv[a] > fv[b]; });
        const std::size_t best = order.front(), worst = order.back(), second = order[d - 1];
        const double fspread = fv[best] - fv[worst];
        double diam = 0.0;
        for (std::size_t i = 0; i <= d; ++i)
            for (std::size_t k = 0; k < d; ++k)
                diam = std::max(diam, std::abs(simplex[i][k] - simplex[best][k]));
        if (fspread <= ftol * (std::abs(fv[best]) + 1e-300) && diam < 1e-7) break;
        if (diam < 1e-15) break;

        Vec centroid(d, 0.0);
        for (std::size_t i = 0; i <= d; ++i)
            if (i != worst)
                for (std::size_t k = 0; k < d; ++k) centroid[k] += simplex[i][k] / static_cast<double>(d);
        auto along = [&](double c) {
            Vec x(d);
            for (std::size_t k = 0; k < d; ++k) x[k] = centroid[k] + c * (simplex[worst][k] - centroid[k]);
            clamp(x);
            return x;
        };
        Vec xr = along(-1.0);
        const double fr = eval(xr);
        if (fr > fv[best]) {
            Vec xe = along(-2.0);
            const double fe = eval(xe);
            if (fe > fr) {
                simplex[worst] = xe;
                fv[worst] = fe;
            } else {
                simplex[worst] = xr;
                fv[worst] = fr;
            }
        } else if (fr > fv[second]) {
            simplex[worst] = xr;
            fv[worst] = fr;
        } else {
            const bool outside = fr > fv[worst];
            Vec xc = along(outside ? -0.5 : 0.5);
            const double fc = eval(xc);
            if (fc > std::max(fr, fv[worst]) || (fc >= fv[worst] && !outside)) {
                simplex[worst] = xc;
                fv[worst] = fc;
            } else {
                for (std::size_t i = 0; i <= d; ++i) {
                    if (i == best) continue;
                    for (std::size_t k = 0; k < d; ++k)
                        simplex[i][k] = simplex[best][k] + 0.5 * (simplex[i][k] - simplex[best][k]);
                    fv[i] = eval(simplex[i]);
                }
            }
        }
    }
    std::size_t best = 0;
    double fmin = fv[0];
    for (std::size_t i = 0; i <= d; ++i) {
        if (fv[i] > fv[best]) best = i;
        fmin = std::min(fmin, fv[i]);
    }
    return NelderMeadResult{simplex[best], fv[best], fv[best] - fmin, it};
}

std::pair<double, double> golden_section_max(const std::function<double(double)>& fn, double a,
                                             double b, double xtol) {
    const double r = 0.5 * (std::sqrt(5.0) - 1.0);
    double c = b - r * (b - a), d = a + r * (b - a);
    double fc = fn(c), fd = fn(d);
    while (b - a > xtol) {
        if (fc >= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = fn(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = fn(d);
        }
    }
    return fc >= fd ? std::pair{c, fc} : std::pair{d, fd};
}

namespace {

struct Candidate {
    double value;
    Vec z;
};

void keep_best(std::vector<Candidate>& top, std::size_t cap, double v, const Vec& z) {
    if (top.size() < cap) {
        top.push_back({v, z});
    } else if (v > top.back().value) {
        top.back() = {v, z};
    } else {
        return;
    }
    std::sort(top.begin(), top.end(), [](const Candidate& a, const Candidate& b) { return a.value > b.value; });
}

int cells_for(int dims, int cfg_cells, double budget) {
    if (dims == 0) return 1;
    const int cap = static_cast<int>(std::floor(std::pow(budget, 1.0 / dims) + 1e-9));
    return std::max(2, std::min(cfg_cells, cap));
}

// Grid scan in z = (x, log t) followed by Nelder-Mead polishing.
SupResult grid_then_polish(const std::function<double(std::span<const double>)>& obj,
                           const Vec& lo, const Vec& hi, const std::vector<int>& counts) {
    const std::size_t d = lo.size();
    SupResult out;
    std::vector<Candidate> top;
    Vec z(d), spacing(d);
    for (std::size_t k = 0; k < d; ++k)
        spacing[k] = counts[k] > 1 ? (hi[k] - lo[k]) / (counts[k] - 1) : 0.0;
    std::vector<int> idx(d, 0);
    while (true) {
        for (std::size_t k = 0; k < d; ++k)
            z[k] = counts[k] > 1 ? lo[k] + spacing[k] * idx[k] : 0.5 * (lo[k] + hi[k]);
        const double v = obj(z);
        if (!std::isfinite(v)) throw NumericalError("sup_search: non-finite objective", z);
        keep_best(top, 8, v, z);
        std::size_t k = 0;
        while (k < d && ++idx[k] == counts[k]) idx[k++] = 0;
        if (k == d) break;
    }
    out.grid_best = top.front().value;
    out.value = top.front().value;
    Vec best_z = top.front().z;

    Vec step(d);
    for (std::size_t k = 0; k < d; ++k) step[k] = std::max(spacing[k], 1e-9 * (hi[k] - lo[k] + 1.0));
    double spread = 0.0;
    for (const Candidate& c : top) {
        auto r = nelder_mead_max(obj, c.z, step, lo, hi, 1e-14, 4000);
        if (r.value > out.value) {
            out.value = r.value;
            best_z = r.x;
            spread = r.spread;
        }
    }
    // Restarts from the incumbent with a fresh simplex.
    Vec small = step;
    for (int rs = 0; rs < 4; ++rs) {
        for (double& s : small) s *= 0.25;
        auto r = nelder_mead_max(obj, best_z, small, lo, hi, 1e-15, 4000);
        if (r.value > out.value) {
            out.value = r.value;
            best_z = r.x;
            spread = r.spread;
        } else {
            spread = std::max(spread, r.spread);
            break;
        }
    }
    out.spread = spread;
    out.x = best_z;
    return out;
}

}  // namespace

SupResult sup_search(const std::function<double(std::span<const double>, double)>& g,
                     const Box& x_box, double t_lo, double t_hi, const QuadConfig& cfg) {
    cfg.validate();
    const int n = x_box.dim();
    if (!(t_hi > 0.0) || !(t_lo < t_hi) || t_lo < 0.0)
        throw std::domain_error("sup_search: invalid t range");
    const double t_min = t_lo > 0.0 ? t_lo : t_hi * 1e-6;
    const int cells = cells_for(n, cfg.x_cells_per_axis, 4096.0);
    const int nt = n == 0 ? 256 : 4 * cells;

    Vec lo = x_box.lo, hi = x_box.hi;
    lo.push_back(std::log(t_min));
    hi.push_back(std::log(t_hi));
    std::vector<int> counts(static_cast<std::size_t>(n), cells + 1);
    counts.push_back(nt);

    Vec x(static_cast<std::size_t>(n));
    auto obj = [&](std::span<const double> z) {
        for (int k = 0; k < n; ++k) x[static_cast<std::size_t>(k)] = z[static_cast<std::size_t>(k)];
        const double t = std::exp(z[static_cast<std::size_t>(n)]);
        const double v = g(x, t);
        if (!std::isfinite(v)) {
            Vec where = x;
            where.push_back(t);
            throw NumericalError("sup_search: non-finite objective", where);
        }
        return v;
    };
    SupResult r = grid_then_polish(obj, lo, hi, counts);
    r.t = std::exp(r.x.back());
    r.x.pop_back();
    return r;
}

SupResult sup_search_box(const std::function<double(std::span<const double>)>& g,
                         const Box& box, const QuadConfig& cfg) {
    cfg.validate();
    const int n = box.dim();
    if (n == 0) throw std::domain_error("sup_search_box: empty box");
    const int cells = cells_for(n, cfg.x_cells_per_axis, 16384.0);
    std::vector<int> counts(static_cast<std::size_t>(n), cells + 1);
    auto obj = [&](std::span<const double> z) {
        const double v = g(z);
        if (!std::isfinite(v)) throw NumericalError("sup_search_box: non-finite objective", Vec(z.begin(), z.end()));
        return v;
    };
    return grid_then_polish(obj, box.lo, box.hi, counts);
}

}  // namespace polarproj
