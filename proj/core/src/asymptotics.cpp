#include "polarproj/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "polarproj/parallel.hpp"

namespace polarproj {

std::string to_string(Quantity q) {
    switch (q) {
        case Quantity::Gauge: return "gauge";
        case Quantity::Volume: return "volume";
        case Quantity::DualMixedQ: return "dualmixed";
        case Quantity::VtilRoot: return "vtilroot";
    }
    return "unknown";
}

Quantity parse_quantity(const std::string& s) {
    if (s == "gauge") return Quantity::Gauge;
    if (s == "volume") return Quantity::Volume;
    if (s == "dualmixed") return Quantity::DualMixedQ;
    if (s == "vtilroot") return Quantity::VtilRoot;
    throw std::invalid_argument("unknown quantity '" + s + "'");
}

int default_resolution(int n) {
    if (n == 1) return 4;
    if (n == 2) return 720;
    if (n == 3) return 48;
    return 4096;
}

namespace {

void check_ladder(const Vec& v, const char* name, double lo, double hi, bool open_hi) {
    if (v.empty()) throw std::invalid_argument(std::string(name) + " ladder is empty");
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (!(v[i] >= lo) || (open_hi ? !(v[i] < hi) : !(v[i] <= hi)))
            throw std::domain_error(std::string(name) + " ladder value out of range");
        if (i > 0 && !(v[i] > v[i - 1]))
            throw std::invalid_argument(std::string(name) + " ladder must be strictly increasing");
    }
}

}  // namespace

void SweepSpec::validate() const {
    check_ladder(p_ladder, "p", 1.0, std::numeric_limits<double>::infinity(), true);
    check_ladder(s_ladder, "s", std::numeric_limits<double>::min(), 1.0, true);
    const int n = f.dim();
    if (!direction.empty()) {
        if (static_cast<int>(direction.size()) != n)
            throw std::invalid_argument("sweep direction has the wrong dimension");
        if (!(norm(direction) > 0.0)) throw std::domain_error("sweep direction must be nonzero");
    }
    if (K && K->dim() != n) throw std::invalid_argument("sweep body K has the wrong dimension");
    if (quantity == Quantity::DualMixedQ && (q == 0.0 || q == static_cast<double>(n)))
        throw std::domain_error("dual mixed volume exponent must differ from 0 and n");
    if (grid_resolution < 0) throw std::domain_error("grid resolution must be >= 0");
}

std::shared_ptr<const BodyOfField> SweepCache::body(const std::string& key,
                                                    const std::function<BodyOfField()>& make) {
    {
        std::lock_guard lk(mu_);
        if (auto it = bodies_.find(key); it != bodies_.end()) return it->second;
    }
    auto made = std::make_shared<const BodyOfField>(make());
    std::lock_guard lk(mu_);
    return bodies_.emplace(key, made).first->second;
}

GaugeValue SweepCache::gauge_value(const std::string& key, const std::function<GaugeValue()>& make) {
    {
        std::lock_guard lk(mu_);
        if (auto it = gauges_.find(key); it != gauges_.end()) return it->second;
    }
    GaugeValue v = make();
    std::lock_guard lk(mu_);
    return gauges_.emplace(key, v).first->second;
}

Extrapolation extrapolate_p(const Vec& p, const Vec& q) {
    Extrapolation out;
    if (p.size() != q.size() || q.empty()) return out;
    out.value = q.back();
    if (q.size() < 3) return out;
    for (double v : q)
        if (!(v > 0.0)) return out;
    const std::size_t m = q.size();
    bool constant = true;
    for (std::size_t i = m - 3; i < m; ++i)
        if (std::abs(std::log(q[i]) - std::log(q.back())) > 1e-13) constant = false;
    if (constant) {
        out.bound = 0.0;
        out.valid = true;
        return out;
    }
    auto fit = [&](std::size_t end) {
        Mat A(3);
        Vec rhs(3);
        for (int r = 0; r < 3; ++r) {
            const double pp = p[end - 3 + static_cast<std::size_t>(r)];
            A(r, 0) = 1.0;
            A(r, 1) = 1.0 / pp;
            A(r, 2) = std::log(pp) / pp;
            rhs[static_cast<std::size_t>(r)] = std::log(q[end - 3 + static_cast<std::size_t>(r)]);
        }
        return A.inverse().apply(rhs)[0];
    };
    const double L = fit(m);
    out.value = std::exp(L);
    out.bound = m >= 4 ? std::abs(out.value - std::exp(fit(m - 1))) : std::abs(out.value - q.back());
    out.valid = std::isfinite(out.value);
    return out;
}

Extrapolation extrapolate_s(const Vec& s, const Vec& q) {
    Extrapolation out;
    if (s.size() != q.size() || q.empty()) return out;
    out.value = q.back();
    if (q.size() < 3) return out;
    auto fit = [&](std::size_t end) -> double {
        const double x1 = 1.0 - s[end - 3], x2 = 1.0 - s[end - 2], x3 = 1.0 - s[end - 1];
        const double q1 = q[end - 3], q2 = q[end - 2], q3 = q[end - 1];
        const double d1 = q2 - q1, d2 = q3 - q2;
        const double scale = std::max({std::abs(q1), std::abs(q2), std::abs(q3), 1e-300});
        if (std::abs(d1) <= 1e-13 * scale && std::abs(d2) <= 1e-13 * scale) return q3;
        double gamma = 1.0;
        const double r = d2 / d1;
        if (d1 != 0.0 && r > 0.0) {
            auto phi = [&](double g) {
                return (std::pow(x3, g) - std::pow(x2, g)) / (std::pow(x2, g) - std::pow(x1, g)) - r;
            };
            double lo = 0.02, hi = 8.0;
            double flo = phi(lo), fhi = phi(hi);
            if (flo * fhi < 0.0) {
                for (int it = 0; it < 200; ++it) {
                    const double mid = 0.5 * (lo + hi);
                    const double fm = phi(mid);
                    if ((fm < 0.0) == (flo < 0.0)) {
                        lo = mid;
                        flo = fm;
                    } else {
                        hi = mid;
                    }
                }
                gamma = 0.5 * (lo + hi);
            }
        }
        const double c = d2 / (std::pow(x3, gamma) - std::pow(x2, gamma));
        return q3 - c * std::pow(x3, gamma);
    };
    const std::size_t m = q.size();
    out.value = fit(m);
    out.bound = m >= 4 ? std::abs(out.value - fit(m - 1)) : std::abs(out.value - q.back());
    out.valid = std::isfinite(out.value);
    return out;
}

namespace {

double signed_part(double d, Sign sg) {
    switch (sg) {
        case Sign::Sym: return std::abs(d);
        case Sign::Plus: return std::max(d, 0.0);
        case Sign::Minus: return std::max(-d, 0.0);
    }
    return 0.0;
}

std::string key_of(const ScalarField& f, const GaugeKind& k, const std::string& extra) {
    std::ostringstream os;
    os.precision(17);
    os << f.label() << '|' << k.label() << '|' << to_string(k.sign) << '|' << extra;
    return os.str();
}

// Direction grid used by the sup over xi: the sphere grid nodes at a modest resolution.
SphereGrid direction_grid(int n, int directions) {
    if (n == 1) return make_sphere_grid(1, 4);
    if (n == 2) return make_sphere_grid(2, directions > 0 ? directions : 64);
    if (n == 3) return make_sphere_grid(3, directions > 0 ? directions : 8);
    return make_sphere_grid(n, directions > 0 ? directions : 256, 7);
}

// Local refinement of a function on the sphere around a node.
std::pair<Vec, double> refine_on_sphere(const std::function<double(std::span<const double>)>& fn,
                                        const Vec& start, double start_value, double h) {
    const int n = static_cast<int>(start.size());
    if (n == 2) {
        const double th0 = std::atan2(start[1], start[0]);
        auto [th, v] = golden_section_max(
            [&](double th) {
                const Vec u{std::cos(th), std::sin(th)};
                return fn(u);
            },
            th0 - h, th0 + h, 1e-10);
        if (v > start_value) return {Vec{std::cos(th), std::sin(th)}, v};
    } else if (n >= 3) {
        const auto comp = orthogonal_complement(start);
        const std::size_t m = comp.size();
        auto chart = [&](std::span<const double> c) {
            Vec u = start;
            for (std::size_t k = 0; k < m; ++k) u = axpy(c[k], comp[k], u);
            return normalized(u);
        };
        const Vec step(m, 0.5 * h), lo(m, -h), hi(m, h);
        const auto nm = nelder_mead_max([&](std::span<const double> c) { return fn(chart(c)); },
                                        Vec(m, 0.0), step, lo, hi, 1e-12, 300);
        if (nm.value > start_value) return {chart(nm.x), nm.value};
    }
    return {start, start_value};
}

struct InnerSup {
    double value = 0.0;  // sup over x, t of (Delta)_sign / t^s at unit u
    Vec x;
    double t = 0.0;
    bool converged = true;
};

InnerSup inner_holder_sup(const ScalarField& f, std::span<const double> u, double s, Sign sign,
                          const QuadConfig& cfg) {
    const int n = f.dim();
    const double t_max = 2.0 * f.support_radius();
    const Vec hw = f.bounding_half_widths();
    Box box;
    for (int i = 0; i < n; ++i) {
        const double sh = -t_max * u[static_cast<std::size_t>(i)];
        box.lo.push_back(-hw[static_cast<std::size_t>(i)] + std::min(0.0, sh));
        box.hi.push_back(hw[static_cast<std::size_t>(i)] + std::max(0.0, sh));
    }
    Vec y(static_cast<std::size_t>(n));
    auto g = [&](std::span<const double> x, double t) {
        for (std::size_t i = 0; i < y.size(); ++i) y[i] = x[i] + t * u[i];
        return signed_part(f.eval(y) - f.eval(x), sign) / std::pow(t, s);
    };
    const SupResult r = sup_search(g, box, 0.0, t_max, cfg);
    InnerSup out{r.value, r.x, r.t, r.spread <= cfg.rel_tol * std::max(r.value, 1e-300)};
    // Pairs farther apart than t_max cannot both meet the support.
    const double exterior = f.sup_norm() / std::pow(t_max, s);
    if (exterior > out.value) {
        out.value = exterior;
        out.t = t_max;
        out.x = sign == Sign::Minus ? Vec(static_cast<std::size_t>(n), 0.0) : scaled(u, -t_max);
        out.converged = true;
    }
    return out;
}

template <class Inner>
HolderSup sup_over_directions(int n, int directions, const StarBody& K, double power, bool radial_f,
                              Inner&& inner) {
    const SphereGrid dg = direction_grid(n, directions);
    // Radial f and a rotation invariant K: every direction gives the same value.
    if (radial_f && n >= 2) {
        const double r0 = radial(K, dg.nodes[0]);
        bool invariant = true;
        for (const auto& u : dg.nodes) invariant = invariant && std::abs(radial(K, u) - r0) <= 1e-13 * r0;
        if (invariant) {
            const Vec u = unit_vector(n, 0);
            const auto r = inner(std::span<const double>(u));
            HolderSup out;
            out.value = std::pow(r0, power) * r.value;
            out.converged = r.converged;
            out.x = r.x;
            out.y = out.x.empty() ? Vec{} : axpy(r.t, u, out.x);
            return out;
        }
    }
    const auto vals = parallel_map(dg.size(), [&](std::size_t i) {
        const auto r = inner(std::span<const double>(dg.nodes[i]));
        return std::pair{r, std::pow(radial(K, dg.nodes[i]), power) * r.value};
    });
    std::size_t best = 0;
    bool conv = true;
    for (std::size_t i = 0; i < vals.size(); ++i) {
        if (vals[i].second > vals[best].second) best = i;
        conv = conv && vals[i].first.converged;
    }
    const double h = n == 2 ? 2.0 * std::numbers::pi / static_cast<double>(dg.size())
                            : std::numbers::pi / std::max(2, dg.n_phi / 2);
    auto fn = [&](std::span<const double> u) { return std::pow(radial(K, u), power) * inner(u).value; };
    auto [u, v] = refine_on_sphere(fn, dg.nodes[best], vals[best].second, h);
    const auto r = inner(std::span<const double>(u));
    HolderSup out;
    out.value = v;
    out.converged = conv && r.converged;
    out.x = r.x;
    out.y = out.x.empty() ? Vec{} : axpy(r.t, u, out.x);
    return out;
}

}  // namespace

HolderSup holder_quotient_sup(const ScalarField& f, const StarBody& K, double s, const QuadConfig& cfg,
                              Sign sign, int directions) {
    if (!(s > 0.0 && s <= 1.0)) throw std::domain_error("holder_quotient_sup: s must lie in (0, 1]");
    if (K.dim() != f.dim()) throw std::invalid_argument("holder_quotient_sup: dimension mismatch");
    // ||t u||_K^s = t^s rho_K(u)^{-s}
    return sup_over_directions(f.dim(), directions, K, s, f.radially_symmetric(), [&](std::span<const double> u) {
        return inner_holder_sup(f, u, s, sign, cfg);
    });
}

HolderSup gradient_quotient_sup(const ScalarField& f, const StarBody& K, const QuadConfig& cfg, Sign sign,
                                int directions) {
    if (K.dim() != f.dim()) throw std::invalid_argument("gradient_quotient_sup: dimension mismatch");
    const GaugeKind kind = GaugeKind::linf(sign);
    return sup_over_directions(f.dim(), directions, K, 1.0, f.radially_symmetric(), [&](std::span<const double> u) {
        const GaugeValue g = gauge(f, kind, u, cfg);
        InnerSup r;
        r.value = g.value;
        r.converged = g.estimate.converged;
        if (g.witness) r.x = g.witness->x;
        return r;
    });
}

namespace {

struct SweepContext {
    const SweepSpec& spec;
    const QuadConfig& cfg;
    SweepCache& cache;
    std::shared_ptr<const SphereGrid> grid;
    StarBody K;
    Vec direction;
};

double lower_bound_for(const ScalarField& f, const GaugeKind& k) {
    if (k.sign != Sign::Sym) return 0.0;
    if (k.family == GaugeFamily::FracLp) return frac_lp_lower_bound(f, k.s, k.p);
    if (k.family == GaugeFamily::FracLInf) return frac_linf_lower_bound(f, k.s);
    return 0.0;
}

std::shared_ptr<const BodyOfField> body_for(SweepContext& c, const GaugeKind& k) {
    const std::string key = key_of(c.spec.f, k,
                                   "grid" + std::to_string(c.grid->dim) + ":" +
                                       std::to_string(c.grid->resolution) + ":" + std::to_string(c.grid->seed) +
                                       (c.spec.realize.use_symmetry ? ":sym" : ":direct"));
    return c.cache.body(key, [&] { return realize_body(c.spec.f, k, c.grid, c.cfg, c.spec.realize); });
}

// One sweep entry. `p` is infinite on the p = inf row; `s` equals 1 on the s = 1 column.
Cell evaluate_cell(SweepContext& c, double p, double s) {
    const bool p_inf = std::isinf(p);
    const bool s_one = s == 1.0;
    GaugeKind k;
    if (p_inf)
        k = s_one ? GaugeKind::linf(c.spec.sign) : GaugeKind::frac_linf(s, c.spec.sign);
    else
        k = s_one ? GaugeKind::lp(p, c.spec.sign) : GaugeKind::frac_lp(s, p, c.spec.sign);
    const ScalarField& f = c.spec.f;
    const double lb = lower_bound_for(f, k);
    Cell cell;
    switch (c.spec.quantity) {
        case Quantity::Gauge: {
            std::ostringstream os;
            os.precision(17);
            for (double v : c.direction) os << v << ',';
            const GaugeValue g =
                c.cache.gauge_value(key_of(f, k, os.str()), [&] { return gauge(f, k, c.direction, c.cfg); });
            cell.value = g.value;
            cell.error = g.estimate.error_bound;
            cell.converged = g.estimate.converged;
            cell.suspect = g.value < lb * norm(c.direction) * (1.0 - 1e-9);
            break;
        }
        case Quantity::Volume:
        case Quantity::DualMixedQ:
        case Quantity::VtilRoot: {
            const auto body = body_for(c, k);
            cell.converged = body->converged;
            const double gmin = *std::min_element(body->gauges.begin(), body->gauges.end());
            cell.suspect = gmin < lb * (1.0 - 1e-9);
            const SphereGrid& grid = *c.grid;
            if (c.spec.quantity == Quantity::Volume) {
                const Estimate v = volume(body->realized, grid);
                cell.value = v.value;
                cell.error = v.error_bound;
                cell.converged = cell.converged && v.converged;
            } else if (c.spec.quantity == Quantity::DualMixedQ) {
                const DualMixed d = dual_mixed_volume(c.K, body->realized, c.spec.q, grid);
                cell.value = d.value;
                cell.error = d.value * d.rel_error;
                cell.converged = cell.converged && d.converged;
            } else if (p_inf) {
                const Dilation d = dilation_factor(c.K, body->realized, s, grid);
                cell.value = d.value;
                // Radius errors enter through the ratio at the maximizing node.
                double rel = 0.0;
                const Vec& re = body->realized.radius_errors();
                for (std::size_t i = 0; i < re.size(); ++i)
                    rel = std::max(rel, re[i] / body->realized.radii()[i]);
                cell.error = d.value * s * rel;
            } else {
                const DualMixed d = dual_mixed_volume(c.K, body->realized, -s * p, grid);
                cell.value = std::exp(d.log_value / p);
                cell.error = cell.value * d.rel_error / p;
                cell.converged = cell.converged && d.converged;
            }
            break;
        }
    }
    return cell;
}

void gap_warning(SweepResult& r, const std::vector<double>& seq, double limit, const std::string& what) {
    if (seq.size() < 3) return;
    const std::size_t m = seq.size();
    const double g1 = std::abs(seq[m - 3] - limit), g2 = std::abs(seq[m - 2] - limit),
                 g3 = std::abs(seq[m - 1] - limit);
    const double tiny = 1e-12 * std::max(1.0, std::abs(limit));
    if (g3 <= tiny) return;
    if (!(g2 <= g1 + tiny && g3 <= g2 + tiny)) r.warnings.push_back("non-monotone gap along " + what);
}

}  // namespace

SweepResult run_sweep(const SweepSpec& spec, const QuadConfig& cfg, SweepCache* cache) {
    spec.validate();
    cfg.validate();
    SweepCache local;
    SweepCache& use = cache ? *cache : local;
    const int n = spec.f.dim();
    const int res = spec.grid_resolution > 0 ? spec.grid_resolution : default_resolution(n);
    SweepContext ctx{spec, cfg, use, nullptr, spec.K ? *spec.K : StarBody::ball(n), spec.direction};
    if (ctx.direction.empty()) ctx.direction = unit_vector(n, 0);
    if (spec.quantity != Quantity::Gauge)
        ctx.grid = std::make_shared<const SphereGrid>(make_sphere_grid(n, res, cfg.seed));

    const std::size_t np = spec.p_ladder.size(), ns = spec.s_ladder.size();
    const double inf = std::numeric_limits<double>::infinity();
    // Job order: table row-major, then s = 1 column, then p = inf row, then corner.
    std::vector<std::pair<double, double>> jobs;
    for (double p : spec.p_ladder)
        for (double s : spec.s_ladder) jobs.emplace_back(p, s);
    for (double p : spec.p_ladder) jobs.emplace_back(p, 1.0);
    for (double s : spec.s_ladder) jobs.emplace_back(inf, s);
    jobs.emplace_back(inf, 1.0);

    const auto cells = parallel_map(jobs.size(), [&](std::size_t i) {
        return evaluate_cell(ctx, jobs[i].first, jobs[i].second);
    });

    SweepResult r;
    r.spec = spec;
    r.table.assign(np, std::vector<Cell>(ns));
    std::size_t idx = 0;
    for (std::size_t i = 0; i < np; ++i)
        for (std::size_t j = 0; j < ns; ++j) r.table[i][j] = cells[idx++];
    for (std::size_t i = 0; i < np; ++i) r.s_one.push_back(cells[idx++]);
    for (std::size_t j = 0; j < ns; ++j) r.p_inf.push_back(cells[idx++]);
    r.corner = cells[idx++];

    for (const Cell& c : cells) {
        if (!c.converged) r.degraded = true;
    }
    auto values = [](const std::vector<Cell>& cs) {
        Vec v;
        for (const Cell& c : cs) v.push_back(c.value);
        return v;
    };
    for (std::size_t i = 0; i < np; ++i) {
        const Vec row = values(r.table[i]);
        r.edge1.push_back(extrapolate_s(spec.s_ladder, row));
        std::ostringstream os;
        os << "s at p=" << spec.p_ladder[i];
        gap_warning(r, row, r.s_one[i].value, os.str());
    }
    for (std::size_t j = 0; j < ns; ++j) {
        Vec col;
        for (std::size_t i = 0; i < np; ++i) col.push_back(r.table[i][j].value);
        r.edge2.push_back(extrapolate_p(spec.p_ladder, col));
        std::ostringstream os;
        os << "p at s=" << spec.s_ladder[j];
        gap_warning(r, col, r.p_inf[j].value, os.str());
    }
    const Vec inf_row = values(r.p_inf), one_col = values(r.s_one);
    r.edge3 = extrapolate_s(spec.s_ladder, inf_row);
    r.edge4 = extrapolate_p(spec.p_ladder, one_col);
    gap_warning(r, inf_row, r.corner.value, "s on the p=inf row");
    gap_warning(r, one_col, r.corner.value, "p on the s=1 column");
    r.corner_14 = r.edge4.value;
    r.corner_23 = r.edge3.value;
    r.commutation_gap = std::abs(r.corner_14 - r.corner_23);
    r.commutation_bound = r.edge3.bound + r.edge4.bound;
    for (std::size_t i = 0; i < cells.size(); ++i)
        if (cells[i].suspect) r.warnings.push_back("cell below the constructive lower bound");
    return r;
}

}  // namespace polarproj
