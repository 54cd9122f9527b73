#include "polarproj/gauges.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "polarproj/parallel.hpp"

namespace polarproj {

GaugeKind GaugeKind::lp(double p, Sign sign) {
    GaugeKind k{GaugeFamily::Lp, p, 1.0, sign};
    k.validate();
    return k;
}

GaugeKind GaugeKind::frac_lp(double s, double p, Sign sign) {
    GaugeKind k{GaugeFamily::FracLp, p, s, sign};
    k.validate();
    return k;
}

GaugeKind GaugeKind::linf(Sign sign) { return GaugeKind{GaugeFamily::LInf, 1.0, 1.0, sign}; }

GaugeKind GaugeKind::frac_linf(double s, Sign sign) {
    GaugeKind k{GaugeFamily::FracLInf, 1.0, s, sign};
    k.validate();
    return k;
}

void GaugeKind::validate() const {
    const bool needs_p = family == GaugeFamily::Lp || family == GaugeFamily::FracLp;
    const bool needs_s = family == GaugeFamily::FracLp || family == GaugeFamily::FracLInf;
    if (needs_p && !(p >= 1.0 && std::isfinite(p)))
        throw std::domain_error("gauge kind: p must be a finite number >= 1");
    if (needs_s && !(s > 0.0 && s < 1.0)) throw std::domain_error("gauge kind: s must lie in (0, 1)");
}

GaugeKind GaugeKind::with_sign(Sign sg) const {
    GaugeKind k = *this;
    k.sign = sg;
    return k;
}

std::string to_string(GaugeFamily f) {
    switch (f) {
        case GaugeFamily::Lp: return "lp";
        case GaugeFamily::FracLp: return "fraclp";
        case GaugeFamily::LInf: return "linf";
        case GaugeFamily::FracLInf: return "fraclinf";
    }
    return "unknown";
}

GaugeFamily parse_family(const std::string& s) {
    if (s == "lp") return GaugeFamily::Lp;
    if (s == "fraclp") return GaugeFamily::FracLp;
    if (s == "linf") return GaugeFamily::LInf;
    if (s == "fraclinf") return GaugeFamily::FracLInf;
    throw std::invalid_argument("unknown gauge kind '" + s + "'");
}

std::string GaugeKind::label() const {
    std::ostringstream os;
    os << to_string(family);
    if (family == GaugeFamily::Lp || family == GaugeFamily::FracLp) os << "(p=" << p;
    if (family == GaugeFamily::FracLp) os << ", s=" << s;
    if (family == GaugeFamily::FracLInf) os << "(s=" << s;
    if (family != GaugeFamily::LInf) os << ")";
    os << "[" << to_string(sign) << "]";
    return os.str();
}

namespace {

inline double signed_part(double d, Sign sg) {
    switch (sg) {
        case Sign::Sym: return std::abs(d);
        case Sign::Plus: return d > 0.0 ? d : 0.0;
        case Sign::Minus: return d < 0.0 ? -d : 0.0;
    }
    return 0.0;
}

inline double powp(double x, double p) {
    if (x <= 0.0) return 0.0;
    if (p == 1.0) return x;
    if (p == 2.0) return x * x;
    return std::exp(p * std::log(x));
}

constexpr double kTiny = 1e-300;

// Nested adaptive integration over lines parallel to a unit direction.
class LineIntegrator {
public:
    LineIntegrator(const ScalarField& f, const Vec& dir, int max_sub)
        : f_(f), dir_(dir), perp_(orthogonal_complement(dir)), max_sub_(max_sub) {
        if (f.dim() == 1) perp_.clear();
        for (const Vec& e : perp_) {
            const double hi = f.support_function(e);
            const double lo = -f.support_function(scaled(e, -1.0));
            std::vector<double> br;
            for (const Vec& sp : f.special_points()) br.push_back(dot(sp, e));
            std::sort(br.begin(), br.end());
            br.erase(std::unique(br.begin(), br.end()), br.end());
            ranges_.emplace_back(lo, hi);
            breaks_.push_back(br);
        }
    }

    // fn(base) returns the line integral through base.
    template <class Fn>
    Val2 integrate(Fn& fn, double rel) {
        const std::size_t n = static_cast<std::size_t>(f_.dim());
        Vec base(n, 0.0);
        const std::size_t m = perp_.size();
        if (m == 0) return fn(base);
        Vec coords(m, 0.0);
        std::function<Val2(std::size_t)> level = [&](std::size_t k) -> Val2 {
            auto inner = [&](double y) -> Val2 {
                coords[k] = y;
                if (k + 1 == m) {
                    std::fill(base.begin(), base.end(), 0.0);
                    for (std::size_t i = 0; i < m; ++i)
                        for (std::size_t j = 0; j < n; ++j) base[j] += coords[i] * perp_[i][j];
                    return fn(base);
                }
                return level(k + 1);
            };
            Estimate e = adaptive_gauss_kronrod(inner, ranges_[k].first, ranges_[k].second,
                                                breaks_[k], rel, kTiny, max_sub_);
            ok_ = ok_ && e.converged;
            return Val2{e.value, e.error_bound};
        };
        return level(0);
    }

    bool ok() const { return ok_; }
    void mark(bool converged) { ok_ = ok_ && converged; }

private:
    const ScalarField& f_;
    Vec dir_;
    std::vector<Vec> perp_;
    std::vector<std::pair<double, double>> ranges_;
    std::vector<std::vector<double>> breaks_;
    int max_sub_;
    bool ok_ = true;
};

// int (<grad f, u>_sign / norm)^p dx for unit u.
Estimate lp_integral_normalized(const ScalarField& f, const Vec& u, double p, Sign sign,
                                double normalizer, double rel, const QuadConfig& cfg,
                                XIntegrator route) {
    if (route == XIntegrator::Cubature) {
        auto g = [&](std::span<const double> x) {
            auto gr = f.grad(x);
            if (!gr) {
                Vec y(x.begin(), x.end());
                for (double& v : y) v += 1e-12;
                gr = f.grad(y);
                if (!gr) return 0.0;
            }
            return powp(signed_part(dot(*gr, u), sign) / normalizer, p);
        };
        QuadConfig c = cfg;
        c.rel_tol = rel;
        c.abs_tol = kTiny;
        return cubature_support(g, f.support_radius(), f.dim(), c);
    }
    LineIntegrator li(f, u, cfg.max_subdivisions);
    auto along = [&](const Vec& base) -> Val2 {
        const FieldLine L = f.line(base, u);
        if (!(L.lo < L.hi)) return Val2{};
        auto h = [&](double s) { return powp(signed_part(L.derivative(s), sign) / normalizer, p); };
        Estimate e = adaptive_gauss_kronrod(h, L.lo, L.hi, L.kinks, 0.25 * rel, kTiny, cfg.max_subdivisions);
        li.mark(e.converged);
        return Val2{e.value, e.error_bound};
    };
    Val2 r = li.integrate(along, 0.5 * rel);
    return Estimate{r.v, r.e, li.ok() && r.e <= rel * std::abs(r.v) + kTiny};
}

GaugeValue finish(double value, double rel_err, bool converged) {
    GaugeValue g;
    g.value = value;
    g.log_value = std::log(value);
    g.estimate = Estimate{value, rel_err * value, converged};
    return g;
}

GaugeValue lp_gauge(const ScalarField& f, const GaugeKind& k, const Vec& u, double xn,
                    const QuadConfig& cfg, const GaugeOptions& opt) {
    const double Lxi = f.linf_gauge_analytic(u, Sign::Sym);
    const double rel = std::clamp(cfg.rel_tol * k.p, cfg.rel_tol, 1e-4);
    const Estimate I = lp_integral_normalized(f, u, k.p, k.sign, Lxi, rel, cfg, opt.x_integrator);
    if (!(I.value > 0.0)) throw NumericalError("lp gauge: vanishing integral", u);
    const double logG = std::log(Lxi) + std::log(I.value) / k.p + std::log(xn);
    return finish(std::exp(logG), I.error_bound / I.value / k.p, I.converged);
}

GaugeValue frac_lp_gauge(const ScalarField& f, const GaugeKind& k, const Vec& u, double xn,
                         const QuadConfig& cfg, const GaugeOptions& opt) {
    const double p = k.p, s = k.s;
    const double Lxi = f.linf_gauge_analytic(u, Sign::Sym);
    const double M = f.sup_norm();
    const double tstar = M / Lxi;
    const double width = f.support_function(u) + f.support_function(scaled(u, -1.0));
    const double rel = std::clamp(cfg.rel_tol * p * s, cfg.rel_tol, 1e-4);

    const Estimate j0 = lp_integral_normalized(f, u, p, k.sign, Lxi, 0.1 * rel, cfg, opt.x_integrator);
    Vec hw = f.bounding_half_widths();
    double box = 1.0;
    for (double h : hw) box *= 2.0 * h;

    TailInfo tails;
    tails.cx = 2.0 * box;
    tails.j_zero = j0.value;
    tails.tau_far = width / tstar;
    const double kappa = k.sign == Sign::Sym ? 2.0 : 1.0;
    tails.j_far = kappa * std::exp(f.log_lp_power(p) - p * std::log(M));
    tails.tau_breaks = {0.5 * width / tstar};

    bool ok = j0.converged;
    std::function<Val2(double)> J;
    LineIntegrator li(f, u, cfg.max_subdivisions);
    if (opt.x_integrator == XIntegrator::Cubature) {
        J = [&](double tau) -> Val2 {
            const double t = tstar * tau;
            const double scale = M * std::min(tau, 1.0);
            Vec y(static_cast<std::size_t>(f.dim()));
            auto g = [&](std::span<const double> x) {
                for (std::size_t i = 0; i < y.size(); ++i) y[i] = x[i] + t * u[i];
                return powp(signed_part(f.eval(y) - f.eval(x), k.sign) / scale, p);
            };
            QuadConfig c = cfg;
            c.rel_tol = 0.25 * rel;
            c.abs_tol = kTiny;
            Estimate e = cubature_support(g, f.support_radius() + t, f.dim(), c);
            ok = ok && e.converged;
            return Val2{e.value, e.error_bound};
        };
    } else {
        J = [&](double tau) -> Val2 {
            const double t = tstar * tau;
            const double scale = M * std::min(tau, 1.0);
            auto along = [&](const Vec& base) -> Val2 {
                const FieldLine L = f.line(base, u);
                if (!(L.lo < L.hi)) return Val2{};
                std::vector<double> br = L.kinks;
                for (double kk : L.kinks) br.push_back(kk - t);
                br.push_back(L.lo);
                br.push_back(L.hi - t);
                auto h = [&](double x) {
                    return powp(signed_part(L.diff(x, t), k.sign) / scale, p);
                };
                Estimate e = adaptive_gauss_kronrod(h, L.lo - t, L.hi, br, 0.0625 * rel, kTiny,
                                                    cfg.max_subdivisions);
                li.mark(e.converged);
                return Val2{e.value, e.error_bound};
            };
            return li.integrate(along, 0.25 * rel);
        };
    }

    QuadConfig tc = cfg;
    tc.rel_tol = rel;
    tc.abs_tol = kTiny;
    tc.t_split = cfg.t_split / tstar;
    const LogEstimate I = singular_t_integral_normalized(J, p, s, tails, tc);
    ok = ok && li.ok() && I.converged;
    if (!std::isfinite(I.log_value)) throw NumericalError("fraclp gauge: vanishing integral", u);
    const double logS = s * std::log(Lxi) + (1.0 - s) * std::log(M);
    const double logG = (std::log(p * (1.0 - s)) + p * logS + I.log_value) / (p * s) + std::log(xn);
    return finish(std::exp(logG), I.rel_error / (p * s), ok);
}

GaugeValue frac_linf_gauge(const ScalarField& f, const GaugeKind& k, const Vec& u, double xn,
                           const QuadConfig& cfg) {
    const int n = f.dim();
    const double s = k.s;
    const double M = f.sup_norm();
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
        return signed_part(f.eval(y) - f.eval(x), k.sign) * std::exp(-s * std::log(t));
    };
    SupResult r = sup_search(g, box, 0.0, t_max, cfg);
    const double exterior = M * std::exp(-s * std::log(t_max));
    Witness w;
    double vs = r.value;
    if (exterior > r.value) {
        vs = exterior;
        w.t = t_max;
        // The catalog fields peak at the origin.
        w.x = k.sign == Sign::Minus ? Vec(static_cast<std::size_t>(n), 0.0) : scaled(u, -t_max);
    } else {
        w.x = r.x;
        w.t = r.t;
    }
    w.t /= xn;
    const double value = std::exp(std::log(vs) / s) * xn;
    const double rel_s = r.spread / vs;
    GaugeValue out = finish(value, rel_s / s + 1e-15, rel_s <= cfg.rel_tol);
    out.witness = w;
    return out;
}

GaugeValue linf_gauge(const ScalarField& f, const GaugeKind& k, const Vec& u, double xn,
                      const QuadConfig& cfg) {
    const double analytic = f.linf_gauge_analytic(u, k.sign);
    const SupResult r = linf_gauge_search(f, u, k.sign, cfg);
    const double gap = std::abs(analytic - r.value);
    const double value = analytic * xn;
    GaugeValue out = finish(value, gap / analytic, gap <= 1e-6 * analytic);
    out.witness = Witness{r.x, 0.0};
    return out;
}

}  // namespace

SupResult linf_gauge_search(const ScalarField& f, std::span<const double> xi, Sign sign,
                            const QuadConfig& cfg) {
    const int n = f.dim();
    const Vec hw = f.bounding_half_widths();
    Box box;
    for (int i = 0; i < n; ++i) {
        box.lo.push_back(-hw[static_cast<std::size_t>(i)]);
        box.hi.push_back(hw[static_cast<std::size_t>(i)]);
    }
    Vec probe(static_cast<std::size_t>(n));
    auto g = [&](std::span<const double> x) {
        auto gr = f.grad(x);
        if (!gr) {
            for (std::size_t i = 0; i < probe.size(); ++i) probe[i] = x[i] + 1e-12;
            gr = f.grad(probe);
            if (!gr) return 0.0;
        }
        return signed_part(dot(*gr, xi), sign);
    };
    return sup_search_box(g, box, cfg);
}

GaugeValue gauge(const ScalarField& f, const GaugeKind& kind, std::span<const double> xi,
                 const QuadConfig& cfg, const GaugeOptions& opt) {
    kind.validate();
    cfg.validate();
    if (static_cast<int>(xi.size()) != f.dim())
        throw std::invalid_argument("gauge: direction dimension does not match the field");
    const double xn = norm(xi);
    if (!(xn > 0.0)) throw std::domain_error("gauge: direction must be nonzero");
    if (!std::isfinite(xn)) throw std::domain_error("gauge: direction must be finite");
    const Vec u = scaled(xi, 1.0 / xn);
    switch (kind.family) {
        case GaugeFamily::Lp: return lp_gauge(f, kind, u, xn, cfg, opt);
        case GaugeFamily::FracLp: return frac_lp_gauge(f, kind, u, xn, cfg, opt);
        case GaugeFamily::FracLInf: return frac_linf_gauge(f, kind, u, xn, cfg);
        case GaugeFamily::LInf: return linf_gauge(f, kind, u, xn, cfg);
    }
    throw std::logic_error("gauge: unknown family");
}

std::vector<GaugeValue> gauge_batch(const ScalarField& f, const GaugeKind& kind,
                                    const std::vector<Vec>& directions, const QuadConfig& cfg) {
    return parallel_map(directions.size(), [&](std::size_t i) { return gauge(f, kind, directions[i], cfg); });
}

double alpha_np(int n, double p, const SphereGrid& grid) {
    if (!(p >= 1.0)) throw std::domain_error("alpha_np: p must be >= 1");
    if (grid.dim != n) throw std::invalid_argument("alpha_np: grid dimension mismatch");
    const std::size_t axis = static_cast<std::size_t>(n - 1);
    double sum = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) sum += grid.weights[i] * powp(std::abs(grid.nodes[i][axis]), p);
    return sum;
}

double alpha_np_reduced(int n, double p) {
    if (!(p >= 1.0)) throw std::domain_error("alpha_np: p must be >= 1");
    if (n == 1) return 2.0;
    // u = sin(theta) removes the endpoint singularity for n = 2.
    auto g = [&](double th) { return powp(std::abs(std::sin(th)), p) * std::pow(std::cos(th), n - 2); };
    QuadConfig c;
    c.rel_tol = 1e-13;
    c.abs_tol = 0.0;
    c.max_subdivisions = 400;
    const double br[1] = {0.0};
    const double h = std::numbers::pi / 2;
    const Estimate e = integrate_1d_adaptive(g, -h, h, c, br);
    const double area = n == 2 ? 2.0 : sphere_area(n - 1);
    return area * e.value;
}

double frac_lp_lower_bound(const ScalarField& f, double s, double p) {
    const double M = f.sup_norm();
    const double r0 = f.support_radius();
    const double level = f.distribution_function(0.75 * M);
    const double gs = 0.5 * std::pow(2.0 * r0, -s) * M * std::pow(level, 1.0 / p) *
                      std::pow((1.0 - s) / s, 1.0 / p);
    return std::pow(gs, 1.0 / s);
}

double frac_linf_lower_bound(const ScalarField& f, double s) {
    const double r = f.support_radius();
    const double upsilon = f.l1_norm() / (3.0 * std::pow(r, f.dim()) * ball_volume(f.dim()));
    return std::pow(upsilon, 1.0 / s) / (2.0 * r);
}

}  // namespace polarproj
