#include "polarproj/bodies.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <random>
#include <stdexcept>

#include "polarproj/parallel.hpp"

namespace polarproj {

namespace {

bool same_grid(const SphereGrid& a, const SphereGrid& b) {
    return &a == &b || (a.dim == b.dim && a.scheme == b.scheme && a.resolution == b.resolution &&
                        a.seed == b.seed && a.size() == b.size());
}

struct Sampled {
    Vec radii;
    Vec errors;
};

Sampled sample_on(const StarBody& K, const SphereGrid& grid) {
    if (K.dim() != grid.dim) throw std::invalid_argument("body and grid dimensions differ");
    Sampled out;
    if (K.is_sampled() && same_grid(K.grid(), grid)) {
        out.radii = K.radii();
        out.errors = K.radius_errors().empty() ? Vec(out.radii.size(), 0.0) : K.radius_errors();
        return out;
    }
    out.radii.reserve(grid.size());
    out.errors.reserve(grid.size());
    for (const auto& xi : grid.nodes) {
        const Interpolated r = radial_interpolated(K, xi);
        out.radii.push_back(r.value);
        out.errors.push_back(r.error);
    }
    return out;
}

// Angle in [0, 2 pi).
double angle_of(std::span<const double> xi) {
    double th = std::atan2(xi[1], xi[0]);
    if (th < 0.0) th += 2.0 * std::numbers::pi;
    return th;
}

Interpolated interp_circle(const SphereGrid& g, const Vec& radii, std::span<const double> u) {
    const int N = static_cast<int>(g.size());
    const double h = 2.0 * std::numbers::pi / N;
    const double pos = angle_of(u) / h;
    int k = static_cast<int>(std::floor(pos));
    double fr = pos - k;
    k = ((k % N) + N) % N;
    const int k1 = (k + 1) % N;
    auto r = [&](int i) { return radii[static_cast<std::size_t>(((i % N) + N) % N)]; };
    const double v = (1.0 - fr) * r(k) + fr * r(k1);
    const double d2 = std::max(std::abs(r(k - 1) - 2.0 * r(k) + r(k1)),
                               std::abs(r(k) - 2.0 * r(k1) + r(k + 2)));
    return Interpolated{v, 0.5 * fr * (1.0 - fr) * d2};
}

Interpolated interp_product(const SphereGrid& g, const Vec& radii, std::span<const double> u) {
    const int m = static_cast<int>(g.z_nodes.size());
    const int P = g.n_phi;
    const double dphi = 2.0 * std::numbers::pi / P;
    const double z = std::clamp(u[2], -1.0, 1.0);
    double ph = std::atan2(u[1], u[0]);
    if (ph < 0.0) ph += 2.0 * std::numbers::pi;
    const double pos = ph / dphi;
    int j = static_cast<int>(std::floor(pos));
    const double fp = pos - j;
    j = ((j % P) + P) % P;
    const int j1 = (j + 1) % P;
    auto at = [&](int iz, int jj) {
        return radii[static_cast<std::size_t>(iz * P + jj)];
    };
    auto ring_mean = [&](int iz) {
        double s = 0.0;
        for (int jj = 0; jj < P; ++jj) s += at(iz, jj);
        return s / P;
    };
    auto ring = [&](int iz) { return (1.0 - fp) * at(iz, j) + fp * at(iz, j1); };

    const Vec& zn = g.z_nodes;
    if (z <= zn.front() || z >= zn.back()) {
        // Polar cap: linear in z between the outer ring and the mean ring value
        // at the pole.
        const bool top = z >= zn.back();
        const int iz = top ? m - 1 : 0;
        const double zr = zn[static_cast<std::size_t>(iz)];
        const double pole = ring_mean(iz);
        const double span = (top ? 1.0 : -1.0) - zr;
        const double fz = span == 0.0 ? 0.0 : (z - zr) / span;
        const double rv = ring(iz);
        const double v = (1.0 - fz) * rv + fz * pole;
        return Interpolated{v, 0.5 * std::abs(rv - pole) * fz * (1.0 - fz) +
                                   0.25 * std::abs(at(iz, j) - at(iz, j1))};
    }
    const int iz = static_cast<int>(std::upper_bound(zn.begin(), zn.end(), z) - zn.begin()) - 1;
    const double z0 = zn[static_cast<std::size_t>(iz)], z1 = zn[static_cast<std::size_t>(iz + 1)];
    const double fz = (z - z0) / (z1 - z0);
    // Two triangles per (z, phi) cell, split along the diagonal.
    const double a = at(iz, j), b = at(iz, j1), c = at(iz + 1, j), d = at(iz + 1, j1);
    double v;
    if (fp >= fz)
        v = a + fp * (b - a) + fz * (d - b);
    else
        v = a + fz * (c - a) + fp * (d - c);
    const double hi = std::max({a, b, c, d}), lo = std::min({a, b, c, d});
    return Interpolated{v, 0.125 * (hi - lo)};
}

Interpolated interp_nearest(const SphereGrid& g, const Vec& radii, std::span<const double> u) {
    std::size_t best = 0, second = 0;
    double b1 = -2.0, b2 = -2.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double c = dot(g.nodes[i], u);
        if (c > b1) {
            b2 = b1;
            second = best;
            b1 = c;
            best = i;
        } else if (c > b2) {
            b2 = c;
            second = i;
        }
    }
    return Interpolated{radii[best], std::abs(radii[best] - radii[second])};
}

}  // namespace

StarBody StarBody::analytic(int n, GaugeFn gauge_on_sphere, std::string label) {
    if (n < 1) throw std::domain_error("StarBody: dimension must be >= 1");
    StarBody K;
    K.n_ = n;
    K.gauge_ = std::move(gauge_on_sphere);
    K.label_ = std::move(label);
    return K;
}

StarBody StarBody::sampled(std::shared_ptr<const SphereGrid> grid, Vec radii, std::string label,
                           Vec radius_errors) {
    if (!grid) throw std::invalid_argument("StarBody: null grid");
    if (radii.size() != grid->size()) throw std::invalid_argument("StarBody: one radius per node");
    for (double r : radii)
        if (!(r > 0.0) || !std::isfinite(r))
            throw std::domain_error("StarBody: radii must be finite and > 0");
    if (!radius_errors.empty() && radius_errors.size() != radii.size())
        throw std::invalid_argument("StarBody: one radius error per node");
    StarBody K;
    K.n_ = grid->dim;
    K.grid_ = std::move(grid);
    K.radii_ = std::move(radii);
    K.radius_err_ = std::move(radius_errors);
    K.label_ = std::move(label);
    return K;
}

StarBody StarBody::ball(int n, double r) {
    if (!(r > 0.0)) throw std::domain_error("ball: radius must be > 0");
    const double g = 1.0 / r;
    std::string label = r == 1.0 ? "ball" : "ball(r=" + std::to_string(r) + ")";
    return analytic(n, [g](std::span<const double>) { return g; }, std::move(label));
}

StarBody StarBody::ellipsoid(const Mat& A) {
    if (A.determinant() == 0.0) throw std::domain_error("ellipsoid: singular matrix");
    return analytic(A.dim(), [A](std::span<const double> u) { return norm(A.apply(u)); },
                    "ellipsoid");
}

StarBody StarBody::fourier(const Vec& a, const Vec& b, std::string label) {
    return analytic(
        2,
        [a, b](std::span<const double> u) {
            const double th = std::atan2(u[1], u[0]);
            double e = 0.0;
            for (std::size_t k = 0; k < a.size(); ++k) e += a[k] * std::cos(static_cast<double>(k) * th);
            for (std::size_t k = 0; k < b.size(); ++k) e += b[k] * std::sin(static_cast<double>(k) * th);
            return std::exp(-e);
        },
        std::move(label));
}

StarBody StarBody::random_fourier(std::uint64_t seed, int max_order, double max_coef) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-max_coef, max_coef);
    Vec a(static_cast<std::size_t>(max_order + 1)), b(static_cast<std::size_t>(max_order + 1));
    for (int k = 0; k <= max_order; ++k) {
        a[static_cast<std::size_t>(k)] = u(rng);
        b[static_cast<std::size_t>(k)] = k == 0 ? 0.0 : u(rng);
    }
    return fourier(a, b, "fourier(seed=" + std::to_string(seed) + ")");
}

StarBody StarBody::dilated(double c) const {
    if (!(c > 0.0)) throw std::domain_error("dilated: factor must be > 0");
    if (is_sampled()) {
        Vec r = scaled(radii_, c);
        Vec e = radius_err_.empty() ? Vec{} : scaled(radius_err_, c);
        return sampled(grid_, std::move(r), label_ + "*" + std::to_string(c), std::move(e));
    }
    auto g = gauge_;
    return analytic(n_, [g, c](std::span<const double> u) { return g(u) / c; },
                    label_ + "*" + std::to_string(c));
}

Vec StarBody::radii_on(const SphereGrid& grid) const { return sample_on(*this, grid).radii; }

Interpolated radial_interpolated(const StarBody& K, std::span<const double> xi) {
    if (static_cast<int>(xi.size()) != K.dim()) throw std::invalid_argument("radial: dimension mismatch");
    const double len = norm(xi);
    if (!(len > 0.0)) throw std::domain_error("radial: direction must be nonzero");
    const Vec u = scaled(xi, 1.0 / len);
    Interpolated r;
    if (!K.is_sampled()) {
        const double g = K.gauge_(u);
        if (!(g > 0.0) || !std::isfinite(g)) throw NumericalError("invalid gauge value", u);
        r.value = 1.0 / g;
    } else {
        const SphereGrid& g = *K.grid_;
        switch (g.scheme) {
            case SphereScheme::Uniform1D: r.value = K.radii_[u[0] < 0.0 ? 0 : 1]; break;
            case SphereScheme::Trapezoid: r = interp_circle(g, K.radii_, u); break;
            case SphereScheme::ProductGauss: r = interp_product(g, K.radii_, u); break;
            case SphereScheme::MonteCarlo: r = interp_nearest(g, K.radii_, u); break;
        }
    }
    r.value /= len;
    r.error /= len;
    return r;
}

double radial(const StarBody& K, std::span<const double> xi) { return radial_interpolated(K, xi).value; }

Estimate volume(const StarBody& K, const SphereGrid& grid) {
    const Sampled smp = sample_on(K, grid);
    const int n = grid.dim;
    auto sum_rule = [&](const std::vector<std::pair<std::size_t, double>>& rule) {
        double v = 0.0;
        for (auto [i, w] : rule) v += w * std::pow(smp.radii[i], n);
        return v / n;
    };
    double V = 0.0, prop = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        V += grid.weights[i] * std::pow(smp.radii[i], n);
        prop += grid.weights[i] * n * std::pow(smp.radii[i], n - 1) * smp.errors[i];
    }
    V /= n;
    prop /= n;
    double quad_err = 0.0;
    const auto coarse = grid.coarse_rule();
    if (!coarse.empty()) {
        quad_err = std::abs(V - sum_rule(coarse));
    } else if (grid.scheme == SphereScheme::MonteCarlo) {
        const double area = grid.total_weight();
        double m1 = 0.0, m2 = 0.0;
        for (double r : smp.radii) {
            const double v = area * std::pow(r, n) / n;
            m1 += v;
            m2 += v * v;
        }
        const double N = static_cast<double>(grid.size());
        m1 /= N;
        m2 /= N;
        quad_err = 3.0 * std::sqrt(std::max(0.0, m2 - m1 * m1) / N);
    }
    const double err = quad_err + prop;
    return Estimate{V, err, err <= 1e-4 * std::abs(V)};
}

DualMixed dual_mixed_volume(const StarBody& K, const StarBody& L, double q, const SphereGrid& grid) {
    const int n = grid.dim;
    if (q == 0.0 || q == static_cast<double>(n))
        throw std::domain_error("dual_mixed_volume: q must differ from 0 and n");
    const Sampled a = sample_on(K, grid), b = sample_on(L, grid);
    std::vector<std::pair<double, double>> terms;
    terms.reserve(grid.size());
    double lmax = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double l = (n - q) * std::log(a.radii[i]) + q * std::log(b.radii[i]);
        terms.emplace_back(l, grid.weights[i]);
        lmax = std::max(lmax, l);
    }
    const double logV = log_domain_mean_p(terms, 1.0) - std::log(static_cast<double>(n));
    // Relative error from radius errors, weighted by the normalized integrand.
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double w = grid.weights[i] * std::exp(terms[i].first - lmax);
        num += w * (std::abs(n - q) * a.errors[i] / a.radii[i] + std::abs(q) * b.errors[i] / b.radii[i]);
        den += w;
    }
    double rel = den > 0.0 ? num / den : 0.0;
    const auto coarse = grid.coarse_rule();
    if (!coarse.empty()) {
        std::vector<std::pair<double, double>> ct;
        ct.reserve(coarse.size());
        for (auto [i, w] : coarse) ct.emplace_back(terms[i].first, w);
        const double logC = log_domain_mean_p(ct, 1.0) - std::log(static_cast<double>(n));
        rel += std::abs(std::expm1(logV - logC));
    }
    DualMixed out;
    out.log_value = logV;
    out.value = std::exp(logV);
    out.rel_error = rel;
    out.converged = rel <= 1e-4;
    return out;
}

Dilation dilation_factor(const StarBody& K, const StarBody& L, double s, const SphereGrid& grid) {
    if (!(s > 0.0 && s <= 1.0)) throw std::domain_error("dilation_factor: s must lie in (0, 1]");
    const Sampled a = sample_on(K, grid), b = sample_on(L, grid);
    std::size_t best = 0;
    double lbest = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double l = std::log(a.radii[i]) - std::log(b.radii[i]);
        if (l > lbest) {
            lbest = l;
            best = i;
        }
    }
    Vec dir = grid.nodes[best];
    auto log_ratio = [&](std::span<const double> u) { return std::log(radial(K, u)) - std::log(radial(L, u)); };
    const int n = grid.dim;
    if (n == 2) {
        const double h = 2.0 * std::numbers::pi / static_cast<double>(grid.size());
        const double th0 = angle_of(dir);
        auto f = [&](double th) {
            const Vec u{std::cos(th), std::sin(th)};
            return log_ratio(u);
        };
        auto [th, v] = golden_section_max(f, th0 - h, th0 + h, 1e-12);
        if (v > lbest) {
            lbest = v;
            dir = Vec{std::cos(th), std::sin(th)};
        }
    } else if (n == 3) {
        const Vec base = dir;
        const auto comp = orthogonal_complement(base);
        const double h = std::numbers::pi / std::max(2, grid.n_phi / 2);
        auto chart = [&](std::span<const double> c) {
            Vec u = base;
            for (int k = 0; k < 2; ++k) u = axpy(c[static_cast<std::size_t>(k)], comp[static_cast<std::size_t>(k)], u);
            return normalized(u);
        };
        const Vec step{0.5 * h, 0.5 * h}, lo{-2.0 * h, -2.0 * h}, hi{2.0 * h, 2.0 * h};
        const auto nm = nelder_mead_max([&](std::span<const double> c) { return log_ratio(chart(c)); },
                                        Vec{0.0, 0.0}, step, lo, hi, 1e-14, 400);
        if (nm.value > lbest) {
            lbest = nm.value;
            dir = chart(nm.x);
        }
    }
    return Dilation{std::exp(s * lbest), dir};
}

bool containment_check(const StarBody& K, const StarBody& L, double lambda, const SphereGrid& grid) {
    if (!(lambda > 0.0)) throw std::domain_error("containment_check: lambda must be > 0");
    const Sampled a = sample_on(K, grid), b = sample_on(L, grid);
    for (std::size_t i = 0; i < grid.size(); ++i)
        if (a.radii[i] > lambda * b.radii[i] * (1.0 + 1e-10)) return false;
    return true;
}

BodyOfField realize_body(const ScalarField& f, const GaugeKind& kind,
                         std::shared_ptr<const SphereGrid> grid, const QuadConfig& cfg,
                         const RealizeOptions& opt) {
    if (!grid) throw std::invalid_argument("realize_body: null grid");
    if (grid->dim != f.dim()) throw std::invalid_argument("realize_body: grid and field dimensions differ");
    kind.validate();
    const std::size_t N = grid->size();

    // Each node is mapped to a representative direction and a multiplier:
    // gauge(node) = factor[node] * gauge(representative).
    std::vector<Vec> reps;
    std::vector<std::size_t> rep_of(N);
    Vec factor(N, 1.0);
    ScalarField target = f;

    if (!opt.use_symmetry) {
        for (std::size_t i = 0; i < N; ++i) {
            rep_of[i] = reps.size();
            reps.push_back(grid->nodes[i]);
        }
    } else if (f.radially_symmetric()) {
        reps.push_back(grid->nodes[0]);
    } else if (f.kind() == FieldKind::AnisotropicTent) {
        // f = c o A with c a unit cone, so the gauge at xi equals
        // det(A)^{-1/e} |A xi| times the cone gauge, with e the integrability exponent.
        target = ScalarField::cone(f.dim(), 1.0, f.amplitude());
        const double e = kind.family == GaugeFamily::Lp       ? kind.p
                         : kind.family == GaugeFamily::FracLp ? kind.p * kind.s
                                                              : std::numeric_limits<double>::infinity();
        const double det_factor = std::isinf(e) ? 1.0 : std::pow(std::abs(f.matrix().determinant()), -1.0 / e);
        reps.push_back(grid->nodes[0]);
        for (std::size_t i = 0; i < N; ++i) factor[i] = det_factor * norm(f.matrix().apply(grid->nodes[i]));
    } else if (f.kind() == FieldKind::TensorTent) {
        std::map<std::vector<long long>, std::size_t> seen;
        for (std::size_t i = 0; i < N; ++i) {
            std::vector<long long> key;
            Vec canon;
            for (double c : grid->nodes[i]) {
                key.push_back(std::llround(std::abs(c) * 1e12));
                canon.push_back(std::abs(c));
            }
            auto [it, fresh] = seen.emplace(key, reps.size());
            if (fresh) reps.push_back(canon);
            rep_of[i] = it->second;
        }
    } else {
        // Even fields: antipodal nodes share a value.
        std::vector<long long> slot(N, -1);
        for (std::size_t i = 0; i < N; ++i) {
            const int a = grid->antipode.empty() ? -1 : grid->antipode[i];
            if (a >= 0 && static_cast<std::size_t>(a) < i) {
                rep_of[i] = rep_of[static_cast<std::size_t>(a)];
            } else {
                rep_of[i] = reps.size();
                reps.push_back(grid->nodes[i]);
            }
        }
    }

    const auto values = parallel_map(reps.size(), [&](std::size_t k) {
        return gauge(target, kind, reps[k], cfg);
    });

    BodyOfField out{f, kind, StarBody::ball(f.dim()), {}, true, reps.size()};
    Vec radii(N), errs(N);
    out.gauges.resize(N);
    for (std::size_t i = 0; i < N; ++i) {
        const GaugeValue& gv = values[rep_of[i]];
        const double g = factor[i] * gv.value;
        if (!(g > 0.0) || !std::isfinite(g))
            throw NumericalError("gauge is not positive and finite", grid->nodes[i]);
        out.gauges[i] = g;
        radii[i] = 1.0 / g;
        const double rel = gv.value > 0.0 ? gv.estimate.error_bound / gv.value : 0.0;
        errs[i] = radii[i] * rel;
        if (!gv.estimate.converged) out.converged = false;
    }
    out.realized = StarBody::sampled(std::move(grid), std::move(radii),
                                     "body[" + kind.label() + "](" + f.label() + ")", std::move(errs));
    return out;
}

}  // namespace polarproj
