#include <numbers>
#include <random>

#include "polarproj/numerics.hpp"

namespace polarproj {

std::pair<Vec, Vec> gauss_legendre(int m) {
    if (m < 1) throw std::domain_error("gauss_legendre: m must be >= 1");
    Vec x(static_cast<std::size_t>(m)), w(static_cast<std::size_t>(m));
    for (int i = 0; i < (m + 1) / 2; ++i) {
        double z = std::cos(std::numbers::pi * (i + 0.75) / (m + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = z;
            for (int k = 2; k <= m; ++k) {
                const double pk = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = pk;
            }
            if (m == 1) p0 = 1.0;
            dp = m * (z * p1 - p0) / (z * z - 1.0);
            const double dz = p1 / dp;
            z -= dz;
            if (std::abs(dz) < 1e-16) break;
        }
        double p0 = 1.0, p1 = z;
        for (int k = 2; k <= m; ++k) {
            const double pk = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
            p0 = p1;
            p1 = pk;
        }
        dp = m == 1 ? 1.0 : m * (z * p1 - p0) / (z * z - 1.0);
        const double wi = 2.0 / ((1.0 - z * z) * dp * dp);
        x[static_cast<std::size_t>(i)] = -z;
        x[static_cast<std::size_t>(m - 1 - i)] = z;
        w[static_cast<std::size_t>(i)] = wi;
        w[static_cast<std::size_t>(m - 1 - i)] = wi;
    }
    if (m % 2 == 1) x[static_cast<std::size_t>(m / 2)] = 0.0;
    return {x, w};
}

double SphereGrid::total_weight() const {
    double s = 0.0;
    for (double w : weights) s += w;
    return s;
}

std::vector<std::pair<std::size_t, double>> SphereGrid::coarse_rule() const {
    std::vector<std::pair<std::size_t, double>> rule;
    if (scheme == SphereScheme::Trapezoid && nodes.size() % 2 == 0) {
        for (std::size_t i = 0; i < nodes.size(); i += 2) rule.emplace_back(i, 2.0 * weights[i]);
    } else if (scheme == SphereScheme::ProductGauss && n_phi % 2 == 0) {
        for (std::size_t iz = 0; iz < z_nodes.size(); ++iz)
            for (int j = 0; j < n_phi; j += 2) {
                const std::size_t i = iz * static_cast<std::size_t>(n_phi) + static_cast<std::size_t>(j);
                rule.emplace_back(i, 2.0 * weights[i]);
            }
    }
    return rule;
}

SphereGrid make_sphere_grid(int n, int resolution, std::uint64_t seed) {
    if (n < 1) throw std::domain_error("make_sphere_grid: n must be >= 1");
    if (resolution < 4) throw std::domain_error("make_sphere_grid: resolution must be >= 4");
    SphereGrid g;
    g.dim = n;
    g.resolution = resolution;
    g.seed = seed;
    if (n == 1) {
        g.scheme = SphereScheme::Uniform1D;
        g.nodes = {Vec{-1.0}, Vec{1.0}};
        g.weights = {1.0, 1.0};
        g.antipode = {1, 0};
    } else if (n == 2) {
        g.scheme = SphereScheme::Trapezoid;
        const double w = 2.0 * std::numbers::pi / resolution;
        for (int k = 0; k < resolution; ++k) {
            const double th = w * k;
            g.nodes.push_back(Vec{std::cos(th), std::sin(th)});
            g.weights.push_back(w);
            g.antipode.push_back(resolution % 2 == 0 ? (k + resolution / 2) % resolution : -1);
        }
    } else if (n == 3) {
        g.scheme = SphereScheme::ProductGauss;
        const int m = resolution;
        auto [z, wz] = gauss_legendre(m);
        g.z_nodes = z;
        g.n_phi = 2 * m;
        const double dphi = 2.0 * std::numbers::pi / g.n_phi;
        for (int iz = 0; iz < m; ++iz) {
            const double zz = z[static_cast<std::size_t>(iz)];
            const double rr = std::sqrt(std::max(0.0, 1.0 - zz * zz));
            for (int j = 0; j < g.n_phi; ++j) {
                const double ph = dphi * j;
                g.nodes.push_back(Vec{rr * std::cos(ph), rr * std::sin(ph), zz});
                g.weights.push_back(wz[static_cast<std::size_t>(iz)] * dphi);
                g.antipode.push_back((m - 1 - iz) * g.n_phi + (j + m) % g.n_phi);
            }
        }
    } else {
        g.scheme = SphereScheme::MonteCarlo;
        const int count = resolution + (resolution % 2);
        std::mt19937_64 rng(seed);
        std::uniform_real_distribution<double> unif(0.0, 1.0);
        auto normal_pair = [&]() {
            const double u1 = 1.0 - unif(rng);
            const double u2 = unif(rng);
            const double r = std::sqrt(-2.0 * std::log(u1));
            return std::pair{r * std::cos(2.0 * std::numbers::pi * u2),
                             r * std::sin(2.0 * std::numbers::pi * u2)};
        };
        const double w = sphere_area(n) / count;
        for (int k = 0; k < count / 2; ++k) {
            Vec v(static_cast<std::size_t>(n));
            for (int i = 0; i < n; i += 2) {
                auto [a, b] = normal_pair();
                v[static_cast<std::size_t>(i)] = a;
                if (i + 1 < n) v[static_cast<std::size_t>(i + 1)] = b;
            }
            v = normalized(v);
            g.nodes.push_back(v);
            g.nodes.push_back(scaled(v, -1.0));
            g.weights.push_back(w);
            g.weights.push_back(w);
            g.antipode.push_back(2 * k + 1);
            g.antipode.push_back(2 * k);
        }
    }
    return g;
}

}  // namespace polarproj
