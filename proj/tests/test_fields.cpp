#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "polarproj/fields.hpp"
#include "polarproj/numerics.hpp"

using namespace polarproj;
using doctest::Approx;

namespace {
const double pi = std::numbers::pi;

std::vector<ScalarField> catalog2() {
    return {ScalarField::cone(2, 1.0), ScalarField::anisotropic_tent(Mat::diagonal(Vec{2.0, 1.0})),
            ScalarField::smooth_bump(2, 1.0), ScalarField::tensor_tent(Vec{1.0, 1.0})};
}

// Area of {(1-|x|)(1-|y|) >= tau}.
double tensor_level_area(double tau) { return 4.0 * ((1.0 - tau) + tau * std::log(tau)); }
}  // namespace

TEST_SUITE("fields") {

TEST_CASE("eval examples") {
    const auto cone = ScalarField::cone(2, 1.0);
    CHECK(cone.eval(Vec{0.0, 0.0}) == 1.0);
    CHECK(cone.eval(Vec{2.0, 0.0}) == 0.0);
    CHECK(cone.eval(Vec{0.0, -2.0}) == 0.0);
    const auto an = ScalarField::anisotropic_tent(Mat::diagonal(Vec{2.0, 1.0}));
    CHECK(an.eval(Vec{0.25, 0.0}) == Approx(0.5).epsilon(1e-15));
    const auto tt = ScalarField::tensor_tent(Vec{1.0, 2.0});
    CHECK(tt.eval(Vec{0.5, 1.0}) == Approx(0.25).epsilon(1e-15));
    CHECK(ScalarField::smooth_bump(2, 1.0).eval(Vec{0.0, 0.0}) == Approx(1.0));
    CHECK(ScalarField::cone(2, 1.0, 3.0).eval(Vec{0.5, 0.0}) == Approx(1.5));
}

TEST_CASE("grad examples") {
    const auto cone = ScalarField::cone(2, 1.0);
    auto g = cone.grad(Vec{0.5, 0.0});
    REQUIRE(g);
    CHECK((*g)[0] == Approx(-1.0));
    CHECK((*g)[1] == Approx(0.0));
    CHECK_FALSE(cone.grad(Vec{0.0, 0.0}));
    CHECK_FALSE(cone.grad(Vec{1.0, 0.0}));

    const auto an = ScalarField::anisotropic_tent(Mat::diagonal(Vec{2.0, 1.0}));
    auto ga = an.grad(Vec{0.25, 0.0});
    REQUIRE(ga);
    CHECK((*ga)[0] == Approx(-2.0));
    CHECK((*ga)[1] == Approx(0.0));
}

TEST_CASE("grad agrees with central differences") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> U(-1.2, 1.2);
    const double h = 1e-6;
    for (const auto& f : catalog2()) {
        int tested = 0;
        while (tested < 100) {
            Vec x{U(rng), U(rng)};
            auto g = f.grad(x);
            if (!g) continue;
            // Stay away from the kinks so the difference quotient is smooth.
            bool smooth = true;
            for (int i = 0; i < 2 && smooth; ++i) {
                Vec a = x, b = x;
                a[i] -= 10 * h;
                b[i] += 10 * h;
                smooth = f.grad(a).has_value() && f.grad(b).has_value() &&
                         std::abs((*f.grad(a))[i] - (*f.grad(b))[i]) < 1e-2;
            }
            if (!smooth || f.eval(x) == 0.0) continue;
            for (int i = 0; i < 2; ++i) {
                Vec a = x, b = x;
                a[i] -= h;
                b[i] += h;
                const double fd = (f.eval(b) - f.eval(a)) / (2 * h);
                CHECK(std::abs(fd - (*g)[i]) <= 1e-4);
            }
            ++tested;
        }
    }
}

TEST_CASE("metadata") {
    const auto cone = ScalarField::cone(2, 2.0);
    CHECK(cone.lipschitz() == Approx(0.5));
    CHECK(cone.sup_norm() == 1.0);
    CHECK(cone.support_radius() == Approx(2.0));
    CHECK(cone.l1_norm() == Approx(pi * 4.0 / 3.0));
    const auto an = ScalarField::anisotropic_tent(Mat::diagonal(Vec{2.0, 1.0}));
    CHECK(an.lipschitz() == Approx(2.0));
    CHECK(an.support_radius() == Approx(1.0));
    CHECK(an.label() == "aniso(n=2, A=[2,0,0,1])");
    CHECK(ScalarField::cone(2, 1.0).label() == "cone(n=2, R=1)");
}

TEST_CASE("line restriction differences match eval") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    for (const auto& f : catalog2()) {
        for (int k = 0; k < 200; ++k) {
            const Vec base{U(rng), U(rng)};
            const Vec dir = normalized(Vec{U(rng), U(rng)});
            const FieldLine L = f.line(base, dir);
            const double u = U(rng), t = std::pow(10.0, -6.0 * (1.0 + U(rng)));
            const Vec xa = axpy(u, dir, base), xb = axpy(u + t, dir, base);
            CHECK(L.eval(u) == Approx(f.eval(xa)).epsilon(1e-12));
            CHECK(std::abs(L.diff(u, t) - (f.eval(xb) - f.eval(xa))) <= 1e-13);
        }
    }
}

TEST_CASE("distribution function examples") {
    const auto cone = ScalarField::cone(2, 1.0);
    CHECK(cone.distribution_function(0.5) == Approx(pi / 4).epsilon(1e-12));
    CHECK_THROWS_AS(cone.distribution_function(1.0 + 1e-9), std::domain_error);
    CHECK_THROWS_AS(cone.distribution_function(0.0), std::domain_error);
    const auto an = ScalarField::anisotropic_tent(Mat::diagonal(Vec{2.0, 1.0}));
    CHECK(an.distribution_function(1e-12) == Approx(pi / 2).epsilon(1e-8));
    const auto tt = ScalarField::tensor_tent(Vec{1.0, 1.0});
    CHECK(tt.distribution_function(0.5) == Approx(tensor_level_area(0.5)).epsilon(1e-7));
}

TEST_CASE("symmetrize examples") {
    const auto cone = ScalarField::cone(2, 1.0);
    CHECK(symmetrize(cone).label() == cone.label());
    const auto an = ScalarField::anisotropic_tent(Mat::diagonal(Vec{2.0, 1.0}));
    const auto as = symmetrize(an);
    for (double r : {0.0, 0.1, 0.3, 0.5, 0.7})
        CHECK(as.eval(Vec{r, 0.0}) == Approx(std::max(0.0, 1.0 - std::sqrt(2.0) * r)).epsilon(1e-12));
    const auto bump = ScalarField::smooth_bump(2, 1.0);
    CHECK(symmetrize(bump).label() == bump.label());

    const auto tt = ScalarField::tensor_tent(Vec{1.0, 1.0});
    const auto ts = symmetrize(tt);
    CHECK(ts.distribution_function(0.5) == Approx(tensor_level_area(0.5)).epsilon(1e-6));
    CHECK(tt.distribution_function(0.5) == Approx(ts.distribution_function(0.5)).epsilon(1e-6));
}

TEST_CASE("symmetrize preserves the distribution function") {
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    std::vector<ScalarField> fs = catalog2();
    fs.push_back(ScalarField::anisotropic_tent(Mat(2, {1.5, 0.5, -0.2, 0.8})));
    fs.push_back(ScalarField::tensor_tent(Vec{0.5, 1.5}, 2.0));
    for (const auto& f : fs) {
        const auto g = symmetrize(f);
        CHECK(g.sup_norm() == f.sup_norm());
        CHECK(g.l1_norm() == Approx(f.l1_norm()).epsilon(1e-6));
        for (int k = 0; k < 20; ++k) {
            const double tau = f.sup_norm() * (0.001 + 0.998 * U(rng));
            CHECK(g.distribution_function(tau) == Approx(f.distribution_function(tau)).epsilon(1e-6));
        }
    }
}

TEST_CASE("symmetrals are radial") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> U(0.0, 2 * pi);
    for (const auto& f : catalog2()) {
        const auto g = symmetrize(f);
        CHECK(g.radially_symmetric());
        for (double r : {0.05, 0.3, 0.6, 0.9}) {
            const double ref = g.eval(Vec{r, 0.0});
            for (int k = 0; k < 5; ++k) {
                const double a = U(rng);
                CHECK(g.eval(Vec{r * std::cos(a), r * std::sin(a)}) == Approx(ref).epsilon(1e-12));
            }
        }
    }
}

TEST_CASE("L1 norm matches cubature") {
    QuadConfig cfg;
    for (const auto& f : catalog2()) {
        const Estimate e = cubature_support([&](std::span<const double> x) { return f.eval(x); },
                                            f.support_radius(), 2, cfg);
        CHECK(e.value == Approx(f.l1_norm()).epsilon(1e-6));
        const auto g = symmetrize(f);
        const Estimate es = cubature_support([&](std::span<const double> x) { return g.eval(x); },
                                             g.support_radius(), 2, cfg);
        CHECK(es.value == Approx(f.l1_norm()).epsilon(1e-6));
    }
}

TEST_CASE("values stay within [0, sup]") {
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> U(-2.0, 2.0);
    for (const auto& f : catalog2())
        for (int k = 0; k < 500; ++k) {
            const double v = f.eval(Vec{U(rng), U(rng)});
            CHECK(v >= 0.0);
            CHECK(v <= f.sup_norm());
        }
}

TEST_CASE("invalid parameters") {
    CHECK_THROWS(ScalarField::cone(2, -1.0));
    CHECK_THROWS(ScalarField::cone(0, 1.0));
    CHECK_THROWS(ScalarField::anisotropic_tent(Mat(2, {1.0, 2.0, 2.0, 4.0})));
    CHECK_THROWS(ScalarField::tensor_tent(Vec{1.0, 0.0}));
}

}
