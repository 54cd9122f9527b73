#include <cmath>
#include <numbers>

#include "doctest.h"
#include "polarproj/asymptotics.hpp"

using namespace polarproj;
using doctest::Approx;

namespace {
const Vec e1{1.0, 0.0};
}

TEST_SUITE("asymptotics") {

TEST_CASE("extrapolate_p") {
    const Vec p{2, 4, 8, 16, 32, 64, 128, 256};
    Vec q;
    for (double x : p) q.push_back(3.0 * std::exp((0.7 + 1.3 * std::log(x)) / x));
    const Extrapolation e = extrapolate_p(p, q);
    CHECK(e.valid);
    CHECK(e.value == Approx(3.0).epsilon(1e-12));
    const Extrapolation c = extrapolate_p(p, Vec(p.size(), 2.0));
    CHECK(c.value == Approx(2.0).epsilon(1e-15));
    CHECK(c.bound == 0.0);
}

TEST_CASE("extrapolate_s") {
    const Vec s{0.5, 0.7, 0.8, 0.9, 0.95, 0.99};
    Vec q;
    for (double x : s) q.push_back(1.0 + 0.5 * std::pow(1.0 - x, 1.5));
    const Extrapolation e = extrapolate_s(s, q);
    CHECK(e.valid);
    CHECK(e.value == Approx(1.0).epsilon(1e-9));
}

TEST_CASE("quantity names") {
    for (Quantity q : {Quantity::Gauge, Quantity::Volume, Quantity::DualMixedQ, Quantity::VtilRoot})
        CHECK(parse_quantity(to_string(q)) == q);
    CHECK_THROWS(parse_quantity("area"));
}

TEST_CASE("spec validation") {
    SweepSpec s;
    CHECK_NOTHROW(s.validate());
    s.p_ladder = {4, 2};
    CHECK_THROWS(s.validate());
    s = SweepSpec{};
    s.s_ladder = {0.5, 1.0};
    CHECK_THROWS(s.validate());
    s = SweepSpec{};
    s.quantity = Quantity::DualMixedQ;
    s.q = 2.0;
    CHECK_THROWS(s.validate());
    CHECK(default_resolution(2) == 720);
    CHECK(default_resolution(3) == 48);
}

TEST_CASE("gauge sweep of the cone") {
    QuadConfig cfg;
    SweepSpec spec;
    const SweepResult r = run_sweep(spec, cfg);
    CHECK_FALSE(r.degraded);
    CHECK(r.corner.value == Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(r.corner_23 - 1.0) <= 5e-3);
    CHECK(std::abs(r.corner_14 - 1.0) <= 5e-3);
    CHECK(r.commutation_gap < 5e-3);
    for (const auto& c : r.p_inf) CHECK(std::abs(c.value - 1.0) <= 1e-6);
    for (const auto& row : r.table)
        for (const auto& c : row) CHECK_FALSE(c.suspect);
    // The s = 1 column holds the classical Lp gauges.
    CHECK(r.s_one[0].value == Approx(std::sqrt(std::numbers::pi / 2)).epsilon(1e-6));
}

TEST_CASE("plus and minus sweeps of an even field coincide") {
    QuadConfig cfg;
    SweepSpec spec;
    spec.f = ScalarField::anisotropic_tent(Mat::diagonal(Vec{2.0, 1.0}));
    spec.p_ladder = {2, 4, 8};
    spec.s_ladder = {0.5, 0.8};
    spec.direction = normalized(Vec{1.0, 0.5});
    spec.sign = Sign::Plus;
    const SweepResult a = run_sweep(spec, cfg);
    spec.sign = Sign::Minus;
    const SweepResult b = run_sweep(spec, cfg);
    for (std::size_t i = 0; i < a.table.size(); ++i)
        for (std::size_t j = 0; j < a.table[i].size(); ++j)
            CHECK(std::abs(a.table[i][j].value - b.table[i][j].value) <= 1e-6);
    CHECK(std::abs(a.corner.value - b.corner.value) <= 1e-6);
}

TEST_CASE("vtilroot sweep on a small ladder") {
    QuadConfig cfg;
    SweepSpec spec;
    spec.quantity = Quantity::VtilRoot;
    spec.p_ladder = {8, 16, 32};
    spec.s_ladder = {0.5, 0.9};
    spec.grid_resolution = 180;
    const SweepResult r = run_sweep(spec, cfg);
    for (const auto& c : r.p_inf) CHECK(std::abs(c.value - 1.0) <= 1e-6);
    CHECK(r.corner.value == Approx(1.0).epsilon(1e-9));
}

TEST_CASE("holder quotient examples") {
    QuadConfig cfg;
    const StarBody B = StarBody::ball(2);
    const auto cone = ScalarField::cone(2, 1.0);
    for (double s : {0.3, 0.6, 0.9, 1.0}) CHECK(std::abs(holder_quotient_sup(cone, B, s, cfg).value - 1.0) <= 1e-5);
    CHECK(holder_quotient_sup(ScalarField::cone(2, 1.0, 3.0), B, 0.6, cfg).value == Approx(3.0).epsilon(1e-6));
    const auto an = ScalarField::anisotropic_tent(Mat::diagonal(Vec{2.0, 1.0}));
    CHECK(std::abs(holder_quotient_sup(an, B, 1.0, cfg).value - 2.0) <= 1e-5);
    const auto h = holder_quotient_sup(cone, StarBody::ball(2, 2.0), 0.5, cfg);
    CHECK(h.value == Approx(std::sqrt(2.0)).epsilon(1e-6));
    REQUIRE(h.x.size() == 2);
    CHECK(std::abs(cone.eval(h.y) - cone.eval(h.x)) == Approx(1.0).epsilon(1e-6));
}

TEST_CASE("holder quotient equals the dilation factor of the FracLInf body") {
    QuadConfig cfg;
    const StarBody B = StarBody::ball(2);
    auto g = std::make_shared<const SphereGrid>(make_sphere_grid(2, 180));
    const std::vector<ScalarField> fs{ScalarField::cone(2, 1.0),
                                      ScalarField::anisotropic_tent(Mat::diagonal(Vec{2.0, 1.0})),
                                      ScalarField::tensor_tent(Vec{1.0, 1.0})};
    for (const auto& f : fs)
        for (double s : {0.5, 0.8, 0.95}) {
            const double h = holder_quotient_sup(f, B, s, cfg).value;
            const BodyOfField body = realize_body(f, GaugeKind::frac_linf(s), g, cfg);
            const double d = dilation_factor(B, body.realized, s, *g).value;
            CAPTURE(f.label());
            CAPTURE(s);
            CHECK(d <= h + 1e-6);
            CHECK(h - d <= (f.label().starts_with("tensor") ? 1e-3 * h : 1e-6));
        }
}

TEST_CASE("gradient quotient") {
    QuadConfig cfg;
    const auto an = ScalarField::anisotropic_tent(Mat::diagonal(Vec{3.0, 1.0}));
    CHECK(gradient_quotient_sup(an, StarBody::ball(2), cfg).value == Approx(3.0).epsilon(1e-9));
    CHECK(gradient_quotient_sup(ScalarField::cone(2, 1.0), StarBody::ball(2), cfg).value == Approx(1.0).epsilon(1e-12));
}

}
