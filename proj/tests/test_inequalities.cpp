#include <cmath>
#include <numbers>

#include "doctest.h"
#include "polarproj/inequalities.hpp"

using namespace polarproj;
using doctest::Approx;

namespace {
const double pi = std::numbers::pi;
ScalarField aniso(double a) { return ScalarField::anisotropic_tent(Mat::diagonal(Vec{a, 1.0})); }
}  // namespace

TEST_SUITE("inequalities") {

TEST_CASE("verdict logic") {
    CHECK(make_report("x", 2.0, 1.0, 0.0, "{}").verdict == Verdict::Holds);
    CHECK(make_report("x", 1.0, 1.0 - 1e-4, 0.0, "{}").verdict == Verdict::HoldsWithEquality);
    CHECK(make_report("x", 1.0, 1.0 + 1e-4, 0.0, "{}").verdict == Verdict::HoldsWithEquality);
    CHECK(make_report("x", 1.0, 1.01, 0.01, "{}").verdict == Verdict::ViolatedWithinTolerance);
    CHECK(make_report("x", 1.0, 1.5, 0.01, "{}").verdict == Verdict::Violated);
    const IneqReport r = make_report("x", 3.0, 1.0, 0.0, "{}");
    CHECK(r.margin == 2.0);
    CHECK(r.equality_band == Approx(6e-3));
    CHECK(make_report("x", 0.0, 0.0, 0.0, "{}").equality_band == 1e-6);
    CHECK(to_string(Verdict::HoldsWithEquality) == "HoldsWithEquality");
}

TEST_CASE("holder Polya-Szego examples") {
    QuadConfig cfg;
    const StarBody B = StarBody::ball(2);
    const IneqReport a = check_polya_szego_holder(aniso(2.0), B, 0.7, Sign::Sym, cfg);
    CHECK(a.verdict == Verdict::Holds);
    CHECK(a.margin > 0.0);
    CHECK(a.lhs == Approx(std::pow(2.0, 0.7)).epsilon(1e-5));
    CHECK(a.rhs == Approx(std::pow(std::sqrt(2.0), 0.7)).epsilon(1e-5));
    for (double s : {0.4, 0.9}) {
        const IneqReport c = check_polya_szego_holder(ScalarField::cone(2, 1.0), B, s, Sign::Sym, cfg);
        CHECK(c.verdict == Verdict::HoldsWithEquality);
        CHECK(std::abs(c.margin) <= 1e-5);
    }
    CHECK(check_polya_szego_holder(ScalarField::tensor_tent(Vec{1.0, 1.0}), B, 0.5, Sign::Sym, cfg).verdict ==
          Verdict::Holds);
}

TEST_CASE("holder check is scale covariant") {
    QuadConfig cfg;
    const StarBody B = StarBody::ball(2);
    const IneqReport base = check_polya_szego_holder(aniso(2.0), B, 0.5, Sign::Plus, cfg);
    for (double c : {0.1, 10.0}) {
        const auto f = ScalarField::anisotropic_tent(Mat::diagonal(Vec{2.0, 1.0}), c);
        const IneqReport r = check_polya_szego_holder(f, B, 0.5, Sign::Plus, cfg);
        CHECK(r.lhs == Approx(c * base.lhs).epsilon(1e-6));
        CHECK(r.rhs == Approx(c * base.rhs).epsilon(1e-6));
        CHECK(r.verdict == base.verdict);
    }
}

TEST_CASE("gradient Polya-Szego examples") {
    QuadConfig cfg;
    const StarBody B = StarBody::ball(2);
    const IneqReport a = check_polya_szego_gradient(aniso(2.0), B, Sign::Sym, cfg);
    CHECK(a.lhs == Approx(2.0).epsilon(1e-9));
    CHECK(a.rhs == Approx(std::sqrt(2.0)).epsilon(1e-9));
    CHECK(a.verdict == Verdict::Holds);
    CHECK(check_polya_szego_gradient(ScalarField::cone(2, 1.0), B, Sign::Minus, cfg).verdict ==
          Verdict::HoldsWithEquality);
    const IneqReport b = check_polya_szego_gradient(aniso(3.0), B, Sign::Sym, cfg);
    CHECK(b.lhs == Approx(3.0).epsilon(1e-9));
    CHECK(b.rhs == Approx(std::sqrt(3.0)).epsilon(1e-9));
}

TEST_CASE("volume Polya-Szego examples") {
    QuadConfig cfg;
    const IneqReport c = check_volume_polya_szego(ScalarField::cone(2, 1.0), 0.8, Sign::Sym, cfg);
    CHECK(c.verdict == Verdict::HoldsWithEquality);
    CHECK(std::abs(c.margin) <= 2e-3 * c.lhs);
    const IneqReport a = check_volume_polya_szego(aniso(2.0), 0.8, Sign::Sym, cfg);
    CHECK(a.verdict == Verdict::HoldsWithEquality);
    CHECK(std::abs(a.margin) <= 2e-3 * a.lhs);
    const IneqReport e = check_volume_polya_szego(aniso(2.0), 1.0, Sign::Sym, cfg);
    CHECK(e.verdict == Verdict::HoldsWithEquality);
    CHECK(e.lhs == Approx(std::pow(pi / 2, -0.5)).epsilon(1e-6));
}

TEST_CASE("endpoint isoperimetric examples") {
    QuadConfig cfg;
    const StarBody B = StarBody::ball(2);
    const IneqReport c = check_endpoint_isoperimetric(ScalarField::cone(2, 1.0), B, 0.6, Sign::Sym, cfg);
    CHECK(c.verdict == Verdict::HoldsWithEquality);
    const IneqReport a = check_endpoint_isoperimetric(aniso(2.0), B, 1.0, Sign::Sym, cfg);
    CHECK(a.verdict == Verdict::Holds);
    CHECK(a.lhs == Approx(2.0).epsilon(1e-6));
    CHECK(a.rhs == Approx(std::sqrt(2.0)).epsilon(1e-6));
    const IneqReport k = check_endpoint_isoperimetric(ScalarField::cone(2, 1.0),
                                                      StarBody::ellipsoid(Mat::diagonal(Vec{2.0, 1.0})), 1.0,
                                                      Sign::Sym, cfg);
    CHECK(k.verdict == Verdict::Holds);
    CHECK(k.lhs == Approx(1.0).epsilon(1e-6));
    CHECK(k.rhs == Approx(std::sqrt(0.5)).epsilon(1e-6));
}

TEST_CASE("dual mixed inequality examples") {
    const SphereGrid g = make_sphere_grid(2, 720);
    const IneqReport a = check_dual_mixed_inequality(StarBody::ball(2), StarBody::ball(2), -3.0, g);
    CHECK(a.verdict == Verdict::HoldsWithEquality);
    const IneqReport b = check_dual_mixed_inequality(StarBody::ball(2, 2.0), StarBody::ball(2), -2.0, g);
    CHECK(b.verdict == Verdict::HoldsWithEquality);
    CHECK(b.lhs == Approx(16 * pi).epsilon(1e-10));
    CHECK(b.rhs == Approx(16 * pi).epsilon(1e-10));
    const IneqReport c = check_dual_mixed_inequality(StarBody::random_fourier(1), StarBody::random_fourier(2), -4.0, g);
    CHECK(c.verdict == Verdict::Holds);
    CHECK(c.margin > 0.0);
    CHECK_THROWS_AS(check_dual_mixed_inequality(StarBody::ball(2), StarBody::ball(2), 0.0, g), std::domain_error);
    CHECK_THROWS_AS(check_dual_mixed_inequality(StarBody::ball(2), StarBody::ball(2), 1.0, g), std::domain_error);
}

TEST_CASE("random pairs and dilates") {
    const SphereGrid g = make_sphere_grid(2, 720);
    for (std::uint64_t k = 0; k < 25; ++k) {
        const IneqReport r =
            check_dual_mixed_inequality(StarBody::random_fourier(100 + 2 * k), StarBody::random_fourier(101 + 2 * k), -2.0, g);
        CHECK(r.verdict == Verdict::Holds);
    }
    const StarBody U = StarBody::random_fourier(7);
    for (double q : {-0.5, -8.0}) {
        const IneqReport r = check_dual_mixed_inequality(U, U.dilated(2.0), q, g);
        CHECK(r.verdict == Verdict::HoldsWithEquality);
        CHECK(std::abs(r.margin) <= 1e-8 * r.lhs);
    }
}

TEST_CASE("body symmetral keeps the volume") {
    const SphereGrid g = make_sphere_grid(2, 720);
    const StarBody K = StarBody::random_fourier(3);
    const StarBody S = body_symmetral(K, g);
    CHECK(volume(S, g).value == Approx(volume(K, g).value).epsilon(1e-12));
}

}
