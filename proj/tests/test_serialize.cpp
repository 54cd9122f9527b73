#include <cmath>
#include <numbers>

#include "doctest.h"
#include "json.hpp"
#include "polarproj/serialize.hpp"

using namespace polarproj;
using doctest::Approx;
using nlohmann::json;

TEST_SUITE("serialize") {

TEST_CASE("format_double") {
    CHECK(format_double(0.1) == "0.10000000000000001");
    CHECK(format_double(2.0) == "2");
    CHECK(format_double(INFINITY) == "inf");
    CHECK(format_double(-INFINITY) == "-inf");
    CHECK(format_double(NAN) == "nan");
    for (double v : {std::numbers::pi, 1e-300, -7.25e12, 1.0 / 3.0}) CHECK(std::stod(format_double(v)) == v);
}

TEST_CASE("csv quoting") {
    CHECK(csv_field("abc") == "abc");
    CHECK(csv_field("a,b") == "\"a,b\"");
    CHECK(csv_field("say \"hi\"") == "\"say \"\"hi\"\"\"");
    CHECK(csv_field("two\nlines") == "\"two\nlines\"");
}

TEST_CASE("field descriptors round-trip") {
    const std::vector<ScalarField> fs{ScalarField::cone(2, 1.5, 2.0),
                                      ScalarField::anisotropic_tent(Mat(2, {1.5, 0.5, -0.2, 0.8})),
                                      ScalarField::smooth_bump(3, 0.7), ScalarField::tensor_tent(Vec{1.0, 0.25}),
                                      ScalarField::tensor_tent_symmetral(Vec{1.0, 1.0})};
    for (const auto& f : fs) {
        const std::string text = field_to_json(f);
        const json j = json::parse(text);
        CHECK(j.contains("kind"));
        CHECK(j["dim"] == f.dim());
        CHECK(j.contains("params"));
        const ScalarField g = field_from_json(text);
        CHECK(g.label() == f.label());
        CHECK(field_to_json(g) == text);
        const Vec x{0.1, -0.2, 0.05};
        CHECK(g.eval(std::span(x).first(static_cast<std::size_t>(f.dim()))) ==
              f.eval(std::span(x).first(static_cast<std::size_t>(f.dim()))));
    }
    CHECK(json::parse(field_to_json(ScalarField::cone(2, 1.0)))["kind"] == "cone");
    CHECK_THROWS(field_from_json(R"({"kind":"pyramid","dim":2,"params":{}})"));
    CHECK_THROWS(field_from_json("not json"));
}

TEST_CASE("quad config round-trip and merge") {
    QuadConfig c;
    c.rel_tol = 3e-6;
    c.seed = 123456789012345ull;
    c.x_cells_per_axis = 40;
    const QuadConfig d = quad_config_from_json(quad_config_to_json(c));
    CHECK(d.rel_tol == c.rel_tol);
    CHECK(d.seed == c.seed);
    CHECK(d.x_cells_per_axis == 40);
    const QuadConfig e = quad_config_from_json(R"({"max_subdivisions": 90})", c);
    CHECK(e.max_subdivisions == 90);
    CHECK(e.rel_tol == c.rel_tol);
}

TEST_CASE("sampled bodies round-trip losslessly") {
    auto g = std::make_shared<const SphereGrid>(make_sphere_grid(2, 64));
    const StarBody F = StarBody::random_fourier(3);
    const StarBody K = StarBody::sampled(g, F.radii_on(*g), "fourier3");
    const std::string csv = body_to_csv(K);
    CHECK(csv.rfind("x0,x1,weight,radius\n", 0) == 0);
    const StarBody K2 = body_from_csv(csv);
    CHECK(K2.radii() == K.radii());
    CHECK(K2.grid().nodes == K.grid().nodes);
    CHECK(K2.grid().weights == K.grid().weights);
    CHECK(body_to_csv(K2) == csv);
    const StarBody K3 = body_from_json(body_to_json(K));
    CHECK(K3.radii() == K.radii());
    CHECK(K3.label() == "fourier3");
    CHECK(body_to_json(K3) == body_to_json(K));

    auto g3 = std::make_shared<const SphereGrid>(make_sphere_grid(3, 8));
    const StarBody B3 = StarBody::sampled(g3, StarBody::ball(3, 2.0).radii_on(*g3), "ball");
    CHECK(body_from_csv(body_to_csv(B3)).radii() == B3.radii());
    CHECK_THROWS(body_to_csv(StarBody::ball(2)));
}

TEST_CASE("sweep tables") {
    QuadConfig cfg;
    SweepSpec spec;
    spec.p_ladder = {2, 4, 8};
    spec.s_ladder = {0.5, 0.8, 0.9};
    const SweepResult r = run_sweep(spec, cfg);
    const std::string csv = sweep_to_csv(r);
    CHECK(csv.rfind("p,0.5,0.80000000000000004,0.90000000000000002,1\n", 0) == 0);
    CHECK(csv.find("\ninf,") != std::string::npos);
    int lines = 0;
    for (char ch : csv) lines += ch == '\n';
    CHECK(lines == 5);
    const json j = json::parse(sweep_to_json(r));
    CHECK(j["table"].size() == 3);
    CHECK(j["p_inf"].size() == 3);
    CHECK(j["quantity"] == "gauge");
    CHECK(j["corner"]["value"].get<double>() == Approx(1.0));
    CHECK(sweep_to_json(r) == sweep_to_json(run_sweep(spec, cfg)));
}

TEST_CASE("reports") {
    const IneqReport r = make_report("demo", 2.0, 1.0, 1e-9, R"({"a":1})");
    const std::string line = report_to_json(r);
    CHECK(line.find('\n') == std::string::npos);
    const json j = json::parse(line);
    CHECK(j["verdict"] == "Holds");
    CHECK(j["margin"].get<double>() == 1.0);
    CHECK(j["inputs"]["a"] == 1);
    const std::string table = reports_table({r, make_report("eq", 1.0, 1.0, 0.0, "{}")});
    CHECK(table.find("HoldsWithEquality") != std::string::npos);
    CHECK(table.find("demo") != std::string::npos);
}

TEST_CASE("polar plots") {
    const StarBody B = StarBody::ball(2), E = StarBody::ellipsoid(Mat::diagonal(Vec{2.0, 1.0}));
    const std::string svg = polar_plot_svg({PlotCurve{&B, "ball"}, PlotCurve{&E, "ellipse"}});
    CHECK(svg.find("viewBox=\"0 0 800 800\"") != std::string::npos);
    std::size_t paths = 0, pos = 0;
    while ((pos = svg.find("<path", pos)) != std::string::npos) {
        ++paths;
        ++pos;
    }
    CHECK(paths == 2);
    CHECK(svg == polar_plot_svg({PlotCurve{&B, "ball"}, PlotCurve{&E, "ellipse"}}));
    const StarBody B3 = StarBody::ball(3);
    CHECK_THROWS_AS(polar_plot_svg({PlotCurve{&B3, "ball"}}), std::domain_error);
}

}
