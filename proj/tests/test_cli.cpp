#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>

#include "../tools/cli.hpp"
#include "doctest.h"
#include "json.hpp"
#include "polarproj/parallel.hpp"

using namespace polarproj;
using doctest::Approx;
using nlohmann::json;

namespace {
struct Run {
    int code;
    std::string out, err;
};

Run run(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = cli::run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& s) {
    std::vector<std::string> v;
    std::stringstream ss(s);
    std::string l;
    while (std::getline(ss, l)) v.push_back(l);
    return v;
}

double csv_value(const std::string& row, int col) {
    std::stringstream ss(row);
    std::string cell;
    for (int i = 0; i <= col; ++i) std::getline(ss, cell, ',');
    return std::stod(cell);
}
}  // namespace

TEST_SUITE("cli") {

TEST_CASE("gauge command") {
    const Run a = run({"gauge", "--field", "cone", "--n", "2", "--kind", "fraclinf", "--s", "0.5", "--xi", "1,0"});
    REQUIRE(a.code == cli::kOk);
    const auto la = lines(a.out);
    REQUIRE(la.size() == 2);
    CHECK(la[0] == "xi,value,log_value,error_bound,converged,witness_x,witness_t");
    CHECK(csv_value(la[1], 2) == Approx(1.0).epsilon(1e-6));

    const Run b = run({"gauge", "--field", "cone", "--n", "2", "--kind", "lp", "--p", "2", "--xi", "1,0", "--format",
                       "json"});
    REQUIRE(b.code == cli::kOk);
    const json j = json::parse(b.out);
    CHECK(j["rows"][0]["value"].get<double>() == Approx(std::sqrt(std::numbers::pi / 2)).epsilon(1e-6));

    CHECK(run({"gauge", "--field", "cone", "--n", "2", "--kind", "linf", "--xi", "0,0"}).code == cli::kUsage);
    CHECK(run({"gauge", "--field", "cone", "--n", "2", "--kind", "linf", "--xi", "1,0,0"}).code == cli::kUsage);
    CHECK(run({"gauge", "--field", "cone", "--n", "2", "--kind", "fraclp", "--s", "1.5", "--xi", "1,0"}).code ==
          cli::kUsage);
    CHECK(run({"gauge", "--n", "2", "--kind", "linf", "--xi", "1,0"}).code == cli::kUsage);
    CHECK(run({"frobnicate"}).code == cli::kUsage);
    CHECK(run({}).code == cli::kUsage);
}

TEST_CASE("non-converged gauges exit with 3") {
    const Run r = run({"gauge", "--field", "cone", "--n", "2", "--kind", "fraclp", "--s", "0.5", "--p", "2", "--xi",
                       "1,0", "--max-sub", "1", "--rel-tol", "1e-13"});
    CHECK(r.code == cli::kNotConverged);
    CHECK(r.out.find("false") != std::string::npos);
}

TEST_CASE("body command") {
    const Run r = run({"body", "--field", "cone", "--n", "2", "--kind", "linf", "--volume", "--resolution", "360"});
    REQUIRE(r.code == cli::kOk);
    CHECK(csv_value(lines(r.out)[1], 0) == Approx(std::numbers::pi).epsilon(1e-9));
    const Run c = run({"body", "--field", "aniso", "--n", "2", "--kind", "linf", "--resolution", "8"});
    REQUIRE(c.code == cli::kOk);
    CHECK(lines(c.out).size() == 9);
}

TEST_CASE("limits command") {
    const Run r = run({"limits", "--field", "cone", "--n", "2", "--quantity", "volume", "--p-ladder", "2,4,8",
                       "--s-ladder", "0.5,0.9", "--resolution", "180"});
    REQUIRE(r.code == cli::kOk);
    const auto l = lines(r.out);
    REQUIRE(l.size() == 5);
    CHECK(l[0] == "p,0.5,0.90000000000000002,1");
    CHECK(l[4].rfind("inf,", 0) == 0);
    CHECK(csv_value(l[4], 3) == Approx(std::numbers::pi).epsilon(1e-9));
    CHECK(r.err.find("commutation_gap=") != std::string::npos);

    const Run v = run({"limits", "--field", "cone", "--n", "2", "--quantity", "vtilroot", "--K", "ball", "--p-ladder",
                       "8,16", "--s-ladder", "0.5,0.9", "--resolution", "180", "--format", "json"});
    REQUIRE(v.code == cli::kOk);
    const json j = json::parse(v.out);
    for (const auto& c : j["p_inf"]) CHECK(c["value"].get<double>() == Approx(1.0).epsilon(1e-6));

    CHECK(run({"limits", "--n", "2", "--quantity", "volume"}).code == cli::kUsage);
    CHECK(run({"limits", "--field", "cone", "--n", "2", "--quantity", "area"}).code == cli::kUsage);
    CHECK(run({"limits", "--field", "cone", "--n", "2", "--p-ladder", "4,2"}).code == cli::kUsage);
}

TEST_CASE("limits output does not depend on the thread count") {
    const std::vector<std::string> args{"limits", "--field", "aniso", "--n", "2", "--quantity", "gauge", "--xi", "1,1",
                                        "--p-ladder", "2,4", "--s-ladder", "0.5,0.7"};
    set_thread_count(1);
    const Run a = run(args);
    set_thread_count(4);
    const Run b = run(args);
    set_thread_count(0);
    CHECK(a.code == cli::kOk);
    CHECK(a.out == b.out);
}

TEST_CASE("check command") {
    const Run d = run({"check", "--suite", "dualmixed", "--n", "2", "--q", "-2", "--pairs", "5"});
    REQUIRE(d.code == cli::kOk);
    const auto l = lines(d.out);
    CHECK(l.size() == 6);
    for (const auto& line : l) {
        const json j = json::parse(line);
        CHECK((j["verdict"] == "Holds" || j["verdict"] == "HoldsWithEquality"));
    }
    const Run g = run({"check", "--suite", "gradient", "--field", "cone", "--n", "2", "--format", "table"});
    CHECK(g.code == cli::kOk);
    CHECK(g.out.find("HoldsWithEquality") != std::string::npos);
    CHECK(run({"check", "--suite", "everything", "--n", "2"}).code == cli::kUsage);
    CHECK(run({"check", "--suite", "dualmixed", "--n", "2", "--q", "1"}).code == cli::kUsage);
}

TEST_CASE("symmetrize command") {
    const Run r = run({"symmetrize", "--field", "aniso", "--n", "2"});
    REQUIRE(r.code == cli::kOk);
    const json j = json::parse(r.out);
    CHECK(j["kind"] == "cone");
    CHECK(j["params"]["radius"].get<double>() == Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));
    const Run t = run({"symmetrize", "--field", "tensor", "--n", "2", "--tau", "0.25,0.5", "--format", "csv"});
    REQUIRE(t.code == cli::kOk);
    const auto l = lines(t.out);
    REQUIRE(l.size() == 3);
    CHECK(csv_value(l[2], 1) == Approx(csv_value(l[2], 2)).epsilon(1e-6));
}

TEST_CASE("plot command") {
    const Run a = run({"plot", "--field", "cone", "--n", "2", "--kind", "linf", "--format", "svg", "--resolution", "90"});
    REQUIRE(a.code == cli::kOk);
    CHECK(a.out.rfind("<svg", 0) == 0);
    CHECK(a.out.find("<path") != std::string::npos);
    const Run b = run({"plot", "--n", "2", "--overlay", "ellipse:0.5,1", "--overlay", "ball", "--format", "svg"});
    REQUIRE(b.code == cli::kOk);
    std::size_t paths = 0, pos = 0;
    while ((pos = b.out.find("<path", pos)) != std::string::npos) {
        ++paths;
        ++pos;
    }
    CHECK(paths == 2);
    CHECK(run({"plot", "--n", "2", "--overlay", "ellipse:0.5,1", "--overlay", "ball", "--format", "svg"}).out == b.out);
    CHECK(run({"plot", "--field", "cone", "--n", "3", "--kind", "linf", "--format", "svg"}).code == cli::kUsage);
    CHECK(run({"plot", "--field", "cone", "--n", "2", "--kind", "linf", "--format", "csv"}).code == cli::kUsage);
}

TEST_CASE("config files merge under explicit flags") {
    const std::string path = "polarproj_cli_test_config.json";
    {
        std::ofstream f(path);
        f << R"({"quad": {"rel_tol": 1e-6}, "field": {"kind": "cone", "dim": 2, "params": {"radius": 2}}, "resolution": 90})";
    }
    const Run a = run({"body", "--config", path, "--kind", "linf", "--volume"});
    REQUIRE(a.code == cli::kOk);
    CHECK(csv_value(lines(a.out)[1], 0) == Approx(4 * std::numbers::pi).epsilon(1e-9));
    const Run b = run({"body", "--config", path, "--field", "cone", "--n", "2", "--kind", "linf", "--volume"});
    REQUIRE(b.code == cli::kOk);
    CHECK(csv_value(lines(b.out)[1], 0) == Approx(std::numbers::pi).epsilon(1e-9));
    std::remove(path.c_str());
    CHECK(run({"body", "--config", "/nonexistent/x.json", "--kind", "linf"}).code == cli::kUsage);
}

TEST_CASE("output files") {
    const std::string path = "polarproj_cli_test_out.csv";
    const Run r = run({"gauge", "--field", "cone", "--n", "2", "--kind", "linf", "--xi", "0,1", "--out", path});
    REQUIRE(r.code == cli::kOk);
    CHECK(r.out.empty());
    std::ifstream f(path);
    std::stringstream ss;
    ss << f.rdbuf();
    CHECK(ss.str().rfind("xi,value", 0) == 0);
    std::remove(path.c_str());
}

}
