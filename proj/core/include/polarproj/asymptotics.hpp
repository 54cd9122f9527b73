#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "polarproj/bodies.hpp"
#include "polarproj/fields.hpp"
#include "polarproj/gauges.hpp"
#include "polarproj/numerics.hpp"

namespace polarproj {

enum class Quantity { Gauge, Volume, DualMixedQ, VtilRoot };

std::string to_string(Quantity q);
Quantity parse_quantity(const std::string& s);

struct SweepSpec {
    ScalarField f = ScalarField::cone(2, 1.0);
    Vec p_ladder{2, 4, 8, 16, 32, 64, 128, 256};
    Vec s_ladder{0.5, 0.7, 0.8, 0.9, 0.95, 0.99};
    Vec direction;  // Gauge only; defaults to e_1
    Quantity quantity = Quantity::Gauge;
    double q = -2.0;  // DualMixedQ
    std::optional<StarBody> K;  // DualMixedQ, VtilRoot; defaults to the unit ball
    std::string K_label = "ball";
    Sign sign = Sign::Sym;
    int grid_resolution = 0;  // 0: 720 (n = 2), 48 (n = 3), 2 (n = 1), 4096 (n >= 4)
    RealizeOptions realize;

    void validate() const;
};

struct Cell {
    double value = 0.0;
    double error = 0.0;  // absolute error bound
    bool converged = true;
    bool suspect = false;  // gauge below the constructive lower bound
};

struct Extrapolation {
    double value = 0.0;
    double bound = 0.0;
    bool valid = false;
};

struct SweepResult {
    SweepSpec spec;
    std::vector<std::vector<Cell>> table;  // [p index][s index]
    std::vector<Cell> s_one;               // s = 1 column, per p
    std::vector<Cell> p_inf;               // p = inf row, per s
    Cell corner;                           // (p, s) = (inf, 1)

    std::vector<Extrapolation> edge1;  // s -> 1 along each p row
    std::vector<Extrapolation> edge2;  // p -> inf along each s column
    Extrapolation edge3;               // s -> 1 along the p = inf row
    Extrapolation edge4;               // p -> inf along the s = 1 column
    double corner_14 = 0.0;            // via edges (1) + (4)
    double corner_23 = 0.0;            // via edges (2) + (3)
    double commutation_gap = 0.0;
    double commutation_bound = 0.0;

    bool degraded = false;
    std::vector<std::string> warnings;
};

// Memo of realized bodies and gauge values, shared between sweeps of one field.
class SweepCache {
public:
    std::shared_ptr<const BodyOfField> body(const std::string& key,
                                            const std::function<BodyOfField()>& make);
    GaugeValue gauge_value(const std::string& key, const std::function<GaugeValue()>& make);

private:
    std::mutex mu_;
    std::map<std::string, std::shared_ptr<const BodyOfField>> bodies_;
    std::map<std::string, GaugeValue> gauges_;
};

SweepResult run_sweep(const SweepSpec& spec, const QuadConfig& cfg, SweepCache* cache = nullptr);

// Fitted limit of q(p) as p -> inf from the model log q = log q_inf + (a + b log p) / p
// on the last three points; the bound compares with the preceding triple.
Extrapolation extrapolate_p(const Vec& p, const Vec& q);
// Fitted limit of q(s) as s -> 1 from the model q = q_1 + c (1 - s)^gamma.
Extrapolation extrapolate_s(const Vec& s, const Vec& q);

struct HolderSup {
    double value = 0.0;
    Vec x, y;
    bool converged = true;
};

// sup over x != y of (f(x) - f(y))_sign / ||x - y||_K^s.
HolderSup holder_quotient_sup(const ScalarField& f, const StarBody& K, double s, const QuadConfig& cfg,
                              Sign sign = Sign::Sym, int directions = 0);

// sup over xi of ||<grad f, xi>_sign||_inf / ||xi||_K, from LInf gauges on a direction grid.
HolderSup gradient_quotient_sup(const ScalarField& f, const StarBody& K, const QuadConfig& cfg,
                                Sign sign = Sign::Sym, int directions = 0);

int default_resolution(int n);

}  // namespace polarproj
