#pragma once

#include <string>
#include <vector>

#include "polarproj/asymptotics.hpp"
#include "polarproj/bodies.hpp"
#include "polarproj/fields.hpp"

namespace polarproj {

enum class Verdict { Holds, HoldsWithEquality, ViolatedWithinTolerance, Violated };

std::string to_string(Verdict v);

// A check of lhs >= rhs.
struct IneqReport {
    std::string name;
    double lhs = 0.0;
    double rhs = 0.0;
    double margin = 0.0;          // lhs - rhs
    double tolerance = 0.0;       // combined numerical error bound of both sides
    double equality_band = 0.0;   // max(2e-3 |lhs|, 1e-6)
    Verdict verdict = Verdict::Holds;
    std::string inputs;           // JSON text describing the inputs
};

// Verdict from the two sides and their combined error bound.
IneqReport make_report(std::string name, double lhs, double rhs, double tolerance, std::string inputs);

struct CheckOptions {
    int grid_resolution = 0;  // sphere grid for body realizations; 0: default for n
    int directions = 0;       // direction grid for sup quotients; 0: default for n
};

// Schwarz symmetral of a body: the centered ball with the same volume.
StarBody body_symmetral(const StarBody& K, const SphereGrid& grid);

IneqReport check_polya_szego_holder(const ScalarField& f, const StarBody& K, double s, Sign sign,
                                    const QuadConfig& cfg, const CheckOptions& opt = {});
IneqReport check_polya_szego_gradient(const ScalarField& f, const StarBody& K, Sign sign,
                                      const QuadConfig& cfg, const CheckOptions& opt = {});
// s = 1 compares LInf bodies.
IneqReport check_volume_polya_szego(const ScalarField& f, double s, Sign sign, const QuadConfig& cfg,
                                    const CheckOptions& opt = {});
IneqReport check_endpoint_isoperimetric(const ScalarField& f, const StarBody& K, double s, Sign sign,
                                        const QuadConfig& cfg, const CheckOptions& opt = {});
IneqReport check_dual_mixed_inequality(const StarBody& U, const StarBody& V, double q,
                                       const SphereGrid& grid);

}  // namespace polarproj
