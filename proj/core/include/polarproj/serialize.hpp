#pragma once

#include <string>
#include <vector>

#include "polarproj/asymptotics.hpp"
#include "polarproj/bodies.hpp"
#include "polarproj/fields.hpp"
#include "polarproj/gauges.hpp"
#include "polarproj/inequalities.hpp"
#include "polarproj/numerics.hpp"

namespace polarproj {

// Shortest text at 17 significant digits; "inf", "-inf", "nan" for non-finite values.
std::string format_double(double v);
std::string csv_field(const std::string& s);

// {"kind": ..., "dim": ..., "params": {...}}
std::string field_to_json(const ScalarField& f);
ScalarField field_from_json(const std::string& text);

std::string quad_config_to_json(const QuadConfig& cfg);
// Keys present in text override base.
QuadConfig quad_config_from_json(const std::string& text, QuadConfig base = {});

// Sampled bodies only.
std::string body_to_csv(const StarBody& K);
StarBody body_from_csv(const std::string& text, const std::string& label = "csv");
std::string body_to_json(const StarBody& K);
StarBody body_from_json(const std::string& text);

std::string sweep_to_csv(const SweepResult& r);
std::string sweep_to_json(const SweepResult& r);

std::string report_to_json(const IneqReport& r);
std::string reports_table(const std::vector<IneqReport>& reports);

struct PlotCurve {
    const StarBody* body = nullptr;
    std::string name;
};

// Polar plot of planar star bodies: 720 boundary samples per body, viewBox 800x800.
std::string polar_plot_svg(const std::vector<PlotCurve>& curves);

}  // namespace polarproj
