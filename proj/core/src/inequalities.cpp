#include "polarproj/inequalities.hpp"

#include <cmath>
#include <stdexcept>

#include "json.hpp"
#include "polarproj/serialize.hpp"

namespace polarproj {

std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::Holds: return "Holds";
        case Verdict::HoldsWithEquality: return "HoldsWithEquality";
        case Verdict::ViolatedWithinTolerance: return "ViolatedWithinTolerance";
        case Verdict::Violated: return "Violated";
    }
    return "unknown";
}

IneqReport make_report(std::string name, double lhs, double rhs, double tolerance, std::string inputs) {
    IneqReport r;
    r.name = std::move(name);
    r.lhs = lhs;
    r.rhs = rhs;
    r.margin = lhs - rhs;
    r.tolerance = tolerance;
    r.equality_band = std::max(2e-3 * std::abs(lhs), 1e-6);
    r.inputs = std::move(inputs);
    if (!std::isfinite(r.margin))
        r.verdict = Verdict::Violated;
    else if (std::abs(r.margin) <= r.equality_band)
        r.verdict = Verdict::HoldsWithEquality;
    else if (r.margin > 0.0)
        r.verdict = Verdict::Holds;
    else if (-r.margin <= tolerance + r.equality_band)
        r.verdict = Verdict::ViolatedWithinTolerance;
    else
        r.verdict = Verdict::Violated;
    return r;
}

namespace {

std::shared_ptr<const SphereGrid> grid_for(int n, const CheckOptions& opt, const QuadConfig& cfg) {
    const int res = opt.grid_resolution > 0 ? opt.grid_resolution : default_resolution(n);
    return std::make_shared<const SphereGrid>(make_sphere_grid(n, res, cfg.seed));
}

nlohmann::json base_inputs(const ScalarField& f, Sign sign) {
    nlohmann::json j;
    j["field"] = nlohmann::json::parse(field_to_json(f));
    j["sign"] = to_string(sign);
    return j;
}

// Sup quotients come from a grid search polished locally; their error is
// taken at the configured relative tolerance.
double sup_tolerance(double a, double b, const QuadConfig& cfg) {
    return std::max(cfg.rel_tol, 1e-6) * (std::abs(a) + std::abs(b));
}

}  // namespace

StarBody body_symmetral(const StarBody& K, const SphereGrid& grid) {
    const Estimate v = volume(K, grid);
    const int n = K.dim();
    return StarBody::ball(n, std::pow(v.value / ball_volume(n), 1.0 / n));
}

IneqReport check_polya_szego_holder(const ScalarField& f, const StarBody& K, double s, Sign sign,
                                    const QuadConfig& cfg, const CheckOptions& opt) {
    const auto grid = grid_for(f.dim(), opt, cfg);
    const StarBody Ks = body_symmetral(K, *grid);
    const HolderSup lhs = holder_quotient_sup(f, K, s, cfg, sign, opt.directions);
    const HolderSup rhs = holder_quotient_sup(symmetrize(f), Ks, s, cfg, sign, opt.directions);
    auto in = base_inputs(f, sign);
    in["K"] = K.label();
    in["s"] = s;
    return make_report("polya_szego_holder", lhs.value, rhs.value, sup_tolerance(lhs.value, rhs.value, cfg),
                       in.dump());
}

IneqReport check_polya_szego_gradient(const ScalarField& f, const StarBody& K, Sign sign,
                                      const QuadConfig& cfg, const CheckOptions& opt) {
    const auto grid = grid_for(f.dim(), opt, cfg);
    const StarBody Ks = body_symmetral(K, *grid);
    const HolderSup lhs = gradient_quotient_sup(f, K, cfg, sign, opt.directions);
    const HolderSup rhs = gradient_quotient_sup(symmetrize(f), Ks, cfg, sign, opt.directions);
    auto in = base_inputs(f, sign);
    in["K"] = K.label();
    return make_report("polya_szego_gradient", lhs.value, rhs.value,
                       sup_tolerance(lhs.value, rhs.value, cfg), in.dump());
}

IneqReport check_volume_polya_szego(const ScalarField& f, double s, Sign sign, const QuadConfig& cfg,
                                    const CheckOptions& opt) {
    if (!(s > 0.0 && s <= 1.0)) throw std::domain_error("check_volume_polya_szego: s must lie in (0, 1]");
    const int n = f.dim();
    const auto grid = grid_for(n, opt, cfg);
    const GaugeKind kind = s == 1.0 ? GaugeKind::linf(sign) : GaugeKind::frac_linf(s, sign);
    const BodyOfField a = realize_body(f, kind, grid, cfg);
    const BodyOfField b = realize_body(symmetrize(f), kind, grid, cfg);
    const Estimate va = volume(a.realized, *grid), vb = volume(b.realized, *grid);
    const double e = -s / n;
    const double lhs = std::pow(va.value, e), rhs = std::pow(vb.value, e);
    const double tol = (s / n) * (lhs * va.error_bound / va.value + rhs * vb.error_bound / vb.value);
    auto in = base_inputs(f, sign);
    in["s"] = s;
    in["resolution"] = grid->resolution;
    return make_report("volume_polya_szego", lhs, rhs, tol, in.dump());
}

IneqReport check_endpoint_isoperimetric(const ScalarField& f, const StarBody& K, double s, Sign sign,
                                        const QuadConfig& cfg, const CheckOptions& opt) {
    if (!(s > 0.0 && s <= 1.0)) throw std::domain_error("check_endpoint_isoperimetric: s must lie in (0, 1]");
    const int n = f.dim();
    const auto grid = grid_for(n, opt, cfg);
    const HolderSup q = s == 1.0 ? gradient_quotient_sup(f, K, cfg, sign, opt.directions)
                                 : holder_quotient_sup(f, K, s, cfg, sign, opt.directions);
    const GaugeKind kind = s == 1.0 ? GaugeKind::linf(sign) : GaugeKind::frac_linf(s, sign);
    const BodyOfField body = realize_body(f, kind, grid, cfg);
    const Estimate vb = volume(body.realized, *grid);
    const Estimate vk = volume(K, *grid);
    const double rhs = std::pow(vk.value, s / n) * std::pow(vb.value, -s / n);
    const double tol = sup_tolerance(q.value, 0.0, cfg) +
                       (s / n) * rhs * (vk.error_bound / vk.value + vb.error_bound / vb.value);
    auto in = base_inputs(f, sign);
    in["K"] = K.label();
    in["s"] = s;
    in["resolution"] = grid->resolution;
    return make_report("endpoint_isoperimetric", q.value, rhs, tol, in.dump());
}

IneqReport check_dual_mixed_inequality(const StarBody& U, const StarBody& V, double q,
                                       const SphereGrid& grid) {
    if (!(q < 0.0)) throw std::domain_error("check_dual_mixed_inequality: q must be < 0");
    const int n = grid.dim;
    const DualMixed d = dual_mixed_volume(U, V, q, grid);
    const Estimate vu = volume(U, grid), vv = volume(V, grid);
    const double log_rhs = ((n - q) / n) * std::log(vu.value) + (q / n) * std::log(vv.value);
    const double rhs = std::exp(log_rhs);
    const double tol = d.value * d.rel_error +
                       rhs * (std::abs((n - q) / n) * vu.error_bound / vu.value +
                              std::abs(q / n) * vv.error_bound / vv.value);
    nlohmann::json in;
    in["U"] = U.label();
    in["V"] = V.label();
    in["q"] = q;
    in["resolution"] = grid.resolution;
    return make_report("dual_mixed", d.value, rhs, tol, in.dump());
}

}  // namespace polarproj
