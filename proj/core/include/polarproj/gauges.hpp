#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "polarproj/fields.hpp"
#include "polarproj/numerics.hpp"

namespace polarproj {

enum class GaugeFamily { Lp, FracLp, LInf, FracLInf };

struct GaugeKind {
    GaugeFamily family = GaugeFamily::LInf;
    double p = 1.0;  // Lp, FracLp
    double s = 1.0;  // FracLp, FracLInf
    Sign sign = Sign::Sym;

    static GaugeKind lp(double p, Sign sign = Sign::Sym);
    static GaugeKind frac_lp(double s, double p, Sign sign = Sign::Sym);
    static GaugeKind linf(Sign sign = Sign::Sym);
    static GaugeKind frac_linf(double s, Sign sign = Sign::Sym);

    void validate() const;
    bool sup_type() const { return family == GaugeFamily::LInf || family == GaugeFamily::FracLInf; }
    GaugeKind with_sign(Sign sg) const;
    std::string label() const;
};

std::string to_string(GaugeFamily f);
GaugeFamily parse_family(const std::string& s);

struct Witness {
    Vec x;
    double t = 0.0;
};

struct GaugeValue {
    double value = 0.0;
    double log_value = 0.0;
    Estimate estimate;
    std::optional<Witness> witness;
};

// Line-integral route for the inner x-integrals (the default), or axis-aligned
// nested cubature.
enum class XIntegrator { Lines, Cubature };

struct GaugeOptions {
    XIntegrator x_integrator = XIntegrator::Lines;
};

GaugeValue gauge(const ScalarField& f, const GaugeKind& kind, std::span<const double> xi,
                 const QuadConfig& cfg, const GaugeOptions& opt = {});

std::vector<GaugeValue> gauge_batch(const ScalarField& f, const GaugeKind& kind,
                                    const std::vector<Vec>& directions, const QuadConfig& cfg);

// Sup of <grad f, xi>_sign by grid + local search (no closed forms).
SupResult linf_gauge_search(const ScalarField& f, std::span<const double> xi, Sign sign,
                            const QuadConfig& cfg);

// alpha_{n,p} = int_{S^{n-1}} |<xi, eta>|^p dxi.
double alpha_np(int n, double p, const SphereGrid& grid);
// The same constant through the one-dimensional reduction.
double alpha_np_reduced(int n, double p);

// Constructive lower bounds on the gauges at unit directions.
double frac_lp_lower_bound(const ScalarField& f, double s, double p);
double frac_linf_lower_bound(const ScalarField& f, double s);

}  // namespace polarproj
