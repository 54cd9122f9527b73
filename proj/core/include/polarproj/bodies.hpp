#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "polarproj/fields.hpp"
#include "polarproj/gauges.hpp"
#include "polarproj/numerics.hpp"

namespace polarproj {

struct Interpolated {
    double value = 0.0;
    double error = 0.0;  // interpolation error estimate
};

// Star body about the origin, either through a gauge evaluated on unit vectors
// or through radii sampled on a sphere grid.
class StarBody {
public:
    using GaugeFn = std::function<double(std::span<const double>)>;

    static StarBody analytic(int n, GaugeFn gauge_on_sphere, std::string label);
    static StarBody sampled(std::shared_ptr<const SphereGrid> grid, Vec radii, std::string label,
                            Vec radius_errors = {});

    static StarBody ball(int n, double r = 1.0);
    // {x : |A x| <= 1}
    static StarBody ellipsoid(const Mat& A);
    // rho(theta) = exp(sum_k a_k cos k theta + b_k sin k theta), n = 2.
    static StarBody fourier(const Vec& a, const Vec& b, std::string label = "fourier");
    static StarBody random_fourier(std::uint64_t seed, int max_order = 6, double max_coef = 0.3);

    int dim() const { return n_; }
    bool is_sampled() const { return grid_ != nullptr; }
    const std::string& label() const { return label_; }
    const SphereGrid& grid() const { return *grid_; }
    std::shared_ptr<const SphereGrid> grid_ptr() const { return grid_; }
    const Vec& radii() const { return radii_; }
    const Vec& radius_errors() const { return radius_err_; }

    // Dilate by c > 0.
    StarBody dilated(double c) const;
    // Radii at the nodes of grid (exact values when the grid is the body's own).
    Vec radii_on(const SphereGrid& grid) const;

private:
    int n_ = 0;
    std::string label_;
    GaugeFn gauge_;
    std::shared_ptr<const SphereGrid> grid_;
    Vec radii_;
    Vec radius_err_;

    friend Interpolated radial_interpolated(const StarBody&, std::span<const double>);
};

double radial(const StarBody& K, std::span<const double> xi);
Interpolated radial_interpolated(const StarBody& K, std::span<const double> xi);

Estimate volume(const StarBody& K, const SphereGrid& grid);

struct DualMixed {
    double value = 0.0;
    double log_value = 0.0;
    double rel_error = 0.0;
    bool converged = true;
};

DualMixed dual_mixed_volume(const StarBody& K, const StarBody& L, double q, const SphereGrid& grid);

struct Dilation {
    double value = 0.0;
    Vec direction;
};

Dilation dilation_factor(const StarBody& K, const StarBody& L, double s, const SphereGrid& grid);

bool containment_check(const StarBody& K, const StarBody& L, double lambda, const SphereGrid& grid);

struct RealizeOptions {
    // Reuse gauge values across directions related by symmetries of the field
    // (rotations for radial fields, the linear map of an anisotropic tent,
    // coordinate reflections of a tensor tent, and antipodes of even fields).
    bool use_symmetry = true;
};

struct BodyOfField {
    ScalarField f;
    GaugeKind kind;
    StarBody realized;
    std::vector<double> gauges;  // per grid node
    bool converged = true;
    std::size_t evaluations = 0;  // gauge evaluations performed
};

BodyOfField realize_body(const ScalarField& f, const GaugeKind& kind,
                         std::shared_ptr<const SphereGrid> grid, const QuadConfig& cfg,
                         const RealizeOptions& opt = {});

}  // namespace polarproj
