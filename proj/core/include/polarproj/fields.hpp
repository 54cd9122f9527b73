#pragma once

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "polarproj/linalg.hpp"

namespace polarproj {

enum class FieldKind { Cone, AnisotropicTent, SmoothBump, TensorTent, RadialTable };

enum class Sign { Sym, Plus, Minus };

std::string to_string(FieldKind k);
std::string to_string(Sign s);
Sign parse_sign(const std::string& s);

// Monotone radial profile tabulated against the level tau, used for the
// Schwarz symmetral of a tensor tent.
struct RadialTable {
    Vec tau;     // increasing, tau[0] = 0, tau.back() = 1
    Vec radius;  // decreasing
    Vec dtau_dr; // slope of the inverse profile at each knot
    double r_max = 0.0;
    double lipschitz = 0.0;

    // Profile value (in [0, 1]) and derivative at radius r >= 0.
    double value(double r) const;
    double derivative(double r) const;
};

// Restriction of a field to the line base + u * dir (|dir| = 1).
class FieldLine {
public:
    double eval(double u) const;
    double derivative(double u) const;  // d/du f(base + u dir)
    // eval(u + t) - eval(u) without cancellation for small t.
    double diff(double u, double t) const;
    double lo = 0.0, hi = 0.0;          // support interval; empty when lo >= hi
    std::vector<double> kinks;

private:
    friend class ScalarField;
    FieldKind kind_ = FieldKind::Cone;
    double amp_ = 1.0;
    double R_ = 1.0;
    // |x(u)|^2 (or |A x(u)|^2) = c0 + 2 c1 u + c2 u^2.
    double c0_ = 0.0, c1_ = 0.0, c2_ = 1.0;
    Vec base_, dir_, inv_w_;
    const RadialTable* table_ = nullptr;
};

struct Chord {
    double lo = 0.0, hi = 0.0;
    std::vector<double> kinks;
};

class ScalarField {
public:
    static ScalarField cone(int n, double R, double amplitude = 1.0);
    static ScalarField anisotropic_tent(const Mat& A, double amplitude = 1.0);
    static ScalarField smooth_bump(int n, double R, double amplitude = 1.0);
    static ScalarField tensor_tent(const Vec& w, double amplitude = 1.0);
    // Radial field f*(x) = amplitude * profile(|x|) from the symmetral of tensor_tent(w).
    static ScalarField tensor_tent_symmetral(const Vec& w, double amplitude = 1.0);

    FieldKind kind() const { return kind_; }
    int dim() const { return n_; }
    double amplitude() const { return amp_; }
    double radius() const { return R_; }
    const Mat& matrix() const { return A_; }
    const Vec& widths() const { return w_; }
    std::string label() const;

    double lipschitz() const { return lip_; }
    double support_radius() const { return r_supp_; }
    double sup_norm() const { return amp_; }
    double l1_norm() const { return l1_; }
    bool radially_symmetric() const;
    bool is_even() const { return true; }

    double eval(std::span<const double> x) const;
    // A.e. gradient; nullopt on the nonsmooth set.
    std::optional<Vec> grad(std::span<const double> x) const;

    ScalarField scaled(double c) const;

    // |{f >= tau}| for 0 < tau <= sup_norm.
    double distribution_function(double tau) const;

    // Support function of the support set and its bounding box half-widths.
    double support_function(std::span<const double> d) const;
    Vec bounding_half_widths() const;
    // Points whose projections carry kinks of line restrictions.
    std::vector<Vec> special_points() const;

    FieldLine line(std::span<const double> base, std::span<const double> dir) const;
    Chord chord(std::span<const double> base, std::span<const double> dir) const;

    // log of the integral of f^p over R^n.
    double log_lp_power(double p) const;
    // ess sup of <grad f, xi>_sign in closed form.
    double linf_gauge_analytic(std::span<const double> xi, Sign sign) const;

    const RadialTable* table() const { return table_.get(); }

private:
    ScalarField() = default;
    void finalize();
    double profile(double r) const;        // radial profile without amplitude
    double profile_slope(double r) const;  // d/dr of profile

    FieldKind kind_ = FieldKind::Cone;
    int n_ = 1;
    double amp_ = 1.0;
    double R_ = 1.0;
    Mat A_;
    Mat Ainv_;
    double detA_ = 1.0;
    Vec w_;
    std::shared_ptr<const RadialTable> table_;
    double lip_ = 0.0;
    double r_supp_ = 0.0;
    double l1_ = 0.0;
};

ScalarField symmetrize(const ScalarField& f);

// Tabulation of the inverse distribution profile of the tensor tent.
std::shared_ptr<const RadialTable> tabulate_tensor_symmetral(const Vec& w, int knots = 1025);

}  // namespace polarproj
