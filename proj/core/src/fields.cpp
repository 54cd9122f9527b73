#include "polarproj/fields.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "polarproj/numerics.hpp"

namespace polarproj {

std::string to_string(FieldKind k) {
    switch (k) {
        case FieldKind::Cone: return "cone";
        case FieldKind::AnisotropicTent: return "aniso";
        case FieldKind::SmoothBump: return "bump";
        case FieldKind::TensorTent: return "tensor";
        case FieldKind::RadialTable: return "tensor_symmetral";
    }
    return "unknown";
}

std::string to_string(Sign s) {
    switch (s) {
        case Sign::Sym: return "sym";
        case Sign::Plus: return "plus";
        case Sign::Minus: return "minus";
    }
    return "unknown";
}

Sign parse_sign(const std::string& s) {
    if (s == "sym") return Sign::Sym;
    if (s == "plus") return Sign::Plus;
    if (s == "minus") return Sign::Minus;
    throw std::invalid_argument("unknown sign '" + s + "'");
}

namespace {

double bump_profile(double rho) {
    if (rho >= 1.0) return 0.0;
    return std::exp(1.0 - 1.0 / (1.0 - rho * rho));
}

double bump_slope(double rho) {
    if (rho >= 1.0) return 0.0;
    const double q = 1.0 - rho * rho;
    return -2.0 * rho / (q * q) * std::exp(1.0 - 1.0 / q);
}

// 1 - tau * sum_{k<n} L^k / k!  with tau = exp(-L), without cancellation.
double tensor_level_fraction(double tau, int n) {
    if (tau <= 0.0) return 1.0;
    if (tau >= 1.0) return 0.0;
    const double L = -std::log(tau);
    if (L < 1.0) {
        double term = 1.0;
        for (int k = 1; k <= n; ++k) term *= L / k;
        double sum = 0.0;
        for (int k = n; k < n + 40; ++k) {
            sum += term;
            term *= L / (k + 1);
        }
        return tau * sum;
    }
    double term = 1.0, sum = 0.0;
    for (int k = 0; k < n; ++k) {
        sum += term;
        term *= L / (k + 1);
    }
    return 1.0 - tau * sum;
}

double factorial(int n) { return std::tgamma(n + 1.0); }

}  // namespace

double RadialTable::value(double r) const {
    if (r >= r_max) return 0.0;
    if (r <= 0.0) return 1.0;
    // radius is decreasing in the knot index.
    auto it = std::lower_bound(radius.begin(), radius.end(), r, std::greater<>());
    std::size_t k = static_cast<std::size_t>(it - radius.begin());
    if (k == 0) k = 1;
    if (k >= radius.size()) k = radius.size() - 1;
    const double r0 = radius[k - 1], r1 = radius[k];
    const double h = r1 - r0;
    const double u = (r - r0) / h;
    const double h00 = (1 + 2 * u) * (1 - u) * (1 - u), h10 = u * (1 - u) * (1 - u);
    const double h01 = u * u * (3 - 2 * u), h11 = u * u * (u - 1);
    return h00 * tau[k - 1] + h10 * h * dtau_dr[k - 1] + h01 * tau[k] + h11 * h * dtau_dr[k];
}

double RadialTable::derivative(double r) const {
    if (r >= r_max || r < 0.0) return 0.0;
    auto it = std::lower_bound(radius.begin(), radius.end(), r, std::greater<>());
    std::size_t k = static_cast<std::size_t>(it - radius.begin());
    if (k == 0) k = 1;
    if (k >= radius.size()) k = radius.size() - 1;
    const double r0 = radius[k - 1], r1 = radius[k];
    const double h = r1 - r0;
    const double u = (r - r0) / h;
    const double d00 = 6 * u * u - 6 * u, d10 = 3 * u * u - 4 * u + 1;
    const double d01 = -6 * u * u + 6 * u, d11 = 3 * u * u - 2 * u;
    return (d00 * tau[k - 1] + d01 * tau[k]) / h + d10 * dtau_dr[k - 1] + d11 * dtau_dr[k];
}

std::shared_ptr<const RadialTable> tabulate_tensor_symmetral(const Vec& w, int knots) {
    const int n = static_cast<int>(w.size());
    if (n < 1) throw std::domain_error("tabulate_tensor_symmetral: empty widths");
    if (knots < 3) throw std::domain_error("tabulate_tensor_symmetral: need >= 3 knots");
    double prod = 1.0;
    for (double wi : w) prod *= wi;
    const double C = std::pow(2.0, n) * prod;
    const double omega = ball_volume(n);
    auto table = std::make_shared<RadialTable>();
    table->r_max = std::pow(C / omega, 1.0 / n);
    const double end_slope = -std::pow(C / (factorial(n) * omega), 1.0 / n);  // dr/dtau at tau = 1
    for (int k = 0; k < knots; ++k) {
        const double u = static_cast<double>(k) / (knots - 1);
        const double tau = u * u * u;
        double r, dtdr;
        if (k == 0) {
            r = table->r_max;
            dtdr = n == 1 ? -1.0 / w[0] : 0.0;
        } else if (k == knots - 1) {
            r = 0.0;
            dtdr = 1.0 / end_slope;
        } else {
            const double mu = C * tensor_level_fraction(tau, n);
            r = std::pow(mu / omega, 1.0 / n);
            const double L = -std::log(tau);
            const double dmu = -C * std::pow(L, n - 1) / factorial(n - 1);
            const double drdt = r / (n * mu) * dmu;
            dtdr = 1.0 / drdt;
        }
        table->tau.push_back(tau);
        table->radius.push_back(r);
        table->dtau_dr.push_back(dtdr);
        table->lipschitz = std::max(table->lipschitz, std::abs(dtdr));
    }
    return table;
}

ScalarField ScalarField::cone(int n, double R, double amplitude) {
    if (n < 1) throw std::domain_error("cone: n must be >= 1");
    if (!(R > 0.0)) throw std::domain_error("cone: radius must be > 0");
    ScalarField f;
    f.kind_ = FieldKind::Cone;
    f.n_ = n;
    f.R_ = R;
    f.amp_ = amplitude;
    f.finalize();
    return f;
}

ScalarField ScalarField::anisotropic_tent(const Mat& A, double amplitude) {
    if (A.dim() < 1) throw std::domain_error("anisotropic_tent: empty matrix");
    const double det = A.determinant();
    if (det == 0.0 || !std::isfinite(det)) throw std::domain_error("anisotropic_tent: A must be nonsingular");
    ScalarField f;
    f.kind_ = FieldKind::AnisotropicTent;
    f.n_ = A.dim();
    f.A_ = A;
    f.Ainv_ = A.inverse();
    f.detA_ = std::abs(det);
    f.amp_ = amplitude;
    f.finalize();
    return f;
}

ScalarField ScalarField::smooth_bump(int n, double R, double amplitude) {
    if (n < 1) throw std::domain_error("smooth_bump: n must be >= 1");
    if (!(R > 0.0)) throw std::domain_error("smooth_bump: radius must be > 0");
    ScalarField f;
    f.kind_ = FieldKind::SmoothBump;
    f.n_ = n;
    f.R_ = R;
    f.amp_ = amplitude;
    f.finalize();
    return f;
}

ScalarField ScalarField::tensor_tent(const Vec& w, double amplitude) {
    if (w.empty()) throw std::domain_error("tensor_tent: empty widths");
    for (double wi : w)
        if (!(wi > 0.0)) throw std::domain_error("tensor_tent: widths must be > 0");
    ScalarField f;
    f.kind_ = FieldKind::TensorTent;
    f.n_ = static_cast<int>(w.size());
    f.w_ = w;
    f.amp_ = amplitude;
    f.finalize();
    return f;
}

ScalarField ScalarField::tensor_tent_symmetral(const Vec& w, double amplitude) {
    ScalarField f = tensor_tent(w, amplitude);
    f.kind_ = FieldKind::RadialTable;
    f.table_ = tabulate_tensor_symmetral(w);
    f.finalize();
    return f;
}

void ScalarField::finalize() {
    if (!(amp_ > 0.0) || !std::isfinite(amp_)) throw std::domain_error("field amplitude must be > 0");
    const int n = n_;
    const double omega = ball_volume(n);
    QuadConfig fine;
    fine.rel_tol = 1e-13;
    fine.abs_tol = 0.0;
    fine.max_subdivisions = 400;
    switch (kind_) {
        case FieldKind::Cone:
            lip_ = amp_ / R_;
            r_supp_ = R_;
            l1_ = amp_ * omega * std::pow(R_, n) / (n + 1);
            break;
        case FieldKind::AnisotropicTent: {
            const Vec sv = A_.singular_values();
            lip_ = amp_ * sv.front();
            r_supp_ = 1.0 / sv.back();
            l1_ = amp_ * omega / (detA_ * (n + 1));
            break;
        }
        case FieldKind::SmoothBump: {
            auto slope = golden_section_max([](double rho) { return std::abs(bump_slope(rho)); },
                                            0.0, 1.0, 1e-12);
            lip_ = amp_ * slope.second / R_;
            r_supp_ = R_;
            auto g = [n](double rho) { return bump_profile(rho) * std::pow(rho, n - 1); };
            const Estimate e = integrate_1d_adaptive(g, 0.0, 1.0, fine);
            l1_ = amp_ * sphere_area(n) * std::pow(R_, n) * e.value;
            break;
        }
        case FieldKind::TensorTent: {
            double s2 = 0.0, prod = 1.0;
            for (double wi : w_) {
                s2 += 1.0 / (wi * wi);
                prod *= wi;
            }
            lip_ = amp_ * std::sqrt(s2);
            r_supp_ = norm(w_);
            l1_ = amp_ * prod;
            break;
        }
        case FieldKind::RadialTable: {
            lip_ = amp_ * table_->lipschitz;
            r_supp_ = table_->r_max;
            const RadialTable* t = table_.get();
            auto g = [t, n](double r) { return t->value(r) * std::pow(r, n - 1); };
            const double br[3] = {1e-3 * t->r_max, 1e-2 * t->r_max, 0.1 * t->r_max};
            const Estimate e = integrate_1d_adaptive(g, 0.0, t->r_max, fine, br);
            l1_ = amp_ * sphere_area(n) * e.value;
            break;
        }
    }
}

std::string ScalarField::label() const {
    std::ostringstream os;
    os.precision(17);
    os << to_string(kind_) << "(n=" << n_;
    switch (kind_) {
        case FieldKind::Cone:
        case FieldKind::SmoothBump: os << ", R=" << R_; break;
        case FieldKind::AnisotropicTent: {
            os << ", A=[";
            for (std::size_t i = 0; i < A_.data().size(); ++i) os << (i ? "," : "") << A_.data()[i];
            os << "]";
            break;
        }
        case FieldKind::TensorTent:
        case FieldKind::RadialTable: {
            os << ", w=[";
            for (std::size_t i = 0; i < w_.size(); ++i) os << (i ? "," : "") << w_[i];
            os << "]";
            break;
        }
    }
    if (amp_ != 1.0) os << ", amplitude=" << amp_;
    os << ")";
    return os.str();
}

bool ScalarField::radially_symmetric() const {
    switch (kind_) {
        case FieldKind::Cone:
        case FieldKind::SmoothBump:
        case FieldKind::RadialTable: return true;
        case FieldKind::AnisotropicTent: {
            const Vec sv = A_.singular_values();
            if (std::abs(sv.front() - sv.back()) > 1e-14 * sv.front()) return false;
            // A = c Q with Q orthogonal.
            return true;
        }
        case FieldKind::TensorTent: return n_ == 1;
    }
    return false;
}

double ScalarField::profile(double r) const {
    switch (kind_) {
        case FieldKind::Cone: return std::max(0.0, 1.0 - r / R_);
        case FieldKind::SmoothBump: return bump_profile(r / R_);
        case FieldKind::RadialTable: return table_->value(r);
        default: throw std::logic_error("profile: field is not radial");
    }
}

double ScalarField::profile_slope(double r) const {
    switch (kind_) {
        case FieldKind::Cone: return r < R_ ? -1.0 / R_ : 0.0;
        case FieldKind::SmoothBump: return bump_slope(r / R_) / R_;
        case FieldKind::RadialTable: return table_->derivative(r);
        default: throw std::logic_error("profile_slope: field is not radial");
    }
}

double ScalarField::eval(std::span<const double> x) const {
    switch (kind_) {
        case FieldKind::Cone:
        case FieldKind::SmoothBump:
        case FieldKind::RadialTable: return amp_ * profile(norm(x));
        case FieldKind::AnisotropicTent: {
            double q = 0.0;
            for (int i = 0; i < n_; ++i) {
                double yi = 0.0;
                for (int j = 0; j < n_; ++j) yi += A_(i, j) * x[static_cast<std::size_t>(j)];
                q += yi * yi;
            }
            return amp_ * std::max(0.0, 1.0 - std::sqrt(q));
        }
        case FieldKind::TensorTent: {
            double v = amp_;
            for (int i = 0; i < n_; ++i) {
                const double fi = 1.0 - std::abs(x[static_cast<std::size_t>(i)]) / w_[static_cast<std::size_t>(i)];
                if (fi <= 0.0) return 0.0;
                v *= fi;
            }
            return v;
        }
    }
    return 0.0;
}

std::optional<Vec> ScalarField::grad(std::span<const double> x) const {
    const std::size_t n = static_cast<std::size_t>(n_);
    switch (kind_) {
        case FieldKind::Cone:
        case FieldKind::SmoothBump:
        case FieldKind::RadialTable: {
            const double r = norm(x);
            const double edge = kind_ == FieldKind::Cone ? R_ : (kind_ == FieldKind::RadialTable ? table_->r_max : -1.0);
            if (r == 0.0) {
                if (kind_ == FieldKind::SmoothBump) return Vec(n, 0.0);
                return std::nullopt;
            }
            if (r == edge) return std::nullopt;
            const double g = amp_ * profile_slope(r) / r;
            return polarproj::scaled(x, g);
        }
        case FieldKind::AnisotropicTent: {
            const Vec y = A_.apply(x);
            const double q = norm(y);
            if (q == 0.0 || q == 1.0) return std::nullopt;
            if (q > 1.0) return Vec(n, 0.0);
            return polarproj::scaled(A_.apply_transpose(y), -amp_ / q);
        }
        case FieldKind::TensorTent: {
            Vec fac(n);
            for (std::size_t i = 0; i < n; ++i) {
                const double a = std::abs(x[i]);
                if (a > w_[i]) return Vec(n, 0.0);
            }
            for (std::size_t i = 0; i < n; ++i) {
                const double a = std::abs(x[i]);
                if (a == 0.0 || a == w_[i]) return std::nullopt;
                fac[i] = 1.0 - a / w_[i];
            }
            Vec g(n);
            for (std::size_t i = 0; i < n; ++i) {
                double v = -amp_ * (x[i] > 0 ? 1.0 : -1.0) / w_[i];
                for (std::size_t j = 0; j < n; ++j)
                    if (j != i) v *= fac[j];
                g[i] = v;
            }
            return g;
        }
    }
    return std::nullopt;
}

ScalarField ScalarField::scaled(double c) const {
    if (!(c > 0.0)) throw std::domain_error("scaled: factor must be > 0");
    ScalarField f = *this;
    f.amp_ = amp_ * c;
    f.lip_ = lip_ * c;
    f.l1_ = l1_ * c;
    return f;
}

double ScalarField::distribution_function(double tau) const {
    if (!(tau > 0.0) || tau > amp_) throw std::domain_error("distribution_function: tau must lie in (0, sup_norm]");
    const double t = tau / amp_;
    const double omega = ball_volume(n_);
    switch (kind_) {
        case FieldKind::Cone: return omega * std::pow(R_ * (1.0 - t), n_);
        case FieldKind::AnisotropicTent: return omega * std::pow(1.0 - t, n_) / detA_;
        case FieldKind::SmoothBump: {
            const double rho2 = 1.0 - 1.0 / (1.0 - std::log(t));
            return omega * std::pow(R_ * std::sqrt(std::max(rho2, 0.0)), n_);
        }
        case FieldKind::TensorTent: {
            double prod = std::pow(2.0, n_);
            for (double wi : w_) prod *= wi;
            return prod * tensor_level_fraction(t, n_);
        }
        case FieldKind::RadialTable: {
            if (t >= 1.0) return 0.0;
            double lo = 0.0, hi = table_->r_max;
            for (int it = 0; it < 200 && hi - lo > 1e-16 * table_->r_max; ++it) {
                const double mid = 0.5 * (lo + hi);
                if (table_->value(mid) >= t) lo = mid;
                else hi = mid;
            }
            return omega * std::pow(0.5 * (lo + hi), n_);
        }
    }
    return 0.0;
}

double ScalarField::support_function(std::span<const double> d) const {
    switch (kind_) {
        case FieldKind::Cone:
        case FieldKind::SmoothBump: return R_ * norm(d);
        case FieldKind::RadialTable: return table_->r_max * norm(d);
        case FieldKind::AnisotropicTent: return norm(Ainv_.apply_transpose(d));
        case FieldKind::TensorTent: {
            double s = 0.0;
            for (std::size_t i = 0; i < w_.size(); ++i) s += w_[i] * std::abs(d[i]);
            return s;
        }
    }
    return 0.0;
}

Vec ScalarField::bounding_half_widths() const {
    Vec hw(static_cast<std::size_t>(n_));
    for (int i = 0; i < n_; ++i) hw[static_cast<std::size_t>(i)] = support_function(unit_vector(n_, i));
    return hw;
}

std::vector<Vec> ScalarField::special_points() const {
    if (kind_ != FieldKind::TensorTent) return {Vec(static_cast<std::size_t>(n_), 0.0)};
    std::vector<Vec> pts;
    const int total = static_cast<int>(std::pow(3, n_));
    for (int code = 0; code < total; ++code) {
        Vec p(static_cast<std::size_t>(n_));
        int c = code;
        for (int i = 0; i < n_; ++i, c /= 3) p[static_cast<std::size_t>(i)] = (c % 3 - 1) * w_[static_cast<std::size_t>(i)];
        pts.push_back(p);
    }
    return pts;
}

FieldLine ScalarField::line(std::span<const double> base, std::span<const double> dir) const {
    FieldLine L;
    L.kind_ = kind_;
    L.amp_ = amp_;
    L.R_ = R_;
    L.table_ = table_.get();
    const auto quadratic_chord = [&L](double c0, double c1, double c2, double rad) {
        L.c0_ = c0;
        L.c1_ = c1;
        L.c2_ = c2;
        const double disc = c1 * c1 - c2 * (c0 - rad * rad);
        if (disc <= 0.0 || c2 <= 0.0) {
            L.lo = L.hi = 0.0;
            return;
        }
        const double sq = std::sqrt(disc);
        L.lo = (-c1 - sq) / c2;
        L.hi = (-c1 + sq) / c2;
        L.kinks.push_back(-c1 / c2);
    };
    switch (kind_) {
        case FieldKind::Cone:
        case FieldKind::SmoothBump:
        case FieldKind::RadialTable:
            quadratic_chord(dot(base, base), dot(base, dir), dot(dir, dir), r_supp_);
            break;
        case FieldKind::AnisotropicTent: {
            const Vec ab = A_.apply(base), ad = A_.apply(dir);
            quadratic_chord(dot(ab, ab), dot(ab, ad), dot(ad, ad), 1.0);
            break;
        }
        case FieldKind::TensorTent: {
            L.base_.assign(base.begin(), base.end());
            L.dir_.assign(dir.begin(), dir.end());
            L.inv_w_.resize(w_.size());
            double lo = -std::numeric_limits<double>::infinity(), hi = -lo;
            for (std::size_t i = 0; i < w_.size(); ++i) {
                L.inv_w_[i] = 1.0 / w_[i];
                if (dir[i] == 0.0) {
                    if (std::abs(base[i]) >= w_[i]) lo = hi = 0.0;
                    continue;
                }
                double a = (-w_[i] - base[i]) / dir[i], b = (w_[i] - base[i]) / dir[i];
                if (a > b) std::swap(a, b);
                lo = std::max(lo, a);
                hi = std::min(hi, b);
                L.kinks.push_back(-base[i] / dir[i]);
            }
            if (!(lo < hi)) lo = hi = 0.0;
            L.lo = lo;
            L.hi = hi;
            break;
        }
    }
    std::vector<double> inside;
    for (double k : L.kinks)
        if (k > L.lo && k < L.hi) inside.push_back(k);
    std::sort(inside.begin(), inside.end());
    L.kinks = inside;
    return L;
}

Chord ScalarField::chord(std::span<const double> base, std::span<const double> dir) const {
    FieldLine L = line(base, dir);
    return Chord{L.lo, L.hi, L.kinks};
}

double FieldLine::eval(double u) const {
    switch (kind_) {
        case FieldKind::Cone: {
            const double r = std::sqrt(std::max(0.0, c0_ + u * (2.0 * c1_ + c2_ * u)));
            return amp_ * std::max(0.0, 1.0 - r / R_);
        }
        case FieldKind::SmoothBump: {
            const double r2 = std::max(0.0, c0_ + u * (2.0 * c1_ + c2_ * u));
            return amp_ * bump_profile(std::sqrt(r2) / R_);
        }
        case FieldKind::RadialTable: {
            const double r = std::sqrt(std::max(0.0, c0_ + u * (2.0 * c1_ + c2_ * u)));
            return amp_ * table_->value(r);
        }
        case FieldKind::AnisotropicTent: {
            const double q = std::sqrt(std::max(0.0, c0_ + u * (2.0 * c1_ + c2_ * u)));
            return amp_ * std::max(0.0, 1.0 - q);
        }
        case FieldKind::TensorTent: {
            double v = amp_;
            for (std::size_t i = 0; i < base_.size(); ++i) {
                const double fi = 1.0 - std::abs(base_[i] + u * dir_[i]) * inv_w_[i];
                if (fi <= 0.0) return 0.0;
                v *= fi;
            }
            return v;
        }
    }
    return 0.0;
}

double FieldLine::derivative(double u) const {
    switch (kind_) {
        case FieldKind::Cone:
        case FieldKind::SmoothBump:
        case FieldKind::RadialTable:
        case FieldKind::AnisotropicTent: {
            double q2 = c0_ + u * (2.0 * c1_ + c2_ * u);
            if (q2 <= 0.0) {
                u += 1e-12;
                q2 = c0_ + u * (2.0 * c1_ + c2_ * u);
                if (q2 <= 0.0) return 0.0;
            }
            const double q = std::sqrt(q2);
            const double dq = (c1_ + c2_ * u) / q;
            double slope = 0.0;
            if (kind_ == FieldKind::Cone) slope = q < R_ ? -1.0 / R_ : 0.0;
            else if (kind_ == FieldKind::SmoothBump) slope = bump_slope(q / R_) / R_;
            else if (kind_ == FieldKind::RadialTable) slope = table_->derivative(q);
            else slope = q < 1.0 ? -1.0 : 0.0;
            return amp_ * slope * dq;
        }
        case FieldKind::TensorTent: {
            const std::size_t n = base_.size();
            double fac[16];
            double sgn[16];
            for (std::size_t i = 0; i < n; ++i) {
                const double y = base_[i] + u * dir_[i];
                fac[i] = 1.0 - std::abs(y) * inv_w_[i];
                if (fac[i] <= 0.0) return 0.0;
                sgn[i] = y > 0 ? 1.0 : (y < 0 ? -1.0 : 0.0);
            }
            double total = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                double v = -sgn[i] * dir_[i] * inv_w_[i];
                for (std::size_t j = 0; j < n; ++j)
                    if (j != i) v *= fac[j];
                total += v;
            }
            return amp_ * total;
        }
    }
    return 0.0;
}

double FieldLine::diff(double u, double t) const {
    switch (kind_) {
        case FieldKind::Cone:
        case FieldKind::AnisotropicTent:
        case FieldKind::SmoothBump: {
            const double scale = kind_ == FieldKind::AnisotropicTent ? 1.0 : R_;
            const double qa = std::max(0.0, c0_ + u * (2.0 * c1_ + c2_ * u));
            const double v = u + t;
            const double qb = std::max(0.0, c0_ + v * (2.0 * c1_ + c2_ * v));
            const double dq = t * (2.0 * c1_ + c2_ * (2.0 * u + t));  // qb - qa
            const double r2 = scale * scale;
            if (qa >= r2 || qb >= r2) return eval(v) - eval(u);
            if (kind_ == FieldKind::SmoothBump) {
                const double ea = 1.0 - qa / r2, eb = 1.0 - qb / r2;
                const double d = -(dq / r2) / ea / eb;  // log fb - log fa
                if (!(std::abs(d) < 0.5)) return eval(v) - eval(u);
                return amp_ * std::exp(1.0 - 1.0 / ea) * std::expm1(d);
            }
            const double ra = std::sqrt(qa), rb = std::sqrt(qb);
            if (ra + rb <= 0.0) return eval(v) - eval(u);
            return -amp_ * dq / (scale * (ra + rb));
        }
        case FieldKind::TensorTent: {
            const std::size_t n = base_.size();
            double a[16], b[16], d[16];
            for (std::size_t i = 0; i < n; ++i) {
                const double ya = base_[i] + u * dir_[i];
                const double yb = base_[i] + (u + t) * dir_[i];
                a[i] = 1.0 - std::abs(ya) * inv_w_[i];
                b[i] = 1.0 - std::abs(yb) * inv_w_[i];
                if ((ya >= 0) == (yb >= 0)) d[i] = -(ya >= 0 ? 1.0 : -1.0) * t * dir_[i] * inv_w_[i];
                else d[i] = b[i] - a[i];
            }
            bool inside_a = true, inside_b = true;
            for (std::size_t i = 0; i < n; ++i) {
                inside_a = inside_a && a[i] > 0.0;
                inside_b = inside_b && b[i] > 0.0;
            }
            if (!inside_a || !inside_b) return eval(u + t) - eval(u);
            // prod b - prod a = sum_k (prod_{i<k} b_i) d_k (prod_{i>k} a_i)
            double total = 0.0, left = 1.0;
            for (std::size_t k = 0; k < n; ++k) {
                double term = left * d[k];
                for (std::size_t i = k + 1; i < n; ++i) term *= a[i];
                total += term;
                left *= b[k];
            }
            return amp_ * total;
        }
        case FieldKind::RadialTable:
            break;
    }
    return eval(u + t) - eval(u);
}

double ScalarField::log_lp_power(double p) const {
    if (!(p > 0.0)) throw std::domain_error("log_lp_power: p must be > 0");
    const int n = n_;
    const double lamp = p * std::log(amp_);
    const double lbeta = std::lgamma(static_cast<double>(n)) + std::lgamma(p + 1.0) - std::lgamma(p + n + 1.0);
    QuadConfig fine;
    fine.rel_tol = 1e-12;
    fine.abs_tol = 0.0;
    fine.max_subdivisions = 400;
    switch (kind_) {
        case FieldKind::Cone:
            return lamp + std::log(sphere_area(n)) + n * std::log(R_) + lbeta;
        case FieldKind::AnisotropicTent:
            return lamp + std::log(sphere_area(n)) - std::log(detA_) + lbeta;
        case FieldKind::TensorTent: {
            double s = lamp;
            for (double wi : w_) s += std::log(2.0 * wi / (p + 1.0));
            return s;
        }
        case FieldKind::SmoothBump: {
            auto g = [p, n](double rho) {
                if (rho >= 1.0) return 0.0;
                const double q = 1.0 - rho * rho;
                return std::exp(p * (1.0 - 1.0 / q) + (n - 1) * std::log(std::max(rho, 1e-300)));
            };
            const double c = 1.0 / std::sqrt(p);
            const double br[3] = {0.25 * c, c, 4.0 * c};
            const Estimate e = integrate_1d_adaptive(g, 0.0, 1.0, fine, br);
            return lamp + std::log(sphere_area(n)) + n * std::log(R_) + std::log(e.value);
        }
        case FieldKind::RadialTable: {
            const RadialTable* t = table_.get();
            auto g = [t, p, n](double r) {
                const double v = t->value(r);
                if (v <= 0.0) return 0.0;
                return std::exp(p * std::log(v) + (n - 1) * std::log(std::max(r, 1e-300)));
            };
            const double rm = t->r_max;
            const double br[4] = {rm / (4.0 * p), rm / p, 4.0 * rm / p, 0.5 * rm};
            const Estimate e = integrate_1d_adaptive(g, 0.0, rm, fine, br);
            return lamp + std::log(sphere_area(n)) + std::log(e.value);
        }
    }
    return 0.0;
}

double ScalarField::linf_gauge_analytic(std::span<const double> xi, Sign) const {
    switch (kind_) {
        case FieldKind::Cone:
        case FieldKind::SmoothBump:
        case FieldKind::RadialTable: return lip_ * norm(xi);
        case FieldKind::AnisotropicTent: return amp_ * norm(A_.apply(xi));
        case FieldKind::TensorTent: {
            double s = 0.0;
            for (std::size_t i = 0; i < w_.size(); ++i) s += std::abs(xi[i]) / w_[i];
            return amp_ * s;
        }
    }
    return 0.0;
}

ScalarField symmetrize(const ScalarField& f) {
    switch (f.kind()) {
        case FieldKind::Cone:
        case FieldKind::SmoothBump:
        case FieldKind::RadialTable: return f;
        case FieldKind::AnisotropicTent: {
            const int n = f.dim();
            const double R = std::pow(std::abs(f.matrix().determinant()), -1.0 / n);
            return ScalarField::cone(n, R, f.amplitude());
        }
        case FieldKind::TensorTent: return ScalarField::tensor_tent_symmetral(f.widths(), f.amplitude());
    }
    throw std::domain_error("symmetrize: field kind not representable");
}

}  // namespace polarproj
