#include "polarproj/numerics.hpp"

#include <charconv>
#include <random>

namespace polarproj {

std::string NumericalError::format_point(const Vec& p) {
    std::string out = "(";
    for (std::size_t i = 0; i < p.size(); ++i) {
        char buf[32];
        auto res = std::to_chars(buf, buf + sizeof buf, p[i]);
        out.append(buf, res.ptr);
        if (i + 1 < p.size()) out += ", ";
    }
    return out + ")";
}

void QuadConfig::validate() const {
    if (!(rel_tol > 0.0)) throw std::invalid_argument("QuadConfig: rel_tol must be > 0");
    if (!(abs_tol >= 0.0)) throw std::invalid_argument("QuadConfig: abs_tol must be >= 0");
    if (!(t_split > 0.0)) throw std::invalid_argument("QuadConfig: t_split must be > 0");
    if (max_subdivisions < 1) throw std::invalid_argument("QuadConfig: max_subdivisions must be >= 1");
    if (x_cells_per_axis < 2) throw std::invalid_argument("QuadConfig: x_cells_per_axis must be >= 2");
}

Estimate integrate_1d_adaptive(const std::function<double(double)>& g, double a, double b,
                               const QuadConfig& cfg, std::span<const double> breaks) {
    cfg.validate();
    if (!(a < b)) throw std::domain_error("integrate_1d_adaptive: requires a < b");
    return adaptive_gauss_kronrod(g, a, b, breaks, cfg.rel_tol, cfg.abs_tol,
                                  cfg.max_subdivisions);
}

namespace {

constexpr double kMinLogTau = -690.0;
constexpr double kMaxLogTau = 690.0;

// Exact tail int_{tf}^inf tau^{-b-1} min(tau,1)^p dtau with a = p - b.
double far_tail_kernel(double tf, double a, double b) {
    if (tf >= 1.0) return std::exp(-b * std::log(tf)) / b;
    return (1.0 - std::exp(a * std::log(tf))) / a + 1.0 / b;
}

}  // namespace

LogEstimate singular_t_integral_normalized(const std::function<Val2(double)>& J, double p,
                                           double s, const TailInfo& tails,
                                           const QuadConfig& cfg) {
    cfg.validate();
    const double a = p * (1.0 - s);
    const double b = p * s;
    if (!(a > 0.0)) throw std::domain_error("singular_t_integral: requires p(1-s) > 0");
    if (!(b > 0.0)) throw std::domain_error("singular_t_integral: requires ps > 0");

    auto integrand = [&](double v) -> Val2 {
        const double w = v < 0.0 ? std::exp(a * v) : std::exp(-b * v);
        if (w == 0.0) return Val2{};
        const Val2 j = J(std::exp(v));
        return Val2{w * j.v, w * j.e};
    };

    std::vector<double> vbreaks{0.0, std::log(cfg.t_split)};
    for (double tb : tails.tau_breaks)
        if (tb > 0.0) vbreaks.push_back(std::log(tb));

    const double core_rel = 0.5 * cfg.rel_tol;
    bool converged = true;
    auto core_piece = [&](double v0, double v1) {
        if (!(v0 < v1)) return Estimate{0.0, 0.0, true};
        Estimate e = adaptive_gauss_kronrod(integrand, v0, v1, vbreaks, core_rel,
                                            0.1 * cfg.abs_tol, cfg.max_subdivisions);
        converged = converged && e.converged;
        return e;
    };

    double v_lo = tails.j_zero ? std::log(std::min(1e-2, 0.1 / p)) : std::log(1e-3);
    double v_hi = tails.tau_far ? std::log(*tails.tau_far) : std::log(1e3);
    v_lo = std::min(v_lo, v_hi - 1.0);

    Estimate core = core_piece(v_lo, v_hi);
    double value = core.value;
    double err = core.error_bound;
    auto target = [&]() { return std::max(cfg.rel_tol * std::abs(value), cfg.abs_tol); };

    // Lower tail.
    double lower = 0.0, lower_err = 0.0;
    if (tails.j_zero) {
        const double j0 = *tails.j_zero;
        for (int iter = 0; iter < 40; ++iter) {
            const double tn = std::exp(v_lo);
            const double kern = std::exp(a * v_lo) / a;
            const double jn = J(tn).v;
            lower = j0 * kern;
            lower_err = std::min(std::abs(jn - j0), tails.cx) * kern;
            if (lower_err <= 0.1 * target() || v_lo <= kMinLogTau) break;
            const double shrink =
                std::clamp(std::pow(0.1 * target() / lower_err, 1.0 / (a + 1.0)), 1e-4, 0.5);
            const double v_new = std::max(v_lo + std::log(shrink), kMinLogTau);
            Estimate ext = core_piece(v_new, v_lo);
            value += ext.value;
            err += ext.error_bound;
            v_lo = v_new;
        }
    } else {
        const double goal = 0.1 * target();
        double v_env = goal > 0.0 ? std::log(goal * a / tails.cx) / a : kMinLogTau;
        v_env = std::max(v_env, kMinLogTau);
        if (v_env < v_lo) {
            Estimate ext = core_piece(v_env, v_lo);
            value += ext.value;
            err += ext.error_bound;
            v_lo = v_env;
        }
        lower_err = tails.cx * std::exp(a * v_lo) / a;
    }

    // Upper tail.
    double upper = 0.0, upper_err = 0.0;
    if (tails.tau_far) {
        upper = tails.j_far * far_tail_kernel(*tails.tau_far, a, b);
    } else {
        const double goal = 0.1 * target();
        double v_env = goal > 0.0 ? -std::log(goal * b / tails.cx) / b : kMaxLogTau;
        v_env = std::min(v_env, kMaxLogTau);
        if (v_env > v_hi) {
            Estimate ext = core_piece(v_hi, v_env);
            value += ext.value;
            err += ext.error_bound;
            v_hi = v_env;
        }
        upper_err = tails.cx * far_tail_kernel(std::exp(v_hi), a, b);
    }

    const double total = value + lower + upper;
    const double total_err = err + lower_err + upper_err;
    LogEstimate out;
    if (total > 0.0) {
        out.log_value = std::log(total);
        out.rel_error = total_err / total;
    } else {
        out.log_value = -std::numeric_limits<double>::infinity();
        out.rel_error = total_err > cfg.abs_tol ? std::numeric_limits<double>::infinity() : 0.0;
    }
    out.converged = converged && total_err <= std::max(cfg.rel_tol * total, cfg.abs_tol);
    return out;
}

Estimate singular_t_integral(const std::function<double(double)>& h, double p, double s,
                             double L, double M, double cx, const QuadConfig& cfg) {
    if (!(p * (1.0 - s) > 0.0))
        throw std::domain_error("singular_t_integral: requires p(1-s) > 0");
    if (!(L > 0.0) || !(M > 0.0) || !(cx > 0.0))
        throw std::domain_error("singular_t_integral: envelopes must be positive");
    const double B = 2.0 * M;
    const double tstar = B / L;
    // t = tstar * tau: t^{-ps-1} dt = tstar^{-ps} tau^{-ps-1} dtau.
    const double log_scale = p * std::log(B) - p * s * std::log(tstar);
    QuadConfig local = cfg;
    local.abs_tol = cfg.abs_tol * std::exp(-log_scale);
    local.t_split = cfg.t_split / tstar;
    auto J = [&](double tau) -> Val2 {
        const double env = B * std::min(tau, 1.0);
        const double hv = h(tstar * tau);
        return Val2{hv == 0.0 ? 0.0 : std::exp(std::log(hv) - p * std::log(env)), 0.0};
    };
    TailInfo tails;
    tails.cx = cx;
    LogEstimate le = singular_t_integral_normalized(J, p, s, tails, local);
    Estimate out;
    if (!std::isfinite(le.log_value)) {
        out.value = 0.0;
        out.error_bound = cfg.abs_tol;
        out.converged = le.converged;
        return out;
    }
    out.value = std::exp(le.log_value + log_scale);
    out.error_bound = le.rel_error * out.value;
    out.converged = le.converged;
    return out;
}

namespace {

Estimate nested_cubature(const std::function<double(std::span<const double>)>& g, double R,
                         int n, const QuadConfig& cfg) {
    Vec x(static_cast<std::size_t>(n), 0.0);
    const double width = 2.0 * R;
    bool inner_ok = true;
    std::function<Val2(int)> level = [&](int k) -> Val2 {
        auto inner = [&](double xk) -> Val2 {
            x[static_cast<std::size_t>(k)] = xk;
            if (k == n - 1) {
                const double v = g(x);
                if (!std::isfinite(v)) throw NumericalError("cubature_support: non-finite integrand", x);
                return Val2{v, 0.0};
            }
            return level(k + 1);
        };
        const double abs_k = cfg.abs_tol * std::pow(width, -(n - 1 - k)) * 0.5;
        const double breaks[1] = {0.0};
        Estimate e = adaptive_gauss_kronrod(inner, -R, R, breaks, cfg.rel_tol, abs_k,
                                            cfg.max_subdivisions);
        inner_ok = inner_ok && e.converged;
        return Val2{e.value, e.error_bound};
    };
    auto outer = [&](double x0) -> Val2 {
        x[0] = x0;
        if (n == 1) {
            const double v = g(x);
            if (!std::isfinite(v)) throw NumericalError("cubature_support: non-finite integrand", x);
            return Val2{v, 0.0};
        }
        return level(1);
    };
    const double breaks[1] = {0.0};
    Estimate e = adaptive_gauss_kronrod(outer, -R, R, breaks, cfg.rel_tol, cfg.abs_tol,
                                        cfg.max_subdivisions);
    e.converged = e.converged && inner_ok;
    return e;
}

double halton(std::uint64_t index, int base) {
    double f = 1.0, r = 0.0;
    while (index > 0) {
        f /= base;
        r += f * static_cast<double>(index % static_cast<std::uint64_t>(base));
        index /= static_cast<std::uint64_t>(base);
    }
    return r;
}

Estimate qmc_cubature(const std::function<double(std::span<const double>)>& g, double R, int n,
                      const QuadConfig& cfg) {
    static constexpr int primes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
    if (n > 12) throw std::domain_error("cubature_support: dimension above 12 unsupported");
    constexpr int replicas = 8;
    constexpr std::uint64_t points = 4096;
    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    const double vol = std::pow(2.0 * R, n);
    Vec x(static_cast<std::size_t>(n));
    Vec means;
    for (int r = 0; r < replicas; ++r) {
        Vec shift(static_cast<std::size_t>(n));
        for (double& v : shift) v = unif(rng);
        double sum = 0.0;
        for (std::uint64_t i = 1; i <= points; ++i) {
            for (int d = 0; d < n; ++d) {
                double u = halton(i, primes[d]) + shift[static_cast<std::size_t>(d)];
                u -= std::floor(u);
                x[static_cast<std::size_t>(d)] = -R + 2.0 * R * u;
            }
            const double v = g(x);
            if (!std::isfinite(v)) throw NumericalError("cubature_support: non-finite integrand", x);
            sum += v;
        }
        means.push_back(vol * sum / static_cast<double>(points));
    }
    double mean = 0.0;
    for (double m : means) mean += m;
    mean /= replicas;
    double var = 0.0;
    for (double m : means) var += (m - mean) * (m - mean);
    var /= (replicas - 1);
    return Estimate{mean, 3.0 * std::sqrt(var / replicas), false};
}

}  // namespace

Estimate cubature_support(const std::function<double(std::span<const double>)>& g, double R,
                          int n, const QuadConfig& cfg) {
    cfg.validate();
    if (n < 1) throw std::domain_error("cubature_support: n must be >= 1");
    if (!(R > 0.0)) throw std::domain_error("cubature_support: R must be > 0");
    if (n <= 3) return nested_cubature(g, R, n, cfg);
    return qmc_cubature(g, R, n, cfg);
}

double log_domain_mean_p(std::span<const std::pair<double, double>> samples, double p) {
    if (samples.empty()) throw std::domain_error("log_domain_mean_p: empty sample list");
    if (!(p > 0.0)) throw std::domain_error("log_domain_mean_p: p must be > 0");
    double m = -std::numeric_limits<double>::infinity();
    for (const auto& [l, w] : samples) {
        if (w < 0.0 || !std::isfinite(w)) throw std::domain_error("log_domain_mean_p: weights must be >= 0");
        if (std::isnan(l)) throw NumericalError("log_domain_mean_p: NaN sample", Vec{l});
        if (w > 0.0) m = std::max(m, l);
    }
    if (!std::isfinite(m)) return m;
    double acc = 0.0;
    for (const auto& [l, w] : samples)
        if (w > 0.0) acc += w * std::exp(p * (l - m));
    return m + std::log(acc) / p;
}

}  // namespace polarproj
