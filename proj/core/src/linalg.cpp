#include "polarproj/linalg.hpp"

#include <algorithm>
#include <numbers>
#include <stdexcept>
#include <utility>

namespace polarproj {

double sphere_area(int n) {
    if (n < 1) throw std::domain_error("sphere_area: n must be >= 1");
    return 2.0 * std::pow(std::numbers::pi, 0.5 * n) / std::tgamma(0.5 * n);
}

double ball_volume(int n) {
    if (n < 1) throw std::domain_error("ball_volume: n must be >= 1");
    return std::pow(std::numbers::pi, 0.5 * n) / std::tgamma(0.5 * n + 1.0);
}

Mat::Mat(int n, std::vector<double> rowmajor) : n_(n), a_(std::move(rowmajor)) {
    if (a_.size() != static_cast<std::size_t>(n * n))
        throw std::invalid_argument("Mat: expected n*n entries");
}

Mat Mat::identity(int n) {
    Mat m(n);
    for (int i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

Mat Mat::diagonal(std::span<const double> d) {
    Mat m(static_cast<int>(d.size()));
    for (int i = 0; i < m.n_; ++i) m(i, i) = d[static_cast<std::size_t>(i)];
    return m;
}

Vec Mat::apply(std::span<const double> x) const {
    Vec r(static_cast<std::size_t>(n_), 0.0);
    for (int i = 0; i < n_; ++i) {
        double s = 0.0;
        for (int j = 0; j < n_; ++j) s += (*this)(i, j) * x[static_cast<std::size_t>(j)];
        r[static_cast<std::size_t>(i)] = s;
    }
    return r;
}

Vec Mat::apply_transpose(std::span<const double> x) const {
    Vec r(static_cast<std::size_t>(n_), 0.0);
    for (int i = 0; i < n_; ++i)
        for (int j = 0; j < n_; ++j)
            r[static_cast<std::size_t>(j)] += (*this)(i, j) * x[static_cast<std::size_t>(i)];
    return r;
}

Mat Mat::transpose() const {
    Mat t(n_);
    for (int i = 0; i < n_; ++i)
        for (int j = 0; j < n_; ++j) t(j, i) = (*this)(i, j);
    return t;
}

Mat Mat::operator*(const Mat& b) const {
    Mat c(n_);
    for (int i = 0; i < n_; ++i)
        for (int k = 0; k < n_; ++k)
            for (int j = 0; j < n_; ++j) c(i, j) += (*this)(i, k) * b(k, j);
    return c;
}

double Mat::determinant() const {
    Mat lu = *this;
    double det = 1.0;
    for (int c = 0; c < n_; ++c) {
        int piv = c;
        for (int r = c + 1; r < n_; ++r)
            if (std::abs(lu(r, c)) > std::abs(lu(piv, c))) piv = r;
        if (lu(piv, c) == 0.0) return 0.0;
        if (piv != c) {
            for (int j = 0; j < n_; ++j) std::swap(lu(c, j), lu(piv, j));
            det = -det;
        }
        det *= lu(c, c);
        for (int r = c + 1; r < n_; ++r) {
            const double m = lu(r, c) / lu(c, c);
            for (int j = c; j < n_; ++j) lu(r, j) -= m * lu(c, j);
        }
    }
    return det;
}

Mat Mat::inverse() const {
    Mat a = *this;
    Mat inv = identity(n_);
    for (int c = 0; c < n_; ++c) {
        int piv = c;
        for (int r = c + 1; r < n_; ++r)
            if (std::abs(a(r, c)) > std::abs(a(piv, c))) piv = r;
        if (a(piv, c) == 0.0) throw std::domain_error("Mat::inverse: singular matrix");
        for (int j = 0; j < n_; ++j) {
            std::swap(a(c, j), a(piv, j));
            std::swap(inv(c, j), inv(piv, j));
        }
        const double d = a(c, c);
        for (int j = 0; j < n_; ++j) {
            a(c, j) /= d;
            inv(c, j) /= d;
        }
        for (int r = 0; r < n_; ++r) {
            if (r == c) continue;
            const double m = a(r, c);
            if (m == 0.0) continue;
            for (int j = 0; j < n_; ++j) {
                a(r, j) -= m * a(c, j);
                inv(r, j) -= m * inv(c, j);
            }
        }
    }
    return inv;
}

Vec symmetric_eigenvalues(const Mat& s) {
    const int n = s.dim();
    Mat a = s;
    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) off += a(i, j) * a(i, j);
        if (off < 1e-30) break;
        for (int p = 0; p < n; ++p) {
            for (int q = p + 1; q < n; ++q) {
                if (a(p, q) == 0.0) continue;
                const double theta = (a(q, q) - a(p, p)) / (2.0 * a(p, q));
                const double t = (theta >= 0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double sn = t * c;
                for (int k = 0; k < n; ++k) {
                    const double akp = a(k, p), akq = a(k, q);
                    a(k, p) = c * akp - sn * akq;
                    a(k, q) = sn * akp + c * akq;
                }
                for (int k = 0; k < n; ++k) {
                    const double apk = a(p, k), aqk = a(q, k);
                    a(p, k) = c * apk - sn * aqk;
                    a(q, k) = sn * apk + c * aqk;
                }
            }
        }
    }
    Vec ev(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) ev[static_cast<std::size_t>(i)] = a(i, i);
    std::sort(ev.begin(), ev.end(), std::greater<>());
    return ev;
}

Vec Mat::singular_values() const {
    Vec ev = symmetric_eigenvalues(transpose() * (*this));
    for (double& v : ev) v = std::sqrt(std::max(v, 0.0));
    return ev;
}

std::vector<Vec> orthogonal_complement(std::span<const double> u) {
    const int n = static_cast<int>(u.size());
    std::vector<Vec> basis;
    if (n == 2) {
        basis.push_back(Vec{-u[1], u[0]});
        return basis;
    }
    // Gram-Schmidt against u, seeded with the coordinate axes least aligned with u.
    std::vector<int> order(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = i;
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        return std::abs(u[static_cast<std::size_t>(a)]) < std::abs(u[static_cast<std::size_t>(b)]);
    });
    for (int idx : order) {
        if (static_cast<int>(basis.size()) == n - 1) break;
        Vec v = unit_vector(n, idx);
        v = axpy(-dot(v, u), u, v);
        for (const Vec& b : basis) v = axpy(-dot(v, b), b, v);
        const double nv = norm(v);
        if (nv < 1e-8) continue;
        basis.push_back(scaled(v, 1.0 / nv));
    }
    return basis;
}

}  // namespace polarproj
