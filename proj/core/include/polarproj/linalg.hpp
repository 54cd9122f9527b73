#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

namespace polarproj {

using Vec = std::vector<double>;

inline double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline double norm(std::span<const double> a) { return std::sqrt(dot(a, a)); }

inline Vec scaled(std::span<const double> a, double c) {
    Vec r(a.begin(), a.end());
    for (double& v : r) v *= c;
    return r;
}

inline Vec normalized(std::span<const double> a) { return scaled(a, 1.0 / norm(a)); }

inline Vec axpy(double alpha, std::span<const double> x, std::span<const double> y) {
    Vec r(y.begin(), y.end());
    for (std::size_t i = 0; i < r.size(); ++i) r[i] += alpha * x[i];
    return r;
}

inline Vec unit_vector(int n, int i) {
    Vec e(static_cast<std::size_t>(n), 0.0);
    e[static_cast<std::size_t>(i)] = 1.0;
    return e;
}

// Surface area of S^{n-1} and volume of B^n.
double sphere_area(int n);
double ball_volume(int n);

// Dense n x n matrix, row-major.
class Mat {
public:
    Mat() = default;
    explicit Mat(int n) : n_(n), a_(static_cast<std::size_t>(n * n), 0.0) {}
    Mat(int n, std::vector<double> rowmajor);

    static Mat identity(int n);
    static Mat diagonal(std::span<const double> d);

    int dim() const { return n_; }
    double& operator()(int i, int j) { return a_[static_cast<std::size_t>(i * n_ + j)]; }
    double operator()(int i, int j) const { return a_[static_cast<std::size_t>(i * n_ + j)]; }
    const std::vector<double>& data() const { return a_; }

    Vec apply(std::span<const double> x) const;
    Vec apply_transpose(std::span<const double> x) const;
    Mat transpose() const;
    Mat operator*(const Mat& b) const;

    double determinant() const;
    Mat inverse() const;
    // Singular values, descending.
    Vec singular_values() const;

private:
    int n_ = 0;
    std::vector<double> a_;
};

// Eigenvalues of a symmetric matrix (cyclic Jacobi), descending.
Vec symmetric_eigenvalues(const Mat& s);

// Orthonormal basis of the orthogonal complement of a unit vector.
std::vector<Vec> orthogonal_complement(std::span<const double> unit);

}  // namespace polarproj
