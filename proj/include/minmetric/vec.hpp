#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <string>

namespace minmetric {

inline constexpr int kMaxDim = 8;
inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Fixed-capacity Euclidean vector in R^d, 3 <= d <= kMaxDim for domains
/// (lower-dimensional vectors appear as product-factor blocks).
class Vec {
public:
    Vec() : n_(0) { data_.fill(0.0); }

    explicit Vec(int dim, double fill = 0.0) : n_(dim) {
        check_dim(dim);
        data_.fill(0.0);
        for (int i = 0; i < n_; ++i) data_[i] = fill;
    }

    Vec(std::initializer_list<double> xs) : n_(static_cast<int>(xs.size())) {
        check_dim(n_);
        data_.fill(0.0);
        int i = 0;
        for (double x : xs) data_[i++] = x;
    }

    static Vec unit(int dim, int axis) {
        Vec v(dim);
        v[axis] = 1.0;
        return v;
    }

    int dim() const { return n_; }

    double& operator[](int i) { return data_[i]; }
    double operator[](int i) const { return data_[i]; }

    const double* begin() const { return data_.data(); }
    const double* end() const { return data_.data() + n_; }

    Vec& operator+=(const Vec& o) {
        for (int i = 0; i < n_; ++i) data_[i] += o.data_[i];
        return *this;
    }
    Vec& operator-=(const Vec& o) {
        for (int i = 0; i < n_; ++i) data_[i] -= o.data_[i];
        return *this;
    }
    Vec& operator*=(double s) {
        for (int i = 0; i < n_; ++i) data_[i] *= s;
        return *this;
    }

    friend Vec operator+(Vec a, const Vec& b) { return a += b; }
    friend Vec operator-(Vec a, const Vec& b) { return a -= b; }
    friend Vec operator*(Vec a, double s) { return a *= s; }
    friend Vec operator*(double s, Vec a) { return a *= s; }
    friend Vec operator/(Vec a, double s) { return a *= (1.0 / s); }
    friend Vec operator-(Vec a) { return a *= -1.0; }

    friend bool operator==(const Vec& a, const Vec& b) {
        if (a.n_ != b.n_) return false;
        return std::equal(a.begin(), a.end(), b.begin());
    }

private:
    static void check_dim(int d) {
        if (d < 0 || d > kMaxDim)
            throw std::invalid_argument("Vec: dimension " + std::to_string(d) +
                                        " outside [0, " + std::to_string(kMaxDim) + "]");
    }

    std::array<double, kMaxDim> data_;
    int n_;
};

inline double dot(const Vec& a, const Vec& b) {
    double s = 0.0;
    for (int i = 0; i < a.dim(); ++i) s += a[i] * b[i];
    return s;
}

inline double norm2(const Vec& a) { return dot(a, a); }
inline double norm(const Vec& a) { return std::sqrt(norm2(a)); }
inline double distance(const Vec& a, const Vec& b) { return norm(a - b); }

inline Vec normalized(const Vec& a) {
    double n = norm(a);
    if (n == 0.0) throw std::invalid_argument("normalized: zero vector");
    return a / n;
}

inline void require_same_dim(const Vec& a, const Vec& b, const char* where) {
    if (a.dim() != b.dim())
        throw std::invalid_argument(std::string(where) + ": dimension mismatch (" +
                                    std::to_string(a.dim()) + " vs " +
                                    std::to_string(b.dim()) + ")");
}

/// Block extraction/insertion used by product bodies.
inline Vec block(const Vec& x, int offset, int len) {
    Vec out(len);
    for (int i = 0; i < len; ++i) out[i] = x[offset + i];
    return out;
}

inline void set_block(Vec& x, int offset, const Vec& b) {
    for (int i = 0; i < b.dim(); ++i) x[offset + i] = b[i];
}

/// Dense square matrix, used for rotations and orthonormal frames.
class Mat {
public:
    Mat() : n_(0) {}
    explicit Mat(int dim) : n_(dim) { data_.fill(0.0); }

    static Mat identity(int dim) {
        Mat m(dim);
        for (int i = 0; i < dim; ++i) m(i, i) = 1.0;
        return m;
    }

    int dim() const { return n_; }

    double& operator()(int r, int c) { return data_[r * kMaxDim + c]; }
    double operator()(int r, int c) const { return data_[r * kMaxDim + c]; }

    Vec apply(const Vec& x) const {
        Vec y(n_);
        for (int r = 0; r < n_; ++r) {
            double s = 0.0;
            for (int c = 0; c < n_; ++c) s += (*this)(r, c) * x[c];
            y[r] = s;
        }
        return y;
    }

    /// y = M^T x; inverse rotation for orthogonal M.
    Vec apply_transpose(const Vec& x) const {
        Vec y(n_);
        for (int c = 0; c < n_; ++c) {
            double s = 0.0;
            for (int r = 0; r < n_; ++r) s += (*this)(r, c) * x[r];
            y[c] = s;
        }
        return y;
    }

    Mat times(const Mat& o) const {
        Mat out(n_);
        for (int r = 0; r < n_; ++r)
            for (int c = 0; c < n_; ++c) {
                double s = 0.0;
                for (int k = 0; k < n_; ++k) s += (*this)(r, k) * o(k, c);
                out(r, c) = s;
            }
        return out;
    }

private:
    std::array<double, kMaxDim * kMaxDim> data_;
    int n_;
};

/// Deterministic orthonormal basis of the hyperplane orthogonal to v.
/// Gram-Schmidt over canonical axes, skipping the axis most aligned with v.
inline std::array<Vec, kMaxDim> orthonormal_complement(const Vec& v, int* count) {
    const int d = v.dim();
    Vec vn = normalized(v);
    int skip = 0;
    double best = -1.0;
    for (int i = 0; i < d; ++i)
        if (std::abs(vn[i]) > best) {
            best = std::abs(vn[i]);
            skip = i;
        }
    std::array<Vec, kMaxDim> basis;
    int m = 0;
    for (int i = 0; i < d; ++i) {
        if (i == skip) continue;
        Vec e = Vec::unit(d, i);
        e -= dot(e, vn) * vn;
        for (int j = 0; j < m; ++j) e -= dot(e, basis[j]) * basis[j];
        double len = norm(e);
        if (len < 1e-12) continue;
        basis[m++] = e / len;
    }
    *count = m;
    return basis;
}

inline std::ostream& operator<<(std::ostream& os, const Vec& v) {
    os << "(";
    for (int i = 0; i < v.dim(); ++i) os << (i ? ", " : "") << v[i];
    return os << ")";
}

}  // namespace minmetric
