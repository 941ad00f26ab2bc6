#pragma once

#include <cstdint>

#include "minmetric/vec.hpp"

namespace minmetric {

/// Deterministic 64-bit generator (splitmix64). Used instead of <random>
/// distributions so that seeded runs are byte-identical across platforms.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform in [0, 1).
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Marsaglia polar method; deterministic given the stream.
    double gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u, v, s;
        do {
            u = uniform(-1.0, 1.0);
            v = uniform(-1.0, 1.0);
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        double f = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v * f;
        have_spare_ = true;
        return u * f;
    }

    Vec gaussian_vec(int dim) {
        Vec v(dim);
        for (int i = 0; i < dim; ++i) v[i] = gaussian();
        return v;
    }

    Vec unit_vec(int dim) {
        for (;;) {
            Vec v = gaussian_vec(dim);
            double n = norm(v);
            if (n > 1e-12) return v / n;
        }
    }

    Vec in_box(const Vec& lo, const Vec& hi) {
        Vec v(lo.dim());
        for (int i = 0; i < lo.dim(); ++i) v[i] = uniform(lo[i], hi[i]);
        return v;
    }

    /// Haar-ish random rotation via Gram-Schmidt of a Gaussian matrix,
    /// determinant forced to +1.
    Mat rotation(int dim) {
        Mat q(dim);
        for (;;) {
            bool ok = true;
            std::array<Vec, kMaxDim> cols;
            for (int c = 0; c < dim && ok; ++c) {
                Vec v = gaussian_vec(dim);
                for (int j = 0; j < c; ++j) v -= dot(v, cols[j]) * cols[j];
                double len = norm(v);
                if (len < 1e-9) ok = false;
                else cols[c] = v / len;
            }
            if (!ok) continue;
            for (int c = 0; c < dim; ++c)
                for (int r = 0; r < dim; ++r) q(r, c) = cols[c][r];
            // Flip one column if we landed on a reflection.
            double det = det_sign(q, dim);
            if (det < 0.0)
                for (int r = 0; r < dim; ++r) q(r, 0) = -q(r, 0);
            return q;
        }
    }

private:
    static double det_sign(const Mat& m, int dim) {
        // Gaussian elimination with partial pivoting, sign only.
        double a[kMaxDim][kMaxDim];
        for (int r = 0; r < dim; ++r)
            for (int c = 0; c < dim; ++c) a[r][c] = m(r, c);
        double sign = 1.0;
        for (int col = 0; col < dim; ++col) {
            int piv = col;
            for (int r = col + 1; r < dim; ++r)
                if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
            if (piv != col) {
                for (int c = 0; c < dim; ++c) std::swap(a[piv][c], a[col][c]);
                sign = -sign;
            }
            if (a[col][col] == 0.0) return 0.0;
            if (a[col][col] < 0.0) sign = -sign;
            for (int r = col + 1; r < dim; ++r) {
                double f = a[r][col] / a[col][col];
                for (int c = col; c < dim; ++c) a[r][c] -= f * a[col][c];
            }
        }
        return sign;
    }

    std::uint64_t state_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace minmetric
