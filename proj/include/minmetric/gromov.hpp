#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

#include "minmetric/distances.hpp"

namespace minmetric {

/// Gromov product (x|y)_o = [d(x,o) + d(y,o) - d(x,y)] / 2. Small negative
/// values (within 1e-6) clip to zero; larger triangle-inequality violations
/// are flagged as errors, never clipped.
inline double gromov_product(double d_xo, double d_yo, double d_xy) {
    if (!(d_xo >= 0.0 && d_yo >= 0.0 && d_xy >= 0.0) || d_xo == kInfinity ||
        d_yo == kInfinity || d_xy == kInfinity)
        throw std::invalid_argument("gromov_product: needs finite nonnegative distances");
    double g = 0.5 * (d_xo + d_yo - d_xy);
    if (g < -5e-7)
        throw std::domain_error("gromov_product: triangle inequality violated beyond tolerance");
    return std::max(0.0, g);
}

/// Four interior points with their six pairwise distance reports, indexed
/// (01, 02, 03, 12, 13, 23).
struct QuadrupleSample {
    std::array<Vec, 4> points;
    std::array<DistanceReport, 6> distances;

    static int pair_index(int i, int j) {
        static const int table[4][4] = {{-1, 0, 1, 2}, {0, -1, 3, 4}, {1, 3, -1, 5}, {2, 4, 5, -1}};
        return table[i][j];
    }

    double mid(int i, int j) const {
        const DistanceReport& r = distances[pair_index(i, j)];
        return 0.5 * (r.lower + r.upper);
    }

    double interval_width() const {
        double w = 0.0;
        for (const auto& r : distances) w = std::max(w, r.upper - r.lower);
        return w;
    }
};

struct HyperbolicityReport {
    double delta_estimate = 0.0;
    QuadrupleSample worst_quadruple;
    std::size_t sample_count = 0;
    std::string distance_method;
    double uncertainty = 0.0;  // max distance-interval width over the samples
};

/// Four-point delta over a batch of quadruples: per quadruple, brute-force
/// the three pair-sum pairings, defect = (largest - middle) / 2; the report
/// carries the maximal defect and its witness.
inline HyperbolicityReport four_point_delta(const std::vector<QuadrupleSample>& samples) {
    if (samples.empty()) throw std::invalid_argument("four_point_delta: no samples");
    HyperbolicityReport rep;
    rep.sample_count = samples.size();
    rep.distance_method = samples.front().distances.front().method;
    for (const auto& q : samples) {
        for (const auto& r : q.distances)
            if (!(r.upper < kInfinity))
                throw std::invalid_argument("four_point_delta: quadruple with unbounded distance");
        double s1 = q.mid(0, 1) + q.mid(2, 3);
        double s2 = q.mid(0, 2) + q.mid(1, 3);
        double s3 = q.mid(0, 3) + q.mid(1, 2);
        double a = std::max({s1, s2, s3});
        double c = std::min({s1, s2, s3});
        double b = s1 + s2 + s3 - a - c;
        double defect = 0.5 * (a - b);
        if (defect > rep.delta_estimate) {
            rep.delta_estimate = defect;
            rep.worst_quadruple = q;
        }
        rep.uncertainty = std::max(rep.uncertainty, q.interval_width());
    }
    return rep;
}

/// Boundary-anchored quasi-geodesic sigma(t) = xi + e^{-2t} (p - xi) sampled
/// on [0, T], with certified constants (2 / aperture, 0).
struct QuasiGeodesic {
    Polyline path;
    double mult_const = 1.0;  // A
    double add_const = 0.0;   // B
    double t_end = 0.0;
    Vec limit_point;          // xi on the boundary
    double aperture = 0.0;    // certified eps
};

/// Builds the exponential-contraction quasi-geodesic toward a boundary point.
/// The aperture eps is certified via the sampled plane search; when the
/// search certifies less than the requested eps, the constants are recomputed
/// with the certified value.
inline QuasiGeodesic build_quasi_geodesic(const ConvexBody& body, const Vec& p, const Vec& xi,
                                          double eps, double T, int n,
                                          const PlaneSearchBudget& budget = {}) {
    require_same_dim(p, xi, "build_quasi_geodesic");
    if (body.contains(p) != Containment::interior)
        throw std::invalid_argument("build_quasi_geodesic: p must be interior");
    if (body.contains(xi, 1e-7) != Containment::boundary)
        throw std::invalid_argument("build_quasi_geodesic: xi must lie on the boundary");
    if (!(T > 0.0) || n < 2) throw std::invalid_argument("build_quasi_geodesic: need T > 0, n >= 2");
    Vec dir = xi - p;
    double len = norm(dir);
    if (len == 0.0) throw std::invalid_argument("build_quasi_geodesic: p equals xi");

    double clearance = max_planar_clearance(body, p, dir, budget);
    double certified = clearance / len;
    if (!(certified > 1e-12))
        throw std::invalid_argument("build_quasi_geodesic: aperture condition failed");
    double eps_used = std::min(eps > 0.0 ? eps : certified, certified);

    std::vector<Vec> pts;
    std::vector<double> prm;
    pts.reserve(n);
    prm.reserve(n);
    for (int i = 0; i < n; ++i) {
        double t = T * i / (n - 1);
        pts.push_back(xi + std::exp(-2.0 * t) * (p - xi));
        prm.push_back(t);
    }
    QuasiGeodesic qg;
    qg.path = Polyline(std::move(pts), std::move(prm));
    qg.aperture = eps_used;
    qg.mult_const = 2.0 / eps_used;
    qg.add_const = 0.0;
    qg.t_end = T;
    qg.limit_point = xi;
    return qg;
}

/// Certification sweep over all sampled parameter pairs: the lower-bound
/// distance must reach |t - s| and the upper-bound length must stay below
/// A |t - s|. Returns the worst signed violations (positive = violated).
struct QuasiGeodesicCheck {
    double lower_violation = 0.0;  // max over pairs of |t-s| - rho_lower
    double upper_violation = 0.0;  // max over pairs of rho_upper - A |t-s|
};

inline QuasiGeodesicCheck certify_quasi_geodesic(const ConvexBody& body, const QuasiGeodesic& qg,
                                                 const MetricEvaluator& upper_eval) {
    const auto& pts = qg.path.points;
    const auto& prm = qg.path.params;
    const std::size_t n = pts.size();
    // Prefix lengths under the upper evaluator give all pair upper bounds.
    std::vector<double> prefix(n, 0.0);
    for (std::size_t i = 0; i + 1 < n; ++i)
        prefix[i + 1] =
            prefix[i] + curve_length(upper_eval, Polyline::segment(pts[i], pts[i + 1]));
    QuasiGeodesicCheck chk;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            double dt = prm[j] - prm[i];
            double lower = minimal_distance_lower(body, pts[i], pts[j]);
            double upper = prefix[j] - prefix[i];
            chk.lower_violation = std::max(chk.lower_violation, dt - lower);
            chk.upper_violation = std::max(chk.upper_violation, upper - qg.mult_const * dt);
        }
    return chk;
}

/// Point on a polyline at a given parameter (linear interpolation).
inline Vec polyline_point_at(const Polyline& line, double t) {
    const auto& prm = line.params;
    if (t <= prm.front()) return line.points.front();
    if (t >= prm.back()) return line.points.back();
    std::size_t i = 1;
    while (prm[i] < t) ++i;
    double s = (t - prm[i - 1]) / (prm[i] - prm[i - 1]);
    return line.points[i - 1] + s * (line.points[i] - line.points[i - 1]);
}

/// Certified lower bound for the slimness constant of a quasi-geodesic
/// triangle: max over sampled points of one side of the min over sampled
/// points of the other two sides of a lower-bound distance. Grid resolution
/// bounds the certification, so denser grids only help.
inline double triangle_slimness(const std::array<Polyline, 3>& sides,
                                const std::function<double(const Vec&, const Vec&)>& lower_distance,
                                int samples_per_side = 64, double endpoint_tol = 1e-6) {
    // Sides must chain into a closed triangle (any orientation per side).
    auto ends_match = [&](const Vec& a, const Vec& b) { return distance(a, b) <= endpoint_tol; };
    for (int s = 0; s < 3; ++s) {
        const Vec& a0 = sides[s].points.front();
        const Vec& a1 = sides[s].points.back();
        bool touches = false;
        for (int o = 0; o < 3 && !touches; ++o) {
            if (o == s) continue;
            for (const Vec* e : {&sides[o].points.front(), &sides[o].points.back()})
                touches |= ends_match(a0, *e) || ends_match(a1, *e);
        }
        if (!touches)
            throw std::invalid_argument("triangle_slimness: sides do not share endpoints");
    }

    std::array<std::vector<Vec>, 3> grid;
    for (int s = 0; s < 3; ++s) {
        double t0 = sides[s].params.front(), t1 = sides[s].params.back();
        for (int i = 0; i < samples_per_side; ++i) {
            double t = t0 + (t1 - t0) * i / (samples_per_side - 1);
            grid[s].push_back(polyline_point_at(sides[s], t));
        }
    }
    double slim = 0.0;
    for (int s = 0; s < 3; ++s) {
        for (const Vec& a : grid[s]) {
            double nearest = kInfinity;
            for (int o = 0; o < 3; ++o) {
                if (o == s) continue;
                for (const Vec& b : grid[o]) nearest = std::min(nearest, lower_distance(a, b));
            }
            slim = std::max(slim, nearest);
        }
    }
    return slim;
}

}  // namespace minmetric
