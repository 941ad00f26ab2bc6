#pragma once

#include <cmath>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "minmetric/metrics.hpp"

namespace minmetric {

/// Finite sample of a curve: interior points with strictly increasing
/// parameter values.
struct Polyline {
    std::vector<Vec> points;
    std::vector<double> params;

    Polyline() = default;

    Polyline(std::vector<Vec> pts, std::vector<double> prm)
        : points(std::move(pts)), params(std::move(prm)) {
        if (points.size() < 2) throw std::invalid_argument("Polyline: need at least 2 points");
        if (params.size() != points.size())
            throw std::invalid_argument("Polyline: points/params size mismatch");
        for (std::size_t i = 1; i < params.size(); ++i)
            if (!(params[i] > params[i - 1]))
                throw std::invalid_argument("Polyline: params must be strictly increasing");
    }

    static Polyline segment(const Vec& a, const Vec& b) { return Polyline({a, b}, {0.0, 1.0}); }

    void validate_inside(const ConvexBody& body) const {
        for (const auto& p : points)
            if (body.contains(p) != Containment::interior)
                throw std::invalid_argument("Polyline: point not interior to the body");
    }
};

namespace detail {

// Gauss-Legendre nodes/weights of order 8 on [0, 1].
inline const double kGL8Nodes[8] = {
    0.01985507175123188415821957, 0.10166676129318663020422303,
    0.23723379504183550709113047, 0.40828267875217509753026193,
    0.59171732124782490246973807, 0.76276620495816449290886953,
    0.89833323870681336979577697, 0.98014492824876811584178043};
inline const double kGL8Weights[8] = {
    0.05061426814518812957626567, 0.11119051722668723527217800,
    0.15685332293894364366898110, 0.18134189168918099148257522,
    0.18134189168918099148257522, 0.15685332293894364366898110,
    0.11119051722668723527217800, 0.05061426814518812957626567};

inline double gl8(const std::function<double(double)>& f, double lo, double hi) {
    double h = hi - lo, s = 0.0;
    for (int i = 0; i < 8; ++i) s += kGL8Weights[i] * f(lo + h * kGL8Nodes[i]);
    return s * h;
}

inline double gl8_adaptive(const std::function<double(double)>& f, double lo, double hi,
                           double whole, double tol, int depth, int& budget) {
    double mid = 0.5 * (lo + hi);
    double left = gl8(f, lo, mid);
    double right = gl8(f, mid, hi);
    budget -= 2;
    double split = left + right;
    if (depth <= 0 || budget <= 0 ||
        std::abs(whole - split) <= tol * std::max(1.0, std::abs(split)))
        return split;
    return gl8_adaptive(f, lo, mid, left, tol, depth - 1, budget) +
           gl8_adaptive(f, mid, hi, right, tol, depth - 1, budget);
}

}  // namespace detail

/// Length of a polyline under a pointwise Finsler evaluator. Each segment is
/// integrated with order-8 Gauss-Legendre plus bisection refinement wherever
/// whole-vs-split estimates disagree; near-boundary chords concentrate the
/// subdivisions at the singular endpoint.
inline double curve_length(const MetricEvaluator& eval, const Polyline& curve) {
    curve.validate_inside(eval.body());
    const double tol = eval.integration_tolerance();
    const int panels = eval.integration_panel_budget();
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < curve.points.size(); ++i) {
        const Vec& p = curve.points[i];
        Vec dp = curve.points[i + 1] - p;
        if (norm2(dp) == 0.0) continue;
        auto f = [&](double s) { return eval(p + s * dp, dp); };
        double whole = detail::gl8(f, 0.0, 1.0);
        int budget = panels;
        total += detail::gl8_adaptive(f, 0.0, 1.0, whole, tol, 24, budget);
    }
    return total;
}

/// Hilbert (cross-ratio) distance: (1/2) log((|x-b|/|x-a|)(|y-a|/|y-b|))
/// with the endpoints ordered a, x, y, b and ratios of two infinities = 1.
inline double hilbert_distance(const ConvexBody& body, const Vec& x, const Vec& y) {
    require_same_dim(x, y, "hilbert_distance");
    Vec w = y - x;
    double s = norm(w);
    if (s == 0.0) return 0.0;
    if (body.contains(x) != Containment::interior || body.contains(y) != Containment::interior)
        throw std::invalid_argument("hilbert_distance: points must be interior");
    w = w / s;
    Vec xc = body.to_canonical_point(x);
    Vec wc = body.to_canonical_vec(w);
    double tp = body.ray_exit_canonical(xc, wc);   // |x - b|, b past y
    double tm = body.ray_exit_canonical(xc, -wc);  // |x - a|
    double r1 = tp == kInfinity ? 1.0 : tp / (tp - s);
    double r2 = tm == kInfinity ? 1.0 : (tm + s) / tm;
    return 0.5 * std::log(r1 * r2);
}

/// Closed-form Hilbert/Klein distance of the unit ball (centered, unposed
/// coordinates): arcosh((1 - <x,y>) / sqrt((1-|x|^2)(1-|y|^2))).
inline double klein_ball_distance(const Vec& x, const Vec& y) {
    double a = 1.0 - norm2(x), b = 1.0 - norm2(y);
    if (a <= 0.0 || b <= 0.0)
        throw std::invalid_argument("klein_ball_distance: points must lie in the unit ball");
    double c = (1.0 - dot(x, y)) / std::sqrt(a * b);
    return std::acosh(std::max(1.0, c));
}

/// Certified lower bound for the intrinsic minimal distance: best of the
/// single-endpoint log ratio (each finite endpoint of the line through x, y)
/// and half the Hilbert distance.
inline double minimal_distance_lower(const ConvexBody& body, const Vec& x, const Vec& y) {
    require_same_dim(x, y, "minimal_distance_lower");
    Vec w = y - x;
    double s = norm(w);
    if (s == 0.0) return 0.0;
    w = w / s;
    Vec xc = body.to_canonical_point(x);
    Vec wc = body.to_canonical_vec(w);
    double tp = body.ray_exit_canonical(xc, wc);
    double tm = body.ray_exit_canonical(xc, -wc);
    double best = 0.0;
    if (tp < kInfinity) best = std::max(best, 0.5 * std::abs(std::log(tp / (tp - s))));
    if (tm < kInfinity) best = std::max(best, 0.5 * std::abs(std::log((tm + s) / tm)));
    double hil = 0.0;
    {
        double r1 = tp == kInfinity ? 1.0 : tp / (tp - s);
        double r2 = tm == kInfinity ? 1.0 : (tm + s) / tm;
        hil = 0.5 * std::log(r1 * r2);
    }
    return std::max(best, 0.5 * hil);
}

/// Two-sided intrinsic distance estimate with provenance.
struct DistanceReport {
    double lower = 0.0;
    double upper = kInfinity;
    std::string method;
    std::optional<Polyline> witness;

    void check() const {
        if (!(lower <= upper + 1e-9))
            throw std::logic_error("DistanceReport: lower exceeds upper");
    }
};

}  // namespace minmetric
