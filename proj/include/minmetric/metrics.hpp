#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

#include "minmetric/convex_body.hpp"
#include "minmetric/rng.hpp"

namespace minmetric {

/// Minimal metric of a ball (Beltrami-Cayley form): for the unit ball,
/// sqrt((1-|x|^2)|v|^2 + <x,v>^2) / (1-|x|^2); general balls rescale.
inline double ball_minimal(const ConvexBody& body, const Vec& x, const Vec& v) {
    if (body.kind() != ConvexBody::Kind::ball)
        throw std::invalid_argument("ball_minimal: body is not a ball");
    Vec xc = body.to_canonical_point(x);
    Vec vc = body.to_canonical_vec(v);
    // Canonical ball sits at the origin; reduce to the unit ball.
    double r = body.radius();
    Vec u = xc / r;
    double u2 = norm2(u);
    if (u2 >= 1.0) throw std::invalid_argument("ball_minimal: point not inside the ball");
    double s = 1.0 - u2;
    double q = s * norm2(vc) + dot(u, vc) * dot(u, vc);
    return std::sqrt(q) / (s * r);
}

/// Minimal metric of a half-space: |normal component| / (2 * boundary distance).
inline double halfspace_minimal(const ConvexBody& body, const Vec& x, const Vec& v) {
    if (body.kind() != ConvexBody::Kind::halfspace)
        throw std::invalid_argument("halfspace_minimal: body is not a half-space");
    double d = body.boundary_distance(x);  // throws if not interior
    double vn = std::abs(dot(body.to_canonical_vec(v), body.faces()[0].first));
    return vn / (2.0 * d);
}

/// Hilbert Finsler metric: (|v|/2) (1/|x-a| + 1/|x-b|) over the two exits of
/// the line x + R v, with 1/infinity = 0. Zero vectors evaluate to 0.
inline double hilbert_metric(const ConvexBody& body, const Vec& x, const Vec& v) {
    require_same_dim(x, v, "hilbert_metric");
    if (norm2(v) == 0.0) return 0.0;
    if (body.contains(x) != Containment::interior)
        throw std::invalid_argument("hilbert_metric: point not interior");
    Vec xc = body.to_canonical_point(x);
    Vec vc = body.to_canonical_vec(v);
    double tp = body.ray_exit_canonical(xc, vc);
    double tm = body.ray_exit_canonical(xc, -vc);
    return 0.5 * (1.0 / tp + 1.0 / tm);
}

/// Collar model metric F: |v_N|/(2 delta) + |v_T|/sqrt(delta) inside the
/// collar {delta <= eps}, c |v| outside. The default c = 1/(2 eps) matches F
/// continuously on the collar face for normal vectors.
inline double model_f(const ConvexBody& body, const Vec& x, const Vec& v, double eps,
                      double outside_c = 0.0) {
    if (eps <= 0.0) throw std::invalid_argument("model_f: eps must be positive");
    if (outside_c <= 0.0) outside_c = 1.0 / (2.0 * eps);
    double delta = body.boundary_distance(x);
    if (norm2(v) == 0.0) return 0.0;
    if (delta > eps) return outside_c * norm(v);
    CollarDecomposition cd = body.collar_decompose(x, v);  // may throw ambiguous
    return norm(cd.v_normal) / (2.0 * delta) + norm(cd.v_tangent) / std::sqrt(delta);
}

/// Budget of the plane search behind the upper bound evaluator.
struct PlaneSearchBudget {
    int circle_grid = 512;    // d == 3: uniform grid of directions through v
    int random_planes = 4096; // d > 3: random directions orthogonal to v
    int ascent_rounds = 3;    // d > 3: local refinement rounds
    PlanarSearch inner{32, 1e-6, 1};
};

/// Best planar clearance among 2-planes containing v (sampled search).
/// The sampled maximum is a lower bound for the true value, so the derived
/// metric bound stays a certified upper bound, possibly not tight.
inline double max_planar_clearance(const ConvexBody& body, const Vec& x, const Vec& v,
                                   const PlaneSearchBudget& budget = {}) {
    require_same_dim(x, v, "max_planar_clearance");
    if (norm2(v) == 0.0) throw std::invalid_argument("max_planar_clearance: zero direction");
    Vec xc = body.to_canonical_point(x);
    Vec vn = normalized(body.to_canonical_vec(v));
    int m = 0;
    auto basis = orthonormal_complement(vn, &m);
    const int d = body.dim();

    auto clearance = [&](const Vec& u) {
        return body.planar_distance_canonical(xc, vn, u, budget.inner);
    };

    double best = -kInfinity;
    if (d == 3) {
        // u and -u span the same plane, so half of the circle grid covers
        // every plane of the full grid.
        const int n = std::max(4, budget.circle_grid);
        for (int i = 0; i < n / 2; ++i) {
            double th = 2.0 * M_PI * i / n;
            Vec u = std::cos(th) * basis[0] + std::sin(th) * basis[1];
            best = std::max(best, clearance(u));
        }
        return best;
    }

    // d > 3: seeded random directions plus coordinate ascent.
    Rng rng(0x5eedf00dULL);
    Vec best_u = basis[0];
    for (int i = 0; i < budget.random_planes; ++i) {
        Vec u(d);
        for (int j = 0; j < m; ++j) u += rng.gaussian() * basis[j];
        double len = norm(u);
        if (len < 1e-12) continue;
        u = u / len;
        double c = clearance(u);
        if (c > best) {
            best = c;
            best_u = u;
        }
    }
    double step = 0.2;
    for (int round = 0; round < budget.ascent_rounds; ++round) {
        for (int j = 0; j < m; ++j) {
            for (double s : {step, -step}) {
                Vec u = best_u + s * basis[j];
                u -= dot(u, vn) * vn;
                double len = norm(u);
                if (len < 1e-12) continue;
                u = u / len;
                double c = clearance(u);
                if (c > best) {
                    best = c;
                    best_u = u;
                }
            }
        }
        step *= 0.25;
    }
    return best;
}

/// Certified upper bound for the minimal metric: |v| / (best planar
/// clearance). Zero vectors evaluate to 0; an unbounded clearance gives 0.
inline double minimal_upper(const ConvexBody& body, const Vec& x, const Vec& v,
                            const PlaneSearchBudget& budget = {}) {
    if (norm2(v) == 0.0) return 0.0;
    if (body.contains(x) != Containment::interior)
        throw std::invalid_argument("minimal_upper: point not interior");
    double clr = max_planar_clearance(body, x, v, budget);
    if (clr == kInfinity) return 0.0;
    return norm(v) / clr;
}

/// Certified lower bound for the minimal metric: half the Hilbert metric
/// (half-space comparison through each finite line endpoint).
inline double minimal_lower_directional(const ConvexBody& body, const Vec& x, const Vec& v) {
    return 0.5 * hilbert_metric(body, x, v);
}

enum class MetricTag { exact_minimal, hilbert, model_F, minimal_lower, minimal_upper };

inline MetricTag metric_tag_from_string(const std::string& s) {
    if (s == "exact_minimal") return MetricTag::exact_minimal;
    if (s == "hilbert") return MetricTag::hilbert;
    if (s == "model_F") return MetricTag::model_F;
    if (s == "minimal_lower") return MetricTag::minimal_lower;
    if (s == "minimal_upper") return MetricTag::minimal_upper;
    throw std::invalid_argument("unknown metric tag '" + s + "'");
}

inline std::string to_string(MetricTag t) {
    switch (t) {
        case MetricTag::exact_minimal: return "exact_minimal";
        case MetricTag::hilbert: return "hilbert";
        case MetricTag::model_F: return "model_F";
        case MetricTag::minimal_lower: return "minimal_lower";
        case MetricTag::minimal_upper: return "minimal_upper";
    }
    return "?";
}

struct EvaluatorParams {
    double collar_eps = 0.5;
    double outside_c = 0.0;  // 0 -> 1/(2 eps)
    PlaneSearchBudget plane_budget;
};

/// Tagged pointwise Finsler evaluator over a fixed body. Pure and safe for
/// unsynchronized parallel evaluation.
class MetricEvaluator {
public:
    using Params = EvaluatorParams;

    MetricEvaluator(MetricTag tag, const ConvexBody& body, Params params = Params())
        : tag_(tag), body_(&body), params_(params) {
        if (tag == MetricTag::exact_minimal && body.kind() != ConvexBody::Kind::ball &&
            body.kind() != ConvexBody::Kind::halfspace)
            throw std::invalid_argument(
                "exact_minimal evaluator exists only for ball and half-space");
    }

    MetricTag tag() const { return tag_; }
    const ConvexBody& body() const { return *body_; }
    const Params& params() const { return params_; }

    double operator()(const Vec& x, const Vec& v) const {
        if (norm2(v) == 0.0) return 0.0;
        switch (tag_) {
            case MetricTag::exact_minimal:
                return body_->kind() == ConvexBody::Kind::ball ? ball_minimal(*body_, x, v)
                                                               : halfspace_minimal(*body_, x, v);
            case MetricTag::hilbert:
                return hilbert_metric(*body_, x, v);
            case MetricTag::model_F:
                return model_f(*body_, x, v, params_.collar_eps, params_.outside_c);
            case MetricTag::minimal_lower:
                return minimal_lower_directional(*body_, x, v);
            case MetricTag::minimal_upper:
                return minimal_upper(*body_, x, v, params_.plane_budget);
        }
        return 0.0;
    }

    /// Whether polyline lengths under this evaluator certify upper bounds
    /// for the intrinsic minimal distance.
    bool certifies_upper() const {
        return tag_ == MetricTag::exact_minimal || tag_ == MetricTag::minimal_upper;
    }

    /// Quadrature acceptance tolerance, matched to the evaluator's own
    /// accuracy: the sampled plane search behind minimal_upper carries a
    /// ~1e-4 noise floor; the closed-form evaluators are smooth.
    double integration_tolerance() const {
        return tag_ == MetricTag::minimal_upper ? 1e-6 : 1e-12;
    }

    int integration_panel_budget() const {
        return tag_ == MetricTag::minimal_upper ? 2 : 4096;
    }

private:
    MetricTag tag_;
    const ConvexBody* body_;
    Params params_;
};

}  // namespace minmetric
