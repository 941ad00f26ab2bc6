#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "minmetric/vec.hpp"

namespace minmetric {

enum class Containment { interior, boundary, exterior };

/// Boundary location with its outer unit normal.
struct BoundaryPoint {
    Vec point;
    Vec normal;
};

/// Nearest-boundary data at an interior point: distance, unique projection,
/// and the orthogonal split of a direction against the projection normal.
struct CollarDecomposition {
    double delta = 0.0;
    BoundaryPoint projection;
    Vec v_normal;
    Vec v_tangent;
};

/// Thrown when the nearest boundary point is not unique (cut locus, body
/// center, equidistant faces). Never resolved by a silent nearest pick.
class AmbiguousProjectionError : public std::runtime_error {
public:
    explicit AmbiguousProjectionError(const std::string& what) : std::runtime_error(what) {}
};

/// Open planar disk contained in the boundary (2-flat boundary piece).
struct FlatBoundaryPatch {
    Vec origin;
    Vec span_u;
    Vec span_v;
    double radius = kInfinity;
};

/// One coordinate block of a product body.
struct Factor {
    enum class Kind { real_space, ball, interval };
    Kind kind = Kind::real_space;
    int dim = 1;
    double radius = 1.0;  // ball
    double lo = 0.0;      // interval
    double hi = 1.0;
};

/// Options for the in-plane clearance search on kinds without a closed form:
/// angular grid plus golden-section refinement from the best bins.
struct PlanarSearch {
    int grid = 256;
    double angle_tol = 1e-10;
    int starts = 3;
};

/// Convex domain in R^d (d >= 3) with the geometric oracles used by every
/// metric computation: membership, ray exit, boundary distance, nearest
/// boundary projection, and planar clearances. Immutable after construction;
/// all oracles are pure and safe for concurrent use.
///
/// Bodies are stored in a canonical frame plus an optional rigid pose
/// (rotation + translation); oracles conjugate through the pose, which makes
/// every output exactly rigid-equivariant.
class ConvexBody {
public:
    enum class Kind { ball, halfspace, ellipsoid, cylinder, polytope, product };

    static ConvexBody ball(int dim, double radius = 1.0, std::optional<Vec> center = std::nullopt) {
        require_dim(dim);
        if (radius <= 0.0) throw std::invalid_argument("ball: radius must be positive");
        ConvexBody b(Kind::ball, dim);
        b.radius_ = radius;
        if (center) {
            require_dim_eq(center->dim(), dim, "ball center");
            b.translation_ = *center;
            b.has_pose_ = true;
        }
        return b;
    }

    /// Interior is {x : <outward_normal, x> < offset}.
    static ConvexBody halfspace(const Vec& outward_normal, double offset) {
        require_dim(outward_normal.dim());
        ConvexBody b(Kind::halfspace, outward_normal.dim());
        b.faces_.emplace_back(normalized(outward_normal), offset / norm(outward_normal));
        return b;
    }

    static ConvexBody ellipsoid(const Vec& semi_axes, std::optional<Vec> center = std::nullopt) {
        require_dim(semi_axes.dim());
        for (int i = 0; i < semi_axes.dim(); ++i)
            if (semi_axes[i] <= 0.0) throw std::invalid_argument("ellipsoid: semi-axes must be positive");
        ConvexBody b(Kind::ellipsoid, semi_axes.dim());
        b.semi_axes_ = semi_axes;
        if (center) {
            require_dim_eq(center->dim(), semi_axes.dim(), "ellipsoid center");
            b.translation_ = *center;
            b.has_pose_ = true;
        }
        return b;
    }

    /// B^{d-1}(0, radius) x (z_lo, z_hi); the last coordinate is the axis.
    static ConvexBody cylinder(int dim, double radius, double z_lo, double z_hi) {
        require_dim(dim);
        if (radius <= 0.0 || z_hi <= z_lo)
            throw std::invalid_argument("cylinder: need radius > 0 and z_hi > z_lo");
        ConvexBody b(Kind::cylinder, dim);
        b.radius_ = radius;
        b.z_lo_ = z_lo;
        b.z_hi_ = z_hi;
        return b;
    }

    /// Intersection of {<n_i, x> < b_i}; normals are normalized internally.
    static ConvexBody polytope(const std::vector<std::pair<Vec, double>>& faces) {
        if (faces.empty()) throw std::invalid_argument("polytope: no faces");
        int dim = faces.front().first.dim();
        require_dim(dim);
        ConvexBody b(Kind::polytope, dim);
        for (const auto& [n, off] : faces) {
            require_dim_eq(n.dim(), dim, "polytope face normal");
            double len = norm(n);
            if (len == 0.0) throw std::invalid_argument("polytope: zero face normal");
            b.faces_.emplace_back(n / len, off / len);
        }
        b.anchor_ = b.find_polytope_anchor();
        return b;
    }

    static ConvexBody product(const std::vector<Factor>& factors) {
        if (factors.empty()) throw std::invalid_argument("product: no factors");
        int dim = 0;
        for (const auto& f : factors) {
            if (f.dim < 1) throw std::invalid_argument("product: factor dimension must be >= 1");
            if (f.kind == Factor::Kind::ball && f.radius <= 0.0)
                throw std::invalid_argument("product: ball factor radius must be positive");
            if (f.kind == Factor::Kind::interval && (f.dim != 1 || f.hi <= f.lo))
                throw std::invalid_argument("product: interval factor needs dim 1 and hi > lo");
            dim += f.dim;
        }
        require_dim(dim);
        ConvexBody b(Kind::product, dim);
        b.factors_ = factors;
        return b;
    }

    /// Rigid image of this body (pose composition, exact equivariance).
    ConvexBody transformed(const Mat& rotation, const Vec& translation) const {
        require_dim_eq(rotation.dim(), dim_, "transform rotation");
        require_dim_eq(translation.dim(), dim_, "transform translation");
        ConvexBody out = *this;
        if (!has_pose_) {
            out.rotation_ = rotation;
            out.translation_ = translation;
        } else if (rotation_valid_) {
            out.rotation_ = rotation.times(rotation_);
            out.translation_ = rotation.apply(translation_) + translation;
        } else {
            out.rotation_ = rotation;
            out.translation_ = rotation.apply(translation_) + translation;
        }
        out.rotation_valid_ = true;
        out.has_pose_ = true;
        return out;
    }

    Kind kind() const { return kind_; }
    int dim() const { return dim_; }

    // Kind-specific canonical parameters.
    double radius() const { return radius_; }
    const Vec& semi_axes() const { return semi_axes_; }
    double z_lo() const { return z_lo_; }
    double z_hi() const { return z_hi_; }
    const std::vector<std::pair<Vec, double>>& faces() const { return faces_; }
    const std::vector<Factor>& factors() const { return factors_; }

    bool is_bounded() const {
        switch (kind_) {
            case Kind::ball:
            case Kind::ellipsoid:
            case Kind::cylinder:
                return true;
            case Kind::halfspace:
                return false;
            case Kind::polytope:
                return polytope_bounded();
            case Kind::product:
                for (const auto& f : factors_)
                    if (f.kind == Factor::Kind::real_space) return false;
                return true;
        }
        return false;
    }

    /// Whether the domain contains a 2-dimensional affine subspace,
    /// determined analytically per kind.
    bool contains_two_flat() const {
        switch (kind_) {
            case Kind::ball:
            case Kind::ellipsoid:
            case Kind::cylinder:
                return false;
            case Kind::halfspace:
                return true;  // d >= 3: planes parallel to the boundary
            case Kind::polytope: {
                // A 2-plane fits iff the face normals span at most d-2 dims.
                return normal_rank() <= dim_ - 2;
            }
            case Kind::product: {
                int flat = 0;
                for (const auto& f : factors_)
                    if (f.kind == Factor::Kind::real_space) flat += f.dim;
                return flat >= 2;
            }
        }
        return false;
    }

    std::optional<FlatBoundaryPatch> flat_boundary_patch() const {
        std::optional<FlatBoundaryPatch> patch;
        if (kind_ == Kind::cylinder) {
            FlatBoundaryPatch p;
            p.origin = Vec(dim_);
            p.origin[dim_ - 1] = z_lo_;
            p.span_u = Vec::unit(dim_, 0);
            p.span_v = Vec::unit(dim_, 1);
            p.radius = radius_;
            patch = p;
        } else if (kind_ == Kind::halfspace) {
            FlatBoundaryPatch p;
            const Vec& n = faces_[0].first;
            p.origin = faces_[0].second * n;
            int m = 0;
            auto basis = orthonormal_complement(n, &m);
            p.span_u = basis[0];
            p.span_v = basis[1];
            p.radius = kInfinity;
            patch = p;
        }
        if (patch && has_pose_) {
            patch->origin = from_canonical_point(patch->origin);
            patch->span_u = from_canonical_vec(patch->span_u);
            patch->span_v = from_canonical_vec(patch->span_v);
        }
        return patch;
    }

    /// A canonical interior point (pose-mapped).
    Vec interior_anchor() const {
        Vec a(dim_);
        switch (kind_) {
            case Kind::ball:
            case Kind::ellipsoid:
                break;
            case Kind::cylinder:
                a[dim_ - 1] = 0.5 * (z_lo_ + z_hi_);
                break;
            case Kind::halfspace:
                a = (faces_[0].second - 1.0) * faces_[0].first;
                break;
            case Kind::polytope:
                a = anchor_;
                break;
            case Kind::product: {
                int off = 0;
                for (const auto& f : factors_) {
                    if (f.kind == Factor::Kind::interval) a[off] = 0.5 * (f.lo + f.hi);
                    off += f.dim;
                }
                break;
            }
        }
        return from_canonical_point(a);
    }

    /// Axis-aligned bounding box in world coordinates (bounded kinds only).
    void bounding_box(Vec* lo, Vec* hi) const {
        if (!is_bounded()) throw std::logic_error("bounding_box: body is unbounded");
        Vec chw(dim_);  // canonical half-widths around the canonical center
        Vec ccenter(dim_);
        switch (kind_) {
            case Kind::ball:
                chw = Vec(dim_, radius_);
                break;
            case Kind::ellipsoid:
                chw = semi_axes_;
                break;
            case Kind::cylinder:
                chw = Vec(dim_, radius_);
                chw[dim_ - 1] = 0.5 * (z_hi_ - z_lo_);
                ccenter[dim_ - 1] = 0.5 * (z_lo_ + z_hi_);
                break;
            case Kind::polytope: {
                // Exact extent from the vertex set (face-triple intersections).
                auto verts = polytope_vertices();
                if (verts.empty()) throw std::logic_error("bounding_box: no polytope vertices");
                Vec vlo = verts.front(), vhi = verts.front();
                for (const auto& v : verts)
                    for (int i = 0; i < dim_; ++i) {
                        vlo[i] = std::min(vlo[i], v[i]);
                        vhi[i] = std::max(vhi[i], v[i]);
                    }
                ccenter = 0.5 * (vlo + vhi);
                chw = 0.5 * (vhi - vlo);
                break;
            }
            case Kind::product: {
                int off = 0;
                for (const auto& f : factors_) {
                    if (f.kind == Factor::Kind::ball)
                        for (int i = 0; i < f.dim; ++i) chw[off + i] = f.radius;
                    else {  // interval
                        ccenter[off] = 0.5 * (f.lo + f.hi);
                        chw[off] = 0.5 * (f.hi - f.lo);
                    }
                    off += f.dim;
                }
                break;
            }
            case Kind::halfspace:
                break;  // unreachable
        }
        Vec wc = from_canonical_point(ccenter);
        Vec whw(dim_);
        for (int r = 0; r < dim_; ++r) {
            double s = 0.0;
            if (has_pose_ && rotation_valid_)
                for (int c = 0; c < dim_; ++c) s += std::abs(rotation_(r, c)) * chw[c];
            else
                s = chw[r];
            whw[r] = s;
        }
        *lo = wc - whw;
        *hi = wc + whw;
    }

    /// Default collar width used by callers that sample near the boundary.
    double collar_width() const {
        switch (kind_) {
            case Kind::ball:
                return radius_;
            case Kind::halfspace:
                return kInfinity;
            case Kind::ellipsoid: {
                double m = semi_axes_[0];
                for (int i = 1; i < dim_; ++i) m = std::min(m, semi_axes_[i]);
                return m;
            }
            case Kind::cylinder:
                return std::min(radius_, 0.5 * (z_hi_ - z_lo_));
            case Kind::polytope:
                return boundary_distance(interior_anchor());
            case Kind::product: {
                double m = kInfinity;
                for (const auto& f : factors_) {
                    if (f.kind == Factor::Kind::ball) m = std::min(m, f.radius);
                    if (f.kind == Factor::Kind::interval) m = std::min(m, 0.5 * (f.hi - f.lo));
                }
                return m;
            }
        }
        return kInfinity;
    }

    // ------------------------------------------------------------------
    // Oracles
    // ------------------------------------------------------------------

    Containment contains(const Vec& x, double tol = 1e-9) const {
        require_dim_eq(x.dim(), dim_, "contains");
        double s = signed_defect(to_canonical_point(x));
        if (s < -tol) return Containment::interior;
        if (s > tol) return Containment::exterior;
        return Containment::boundary;
    }

    /// Exit parameter t+ of the ray x + t v, t > 0; +infinity iff the ray
    /// stays inside. The boundary crossing is unique by convexity.
    double ray_exit(const Vec& x, const Vec& v) const {
        require_dim_eq(x.dim(), dim_, "ray_exit");
        require_dim_eq(v.dim(), dim_, "ray_exit direction");
        if (norm2(v) == 0.0) throw std::invalid_argument("ray_exit: zero direction");
        if (contains(x) != Containment::interior)
            throw std::invalid_argument("ray_exit: base point not interior");
        return ray_exit_canonical(to_canonical_point(x), to_canonical_vec(v));
    }

    /// Euclidean distance to the boundary (interior points).
    double boundary_distance(const Vec& x) const {
        require_dim_eq(x.dim(), dim_, "boundary_distance");
        Vec xc = to_canonical_point(x);
        if (signed_defect(xc) >= 0.0)
            throw std::invalid_argument("boundary_distance: point not interior");
        return boundary_distance_canonical(xc);
    }

    /// Unique nearest boundary point with outer normal; throws
    /// AmbiguousProjectionError on the cut locus.
    BoundaryPoint nearest_boundary(const Vec& x) const {
        require_dim_eq(x.dim(), dim_, "nearest_boundary");
        Vec xc = to_canonical_point(x);
        if (signed_defect(xc) >= 0.0)
            throw std::invalid_argument("nearest_boundary: point not interior");
        BoundaryPoint bp = nearest_boundary_canonical(xc);
        bp.point = from_canonical_point(bp.point);
        bp.normal = from_canonical_vec(bp.normal);
        return bp;
    }

    CollarDecomposition collar_decompose(const Vec& x, const Vec& v) const {
        require_dim_eq(v.dim(), dim_, "collar_decompose direction");
        CollarDecomposition cd;
        cd.projection = nearest_boundary(x);
        cd.delta = distance(x, cd.projection.point);
        cd.v_normal = dot(v, cd.projection.normal) * cd.projection.normal;
        cd.v_tangent = v - cd.v_normal;
        return cd;
    }

    /// In-plane clearance delta_D(x, span(u1, u2)): infimum over unit
    /// directions in the plane of the ray exit distance; +infinity only if
    /// the whole affine plane x + span(u1, u2) lies inside.
    double planar_distance(const Vec& x, const Vec& u1, const Vec& u2,
                           const PlanarSearch& opts = {}) const {
        require_dim_eq(x.dim(), dim_, "planar_distance");
        require_dim_eq(u1.dim(), dim_, "planar_distance span");
        require_dim_eq(u2.dim(), dim_, "planar_distance span");
        Vec a = u1, b = u2;
        double la = norm(a);
        if (la < 1e-14) throw std::invalid_argument("planar_distance: plane not 2-dimensional");
        a = a / la;
        b -= dot(b, a) * a;
        double lb = norm(b);
        if (lb < 1e-12) throw std::invalid_argument("planar_distance: plane not 2-dimensional");
        b = b / lb;
        if (contains(x) != Containment::interior)
            throw std::invalid_argument("planar_distance: point not interior");
        return planar_distance_canonical(to_canonical_point(x), to_canonical_vec(a),
                                         to_canonical_vec(b), opts);
    }

    // Unchecked canonical-frame entry points for hot loops (plane search,
    // graph edge weights). Callers guarantee interior base points.
    Vec to_canonical_point(const Vec& x) const {
        if (!has_pose_) return x;
        Vec y = x - translation_;
        return rotation_valid_ ? rotation_.apply_transpose(y) : y;
    }
    Vec to_canonical_vec(const Vec& v) const {
        return (has_pose_ && rotation_valid_) ? rotation_.apply_transpose(v) : v;
    }
    Vec from_canonical_point(const Vec& x) const {
        if (!has_pose_) return x;
        return (rotation_valid_ ? rotation_.apply(x) : x) + translation_;
    }
    Vec from_canonical_vec(const Vec& v) const {
        return (has_pose_ && rotation_valid_) ? rotation_.apply(v) : v;
    }

    double ray_exit_canonical(const Vec& x, const Vec& v) const {
        switch (kind_) {
            case Kind::ball:
                return ball_exit(x, v, Vec(dim_), radius_);
            case Kind::halfspace:
                return halfspace_exit(x, v, faces_[0]);
            case Kind::ellipsoid: {
                Vec y(dim_), w(dim_);
                for (int i = 0; i < dim_; ++i) {
                    y[i] = x[i] / semi_axes_[i];
                    w[i] = v[i] / semi_axes_[i];
                }
                if (norm2(w) == 0.0) return kInfinity;
                return ball_exit(y, w, Vec(dim_), 1.0);
            }
            case Kind::cylinder: {
                const int rd = dim_ - 1;
                Vec xr = block(x, 0, rd), vr = block(v, 0, rd);
                double t = kInfinity;
                if (norm2(vr) > 0.0) t = ball_exit(xr, vr, Vec(rd), radius_);
                double vz = v[dim_ - 1];
                if (vz > 0.0) t = std::min(t, (z_hi_ - x[dim_ - 1]) / vz);
                if (vz < 0.0) t = std::min(t, (z_lo_ - x[dim_ - 1]) / vz);
                return t;
            }
            case Kind::polytope: {
                double t = kInfinity;
                for (const auto& f : faces_) t = std::min(t, halfspace_exit(x, v, f));
                return t;
            }
            case Kind::product: {
                double t = kInfinity;
                int off = 0;
                for (const auto& f : factors_) {
                    Vec xb = block(x, off, f.dim), vb = block(v, off, f.dim);
                    switch (f.kind) {
                        case Factor::Kind::real_space:
                            break;
                        case Factor::Kind::ball:
                            if (norm2(vb) > 0.0)
                                t = std::min(t, ball_exit(xb, vb, Vec(f.dim), f.radius));
                            break;
                        case Factor::Kind::interval:
                            if (vb[0] > 0.0) t = std::min(t, (f.hi - xb[0]) / vb[0]);
                            if (vb[0] < 0.0) t = std::min(t, (f.lo - xb[0]) / vb[0]);
                            break;
                    }
                    off += f.dim;
                }
                return t;
            }
        }
        return kInfinity;
    }

    double planar_distance_canonical(const Vec& x, const Vec& a, const Vec& b,
                                     const PlanarSearch& opts) const {
        switch (kind_) {
            case Kind::ball:
                return planar_ball(x, a, b, Vec(dim_), radius_);
            case Kind::halfspace:
                return planar_halfspace(x, a, b, faces_[0]);
            case Kind::polytope: {
                double d = kInfinity;
                for (const auto& f : faces_) d = std::min(d, planar_halfspace(x, a, b, f));
                return d;
            }
            default:
                return planar_generic(x, a, b, opts);
        }
    }

    /// Vertices of a bounded 3-d polytope: feasible intersections of face
    /// triples. Desk-scale face counts keep the cubic sweep cheap.
    std::vector<Vec> polytope_vertices() const {
        if (dim_ != 3)
            throw std::logic_error("polytope_vertices: implemented for d == 3 only");
        std::vector<Vec> verts;
        const int m = static_cast<int>(faces_.size());
        for (int i = 0; i < m; ++i)
            for (int j = i + 1; j < m; ++j)
                for (int k = j + 1; k < m; ++k) {
                    const Vec &a = faces_[i].first, &b = faces_[j].first, &c = faces_[k].first;
                    double det = a[0] * (b[1] * c[2] - b[2] * c[1]) -
                                 a[1] * (b[0] * c[2] - b[2] * c[0]) +
                                 a[2] * (b[0] * c[1] - b[1] * c[0]);
                    if (std::abs(det) < 1e-12) continue;
                    double rhs[3] = {faces_[i].second, faces_[j].second, faces_[k].second};
                    // Cramer solve of the 3x3 system <n,x> = b.
                    Vec x(3);
                    for (int col = 0; col < 3; ++col) {
                        Vec ca = a, cb = b, cc = c;
                        ca[col] = rhs[0];
                        cb[col] = rhs[1];
                        cc[col] = rhs[2];
                        double dcol = ca[0] * (cb[1] * cc[2] - cb[2] * cc[1]) -
                                      ca[1] * (cb[0] * cc[2] - cb[2] * cc[0]) +
                                      ca[2] * (cb[0] * cc[1] - cb[1] * cc[0]);
                        x[col] = dcol / det;
                    }
                    bool feasible = true;
                    for (const auto& f : faces_)
                        feasible &= dot(f.first, x) <= f.second + 1e-9;
                    if (feasible) verts.push_back(x);
                }
        return verts;
    }


private:
    ConvexBody(Kind k, int dim) : kind_(k), dim_(dim), translation_(dim) {}

    static void require_dim(int d) {
        if (d < 3 || d > kMaxDim)
            throw std::invalid_argument("ConvexBody: dimension " + std::to_string(d) +
                                        " outside [3, " + std::to_string(kMaxDim) + "]");
    }
    static void require_dim_eq(int got, int want, const char* what) {
        if (got != want)
            throw std::invalid_argument(std::string(what) + ": dimension mismatch (" +
                                        std::to_string(got) + " vs " + std::to_string(want) + ")");
    }

    // Signed boundary defect: negative inside, ~Euclidean distance near the
    // boundary (exact except for the ellipsoid, which is first-order).
    double signed_defect(const Vec& x) const {
        switch (kind_) {
            case Kind::ball:
                return norm(x) - radius_;
            case Kind::halfspace:
                return dot(faces_[0].first, x) - faces_[0].second;
            case Kind::ellipsoid: {
                double g = -1.0, gn = 0.0;
                for (int i = 0; i < dim_; ++i) {
                    double t = x[i] / semi_axes_[i];
                    g += t * t;
                    double c = x[i] / (semi_axes_[i] * semi_axes_[i]);
                    gn += c * c;
                }
                gn = 2.0 * std::sqrt(gn);
                return gn < 1e-300 ? g : g / gn;
            }
            case Kind::cylinder: {
                double s = norm(block(x, 0, dim_ - 1)) - radius_;
                s = std::max(s, z_lo_ - x[dim_ - 1]);
                s = std::max(s, x[dim_ - 1] - z_hi_);
                return s;
            }
            case Kind::polytope: {
                double s = -kInfinity;
                for (const auto& f : faces_) s = std::max(s, dot(f.first, x) - f.second);
                return s;
            }
            case Kind::product: {
                double s = -kInfinity;
                int off = 0;
                for (const auto& f : factors_) {
                    Vec xb = block(x, off, f.dim);
                    switch (f.kind) {
                        case Factor::Kind::real_space:
                            break;
                        case Factor::Kind::ball:
                            s = std::max(s, norm(xb) - f.radius);
                            break;
                        case Factor::Kind::interval:
                            s = std::max(s, std::max(f.lo - xb[0], xb[0] - f.hi));
                            break;
                    }
                    off += f.dim;
                }
                return s;
            }
        }
        return 0.0;
    }

    double boundary_distance_canonical(const Vec& x) const {
        switch (kind_) {
            case Kind::ball:
                return radius_ - norm(x);
            case Kind::halfspace:
                return faces_[0].second - dot(faces_[0].first, x);
            case Kind::ellipsoid: {
                bool ambiguous = false;
                return ellipsoid_nearest(x, &ambiguous).first;
            }
            case Kind::cylinder: {
                double d = radius_ - norm(block(x, 0, dim_ - 1));
                d = std::min(d, x[dim_ - 1] - z_lo_);
                d = std::min(d, z_hi_ - x[dim_ - 1]);
                return d;
            }
            case Kind::polytope: {
                double d = kInfinity;
                for (const auto& f : faces_) d = std::min(d, f.second - dot(f.first, x));
                return d;
            }
            case Kind::product: {
                double d = kInfinity;
                int off = 0;
                for (const auto& f : factors_) {
                    Vec xb = block(x, off, f.dim);
                    switch (f.kind) {
                        case Factor::Kind::real_space:
                            break;
                        case Factor::Kind::ball:
                            d = std::min(d, f.radius - norm(xb));
                            break;
                        case Factor::Kind::interval:
                            d = std::min(d, std::min(xb[0] - f.lo, f.hi - xb[0]));
                            break;
                    }
                    off += f.dim;
                }
                return d;
            }
        }
        return kInfinity;
    }

    BoundaryPoint nearest_boundary_canonical(const Vec& x) const {
        constexpr double kTieTol = 1e-9;
        switch (kind_) {
            case Kind::ball: {
                double r = norm(x);
                if (r < 1e-12 * radius_)
                    throw AmbiguousProjectionError("ambiguous projection: ball center");
                Vec n = x / r;
                return {radius_ * n, n};
            }
            case Kind::halfspace: {
                const Vec& n = faces_[0].first;
                double d = faces_[0].second - dot(n, x);
                return {x + d * n, n};
            }
            case Kind::ellipsoid: {
                bool ambiguous = false;
                auto [d, q] = ellipsoid_nearest(x, &ambiguous);
                (void)d;
                if (ambiguous)
                    throw AmbiguousProjectionError("ambiguous projection: ellipsoid cut locus");
                Vec n(dim_);
                for (int i = 0; i < dim_; ++i) n[i] = q[i] / (semi_axes_[i] * semi_axes_[i]);
                return {q, normalized(n)};
            }
            case Kind::cylinder: {
                const int rd = dim_ - 1;
                Vec xr = block(x, 0, rd);
                double rr = norm(xr);
                double d_side = radius_ - rr;
                double d_bot = x[dim_ - 1] - z_lo_;
                double d_top = z_hi_ - x[dim_ - 1];
                double d1 = std::min({d_side, d_bot, d_top});
                int ties = (d_side <= d1 + kTieTol) + (d_bot <= d1 + kTieTol) + (d_top <= d1 + kTieTol);
                if (ties > 1)
                    throw AmbiguousProjectionError("ambiguous projection: cylinder cut locus");
                Vec p = x, n(dim_);
                if (d_side == d1) {
                    if (rr < 1e-12 * radius_)
                        throw AmbiguousProjectionError("ambiguous projection: cylinder axis");
                    Vec nr = xr / rr;
                    set_block(p, 0, radius_ * nr);
                    set_block(n, 0, nr);
                } else if (d_bot == d1) {
                    p[dim_ - 1] = z_lo_;
                    n[dim_ - 1] = -1.0;
                } else {
                    p[dim_ - 1] = z_hi_;
                    n[dim_ - 1] = 1.0;
                }
                return {p, n};
            }
            case Kind::polytope: {
                double best = kInfinity, second = kInfinity;
                int bi = -1;
                for (int i = 0; i < static_cast<int>(faces_.size()); ++i) {
                    double d = faces_[i].second - dot(faces_[i].first, x);
                    if (d < best) {
                        second = best;
                        best = d;
                        bi = i;
                    } else if (d < second) {
                        second = d;
                    }
                }
                if (second - best <= kTieTol)
                    throw AmbiguousProjectionError("ambiguous projection: equidistant polytope faces");
                return {x + best * faces_[bi].first, faces_[bi].first};
            }
            case Kind::product: {
                double best = kInfinity, second = kInfinity;
                int bi = -1, boff = 0, off = 0;
                for (int i = 0; i < static_cast<int>(factors_.size()); ++i) {
                    const auto& f = factors_[i];
                    double d = kInfinity;
                    Vec xb = block(x, off, f.dim);
                    if (f.kind == Factor::Kind::ball) d = f.radius - norm(xb);
                    if (f.kind == Factor::Kind::interval) d = std::min(xb[0] - f.lo, f.hi - xb[0]);
                    if (d < best) {
                        second = best;
                        best = d;
                        bi = i;
                        boff = off;
                    } else if (d < second) {
                        second = d;
                    }
                    off += f.dim;
                }
                if (bi < 0 || second - best <= kTieTol)
                    throw AmbiguousProjectionError("ambiguous projection: product factor tie");
                const auto& f = factors_[bi];
                Vec p = x, n(dim_);
                Vec xb = block(x, boff, f.dim);
                if (f.kind == Factor::Kind::ball) {
                    double rr = norm(xb);
                    if (rr < 1e-12 * f.radius)
                        throw AmbiguousProjectionError("ambiguous projection: ball factor center");
                    Vec nr = xb / rr;
                    set_block(p, boff, f.radius * nr);
                    set_block(n, boff, nr);
                } else {  // interval; side tie already excluded above
                    if (xb[0] - f.lo < f.hi - xb[0]) {
                        p[boff] = f.lo;
                        n[boff] = -1.0;
                    } else {
                        p[boff] = f.hi;
                        n[boff] = 1.0;
                    }
                }
                return {p, n};
            }
        }
        throw std::logic_error("nearest_boundary: unreachable");
    }

    // Nearest point on the ellipsoid from an interior point. Solves the
    // stationarity equation q_i = p_i a_i^2 / (a_i^2 + lam) on the bracket
    // right of its poles, then checks the degenerate candidates that arise
    // when p has exact zeros (the mirror-symmetric cut locus).
    std::pair<double, Vec> ellipsoid_nearest(const Vec& p, bool* ambiguous) const {
        const double tiny = 1e-14;
        double a_k = kInfinity;
        for (int i = 0; i < dim_; ++i)
            if (std::abs(p[i]) > tiny) a_k = std::min(a_k, semi_axes_[i]);

        auto level = [&](double lam) {
            double s = 0.0;
            for (int i = 0; i < dim_; ++i) {
                double t = p[i] * semi_axes_[i] / (semi_axes_[i] * semi_axes_[i] + lam);
                s += t * t;
            }
            return s;
        };
        auto point_at = [&](double lam) {
            Vec q(dim_);
            for (int i = 0; i < dim_; ++i)
                q[i] = p[i] * semi_axes_[i] * semi_axes_[i] / (semi_axes_[i] * semi_axes_[i] + lam);
            return q;
        };

        double best_d = kInfinity;
        Vec best_q(dim_);
        bool best_degenerate = false;

        if (a_k < kInfinity) {
            // level() is strictly decreasing on (-a_k^2, 0]; bisect to 1.
            double lo = -a_k * a_k, hi = 0.0;
            if (level(hi) <= 1.0) {  // interior point guaranteed by caller
                double lam = 0.0;
                double span = -lo;
                double l = lo + 1e-300, h = hi;
                for (int it = 0; it < 200; ++it) {
                    lam = 0.5 * (l + h);
                    if (level(lam) > 1.0) l = lam;
                    else h = lam;
                    if (h - l < 1e-16 * span) break;
                }
                Vec q = point_at(0.5 * (l + h));
                // Re-normalize onto the boundary to kill bisection residue.
                double g = 0.0;
                for (int i = 0; i < dim_; ++i) {
                    double t = q[i] / semi_axes_[i];
                    g += t * t;
                }
                if (g > 0.0) {
                    double f = 1.0 / std::sqrt(g);
                    q = q * f;
                }
                best_d = distance(p, q);
                best_q = q;
            }
        }

        // Degenerate candidates: lam = -a_i^2 for axes with p_i == 0.
        for (int i = 0; i < dim_; ++i) {
            if (std::abs(p[i]) > tiny) continue;
            double lam = -semi_axes_[i] * semi_axes_[i];
            double rest = 0.0;
            bool valid = true;
            Vec q(dim_);
            for (int j = 0; j < dim_; ++j) {
                if (j == i) continue;
                double den = semi_axes_[j] * semi_axes_[j] + lam;
                if (std::abs(p[j]) > tiny && std::abs(den) < 1e-14) {
                    valid = false;
                    break;
                }
                q[j] = std::abs(p[j]) > tiny ? p[j] * semi_axes_[j] * semi_axes_[j] / den : 0.0;
                double t = q[j] / semi_axes_[j];
                rest += t * t;
            }
            if (!valid || rest > 1.0) continue;
            q[i] = semi_axes_[i] * std::sqrt(1.0 - rest);
            double d = distance(p, q);
            if (d < best_d - 1e-9) {
                best_d = d;
                best_q = q;
                best_degenerate = q[i] > 1e-9 * semi_axes_[i];  // symmetric pair
            } else if (std::abs(d - best_d) <= 1e-9 && q[i] > 1e-9 * semi_axes_[i]) {
                best_degenerate = true;
            }
        }
        *ambiguous = best_degenerate;
        if (!(best_d < kInfinity))
            throw std::logic_error("ellipsoid_nearest: no candidate found");
        return {best_d, best_q};
    }

    static double ball_exit(const Vec& x, const Vec& v, const Vec& center, double radius) {
        Vec y = x - center;
        double a = norm2(v);
        double b = dot(y, v);
        double c = norm2(y) - radius * radius;  // < 0 inside
        double disc = b * b - a * c;
        return (-b + std::sqrt(disc)) / a;
    }

    static double halfspace_exit(const Vec& x, const Vec& v, const std::pair<Vec, double>& face) {
        double s = dot(face.first, v);
        if (s <= 0.0) return kInfinity;
        return (face.second - dot(face.first, x)) / s;
    }

    /// Exact clearance of a ball slice: the plane cuts a disk of radius
    /// sqrt(R^2 - m^2) whose center sits at in-plane offset l from x.
    static double planar_ball(const Vec& x, const Vec& a, const Vec& b, const Vec& center,
                              double radius) {
        Vec cx = center - x;
        double ca = dot(cx, a), cb = dot(cx, b);
        double l2 = ca * ca + cb * cb;
        double m2 = norm2(cx) - l2;
        double rho2 = radius * radius - m2;
        if (rho2 <= 0.0) return 0.0;  // not reachable for interior x
        return std::sqrt(rho2) - std::sqrt(l2);
    }

    static double planar_halfspace(const Vec& x, const Vec& a, const Vec& b,
                                   const std::pair<Vec, double>& face) {
        double na = dot(face.first, a), nb = dot(face.first, b);
        double pn = std::hypot(na, nb);
        double clear = face.second - dot(face.first, x);
        if (pn < 1e-15) return kInfinity;
        return clear / pn;
    }

    double planar_generic(const Vec& x, const Vec& a, const Vec& b,
                          const PlanarSearch& opts) const {
        auto exit_at = [&](double theta) {
            Vec w = std::cos(theta) * a + std::sin(theta) * b;
            return ray_exit_canonical(x, w);
        };
        const int n = std::max(8, opts.grid);
        const double step = 2.0 * M_PI / n;
        std::vector<double> vals(n);
        double best = kInfinity;
        for (int i = 0; i < n; ++i) {
            vals[i] = exit_at(i * step);
            best = std::min(best, vals[i]);
        }
        if (best == kInfinity) return kInfinity;

        // Golden-section refinement from the best grid bins.
        std::vector<int> order(n);
        for (int i = 0; i < n; ++i) order[i] = i;
        std::sort(order.begin(), order.end(), [&](int i, int j) { return vals[i] < vals[j]; });
        const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
        int starts = std::max(1, opts.starts);
        int used = 0;
        std::vector<int> chosen;
        for (int idx : order) {
            if (used >= starts) break;
            bool adjacent = false;
            for (int c : chosen)
                adjacent |= (std::abs(idx - c) <= 1) || (std::abs(idx - c) >= n - 1);
            if (adjacent) continue;
            chosen.push_back(idx);
            ++used;
            double lo = (idx - 1) * step, hi = (idx + 1) * step;
            double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
            double f1 = exit_at(x1), f2 = exit_at(x2);
            while (hi - lo > opts.angle_tol) {
                if (f1 < f2) {
                    hi = x2;
                    x2 = x1;
                    f2 = f1;
                    x1 = hi - gr * (hi - lo);
                    f1 = exit_at(x1);
                } else {
                    lo = x1;
                    x1 = x2;
                    f1 = f2;
                    x2 = lo + gr * (hi - lo);
                    f2 = exit_at(x2);
                }
            }
            best = std::min({best, f1, f2});
        }
        return best;
    }

    int normal_rank() const {
        // Row-echelon rank of the face-normal matrix.
        std::vector<Vec> rows;
        for (const auto& f : faces_) rows.push_back(f.first);
        int rank = 0;
        for (int col = 0; col < dim_ && rank < static_cast<int>(rows.size()); ++col) {
            int piv = -1;
            double best = 1e-9;
            for (int r = rank; r < static_cast<int>(rows.size()); ++r)
                if (std::abs(rows[r][col]) > best) {
                    best = std::abs(rows[r][col]);
                    piv = r;
                }
            if (piv < 0) continue;
            std::swap(rows[rank], rows[piv]);
            for (int r = 0; r < static_cast<int>(rows.size()); ++r) {
                if (r == rank) continue;
                double f = rows[r][col] / rows[rank][col];
                rows[r] -= f * rows[rank];
            }
            ++rank;
        }
        return rank;
    }

    bool polytope_bounded() const {
        // Bounded iff every direction exits: check via canonical ray casts
        // from the anchor along +-axes and a fixed direction sample.
        for (int i = 0; i < dim_; ++i) {
            Vec e = Vec::unit(dim_, i);
            if (ray_exit_canonical(anchor_, e) == kInfinity) return false;
            if (ray_exit_canonical(anchor_, -e) == kInfinity) return false;
        }
        return normal_rank() == dim_;  // necessary; adequate at desk scale
    }

    Vec find_polytope_anchor() const {
        Vec a(dim_);
        // Move away from violated or tight constraints a few rounds.
        for (int round = 0; round < 256; ++round) {
            double worst = -kInfinity;
            Vec n(dim_);
            for (const auto& f : faces_) {
                double s = dot(f.first, a) - f.second;
                if (s > worst) {
                    worst = s;
                    n = f.first;
                }
            }
            if (worst < -1e-6) return a;
            a -= (worst + 0.25) * n;
        }
        throw std::invalid_argument("polytope: could not locate an interior anchor");
    }

    Kind kind_;
    int dim_;
    double radius_ = 1.0;
    double z_lo_ = 0.0, z_hi_ = 1.0;
    Vec semi_axes_;
    std::vector<std::pair<Vec, double>> faces_;  // unit outward normal, offset
    std::vector<Factor> factors_;
    Vec anchor_;  // polytope interior anchor (canonical)

    bool has_pose_ = false;
    bool rotation_valid_ = false;
    Mat rotation_;
    Vec translation_;
};

}  // namespace minmetric
