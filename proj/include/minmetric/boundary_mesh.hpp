#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <queue>
#include <stdexcept>
#include <vector>

#include "minmetric/convex_body.hpp"

namespace minmetric {

namespace detail {
inline std::pair<int, int> ordered_pair(int a, int b) {
    return a < b ? std::pair<int, int>{a, b} : std::pair<int, int>{b, a};
}
}  // namespace detail

/// Edge graph on boundary vertices with Euclidean edge lengths. Shortest
/// paths on it upper-bound the intrinsic boundary distance and converge
/// under subdivision refinement.
struct BoundaryMesh {
    std::vector<Vec> vertices;               // on the boundary within tolerance
    std::vector<std::pair<int, int>> edges;  // index pairs
    std::vector<double> lengths;             // Euclidean edge lengths

    std::vector<std::vector<std::pair<int, double>>> adjacency;

    void build_adjacency() {
        adjacency.assign(vertices.size(), {});
        for (std::size_t e = 0; e < edges.size(); ++e) {
            adjacency[edges[e].first].emplace_back(edges[e].second, lengths[e]);
            adjacency[edges[e].second].emplace_back(edges[e].first, lengths[e]);
        }
    }

    bool connected() const {
        if (vertices.empty()) return false;
        std::vector<char> seen(vertices.size(), 0);
        std::queue<int> q;
        q.push(0);
        seen[0] = 1;
        std::size_t visited = 1;
        while (!q.empty()) {
            int u = q.front();
            q.pop();
            for (auto [v, w] : adjacency[u])
                if (!seen[v]) {
                    seen[v] = 1;
                    ++visited;
                    q.push(v);
                }
        }
        return visited == vertices.size();
    }

    int nearest_vertex(const Vec& p) const {
        int best = 0;
        double bd = kInfinity;
        for (std::size_t i = 0; i < vertices.size(); ++i) {
            double d = norm2(vertices[i] - p);
            if (d < bd) {
                bd = d;
                best = static_cast<int>(i);
            }
        }
        return best;
    }
};

/// Triangulated boundary mesh for a bounded 3-d body: subdivided octahedron
/// projected onto the boundary along rays from the interior anchor. The
/// octahedron seed keeps the +-axis directions as exact vertices and its
/// edges track the coordinate great circles, which a subdivided icosahedron
/// does not.
inline BoundaryMesh build_boundary_mesh(const ConvexBody& body, int subdivisions = 3) {
    if (body.dim() != 3)
        throw std::invalid_argument("build_boundary_mesh: only 3-d bodies are meshed");
    if (!body.is_bounded())
        throw std::invalid_argument("build_boundary_mesh: body must be bounded");

    // Unit octahedron directions and faces.
    std::vector<Vec> dirs = {{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 1}, {0, 0, -1}};
    std::vector<std::array<int, 3>> faces = {{0, 2, 4}, {2, 1, 4}, {1, 3, 4}, {3, 0, 4},
                                             {2, 0, 5}, {1, 2, 5}, {3, 1, 5}, {0, 3, 5}};
    for (int level = 0; level < subdivisions; ++level) {
        std::map<std::pair<int, int>, int> midpoint;
        auto mid = [&](int a, int b) {
            auto key = detail::ordered_pair(a, b);
            auto it = midpoint.find(key);
            if (it != midpoint.end()) return it->second;
            Vec m = normalized(dirs[a] + dirs[b]);
            dirs.push_back(m);
            int idx = static_cast<int>(dirs.size()) - 1;
            midpoint[key] = idx;
            return idx;
        };
        std::vector<std::array<int, 3>> next;
        next.reserve(faces.size() * 4);
        for (const auto& f : faces) {
            int ab = mid(f[0], f[1]), bc = mid(f[1], f[2]), ca = mid(f[2], f[0]);
            next.push_back({f[0], ab, ca});
            next.push_back({f[1], bc, ab});
            next.push_back({f[2], ca, bc});
            next.push_back({ab, bc, ca});
        }
        faces = std::move(next);
    }

    BoundaryMesh mesh;
    Vec anchor = body.interior_anchor();
    Vec anchor_c = body.to_canonical_point(anchor);
    mesh.vertices.reserve(dirs.size());
    for (const auto& w : dirs) {
        Vec wc = body.to_canonical_vec(w);
        double t = body.ray_exit_canonical(anchor_c, wc);
        mesh.vertices.push_back(anchor + t * w);
    }
    std::map<std::pair<int, int>, char> seen;
    for (const auto& f : faces) {
        for (int e = 0; e < 3; ++e) {
            auto key = detail::ordered_pair(f[e], f[(e + 1) % 3]);
            if (seen.emplace(key, 1).second) {
                mesh.edges.push_back(key);
                mesh.lengths.push_back(distance(mesh.vertices[key.first], mesh.vertices[key.second]));
            }
        }
    }
    mesh.build_adjacency();
    return mesh;
}

/// Intrinsic boundary distance along the mesh: endpoints snap to their
/// nearest vertices, then Dijkstra over the edge graph.
inline double boundary_intrinsic_distance(const BoundaryMesh& mesh, const Vec& xi, const Vec& eta) {
    if (mesh.adjacency.empty())
        throw std::invalid_argument("boundary_intrinsic_distance: mesh has no adjacency");
    if (!mesh.connected())
        throw std::invalid_argument("boundary_intrinsic_distance: mesh is disconnected");
    int s = mesh.nearest_vertex(xi), t = mesh.nearest_vertex(eta);
    if (s == t) return 0.0;
    std::vector<double> dist(mesh.vertices.size(), kInfinity);
    using Item = std::pair<double, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
    dist[s] = 0.0;
    heap.emplace(0.0, s);
    while (!heap.empty()) {
        auto [du, u] = heap.top();
        heap.pop();
        if (du > dist[u]) continue;
        if (u == t) break;
        for (auto [v, w] : mesh.adjacency[u])
            if (du + w < dist[v]) {
                dist[v] = du + w;
                heap.emplace(dist[v], v);
            }
    }
    return dist[t];
}

/// Filling distance 2 log((H(pi(x), pi(y)) + max(h(x), h(y))) / sqrt(h(x) h(y)))
/// with h = sqrt(boundary distance). Outside the unique-projection collar the
/// projection falls back to the nearest mesh vertex; the choice does not
/// affect the large-scale behavior.
inline double filling_distance(const ConvexBody& body, const BoundaryMesh& mesh, const Vec& x,
                               const Vec& y) {
    auto project = [&](const Vec& p) {
        try {
            return body.nearest_boundary(p).point;
        } catch (const AmbiguousProjectionError&) {
            return mesh.vertices[mesh.nearest_vertex(p)];
        }
    };
    double hx = std::sqrt(body.boundary_distance(x));
    double hy = std::sqrt(body.boundary_distance(y));
    double H = boundary_intrinsic_distance(mesh, project(x), project(y));
    return 2.0 * std::log((H + std::max(hx, hy)) / std::sqrt(hx * hy));
}

}  // namespace minmetric
