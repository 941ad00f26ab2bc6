#pragma once

#include <algorithm>
#include <cstdint>
#include <queue>
#include <vector>

#include "minmetric/distances.hpp"
#include "minmetric/parallel.hpp"

namespace minmetric {

struct RoadmapConfig {
    int budget = 20000;       // node count
    int k_nearest = 12;       // edges per arriving node
    double collar_eps = 0.5;  // outermost collar shell depth
    int collar_levels = 10;   // shells at collar_eps * 2^{-k}
    std::uint64_t seed = 1;
};

/// Sample-graph machinery for intrinsic-distance upper bounds. Nodes stream
/// deterministically from the seed (uniform interior rejection samples
/// interleaved with boundary-normal ladders at geometric depth levels), and
/// node i connects to its k nearest predecessors, so a doubled budget yields
/// a supergraph: shortest paths never get longer under refinement.
class Roadmap {
public:
    Roadmap(const ConvexBody& body, const MetricEvaluator& eval, RoadmapConfig cfg,
            const Vec* box_lo = nullptr, const Vec* box_hi = nullptr)
        : body_(&body), eval_(eval), cfg_(cfg) {
        sample_nodes(box_lo, box_hi);
        connect_nodes();
    }

    int node_count() const { return static_cast<int>(nodes_.size()); }
    const std::vector<Vec>& nodes() const { return nodes_; }

    DistanceReport distance(const Vec& x, const Vec& y) const {
        DistanceReport rep;
        rep.lower = minimal_distance_lower(*body_, x, y);
        rep.method = "graph(" + to_string(eval_.tag()) +
                     ", n=" + std::to_string(nodes_.size()) + ")";

        const int n = node_count();
        const int sx = n, sy = n + 1;
        // Query nodes attach to their k nearest within every power-of-two
        // prefix of the stream (prefix sets nest across budget doublings),
        // plus the direct segment between the query points.
        std::vector<std::vector<std::pair<int, double>>> extra(2);
        for (int q = 0; q < 2; ++q) {
            const Vec& p = q == 0 ? x : y;
            std::vector<int> picks;
            for (int len = 1; len <= n; len *= 2) {
                auto knn = nearest_in_prefix(p, len);
                picks.insert(picks.end(), knn.begin(), knn.end());
                if (2 * len > n) break;
            }
            std::sort(picks.begin(), picks.end());
            picks.erase(std::unique(picks.begin(), picks.end()), picks.end());
            auto weights = parallel_map<double>(picks.size(), [&](std::size_t i) {
                return curve_length(eval_, Polyline::segment(p, nodes_[picks[i]]));
            });
            for (std::size_t i = 0; i < picks.size(); ++i)
                extra[q].emplace_back(picks[i], weights[i]);
        }
        double direct = curve_length(eval_, Polyline::segment(x, y));

        // Dijkstra over the roadmap plus the two query nodes.
        std::vector<double> dist(n + 2, kInfinity);
        std::vector<int> prev(n + 2, -1);
        using Item = std::pair<double, int>;
        std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
        dist[sx] = 0.0;
        heap.emplace(0.0, sx);
        auto relax = [&](int u, int v, double w) {
            if (dist[u] + w < dist[v]) {
                dist[v] = dist[u] + w;
                prev[v] = u;
                heap.emplace(dist[v], v);
            }
        };
        while (!heap.empty()) {
            auto [du, u] = heap.top();
            heap.pop();
            if (du > dist[u]) continue;
            if (u == sy) break;
            if (u == sx) {
                for (auto [j, w] : extra[0]) relax(u, j, w);
                relax(u, sy, direct);
            } else if (u < n) {
                for (auto [j, w] : adjacency_[u]) relax(u, j, w);
                for (int q = 0; q < 2; ++q)
                    for (auto [j, w] : extra[q])
                        if (j == u) relax(u, q == 0 ? sx : sy, w);
            }
            // sy has no outgoing relaxations to do.
        }
        rep.upper = dist[sy];

        if (rep.upper < kInfinity) {
            std::vector<Vec> path;
            for (int v = sy; v != -1; v = prev[v])
                path.push_back(v == sx ? x : (v == sy ? y : nodes_[v]));
            std::reverse(path.begin(), path.end());
            if (path.size() >= 2) {
                std::vector<double> prm(path.size());
                for (std::size_t i = 0; i < prm.size(); ++i) prm[i] = static_cast<double>(i);
                rep.witness = Polyline(std::move(path), std::move(prm));
            }
        }
        rep.check();
        return rep;
    }

private:
    void sample_nodes(const Vec* box_lo, const Vec* box_hi) {
        const int d = body_->dim();
        Vec lo(d), hi(d);
        if (box_lo && box_hi) {
            lo = *box_lo;
            hi = *box_hi;
        } else if (body_->is_bounded()) {
            body_->bounding_box(&lo, &hi);
        } else {
            throw std::invalid_argument(
                "Roadmap: unbounded body needs an explicit sampling box");
        }
        Vec anchor = body_->interior_anchor();
        Rng rng(cfg_.seed);
        nodes_.reserve(cfg_.budget);

        auto interior_sample = [&]() {
            for (int tries = 0; tries < 10000; ++tries) {
                Vec p = rng.in_box(lo, hi);
                if (body_->contains(p) == Containment::interior) return p;
            }
            throw std::runtime_error("Roadmap: interior rejection sampling failed");
        };

        const int K = std::max(1, cfg_.collar_levels);
        while (static_cast<int>(nodes_.size()) < cfg_.budget) {
            for (int i = 0; i < K && static_cast<int>(nodes_.size()) < cfg_.budget; ++i)
                nodes_.push_back(interior_sample());
            if (static_cast<int>(nodes_.size()) >= cfg_.budget) break;
            // One boundary spoke: geometric depth ladder along the normal.
            Vec w = rng.unit_vec(d);
            double t = body_->ray_exit_canonical(body_->to_canonical_point(anchor),
                                                 body_->to_canonical_vec(w));
            if (t == kInfinity) continue;
            try {
                BoundaryPoint bp = body_->nearest_boundary(anchor + (0.999 * t) * w);
                for (int k = 1; k <= K && static_cast<int>(nodes_.size()) < cfg_.budget; ++k) {
                    double depth = cfg_.collar_eps * std::pow(2.0, -k);
                    Vec p = bp.point - depth * bp.normal;
                    if (body_->contains(p) == Containment::interior) nodes_.push_back(p);
                }
            } catch (const AmbiguousProjectionError&) {
                continue;  // spoke hit a cut locus; skip it
            }
        }
    }

    void connect_nodes() {
        const int n = node_count();
        const int k = cfg_.k_nearest;
        std::vector<std::vector<int>> picks(n);
        parallel_for(n, [&](std::size_t i) {
            // k nearest among predecessors (equivalent to incremental insertion).
            std::vector<std::pair<double, int>> heap;  // max-heap by distance
            for (int j = 0; j < static_cast<int>(i); ++j) {
                double d2 = norm2(nodes_[i] - nodes_[j]);
                if (static_cast<int>(heap.size()) < k) {
                    heap.emplace_back(d2, j);
                    std::push_heap(heap.begin(), heap.end());
                } else if (d2 < heap.front().first) {
                    std::pop_heap(heap.begin(), heap.end());
                    heap.back() = {d2, j};
                    std::push_heap(heap.begin(), heap.end());
                }
            }
            picks[i].reserve(heap.size());
            for (auto& [d2, j] : heap) picks[i].push_back(j);
        });

        struct Edge {
            int a, b;
            double w;
        };
        std::vector<Edge> edges;
        for (int i = 0; i < n; ++i)
            for (int j : picks[i]) edges.push_back({i, j, 0.0});
        parallel_for(edges.size(), [&](std::size_t e) {
            edges[e].w = curve_length(eval_, Polyline::segment(nodes_[edges[e].a], nodes_[edges[e].b]));
        });
        adjacency_.assign(n, {});
        for (const auto& e : edges) {
            adjacency_[e.a].emplace_back(e.b, e.w);
            adjacency_[e.b].emplace_back(e.a, e.w);
        }
    }

    std::vector<int> nearest_in_prefix(const Vec& p, int len) const {
        const int k = cfg_.k_nearest;
        std::vector<std::pair<double, int>> heap;
        for (int j = 0; j < std::min(len, node_count()); ++j) {
            double d2 = norm2(p - nodes_[j]);
            if (static_cast<int>(heap.size()) < k) {
                heap.emplace_back(d2, j);
                std::push_heap(heap.begin(), heap.end());
            } else if (d2 < heap.front().first) {
                std::pop_heap(heap.begin(), heap.end());
                heap.back() = {d2, j};
                std::push_heap(heap.begin(), heap.end());
            }
        }
        std::vector<int> out;
        out.reserve(heap.size());
        for (auto& [d2, j] : heap) out.push_back(j);
        return out;
    }

    const ConvexBody* body_;
    MetricEvaluator eval_;
    RoadmapConfig cfg_;
    std::vector<Vec> nodes_;
    std::vector<std::vector<std::pair<int, double>>> adjacency_;
};

/// One-shot build-and-query convenience wrapper.
inline DistanceReport geodesic_graph_distance(const MetricEvaluator& eval, const ConvexBody& body,
                                              const Vec& x, const Vec& y,
                                              RoadmapConfig cfg = {}) {
    if (body.contains(x) != Containment::interior || body.contains(y) != Containment::interior)
        throw std::invalid_argument("geodesic_graph_distance: query points must be interior");
    if (distance(x, y) == 0.0) {
        DistanceReport rep;
        rep.lower = rep.upper = 0.0;
        rep.method = "graph(coincident)";
        return rep;
    }
    Roadmap roadmap(body, eval, cfg);
    return roadmap.distance(x, y);
}

}  // namespace minmetric
