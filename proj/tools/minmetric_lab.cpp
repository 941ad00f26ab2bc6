// Command-line runner for the metric-geometry lab: pointwise metric
// evaluation, distance queries, four-point hyperbolicity scans, and the
// named reproduction scenarios.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "minmetric/body_format.hpp"
#include "minmetric/report.hpp"
#include "minmetric/roadmap.hpp"
#include "minmetric/scenarios.hpp"

using namespace minmetric;

namespace {

constexpr int kExitAssertionFailure = 1;
constexpr int kExitParseFailure = 2;

Vec parse_point(const std::string& text) {
    std::istringstream ss(text);
    std::vector<double> xs;
    double v;
    while (ss >> v) xs.push_back(v);
    if (!ss.eof()) throw BodyParseError("bad coordinate list '" + text + "'");
    Vec out(static_cast<int>(xs.size()));
    for (std::size_t i = 0; i < xs.size(); ++i) out[static_cast<int>(i)] = xs[i];
    return out;
}

int cmd_eval_metric(const std::string& body_path, const std::string& tag_str,
                    const std::string& x_str, const std::string& v_str, double collar_eps,
                    int plane_samples) {
    ConvexBody body = load_body_file(body_path);
    MetricEvaluator::Params params;
    params.collar_eps = collar_eps;
    params.plane_budget.circle_grid = plane_samples;
    MetricEvaluator eval(metric_tag_from_string(tag_str), body, params);
    double value = eval(parse_point(x_str), parse_point(v_str));
    std::printf("%s\n", format_double(value).c_str());
    return 0;
}

int cmd_distance(const std::string& body_path, const std::string& method, const std::string& x_str,
                 const std::string& y_str, const std::string& eval_tag, int budget,
                 int plane_samples, std::uint64_t seed, const std::string& out_file) {
    ConvexBody body = load_body_file(body_path);
    Vec x = parse_point(x_str), y = parse_point(y_str);
    auto t0 = std::chrono::steady_clock::now();
    DistanceReport rep;
    if (method == "hilbert") {
        rep.lower = rep.upper = hilbert_distance(body, x, y);
        rep.method = "hilbert";
    } else if (method == "lower") {
        rep.lower = minimal_distance_lower(body, x, y);
        rep.upper = kInfinity;
        rep.method = "lower";
    } else if (method == "graph") {
        RoadmapConfig rc;
        rc.budget = budget;
        rc.seed = seed;
        MetricEvaluator::Params params;
        params.plane_budget.circle_grid = plane_samples;
        params.plane_budget.inner = PlanarSearch{12, 1e-4, 1};
        MetricEvaluator eval(metric_tag_from_string(eval_tag), body, params);
        rep = geodesic_graph_distance(eval, body, x, y, rc);
    } else {
        throw CLI::ValidationError("--method must be graph, hilbert, or lower");
    }
    double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    std::string row = format_vec(x) + "," + format_vec(y) + "," + format_double(rep.lower) + "," +
                      format_double(rep.upper) + "," + rep.method + "," + format_double(seconds);
    if (!out_file.empty()) {
        CsvWriter csv(out_file);
        csv.row({"x", "y", "lower", "upper", "method", "seconds"});
        csv.row({format_vec(x), format_vec(y), format_double(rep.lower), format_double(rep.upper),
                 rep.method, format_double(seconds)});
    }
    std::printf("x,y,lower,upper,method,seconds\n%s\n", row.c_str());
    return 0;
}

int cmd_delta(const std::string& body_path, long long samples, std::uint64_t seed, int budget,
              int plane_samples, const std::string& out_file) {
    ConvexBody body = load_body_file(body_path);
    Rng rng(seed);
    const bool closed_form =
        body.kind() == ConvexBody::Kind::ball && std::abs(body.radius() - 1.0) < 1e-12;

    std::optional<Roadmap> map;
    std::optional<MetricEvaluator> eval;
    if (!closed_form) {
        // Certified upper-bound evaluator with a thrifty plane budget: a
        // coarser search only loosens the upper bounds, never invalidates
        // them, and graph edge weights dominate the cost here.
        MetricEvaluator::Params params;
        params.plane_budget.circle_grid = plane_samples;
        params.plane_budget.inner = PlanarSearch{12, 1e-4, 1};
        eval.emplace(MetricTag::minimal_upper, body, params);
        RoadmapConfig rc;
        rc.budget = budget;
        rc.seed = seed;
        map.emplace(body, *eval, rc);
    }
    Vec lo, hi;
    if (body.is_bounded()) body.bounding_box(&lo, &hi);
    else throw std::invalid_argument("delta: body must be bounded");

    // Uniform rejection samples plus a boundary-biased stratum at geometric
    // depth levels, where four-point defects concentrate.
    Vec anchor = body.interior_anchor();
    double collar = std::min(body.collar_width(), 0.5);
    auto uniform_point = [&]() {
        for (int tries = 0;; ++tries) {
            Vec p = rng.in_box(lo, hi);
            if (body.contains(p) == Containment::interior) return p;
            if (tries > 100000) throw std::runtime_error("delta: sampling failed");
        }
    };
    auto sample_point = [&]() {
        if (rng.uniform() < 0.5) return uniform_point();
        Vec w = rng.unit_vec(body.dim());
        double t = body.ray_exit_canonical(body.to_canonical_point(anchor),
                                           body.to_canonical_vec(w));
        if (t == kInfinity) return uniform_point();
        try {
            BoundaryPoint bp = body.nearest_boundary(anchor + (0.999 * t) * w);
            int k = 1 + static_cast<int>(rng.uniform() * 10.0);
            Vec p = bp.point - collar * std::pow(2.0, -k) * bp.normal;
            if (body.contains(p) == Containment::interior) return p;
        } catch (const AmbiguousProjectionError&) {
        }
        return uniform_point();
    };

    std::vector<QuadrupleSample> quads;
    quads.reserve(samples);
    for (long long i = 0; i < samples; ++i) {
        QuadrupleSample q;
        for (auto& p : q.points) p = sample_point();
        for (int a = 0; a < 4; ++a)
            for (int b = a + 1; b < 4; ++b) {
                DistanceReport r;
                if (closed_form) {
                    r.lower = r.upper = klein_ball_distance(q.points[a], q.points[b]);
                    r.method = "klein_closed_form";
                } else {
                    r = map->distance(q.points[a], q.points[b]);
                }
                q.distances[QuadrupleSample::pair_index(a, b)] = r;
            }
        quads.push_back(std::move(q));
    }
    auto rep = four_point_delta(quads);

    auto emit = [&](std::FILE* f) {
        std::fprintf(f, "delta_estimate,n_samples,method,seed,uncertainty\n");
        std::fprintf(f, "%s,%lld,%s,%llu,%s\n", format_double(rep.delta_estimate).c_str(), samples,
                     rep.distance_method.c_str(), static_cast<unsigned long long>(seed),
                     format_double(rep.uncertainty).c_str());
    };
    emit(stdout);
    if (!out_file.empty()) {
        CsvWriter csv(out_file);
        csv.row({"delta_estimate", "n_samples", "method", "seed", "uncertainty"});
        csv.row({format_double(rep.delta_estimate), std::to_string(samples), rep.distance_method,
                 std::to_string(seed), format_double(rep.uncertainty)});
    }
    // Witness quadruple as a JSON-like block.
    JsonObject obj{{"kind", std::string("worst_quadruple")},
                   {"delta_estimate", rep.delta_estimate}};
    for (int i = 0; i < 4; ++i) obj["p" + std::to_string(i)] = format_vec(rep.worst_quadruple.points[i]);
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j)
            obj["d" + std::to_string(i) + std::to_string(j)] = rep.worst_quadruple.mid(i, j);
    std::printf("%s\n", to_json_line(obj).c_str());
    return 0;
}

int cmd_scenario(ScenarioConfig cfg) {
    auto res = run_scenario(cfg);
    for (const auto& a : res.assertions)
        std::printf("[%s] %s: %s %s %s\n", a.pass ? "ok" : "FAIL", a.name.c_str(),
                    format_double(a.value).c_str(), a.relation.c_str(),
                    format_double(a.threshold).c_str());
    for (const auto& f : res.files) std::printf("wrote %s\n", f.c_str());
    std::printf("%s: %s (%.2f s)\n", res.name.c_str(), res.pass ? "PASS" : "FAIL", res.seconds);
    return res.pass ? 0 : kExitAssertionFailure;
}

int cmd_list_scenarios() {
    for (const auto& info : scenario_catalog())
        std::printf("%-26s %s\n", info.name.c_str(), info.statement.c_str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"minmetric-lab: metric-geometry computations on convex domains"};
    app.require_subcommand(1);

    int threads = 0;
    app.add_option("--threads", threads, "cap worker threads (also via MINMETRIC_THREADS)");

    // eval-metric
    auto* eval_cmd = app.add_subcommand("eval-metric", "evaluate a pointwise Finsler metric");
    std::string body_path, tag = "hilbert", x_str, v_str, y_str, method = "hilbert", out_file;
    double collar_eps = 0.5;
    int plane_samples = 512;
    eval_cmd->add_option("--body", body_path, "domain spec file")->required();
    eval_cmd->add_option("--evaluator", tag,
                         "exact_minimal | hilbert | model_F | minimal_lower | minimal_upper");
    eval_cmd->add_option("--x", x_str, "base point coordinates")->required();
    eval_cmd->add_option("--v", v_str, "direction coordinates")->required();
    eval_cmd->add_option("--collar-eps", collar_eps, "collar width for model_F");
    eval_cmd->add_option("--plane-samples", plane_samples, "plane grid for minimal_upper");

    // distance
    auto* dist_cmd = app.add_subcommand("distance", "two-point intrinsic distance report");
    std::uint64_t seed = 1;
    int budget = 20000;
    std::string dist_eval = "exact_minimal";
    dist_cmd->add_option("--body", body_path, "domain spec file")->required();
    dist_cmd->add_option("--method", method, "graph | hilbert | lower");
    dist_cmd->add_option("--x", x_str, "first point")->required();
    dist_cmd->add_option("--y", y_str, "second point")->required();
    dist_cmd->add_option("--evaluator", dist_eval, "evaluator for the graph method");
    dist_cmd->add_option("--budget", budget, "graph node budget");
    int dist_planes = 64;
    dist_cmd->add_option("--plane-samples", dist_planes,
                         "plane grid for upper-bound edge weights (graph method)");
    dist_cmd->add_option("--seed", seed, "64-bit seed");
    dist_cmd->add_option("--out", out_file, "also write the CSV row to this file");

    // delta
    auto* delta_cmd = app.add_subcommand("delta", "four-point hyperbolicity defect scan");
    long long samples = 1000;
    int delta_budget = 2000;
    delta_cmd->add_option("--body", body_path, "domain spec file")->required();
    delta_cmd->add_option("--samples", samples, "number of quadruples");
    delta_cmd->add_option("--seed", seed, "64-bit seed");
    delta_cmd->add_option("--budget", delta_budget,
                          "graph budget for non-ball bodies (graph-backed distances are costly)");
    int delta_planes = 64;
    delta_cmd->add_option("--plane-samples", delta_planes,
                          "plane grid for the upper-bound edge weights");
    delta_cmd->add_option("--out", out_file, "also write the CSV to this file");

    // scenario
    auto* scen_cmd = app.add_subcommand("scenario", "run a named reproduction scenario");
    ScenarioConfig cfg;
    scen_cmd->add_option("name", cfg.name, "scenario name (see list-scenarios)")->required();
    scen_cmd->add_option("--seed", cfg.seed, "64-bit seed");
    scen_cmd->add_option("--out", cfg.out_dir, "output directory");
    scen_cmd->add_option("--body", cfg.body_spec_path,
                         "domain spec override (rejected: scenario domains are pinned)");
    scen_cmd->add_option("--graph-nodes", cfg.graph_nodes, "graph node budget");
    scen_cmd->add_option("--quadruples", cfg.quadruples, "quadruple sample budget");
    scen_cmd->add_option("--mesh-level", cfg.mesh_level, "boundary mesh subdivisions");
    scen_cmd->add_option("--plane-samples", cfg.plane_samples, "plane grid size");

    // list-scenarios
    auto* list_cmd = app.add_subcommand("list-scenarios", "print the scenario catalog");

    CLI11_PARSE(app, argc, argv);

    if (threads > 0) setenv("MINMETRIC_THREADS", std::to_string(threads).c_str(), 1);

    try {
        if (*eval_cmd) return cmd_eval_metric(body_path, tag, x_str, v_str, collar_eps, plane_samples);
        if (*dist_cmd) return cmd_distance(body_path, method, x_str, y_str, dist_eval, budget, dist_planes, seed, out_file);
        if (*delta_cmd) return cmd_delta(body_path, samples, seed, delta_budget, delta_planes, out_file);
        if (*scen_cmd) return cmd_scenario(cfg);
        if (*list_cmd) return cmd_list_scenarios();
    } catch (const BodyParseError& e) {
        std::fprintf(stderr, "parse error: %s\n", e.what());
        return kExitParseFailure;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitAssertionFailure;
    }
    return 0;
}
