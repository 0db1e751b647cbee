// Command-line front end: static CPI runs, dynamic stream replay,
// benchmark sweeps, and score-file comparison.

#include <algorithm>
#include <fstream>
#include <iostream>
#include <random>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "rwr/graph.hpp"
#include "rwr/metrics.hpp"
#include "rwr/propagation.hpp"
#include "rwr/score_io.hpp"
#include "rwr/stream.hpp"
#include "rwr/tracker.hpp"

using json = nlohmann::ordered_json;

namespace {

struct CommonOpts {
    std::string graph_path;
    std::string updates_path;
    std::string out_path;
    double c = 0.15;
    double epsilon = 1e-9;
    long long seed_node = -1;
    std::size_t random_seeds = 0;
    std::uint64_t rng_seed = 42;
    std::size_t snapshots = 10;
    double initial_fraction = 0.5;
    bool undirected = false;
    bool lenient = false;
    bool parallel = false;
    std::string dead_end = "rescale";
};

rwr::Config make_config(const CommonOpts& opts) {
    rwr::Config config;
    config.c = opts.c;
    config.epsilon = opts.epsilon;
    config.parallel = opts.parallel;
    config.dead_end_mode = opts.dead_end == "none" ? rwr::DeadEndMode::None : rwr::DeadEndMode::Rescale;
    config.validate();
    return config;
}

struct LoadedGraph {
    rwr::DynamicGraph graph;
    rwr::IdMap ids;
    std::size_t duplicates = 0;
};

LoadedGraph load_graph(const CommonOpts& opts) {
    rwr::EdgeStream raw = rwr::parse_edge_list_file(opts.graph_path);
    LoadedGraph loaded;
    rwr::EdgeStream dense;
    dense.edges.reserve(raw.size());
    for (const auto& [u, v] : raw.edges)
        dense.edges.emplace_back(loaded.ids.get_or_add(u), loaded.ids.get_or_add(v));
    auto built = rwr::build_graph(dense, opts.undirected, loaded.ids.size());
    loaded.graph = std::move(built.graph);
    loaded.duplicates = built.duplicate_edges_skipped;
    return loaded;
}

void write_id_sidecar(const LoadedGraph& loaded, const std::string& out_path) {
    if (out_path.empty())
        return;
    std::ofstream out(out_path + ".ids");
    loaded.ids.write_sidecar(out);
}

std::vector<rwr::NodeId> pick_seeds(const LoadedGraph& loaded, const CommonOpts& opts) {
    if (opts.seed_node >= 0) {
        if (static_cast<std::size_t>(opts.seed_node) >= loaded.graph.node_count())
            throw std::invalid_argument("seed node " + std::to_string(opts.seed_node) + " out of range");
        return {static_cast<rwr::NodeId>(opts.seed_node)};
    }
    // random seeds drawn without replacement from nodes with out-edges
    std::vector<rwr::NodeId> eligible;
    for (rwr::NodeId u = 0; u < loaded.graph.node_count(); ++u)
        if (loaded.graph.out_degree(u) > 0)
            eligible.push_back(u);
    const std::size_t k = std::min<std::size_t>(std::max<std::size_t>(opts.random_seeds, 1), eligible.size());
    std::vector<rwr::NodeId> seeds;
    std::mt19937_64 rng(opts.rng_seed);
    std::sample(eligible.begin(), eligible.end(), std::back_inserter(seeds), k, rng);
    return seeds;
}

json stats_json(const rwr::PropagationStats& stats) {
    json j;
    j["iterations"] = stats.iterations;
    j["visited_edges"] = stats.visited_edges;
    j["q_offset_l1"] = stats.q_offset_l1;
    j["wall_time"] = stats.wall_time;
    if (stats.refreshed_from_scratch)
        j["refreshed_from_scratch"] = true;
    return j;
}

int cmd_static(const CommonOpts& opts) {
    const rwr::Config config = make_config(opts);
    LoadedGraph loaded = load_graph(opts);
    const auto seeds = pick_seeds(loaded, opts);
    const rwr::NodeId seed = seeds.front();
    auto [scores, stats] = rwr::cpi(loaded.graph, seed, config);

    json j = stats_json(stats);
    j["seed"] = seed;
    std::cout << j.dump() << '\n';

    char header_line[128];
    std::snprintf(header_line, sizeof(header_line), "rwr static seed=%u c=%g epsilon=%g", seed,
                  config.c, config.epsilon);
    std::vector<std::string> header{header_line};
    if (!opts.out_path.empty()) {
        rwr::write_score_file(opts.out_path, scores, header);
        write_id_sidecar(loaded, opts.out_path);
    } else {
        rwr::write_score_dump(std::cout, scores, header);
    }
    return 0;
}

int cmd_track(const CommonOpts& opts) {
    const rwr::Config config = make_config(opts);
    std::vector<std::vector<rwr::UpdateOp>> batches;
    LoadedGraph loaded;

    if (!opts.updates_path.empty()) {
        loaded = load_graph(opts);
        std::vector<rwr::UpdateOp> ops = rwr::parse_update_stream_file(opts.updates_path);
        // remap update ids through the same map; unseen ids get fresh slots
        for (rwr::UpdateOp& op : ops) {
            if (op.kind == rwr::UpdateOp::Kind::InsertEdge || op.kind == rwr::UpdateOp::Kind::DeleteEdge) {
                op.src = loaded.ids.get_or_add(op.src);
                op.dst = loaded.ids.get_or_add(op.dst);
            } else if (op.kind == rwr::UpdateOp::Kind::DeleteNode) {
                op.src = loaded.ids.get_or_add(op.src);
            }
        }
        const std::size_t k = std::min(opts.snapshots, std::max<std::size_t>(ops.size(), 1));
        const std::size_t per_batch = std::max<std::size_t>(ops.size() / k, 1);
        for (std::size_t b = 0, cursor = 0; b < k && cursor < ops.size(); ++b) {
            const std::size_t end = (b + 1 == k) ? ops.size() : std::min(cursor + per_batch, ops.size());
            batches.emplace_back(ops.begin() + static_cast<std::ptrdiff_t>(cursor),
                                 ops.begin() + static_cast<std::ptrdiff_t>(end));
            cursor = end;
        }
    } else {
        // snapshot replay over a single edge list
        rwr::EdgeStream raw = rwr::parse_edge_list_file(opts.graph_path);
        rwr::IdMap ids;
        rwr::EdgeStream dense;
        for (const auto& [u, v] : raw.edges)
            dense.edges.emplace_back(ids.get_or_add(u), ids.get_or_add(v));
        rwr::SnapshotPlan plan{opts.initial_fraction, opts.snapshots, opts.rng_seed};
        rwr::SnapshotSplit split = rwr::make_snapshots(dense, plan);
        rwr::EdgeStream initial;
        initial.edges = split.initial_edges;
        auto built = rwr::build_graph(initial, opts.undirected, ids.size());
        loaded.graph = std::move(built.graph);
        loaded.ids = std::move(ids);
        loaded.duplicates = built.duplicate_edges_skipped;
        batches = std::move(split.batches);
    }

    const auto seeds = pick_seeds(loaded, opts);
    std::vector<rwr::RwrTracker> trackers;
    trackers.reserve(seeds.size());
    for (rwr::NodeId s : seeds)
        trackers.emplace_back(loaded.graph, s, config);

    bool bound_violation = false;
    for (std::size_t b = 0; b < batches.size(); ++b) {
        // grow the node space for ids first seen in this batch
        while (loaded.graph.node_count() < loaded.ids.size())
            loaded.graph.add_node();
        rwr::RowChangeSet changes = loaded.graph.apply_batch(batches[b], /*strict=*/!opts.lenient);

        double mean_iter = 0.0, mean_visited = 0.0, mean_wall = 0.0, mean_q = 0.0;
        for (std::size_t t = 0; t < trackers.size(); ++t) {
            rwr::PropagationStats stats = trackers[t].apply_changes(loaded.graph, changes);
            if (!stats.refreshed_from_scratch &&
                !rwr::check_bounds(stats, config).iterations_ok)
                bound_violation = true;
            json line = stats_json(stats);
            line["seed"] = trackers[t].seed();
            line["batch"] = b;
            std::cout << line.dump() << '\n';
            mean_iter += static_cast<double>(stats.iterations);
            mean_visited += static_cast<double>(stats.visited_edges);
            mean_wall += stats.wall_time;
            mean_q += stats.q_offset_l1;
        }
        const double k = static_cast<double>(trackers.size());
        json avg;
        avg["batch"] = b;
        avg["seeds"] = trackers.size();
        avg["mean_iterations"] = mean_iter / k;
        avg["mean_visited_edges"] = mean_visited / k;
        avg["mean_q_offset_l1"] = mean_q / k;
        avg["mean_wall_time"] = mean_wall / k;
        std::cout << avg.dump() << '\n';
    }

    if (!opts.out_path.empty()) {
        std::ofstream out(opts.out_path);
        if (!out)
            throw std::runtime_error("cannot open for writing: " + opts.out_path);
        for (const rwr::RwrTracker& tracker : trackers) {
            out << "# seed=" << tracker.seed() << '\n';
            rwr::write_score_dump(out, tracker.query());
        }
        write_id_sidecar(loaded, opts.out_path);
    }
    return bound_violation ? 1 : 0;
}

struct BenchRow {
    double sweep_value;
    std::string method;
    double iterations;
    double visited_edges;
    double wall_time;
    double l1_error;
    double q_offset_l1;
};

void write_bench_csv(std::ostream& out, const std::vector<BenchRow>& rows) {
    out << "sweep_value,method,iterations,visited_edges,wall_time,l1_error,q_offset_l1\n";
    for (const BenchRow& r : rows)
        out << r.sweep_value << ',' << r.method << ',' << r.iterations << ',' << r.visited_edges << ','
            << r.wall_time << ',' << r.l1_error << ',' << r.q_offset_l1 << '\n';
}

int cmd_bench(const CommonOpts& opts, const std::string& sweep, std::size_t nodes, std::size_t edges,
              std::size_t trials) {
    rwr::Config config = make_config(opts);
    rwr::DynamicGraph graph;
    if (!opts.graph_path.empty()) {
        graph = load_graph(opts).graph;
    } else {
        auto stream = rwr::generate_power_law_stream(nodes, edges, opts.rng_seed);
        graph = rwr::build_graph(stream, opts.undirected).graph;
    }

    std::mt19937_64 rng(opts.rng_seed + 1);
    std::vector<rwr::NodeId> eligible;
    for (rwr::NodeId u = 0; u < graph.node_count(); ++u)
        if (graph.out_degree(u) > 0)
            eligible.push_back(u);
    auto pick_node = [&]() { return eligible[rng() % eligible.size()]; };

    // exact reference where the dense solve is feasible, tight CPI otherwise
    auto reference = [&](rwr::NodeId seed) {
        if (graph.node_count() <= 2000)
            return rwr::exact_oracle(graph, seed, config.c);
        rwr::Config tight = config;
        tight.epsilon = 1e-12;
        return rwr::cpi_raw(graph, seed, tight).first;
    };

    std::vector<BenchRow> rows;
    bool bound_violation = false;

    auto run_point = [&](double sweep_value, std::size_t delete_count, double ospt_epsilon) {
        struct Acc {
            double iter = 0, visited = 0, wall = 0, err = 0, q = 0;
        };
        Acc acc_cpi, acc_osp, acc_ospt;
        for (std::size_t t = 0; t < trials; ++t) {
            const rwr::NodeId seed = pick_node();
            auto [r_old, init_stats] = rwr::cpi_raw(graph, seed, config);
            auto batch = rwr::random_delete_batch(graph, delete_count, rng());
            rwr::RowChangeSet changes = graph.apply_batch(batch);
            const rwr::ScoreVector exact = reference(seed);

            auto [cpi_scores, cpi_stats] = rwr::cpi_raw(graph, seed, config);
            acc_cpi.iter += static_cast<double>(cpi_stats.iterations);
            acc_cpi.visited += static_cast<double>(cpi_stats.visited_edges);
            acc_cpi.wall += cpi_stats.wall_time;
            acc_cpi.err += rwr::l1_error(cpi_scores, exact);
            acc_cpi.q += cpi_stats.q_offset_l1;

            auto osp_once = [&](double eps, Acc& acc) {
                rwr::Config variant = config;
                variant.epsilon = eps;
                auto q_offset = rwr::compute_offset_seed(changes, r_old, variant.c, r_old.size());
                auto [r_offset, stats] = rwr::propagate_offset(graph, std::move(q_offset), variant);
                auto merged = rwr::osp_merge(r_old, r_offset);
                if (!rwr::check_bounds(stats, variant).iterations_ok)
                    bound_violation = true;
                acc.iter += static_cast<double>(stats.iterations);
                acc.visited += static_cast<double>(stats.visited_edges);
                acc.wall += stats.wall_time;
                acc.err += rwr::l1_error(merged, exact);
                acc.q += stats.q_offset_l1;
            };
            osp_once(1e-9, acc_osp);
            osp_once(ospt_epsilon, acc_ospt);

            graph.apply_batch(rwr::invert_ops(batch)); // restore for the next trial
        }
        const double k = static_cast<double>(trials);
        auto emit = [&](const std::string& method, const Acc& acc) {
            rows.push_back({sweep_value, method, acc.iter / k, acc.visited / k, acc.wall / k,
                            acc.err / k, acc.q / k});
        };
        emit("cpi", acc_cpi);
        emit("osp", acc_osp);
        emit("ospt", acc_ospt);
    };

    if (sweep == "size") {
        for (std::size_t delta : {1, 10, 100, 1000})
            run_point(static_cast<double>(delta), delta, 5e-3);
    } else if (sweep == "epsilon") {
        for (double eps : {1e-2, 1e-3, 1e-4, 1e-5})
            run_point(eps, 1, eps);
    } else if (sweep == "location") {
        // deciles of the RWR score profile for one fixed probe seed
        const rwr::NodeId probe = eligible.front();
        auto [r_probe, probe_stats] = rwr::cpi_raw(graph, probe, config);
        std::vector<rwr::NodeId> order = eligible;
        std::stable_sort(order.begin(), order.end(),
                         [&](rwr::NodeId a, rwr::NodeId b) { return r_probe[a] > r_probe[b]; });
        const std::size_t per_decile = std::max<std::size_t>(order.size() / 10, 1);
        for (std::size_t d = 0; d < 10; ++d) {
            struct Acc {
                double iter = 0, visited = 0, wall = 0, q = 0;
            } acc;
            std::size_t done = 0;
            for (std::size_t t = 0; t < trials; ++t) {
                const std::size_t lo = d * per_decile;
                if (lo >= order.size())
                    break;
                const rwr::NodeId u = order[lo + rng() % std::min(per_decile, order.size() - lo)];
                if (graph.out_degree(u) == 0)
                    continue;
                const rwr::NodeId v = graph.out_neighbors(u)[rng() % graph.out_degree(u)];
                const rwr::UpdateOp del = rwr::UpdateOp::delete_edge(u, v);
                rwr::RowChangeSet changes = graph.apply_batch(std::span(&del, 1));
                rwr::Config variant = config;
                variant.epsilon = 5e-3;
                auto q_offset = rwr::compute_offset_seed(changes, r_probe, variant.c, r_probe.size());
                auto [r_offset, stats] = rwr::propagate_offset(graph, std::move(q_offset), variant);
                acc.iter += static_cast<double>(stats.iterations);
                acc.visited += static_cast<double>(stats.visited_edges);
                acc.wall += stats.wall_time;
                acc.q += stats.q_offset_l1;
                ++done;
                const rwr::UpdateOp ins = rwr::UpdateOp::insert_edge(u, v);
                graph.apply_batch(std::span(&ins, 1));
            }
            const double k = std::max<double>(static_cast<double>(done), 1.0);
            rows.push_back({static_cast<double>(d), "ospt", acc.iter / k, acc.visited / k,
                            acc.wall / k, 0.0, acc.q / k});
        }
    } else {
        throw std::invalid_argument("unknown sweep: " + sweep);
    }

    if (!opts.out_path.empty()) {
        std::ofstream out(opts.out_path);
        if (!out)
            throw std::runtime_error("cannot open for writing: " + opts.out_path);
        write_bench_csv(out, rows);
    } else {
        write_bench_csv(std::cout, rows);
    }
    return bound_violation ? 1 : 0;
}

int cmd_metrics(const CommonOpts& opts, const std::string& file_a, const std::string& file_b) {
    const rwr::Config config = make_config(opts);
    rwr::ScoreVector a = rwr::read_score_file(file_a);
    rwr::ScoreVector b = rwr::read_score_file(file_b);
    if (a.size() != b.size())
        throw std::invalid_argument("node-set mismatch: " + std::to_string(a.size()) + " vs " +
                                    std::to_string(b.size()) + " nodes");
    rwr::ComparisonReport report = rwr::compare_scores(a, b, config);
    std::cout << report.to_json() << '\n';
    return 0;
}

void add_common(CLI::App* cmd, CommonOpts& opts, bool needs_graph) {
    auto* g = cmd->add_option("--graph", opts.graph_path, "edge-list file (SNAP format)");
    if (needs_graph)
        g->required()->check(CLI::ExistingFile);
    cmd->add_option("--c", opts.c, "restart probability");
    cmd->add_option("--epsilon", opts.epsilon, "error tolerance");
    cmd->add_option("--seed", opts.seed_node, "seed node (original id space)");
    cmd->add_option("--random-seeds", opts.random_seeds, "number of random seed nodes");
    cmd->add_option("--rng-seed", opts.rng_seed, "RNG seed");
    cmd->add_option("--out", opts.out_path, "output path");
    cmd->add_flag("--undirected", opts.undirected, "treat edges as undirected");
    cmd->add_flag("--lenient", opts.lenient, "skip inapplicable update ops instead of failing");
    cmd->add_flag("--parallel", opts.parallel, "OpenMP propagation kernel");
    cmd->add_option("--dead-end", opts.dead_end, "dead-end handling")
        ->check(CLI::IsMember({"rescale", "none"}));
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"dynamic random walk with restart engine"};
    app.require_subcommand(1);

    CommonOpts opts;
    std::string sweep = "size";
    std::size_t bench_nodes = 10000, bench_edges = 100000, trials = 5;
    std::string file_a, file_b;

    auto* cmd_static_app = app.add_subcommand("static", "from-scratch RWR for one seed");
    add_common(cmd_static_app, opts, true);

    auto* cmd_track_app = app.add_subcommand("track", "replay an update stream, tracking RWR per batch");
    add_common(cmd_track_app, opts, true);
    cmd_track_app->add_option("--updates", opts.updates_path, "update-stream file")
        ->check(CLI::ExistingFile);
    cmd_track_app->add_option("--snapshots", opts.snapshots, "number of update batches");
    cmd_track_app->add_option("--initial-fraction", opts.initial_fraction,
                              "fraction of the stream forming the initial graph");

    auto* cmd_bench_app = app.add_subcommand("bench", "CPI vs OSP vs OSP-T sweeps, CSV output");
    add_common(cmd_bench_app, opts, false);
    cmd_bench_app->add_option("--sweep", sweep, "size | epsilon | location")
        ->check(CLI::IsMember({"size", "epsilon", "location"}));
    cmd_bench_app->add_option("--nodes", bench_nodes, "synthetic graph node count");
    cmd_bench_app->add_option("--edges", bench_edges, "synthetic graph edge count");
    cmd_bench_app->add_option("--trials", trials, "trials per sweep point");

    auto* cmd_metrics_app = app.add_subcommand("metrics", "compare two score dumps");
    cmd_metrics_app->add_option("file_a", file_a, "score dump")->required()->check(CLI::ExistingFile);
    cmd_metrics_app->add_option("file_b", file_b, "score dump")->required()->check(CLI::ExistingFile);
    cmd_metrics_app->add_option("--c", opts.c, "restart probability");
    cmd_metrics_app->add_option("--epsilon", opts.epsilon, "error tolerance the dump was produced with");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (cmd_static_app->parsed())
            return cmd_static(opts);
        if (cmd_track_app->parsed())
            return cmd_track(opts);
        if (cmd_bench_app->parsed())
            return cmd_bench(opts, sweep, bench_nodes, bench_edges, trials);
        if (cmd_metrics_app->parsed())
            return cmd_metrics(opts, file_a, file_b);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 2;
}
