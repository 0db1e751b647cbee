#include "rwr/propagation.hpp"

#include <chrono>
#include <cmath>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace rwr {

double l1_norm(std::span<const double> v) {
    double total = 0.0;
    for (double x : v)
        total += std::abs(x);
    return total;
}

void Config::validate() const {
    if (!(c > 0.0 && c < 1.0))
        throw std::invalid_argument("restart probability must lie in (0,1)");
    if (!(epsilon > 0.0))
        throw std::invalid_argument("epsilon must be positive");
}

std::size_t theoretical_iteration_bound(const Config& config) {
    const double arg = config.epsilon / 2.0;
    if (arg >= 1.0)
        return 0;
    const double bound = std::log(arg) / std::log(1.0 - config.c);
    return static_cast<std::size_t>(std::ceil(bound));
}

double theoretical_error_bound(const Config& config) {
    return config.epsilon / config.c;
}

std::size_t effective_max_iterations(const Config& config) {
    if (config.max_iterations != 0)
        return config.max_iterations;
    return std::max<std::size_t>(1000, 10 * theoretical_iteration_bound(config));
}

SignedScoreVector spmv_transpose_normalized(const DynamicGraph& graph, std::span<const double> x,
                                            double c, PropagationStats* stats, bool parallel) {
    const std::size_t n = graph.node_count();
    if (x.size() != n)
        throw std::invalid_argument("spmv: vector length does not match node count");
    const double decay = 1.0 - c;
    SignedScoreVector y(n, 0.0);
    std::uint64_t visited = 0;

    if (parallel) {
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 1024)
        for (std::size_t v = 0; v < n; ++v) {
            double acc = 0.0;
            for (NodeId u : graph.in_neighbors(static_cast<NodeId>(v)))
                acc += x[u] / static_cast<double>(graph.out_degree(u));
            y[v] = decay * acc;
        }
#pragma omp parallel for schedule(static) reduction(+ : visited)
        for (std::size_t u = 0; u < n; ++u)
            if (x[u] != 0.0)
                visited += graph.out_degree(static_cast<NodeId>(u));
#else
        parallel = false;
#endif
    }
    if (!parallel) {
        // scatter in ascending source order; skips zero sources
        for (std::size_t u = 0; u < n; ++u) {
            const double xu = x[u];
            if (xu == 0.0)
                continue;
            const auto& nbrs = graph.out_neighbors(static_cast<NodeId>(u));
            if (nbrs.empty())
                continue;
            visited += nbrs.size();
            const double share = decay * xu / static_cast<double>(nbrs.size());
            for (NodeId v : nbrs)
                y[v] += share;
        }
    }
    if (stats)
        stats->visited_edges += visited;
    return y;
}

SignedScoreVector propagate_cumulative(const DynamicGraph& graph, SignedScoreVector q,
                                       const Config& config, PropagationStats& stats) {
    config.validate();
    const std::size_t cap = effective_max_iterations(config);
    const auto start = std::chrono::steady_clock::now();

    SignedScoreVector accumulated = q;
    SignedScoreVector interim = std::move(q);
    while (l1_norm(interim) > config.epsilon) {
        if (stats.iterations >= cap) {
            stats.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
            throw ConvergenceError("iteration cap " + std::to_string(cap) +
                                       " reached before convergence (epsilon " +
                                       std::to_string(config.epsilon) + ")",
                                   stats);
        }
        interim = spmv_transpose_normalized(graph, interim, config.c, &stats, config.parallel);
        ++stats.iterations;
        for (std::size_t i = 0; i < accumulated.size(); ++i)
            accumulated[i] += interim[i];
    }
    stats.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return accumulated;
}

std::pair<ScoreVector, PropagationStats> cpi_raw(const DynamicGraph& graph, NodeId seed,
                                                 const Config& config) {
    if (!graph.has_node(seed))
        throw std::out_of_range("cpi: invalid seed node");
    PropagationStats stats;
    SignedScoreVector q(graph.node_count(), 0.0);
    q[seed] = config.c;
    stats.q_offset_l1 = config.c;
    ScoreVector result = propagate_cumulative(graph, std::move(q), config, stats);
    return {std::move(result), stats};
}

std::pair<ScoreVector, PropagationStats> cpi(const DynamicGraph& graph, NodeId seed,
                                             const Config& config) {
    auto [raw, stats] = cpi_raw(graph, seed, config);
    if (config.dead_end_mode == DeadEndMode::Rescale)
        raw = dead_end_rescale(raw);
    return {std::move(raw), stats};
}

SignedScoreVector compute_offset_seed(const RowChangeSet& changes, std::span<const double> r_old_raw,
                                      double c, std::size_t node_count) {
    if (r_old_raw.size() != node_count)
        throw std::invalid_argument("compute_offset_seed: score vector length mismatch");
    const double decay = 1.0 - c;
    SignedScoreVector q(node_count, 0.0);
    for (const auto& [u, change] : changes.rows) {
        const double mass = decay * r_old_raw[u];
        if (mass == 0.0)
            continue;
        if (change.old_degree() > 0) {
            const double share = mass / static_cast<double>(change.old_degree());
            for (NodeId v : change.old_neighbors)
                q[v] -= share;
        }
        if (change.new_degree() > 0) {
            const double share = mass / static_cast<double>(change.new_degree());
            for (NodeId v : change.new_neighbors)
                q[v] += share;
        }
    }
    return q;
}

std::pair<SignedScoreVector, PropagationStats> propagate_offset(const DynamicGraph& graph_after,
                                                                SignedScoreVector q_offset,
                                                                const Config& config) {
    if (q_offset.size() != graph_after.node_count())
        throw std::invalid_argument("propagate_offset: vector length mismatch");
    PropagationStats stats;
    stats.q_offset_l1 = l1_norm(q_offset);
    SignedScoreVector result = propagate_cumulative(graph_after, std::move(q_offset), config, stats);
    return {std::move(result), stats};
}

ScoreVector osp_merge(std::span<const double> r_old_raw, std::span<const double> r_offset,
                      double negative_tolerance) {
    if (r_old_raw.size() != r_offset.size())
        throw std::invalid_argument("osp_merge: length mismatch");
    ScoreVector merged(r_old_raw.size());
    for (std::size_t i = 0; i < merged.size(); ++i) {
        double v = r_old_raw[i] + r_offset[i];
        if (v < 0.0) {
            if (v < -negative_tolerance)
                throw std::runtime_error("osp_merge: negative score " + std::to_string(v) +
                                         " at node " + std::to_string(i));
            v = 0.0;
        }
        merged[i] = v;
    }
    return merged;
}

ScoreVector dead_end_rescale(std::span<const double> r_temp) {
    const double mass = l1_norm(r_temp);
    if (mass == 0.0)
        throw std::invalid_argument("dead_end_rescale: zero vector");
    ScoreVector scaled(r_temp.begin(), r_temp.end());
    for (double& v : scaled)
        v /= mass;
    return scaled;
}

} // namespace rwr
