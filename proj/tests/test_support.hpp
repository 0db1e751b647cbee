#pragma once

#include <random>

#include "rwr/graph.hpp"

namespace rwr::test {

/// Random simple digraph with roughly `avg_degree` out-edges per node.
inline DynamicGraph random_digraph(std::size_t n, double avg_degree, std::mt19937_64& rng,
                                   bool undirected = false) {
    DynamicGraph graph(n, undirected);
    std::uniform_int_distribution<std::size_t> node(0, n - 1);
    const std::size_t target = static_cast<std::size_t>(avg_degree * static_cast<double>(n));
    std::size_t attempts = 0;
    while (graph.edge_count() < (undirected ? 2 * target : target) && attempts < target * 20) {
        ++attempts;
        const NodeId u = static_cast<NodeId>(node(rng));
        const NodeId v = static_cast<NodeId>(node(rng));
        if (u == v || graph.has_edge(u, v))
            continue;
        const UpdateOp op = UpdateOp::insert_edge(u, v);
        graph.apply_batch(std::span(&op, 1));
    }
    return graph;
}

/// Mixed insert/delete batch applicable to `graph` in sequence.
inline std::vector<UpdateOp> random_edge_batch(const DynamicGraph& graph, std::size_t count,
                                               std::mt19937_64& rng) {
    DynamicGraph scratch = graph; // simulate applicability
    std::vector<UpdateOp> ops;
    std::uniform_int_distribution<std::size_t> node(0, graph.node_count() - 1);
    std::size_t attempts = 0;
    while (ops.size() < count && attempts < count * 200) {
        ++attempts;
        const NodeId u = static_cast<NodeId>(node(rng));
        const NodeId v = static_cast<NodeId>(node(rng));
        if (u == v)
            continue;
        const bool exists = scratch.has_edge(u, v);
        const UpdateOp op = exists ? UpdateOp::delete_edge(u, v) : UpdateOp::insert_edge(u, v);
        scratch.apply_batch(std::span(&op, 1));
        ops.push_back(op);
    }
    return ops;
}

} // namespace rwr::test
