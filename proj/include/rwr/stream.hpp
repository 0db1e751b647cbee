#pragma once

#include <cstdint>
#include <iosfwd>
#include <random>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "rwr/graph.hpp"

namespace rwr {

class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Ordered (src, dst) pairs as read from a file; node id space is
/// 0..max id seen. Duplicates are kept here and resolved at build time.
struct EdgeStream {
    std::vector<std::pair<NodeId, NodeId>> edges;

    NodeId max_node_id() const;
    std::size_t size() const { return edges.size(); }
};

struct SnapshotPlan {
    double initial_fraction = 0.5;
    std::size_t snapshot_count = 10;
    std::uint64_t rng_seed = 0;
};

/// SNAP-style edge list: `src dst` per line, '#' comments, blank lines
/// ignored. Throws ParseError with the line number on malformed input.
EdgeStream parse_edge_list(std::istream& in);
EdgeStream parse_edge_list_file(const std::string& path);

void serialize_edge_list(std::ostream& out, const EdgeStream& stream);

/// Update stream: `+ u v`, `- u v`, `+n`, `-n u`; '#' comments.
std::vector<UpdateOp> parse_update_stream(std::istream& in);
std::vector<UpdateOp> parse_update_stream_file(const std::string& path);

/// Shuffles the stream with the plan's seeded generator, takes the first
/// fraction as the initial graph, and splits the rest into snapshot_count
/// contiguous insert batches (remainder goes to the last batch).
struct SnapshotSplit {
    std::vector<std::pair<NodeId, NodeId>> initial_edges;
    std::vector<std::vector<UpdateOp>> batches;
};
SnapshotSplit make_snapshots(const EdgeStream& stream, const SnapshotPlan& plan);

/// Uniform sample of `count` distinct existing edges as DeleteEdge ops.
/// On an undirected graph the sample is over logical edges (u <= v arcs).
std::vector<UpdateOp> random_delete_batch(const DynamicGraph& graph, std::size_t count,
                                          std::uint64_t rng_seed);

/// Maps sparse external ids to dense internal ids in first-seen order.
class IdMap {
public:
    NodeId get_or_add(std::uint64_t original);
    std::size_t size() const { return originals_.size(); }
    std::uint64_t original(NodeId dense) const { return originals_[dense]; }

    /// Sidecar format: lines `original_id dense_id`.
    void write_sidecar(std::ostream& out) const;

private:
    std::unordered_map<std::uint64_t, NodeId> to_dense_;
    std::vector<std::uint64_t> originals_;
};

struct BuildResult {
    DynamicGraph graph;
    std::size_t duplicate_edges_skipped = 0;
};

/// Builds a graph from a stream, skipping duplicate edges (SNAP files
/// contain them). Self-loops are kept as ordinary arcs.
BuildResult build_graph(const EdgeStream& stream, bool undirected,
                        std::size_t min_node_count = 0);

/// Degree-weighted random digraph: endpoints drawn from a power-law
/// weight profile, no duplicates or self-loops. Deterministic per seed.
EdgeStream generate_power_law_stream(std::size_t node_count, std::size_t edge_count,
                                     std::uint64_t rng_seed, double exponent = 0.7);

} // namespace rwr
