#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace rwr {

using NodeId = std::uint32_t;

class GraphUpdateError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct UpdateOp {
    enum class Kind { InsertEdge, DeleteEdge, InsertNode, DeleteNode };

    Kind kind;
    NodeId src = 0;
    NodeId dst = 0;

    static UpdateOp insert_edge(NodeId u, NodeId v) { return {Kind::InsertEdge, u, v}; }
    static UpdateOp delete_edge(NodeId u, NodeId v) { return {Kind::DeleteEdge, u, v}; }
    static UpdateOp insert_node() { return {Kind::InsertNode, 0, 0}; }
    static UpdateOp delete_node(NodeId u) { return {Kind::DeleteNode, u, 0}; }

    bool operator==(const UpdateOp&) const = default;
};

/// Before/after snapshot of one modified adjacency row.
struct RowChange {
    std::vector<NodeId> old_neighbors;
    std::vector<NodeId> new_neighbors;

    std::size_t old_degree() const { return old_neighbors.size(); }
    std::size_t new_degree() const { return new_neighbors.size(); }
};

/// All rows whose out-neighbor list changed during one batch, keyed by
/// source node in ascending order. Carries enough to rebuild the row
/// difference of the two normalized matrices without the old graph.
struct RowChangeSet {
    std::map<NodeId, RowChange> rows;
    std::vector<NodeId> deleted_nodes;
    std::size_t skipped_ops = 0; // lenient mode only

    bool empty() const { return rows.empty(); }
};

/// Total-variation weight of one modified row: sum_j |new_row_j - old_row_j|
/// where a row of the normalized matrix has 1/degree at each neighbor and is
/// all zero for a dead-end.
double row_delta_l1(const RowChange& change);

/// (1-c) * sum_u D_uu * r_old[u] over modified rows; upper-bounds the L1
/// mass of the offset seed built from this change set.
double row_change_l1(const RowChangeSet& changes, std::span<const double> r_old, double c);

/// Mutable directed graph with mirrored in/out adjacency. Node ids are dense
/// and never recycled; a deleted node keeps its slot with zero degree.
class DynamicGraph {
public:
    DynamicGraph() = default;
    explicit DynamicGraph(std::size_t node_count, bool undirected = false)
        : out_(node_count), in_(node_count), undirected_(undirected) {}

    std::size_t node_count() const { return out_.size(); }
    std::size_t edge_count() const { return edge_count_; }
    bool undirected() const { return undirected_; }

    std::size_t out_degree(NodeId u) const { return out_[u].size(); }
    const std::vector<NodeId>& out_neighbors(NodeId u) const { return out_[u]; }
    const std::vector<NodeId>& in_neighbors(NodeId u) const { return in_[u]; }

    bool has_node(NodeId u) const { return u < out_.size(); }
    bool has_edge(NodeId u, NodeId v) const;

    NodeId add_node();

    /// Applies ops in order and returns the per-row before/after record.
    /// Strict mode rejects duplicate inserts and missing deletes; lenient
    /// mode skips them and counts the skips. A strict violation throws and
    /// leaves the ops before the offending one applied.
    RowChangeSet apply_batch(std::span<const UpdateOp> ops, bool strict = true);

private:
    std::vector<std::vector<NodeId>> out_;
    std::vector<std::vector<NodeId>> in_;
    std::size_t edge_count_ = 0;
    bool undirected_ = false;

    void insert_arc(NodeId u, NodeId v);
    bool erase_arc(NodeId u, NodeId v);
    void check_node(NodeId u) const;
};

/// Ops that undo `ops` when applied in reverse order. Node inserts/deletes
/// are not invertible (slots are never recycled) and are rejected.
std::vector<UpdateOp> invert_ops(std::span<const UpdateOp> ops);

} // namespace rwr
