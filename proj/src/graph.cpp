#include "rwr/graph.hpp"

#include <algorithm>
#include <unordered_set>

namespace rwr {

double row_delta_l1(const RowChange& change) {
    const double old_val = change.old_degree() == 0 ? 0.0 : 1.0 / static_cast<double>(change.old_degree());
    const double new_val = change.new_degree() == 0 ? 0.0 : 1.0 / static_cast<double>(change.new_degree());
    std::unordered_set<NodeId> new_set(change.new_neighbors.begin(), change.new_neighbors.end());
    double total = 0.0;
    for (NodeId v : change.old_neighbors) {
        if (new_set.erase(v) > 0)
            total += std::abs(new_val - old_val);
        else
            total += old_val;
    }
    total += new_val * static_cast<double>(new_set.size());
    return total;
}

double row_change_l1(const RowChangeSet& changes, std::span<const double> r_old, double c) {
    double total = 0.0;
    for (const auto& [u, change] : changes.rows) {
        if (u >= r_old.size())
            throw std::invalid_argument("row_change_l1: score vector shorter than node id " + std::to_string(u));
        total += row_delta_l1(change) * r_old[u];
    }
    return (1.0 - c) * total;
}

bool DynamicGraph::has_edge(NodeId u, NodeId v) const {
    check_node(u);
    check_node(v);
    const auto& nbrs = out_[u];
    return std::find(nbrs.begin(), nbrs.end(), v) != nbrs.end();
}

NodeId DynamicGraph::add_node() {
    out_.emplace_back();
    in_.emplace_back();
    return static_cast<NodeId>(out_.size() - 1);
}

void DynamicGraph::insert_arc(NodeId u, NodeId v) {
    out_[u].push_back(v);
    in_[v].push_back(u);
    ++edge_count_;
}

bool DynamicGraph::erase_arc(NodeId u, NodeId v) {
    auto it = std::find(out_[u].begin(), out_[u].end(), v);
    if (it == out_[u].end())
        return false;
    out_[u].erase(it);
    auto jt = std::find(in_[v].begin(), in_[v].end(), u);
    in_[v].erase(jt);
    --edge_count_;
    return true;
}

void DynamicGraph::check_node(NodeId u) const {
    if (u >= out_.size())
        throw std::out_of_range("invalid node id " + std::to_string(u) + " (node count " +
                                std::to_string(out_.size()) + ")");
}

RowChangeSet DynamicGraph::apply_batch(std::span<const UpdateOp> ops, bool strict) {
    RowChangeSet result;
    std::map<NodeId, std::vector<NodeId>> before; // first-touch snapshots
    std::unordered_set<NodeId> forced;            // rows recorded even if unchanged

    auto touch = [&](NodeId u) {
        before.try_emplace(u, out_[u]);
    };

    auto apply_insert = [&](NodeId u, NodeId v) {
        if (has_edge(u, v)) {
            if (strict)
                throw GraphUpdateError("duplicate edge insert " + std::to_string(u) + "->" + std::to_string(v));
            ++result.skipped_ops;
            return;
        }
        touch(u);
        insert_arc(u, v);
    };

    auto apply_delete = [&](NodeId u, NodeId v) {
        check_node(u);
        check_node(v);
        touch(u);
        if (!erase_arc(u, v)) {
            if (strict)
                throw GraphUpdateError("missing edge delete " + std::to_string(u) + "->" + std::to_string(v));
            ++result.skipped_ops;
        }
    };

    for (const UpdateOp& op : ops) {
        switch (op.kind) {
        case UpdateOp::Kind::InsertEdge:
            apply_insert(op.src, op.dst);
            if (undirected_ && op.src != op.dst)
                apply_insert(op.dst, op.src);
            break;
        case UpdateOp::Kind::DeleteEdge:
            apply_delete(op.src, op.dst);
            if (undirected_ && op.src != op.dst)
                apply_delete(op.dst, op.src);
            break;
        case UpdateOp::Kind::InsertNode:
            add_node();
            break;
        case UpdateOp::Kind::DeleteNode: {
            check_node(op.src);
            touch(op.src);
            forced.insert(op.src);
            // drop the node's own out-edges
            for (NodeId v : std::vector<NodeId>(out_[op.src]))
                erase_arc(op.src, v);
            // drop surviving rows' arcs into the deleted node
            for (NodeId w : std::vector<NodeId>(in_[op.src])) {
                touch(w);
                erase_arc(w, op.src);
            }
            result.deleted_nodes.push_back(op.src);
            break;
        }
        }
    }

    for (auto& [u, old_nbrs] : before) {
        std::vector<NodeId> old_sorted = old_nbrs;
        std::vector<NodeId> new_sorted = out_[u];
        std::sort(old_sorted.begin(), old_sorted.end());
        std::sort(new_sorted.begin(), new_sorted.end());
        if (old_sorted == new_sorted && !forced.contains(u))
            continue; // e.g. delete + reinsert within the batch
        result.rows.emplace(u, RowChange{std::move(old_nbrs), out_[u]});
    }
    return result;
}

std::vector<UpdateOp> invert_ops(std::span<const UpdateOp> ops) {
    std::vector<UpdateOp> inverse;
    inverse.reserve(ops.size());
    for (auto it = ops.rbegin(); it != ops.rend(); ++it) {
        switch (it->kind) {
        case UpdateOp::Kind::InsertEdge:
            inverse.push_back(UpdateOp::delete_edge(it->src, it->dst));
            break;
        case UpdateOp::Kind::DeleteEdge:
            inverse.push_back(UpdateOp::insert_edge(it->src, it->dst));
            break;
        default:
            throw std::invalid_argument("node ops are not invertible");
        }
    }
    return inverse;
}

} // namespace rwr
