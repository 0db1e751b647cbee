#include "rwr/tracker.hpp"

#include <algorithm>
#include <sstream>

#include "rwr/score_io.hpp"

namespace rwr {

RwrTracker::RwrTracker(const DynamicGraph& graph, NodeId seed, Config config)
    : seed_(seed), config_(std::move(config)) {
    config_.validate();
    auto [raw, stats] = cpi_raw(graph, seed_, config_);
    r_raw_ = std::move(raw);
    stats_.push_back(stats);
}

PropagationStats RwrTracker::update(DynamicGraph& graph, std::span<const UpdateOp> ops, bool strict) {
    for (const UpdateOp& op : ops)
        if (op.kind == UpdateOp::Kind::DeleteNode && op.src == seed_)
            throw GraphUpdateError("cannot delete the tracked seed node " + std::to_string(seed_));
    RowChangeSet changes = graph.apply_batch(ops, strict);
    return apply_changes(graph, changes);
}

PropagationStats RwrTracker::apply_changes(const DynamicGraph& graph_after, const RowChangeSet& changes) {
    if (std::find(changes.deleted_nodes.begin(), changes.deleted_nodes.end(), seed_) !=
        changes.deleted_nodes.end())
        throw GraphUpdateError("cannot delete the tracked seed node " + std::to_string(seed_));
    r_raw_.resize(graph_after.node_count(), 0.0); // inserted nodes start at zero

    PropagationStats stats;
    SignedScoreVector q_offset = compute_offset_seed(changes, r_raw_, config_.c, r_raw_.size());
    try {
        auto [r_offset, prop_stats] = propagate_offset(graph_after, std::move(q_offset), config_);
        stats = prop_stats;
        // loose tolerances drift by up to epsilon/c per batch; allow the
        // accumulated bound before treating a negative entry as corruption
        const double drift =
            static_cast<double>(batches_applied_ + 2) * theoretical_error_bound(config_);
        r_raw_ = osp_merge(r_raw_, r_offset, std::max(1e-9, drift));
    } catch (const ConvergenceError&) {
        // self-heal: replace a possibly corrupt vector with a fresh run
        stats = refresh(graph_after);
        stats.refreshed_from_scratch = true;
        stats_.pop_back(); // refresh() already recorded itself
    }
    ++batches_applied_;
    if (refresh_every_ != 0 && batches_applied_ % refresh_every_ == 0) {
        PropagationStats refresh_stats = refresh(graph_after);
        stats_.pop_back();
        stats.iterations += refresh_stats.iterations;
        stats.visited_edges += refresh_stats.visited_edges;
        stats.wall_time += refresh_stats.wall_time;
        stats.refreshed_from_scratch = true;
    }
    stats_.push_back(stats);
    return stats;
}

ScoreVector RwrTracker::query() const {
    if (config_.dead_end_mode == DeadEndMode::Rescale)
        return dead_end_rescale(r_raw_);
    return r_raw_;
}

PropagationStats RwrTracker::refresh(const DynamicGraph& graph) {
    auto [raw, stats] = cpi_raw(graph, seed_, config_);
    r_raw_ = std::move(raw);
    stats_.push_back(stats);
    return stats;
}

void RwrTracker::save_checkpoint(std::ostream& out) const {
    char header[160];
    std::snprintf(header, sizeof(header), "#rwr-checkpoint seed=%u c=%.17g epsilon=%.17g batches=%zu\n",
                  seed_, config_.c, config_.epsilon, batches_applied_);
    out << header;
    write_score_dump(out, r_raw_);
}

RwrTracker RwrTracker::load_checkpoint(std::istream& in, const DynamicGraph& graph) {
    std::string header;
    if (!std::getline(in, header) || header.rfind("#rwr-checkpoint", 0) != 0)
        throw std::runtime_error("not a tracker checkpoint (missing #rwr-checkpoint header)");

    RwrTracker tracker;
    std::istringstream fields(header.substr(15));
    std::string token;
    while (fields >> token) {
        const auto eq = token.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error("malformed checkpoint header token: " + token);
        const std::string key = token.substr(0, eq);
        const std::string value = token.substr(eq + 1);
        if (key == "seed")
            tracker.seed_ = static_cast<NodeId>(std::stoul(value));
        else if (key == "c")
            tracker.config_.c = std::stod(value);
        else if (key == "epsilon")
            tracker.config_.epsilon = std::stod(value);
        else if (key == "batches")
            tracker.batches_applied_ = std::stoul(value);
        else
            throw std::runtime_error("unknown checkpoint header key: " + key);
    }
    tracker.config_.validate();
    tracker.r_raw_ = read_score_dump(in);
    if (tracker.r_raw_.size() != graph.node_count())
        throw std::runtime_error("checkpoint node count " + std::to_string(tracker.r_raw_.size()) +
                                 " does not match graph node count " +
                                 std::to_string(graph.node_count()));
    if (!graph.has_node(tracker.seed_))
        throw std::runtime_error("checkpoint seed is not a node of the graph");
    return tracker;
}

} // namespace rwr
