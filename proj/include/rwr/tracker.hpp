#pragma once

#include <iosfwd>

#include "rwr/graph.hpp"
#include "rwr/propagation.hpp"

namespace rwr {

/// Per-seed RWR state across graph updates. Holds the raw (unrescaled)
/// accumulation for the current graph; dead-end rescaling happens only in
/// query(). Confine each tracker to one thread; several trackers may share
/// an immutable graph snapshot.
class RwrTracker {
public:
    RwrTracker(const DynamicGraph& graph, NodeId seed, Config config);

    NodeId seed() const { return seed_; }
    const Config& config() const { return config_; }
    const ScoreVector& raw_scores() const { return r_raw_; }
    std::size_t batches_applied() const { return batches_applied_; }
    const std::vector<PropagationStats>& cumulative_stats() const { return stats_; }

    /// Refresh from scratch every N batches (0 = never).
    void set_refresh_every(std::size_t n) { refresh_every_ = n; }

    /// Mutates the graph via apply_batch and folds the change in.
    PropagationStats update(DynamicGraph& graph, std::span<const UpdateOp> ops, bool strict = true);

    /// Folds in a batch someone else already applied to the graph. Used
    /// when several trackers share one mutation.
    PropagationStats apply_changes(const DynamicGraph& graph_after, const RowChangeSet& changes);

    /// Current scores: rescaled to unit L1 under DeadEndMode::Rescale,
    /// otherwise a copy of the raw accumulation.
    ScoreVector query() const;

    /// From-scratch CPI on the current graph, replacing the tracked state.
    PropagationStats refresh(const DynamicGraph& graph);

    void save_checkpoint(std::ostream& out) const;
    static RwrTracker load_checkpoint(std::istream& in, const DynamicGraph& graph);

private:
    RwrTracker() = default;

    NodeId seed_ = 0;
    Config config_;
    ScoreVector r_raw_;
    std::size_t batches_applied_ = 0;
    std::size_t refresh_every_ = 0;
    std::vector<PropagationStats> stats_;
};

} // namespace rwr
