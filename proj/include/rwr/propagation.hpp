#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "rwr/graph.hpp"

namespace rwr {

// Dense per-node score arrays. ScoreVector entries are non-negative RWR
// scores; SignedScoreVector holds offset vectors whose entries may be
// negative after deletions.
using ScoreVector = std::vector<double>;
using SignedScoreVector = std::vector<double>;

double l1_norm(std::span<const double> v);

enum class DeadEndMode { Rescale, None };

struct Config {
    double c = 0.15;
    double epsilon = 1e-9;
    std::size_t max_iterations = 0; // 0 = auto (see effective_max_iterations)
    DeadEndMode dead_end_mode = DeadEndMode::Rescale;
    bool parallel = false; // OpenMP gather kernel; off = serial, bit-deterministic

    void validate() const;
};

struct PropagationStats {
    std::size_t iterations = 0;
    std::uint64_t visited_edges = 0;
    double q_offset_l1 = 0.0;
    double wall_time = 0.0;             // seconds, propagation only
    bool refreshed_from_scratch = false; // tracker self-heal marker
};

/// Thrown when the iteration cap is hit before the interim mass drops
/// below epsilon. Carries the stats gathered so far.
class ConvergenceError : public std::runtime_error {
public:
    ConvergenceError(std::string msg, PropagationStats partial)
        : std::runtime_error(std::move(msg)), stats(partial) {}
    PropagationStats stats;
};

/// Iteration ceiling ceil(log_{1-c}(epsilon/2)), clamped at zero.
std::size_t theoretical_iteration_bound(const Config& config);

/// Worst-case L1 error of the merged score vector: epsilon / c.
double theoretical_error_bound(const Config& config);

/// Iteration cap actually enforced: max_iterations if set, otherwise
/// max(1000, 10 * theoretical_iteration_bound).
std::size_t effective_max_iterations(const Config& config);

/// One propagation step y = (1-c) * A~^T * x over the row-normalized
/// adjacency of `graph`. Dead-end rows contribute nothing. Adds
/// sum of out_degree(u) over nonzero x[u] to stats->visited_edges.
SignedScoreVector spmv_transpose_normalized(const DynamicGraph& graph, std::span<const double> x,
                                            double c, PropagationStats* stats = nullptr,
                                            bool parallel = false);

/// Cumulative power iteration from a caller-supplied seed mass vector:
/// accumulates x^(i) = ((1-c) A~^T)^i q until the interim L1 drops to
/// epsilon (the guard is checked on every interim vector including q).
/// Returns the raw accumulation; no dead-end rescaling.
SignedScoreVector propagate_cumulative(const DynamicGraph& graph, SignedScoreVector q,
                                       const Config& config, PropagationStats& stats);

/// Full RWR from scratch for one seed. Under DeadEndMode::Rescale the raw
/// accumulation is scaled to unit L1.
std::pair<ScoreVector, PropagationStats> cpi(const DynamicGraph& graph, NodeId seed,
                                             const Config& config);

/// Raw (unrescaled) CPI accumulation; the quantity the tracker stores.
std::pair<ScoreVector, PropagationStats> cpi_raw(const DynamicGraph& graph, NodeId seed,
                                                 const Config& config);

/// Offset seed q_offset = (1-c) * (B~ - A~)^T * r_old, built row by row
/// from the change set. Cost is proportional to the changed rows' degrees.
SignedScoreVector compute_offset_seed(const RowChangeSet& changes, std::span<const double> r_old_raw,
                                      double c, std::size_t node_count);

/// Propagates an offset seed on the updated graph, accumulating all terms
/// including the seed itself.
std::pair<SignedScoreVector, PropagationStats> propagate_offset(const DynamicGraph& graph_after,
                                                                SignedScoreVector q_offset,
                                                                const Config& config);

/// r_old + r_offset with a tolerance for floating-point cancellation:
/// entries in [-negative_tolerance, 0) clamp to zero, anything lower
/// throws. Loose-epsilon callers widen the tolerance to their accumulated
/// error bound; the default only absorbs rounding noise.
ScoreVector osp_merge(std::span<const double> r_old_raw, std::span<const double> r_offset,
                      double negative_tolerance = 1e-9);

/// Scales a raw accumulation to unit L1 (exact dead-end correction).
ScoreVector dead_end_rescale(std::span<const double> r_temp);

} // namespace rwr
