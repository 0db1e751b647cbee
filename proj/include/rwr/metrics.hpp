#pragma once

#include <string>

#include "rwr/graph.hpp"
#include "rwr/propagation.hpp"

namespace rwr {

struct ComparisonReport {
    double l1_error = 0.0;
    double spearman = 0.0; // NaN when undefined (zero rank variance)
    double raw_l1_error = 0.0;
    std::size_t iterations = 0;
    std::uint64_t visited_edges = 0;
    double wall_time = 0.0;
    double bound_epsilon_over_c = 0.0;
    bool bound_satisfied = false;

    /// One JSON object, keys in declaration order.
    std::string to_json() const;
};

double l1_error(std::span<const double> a, std::span<const double> b);

/// Spearman rank correlation with average ranks for ties. Throws
/// std::domain_error when either input has zero rank variance.
double spearman(std::span<const double> a, std::span<const double> b);

/// Exact RWR by dense direct solve of (I - (1-c) A~^T) r = c e_seed.
/// Shares no iteration code with the propagation engine. Dead-end rows are
/// zero rows; Rescale mode normalizes the solution to unit L1.
ScoreVector exact_oracle(const DynamicGraph& graph, NodeId seed, double c,
                         DeadEndMode mode = DeadEndMode::None);

struct BoundCheck {
    bool iterations_ok = false;
    std::string note;
};
BoundCheck check_bounds(const PropagationStats& stats, const Config& config);

ComparisonReport compare_scores(std::span<const double> approx, std::span<const double> exact,
                                const Config& config, const PropagationStats& stats = {});

} // namespace rwr
