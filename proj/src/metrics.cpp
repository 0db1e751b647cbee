#include "rwr/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <nlohmann/json.hpp>

namespace rwr {

double l1_error(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size())
        throw std::invalid_argument("l1_error: length mismatch");
    double total = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        total += std::abs(a[i] - b[i]);
    return total;
}

namespace {

// average (fractional) ranks, 1-based
std::vector<double> rank_transform(std::span<const double> values) {
    std::vector<std::size_t> order(values.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t i, std::size_t j) { return values[i] < values[j]; });
    std::vector<double> ranks(values.size());
    std::size_t i = 0;
    while (i < order.size()) {
        std::size_t j = i;
        while (j + 1 < order.size() && values[order[j + 1]] == values[order[i]])
            ++j;
        const double avg = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
        for (std::size_t k = i; k <= j; ++k)
            ranks[order[k]] = avg;
        i = j + 1;
    }
    return ranks;
}

double pearson(std::span<const double> x, std::span<const double> y) {
    const double n = static_cast<double>(x.size());
    const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
    const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = x[i] - mx;
        const double dy = y[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx == 0.0 || syy == 0.0)
        throw std::domain_error("spearman undefined: zero rank variance");
    return sxy / std::sqrt(sxx * syy);
}

} // namespace

double spearman(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size())
        throw std::invalid_argument("spearman: length mismatch");
    if (a.size() < 2)
        throw std::invalid_argument("spearman: need at least two entries");
    const std::vector<double> ra = rank_transform(a);
    const std::vector<double> rb = rank_transform(b);
    return std::clamp(pearson(ra, rb), -1.0, 1.0);
}

ScoreVector exact_oracle(const DynamicGraph& graph, NodeId seed, double c, DeadEndMode mode) {
    const std::size_t n = graph.node_count();
    if (n > 5000)
        throw std::invalid_argument("exact_oracle: dense solve capped at 5000 nodes");
    if (!graph.has_node(seed))
        throw std::out_of_range("exact_oracle: invalid seed");

    // M = I - (1-c) A~^T, column u of A~^T holds row u of A~
    std::vector<double> m(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        m[i * n + i] = 1.0;
    for (NodeId u = 0; u < n; ++u) {
        const auto& nbrs = graph.out_neighbors(u);
        if (nbrs.empty())
            continue;
        const double w = (1.0 - c) / static_cast<double>(nbrs.size());
        for (NodeId v : nbrs)
            m[static_cast<std::size_t>(v) * n + u] -= w;
    }
    std::vector<double> rhs(n, 0.0);
    rhs[seed] = c;

    // Gaussian elimination with partial pivoting
    std::vector<std::size_t> piv(n);
    std::iota(piv.begin(), piv.end(), 0);
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t best = col;
        for (std::size_t row = col + 1; row < n; ++row)
            if (std::abs(m[row * n + col]) > std::abs(m[best * n + col]))
                best = row;
        if (best != col) {
            for (std::size_t k = 0; k < n; ++k)
                std::swap(m[col * n + k], m[best * n + k]);
            std::swap(rhs[col], rhs[best]);
        }
        const double pivot = m[col * n + col];
        if (pivot == 0.0)
            throw std::runtime_error("exact_oracle: singular system");
        for (std::size_t row = col + 1; row < n; ++row) {
            const double factor = m[row * n + col] / pivot;
            if (factor == 0.0)
                continue;
            for (std::size_t k = col; k < n; ++k)
                m[row * n + k] -= factor * m[col * n + k];
            rhs[row] -= factor * rhs[col];
        }
    }
    ScoreVector r(n, 0.0);
    for (std::size_t row = n; row-- > 0;) {
        double acc = rhs[row];
        for (std::size_t k = row + 1; k < n; ++k)
            acc -= m[row * n + k] * r[k];
        r[row] = acc / m[row * n + row];
    }
    if (mode == DeadEndMode::Rescale)
        r = dead_end_rescale(r);
    return r;
}

BoundCheck check_bounds(const PropagationStats& stats, const Config& config) {
    const std::size_t bound = theoretical_iteration_bound(config);
    BoundCheck check;
    check.iterations_ok = stats.iterations <= bound;
    check.note = "iterations " + std::to_string(stats.iterations) + " vs bound " + std::to_string(bound);
    return check;
}

ComparisonReport compare_scores(std::span<const double> approx, std::span<const double> exact,
                                const Config& config, const PropagationStats& stats) {
    ComparisonReport report;
    report.raw_l1_error = l1_error(approx, exact);
    report.l1_error = l1_error(dead_end_rescale(approx), dead_end_rescale(exact));
    try {
        report.spearman = spearman(approx, exact);
    } catch (const std::domain_error&) {
        report.spearman = std::numeric_limits<double>::quiet_NaN();
    }
    report.iterations = stats.iterations;
    report.visited_edges = stats.visited_edges;
    report.wall_time = stats.wall_time;
    report.bound_epsilon_over_c = theoretical_error_bound(config);
    report.bound_satisfied = report.raw_l1_error <= report.bound_epsilon_over_c;
    return report;
}

std::string ComparisonReport::to_json() const {
    nlohmann::ordered_json j;
    j["l1_error"] = l1_error;
    if (std::isnan(spearman))
        j["spearman"] = nullptr;
    else
        j["spearman"] = spearman;
    j["raw_l1_error"] = raw_l1_error;
    j["iterations"] = iterations;
    j["visited_edges"] = visited_edges;
    j["wall_time"] = wall_time;
    j["bound_epsilon_over_c"] = bound_epsilon_over_c;
    j["bound_satisfied"] = bound_satisfied;
    return j.dump();
}

} // namespace rwr
