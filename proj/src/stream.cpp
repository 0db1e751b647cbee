#include "rwr/stream.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <unordered_set>

namespace rwr {

namespace {

[[noreturn]] void fail_line(std::size_t line_no, const std::string& what, const std::string& line) {
    throw ParseError("line " + std::to_string(line_no) + ": " + what + ": " + line);
}

bool skip_line(const std::string& line) {
    const auto pos = line.find_first_not_of(" \t\r");
    return pos == std::string::npos || line[pos] == '#';
}

} // namespace

NodeId EdgeStream::max_node_id() const {
    NodeId max_id = 0;
    for (const auto& [u, v] : edges)
        max_id = std::max({max_id, u, v});
    return max_id;
}

EdgeStream parse_edge_list(std::istream& in) {
    EdgeStream stream;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (skip_line(line))
            continue;
        std::istringstream fields(line);
        long long u, v;
        std::string extra;
        if (!(fields >> u >> v))
            fail_line(line_no, "expected `src dst`", line);
        if (fields >> extra)
            fail_line(line_no, "trailing token", line);
        if (u < 0 || v < 0)
            fail_line(line_no, "negative node id", line);
        stream.edges.emplace_back(static_cast<NodeId>(u), static_cast<NodeId>(v));
    }
    return stream;
}

EdgeStream parse_edge_list_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw ParseError("cannot open: " + path);
    return parse_edge_list(in);
}

void serialize_edge_list(std::ostream& out, const EdgeStream& stream) {
    for (const auto& [u, v] : stream.edges)
        out << u << ' ' << v << '\n';
}

std::vector<UpdateOp> parse_update_stream(std::istream& in) {
    std::vector<UpdateOp> ops;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (skip_line(line))
            continue;
        std::istringstream fields(line);
        std::string tag;
        fields >> tag;
        long long u = -1, v = -1;
        std::string extra;
        if (tag == "+" || tag == "-") {
            if (!(fields >> u >> v) || (fields >> extra) || u < 0 || v < 0)
                fail_line(line_no, "expected `" + tag + " u v`", line);
            ops.push_back(tag == "+" ? UpdateOp::insert_edge(static_cast<NodeId>(u), static_cast<NodeId>(v))
                                     : UpdateOp::delete_edge(static_cast<NodeId>(u), static_cast<NodeId>(v)));
        } else if (tag == "+n") {
            if (fields >> extra)
                fail_line(line_no, "expected `+n`", line);
            ops.push_back(UpdateOp::insert_node());
        } else if (tag == "-n") {
            if (!(fields >> u) || (fields >> extra) || u < 0)
                fail_line(line_no, "expected `-n u`", line);
            ops.push_back(UpdateOp::delete_node(static_cast<NodeId>(u)));
        } else {
            fail_line(line_no, "unknown op `" + tag + "`", line);
        }
    }
    return ops;
}

std::vector<UpdateOp> parse_update_stream_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw ParseError("cannot open: " + path);
    return parse_update_stream(in);
}

SnapshotSplit make_snapshots(const EdgeStream& stream, const SnapshotPlan& plan) {
    if (!(plan.initial_fraction > 0.0 && plan.initial_fraction < 1.0))
        throw std::invalid_argument("initial_fraction must lie in (0,1)");
    if (plan.snapshot_count < 1)
        throw std::invalid_argument("snapshot_count must be at least 1");

    std::vector<std::pair<NodeId, NodeId>> shuffled = stream.edges;
    std::mt19937_64 rng(plan.rng_seed);
    std::shuffle(shuffled.begin(), shuffled.end(), rng);

    const std::size_t initial =
        static_cast<std::size_t>(std::floor(plan.initial_fraction * static_cast<double>(shuffled.size())));
    const std::size_t remaining = shuffled.size() - initial;
    if (initial < 1 || remaining < plan.snapshot_count)
        throw std::invalid_argument("stream too short for the snapshot plan (" +
                                    std::to_string(stream.size()) + " edges)");

    SnapshotSplit split;
    split.initial_edges.assign(shuffled.begin(), shuffled.begin() + static_cast<std::ptrdiff_t>(initial));
    const std::size_t per_batch = remaining / plan.snapshot_count;
    std::size_t cursor = initial;
    for (std::size_t b = 0; b < plan.snapshot_count; ++b) {
        const std::size_t end = (b + 1 == plan.snapshot_count) ? shuffled.size() : cursor + per_batch;
        std::vector<UpdateOp> batch;
        batch.reserve(end - cursor);
        for (std::size_t i = cursor; i < end; ++i)
            batch.push_back(UpdateOp::insert_edge(shuffled[i].first, shuffled[i].second));
        split.batches.push_back(std::move(batch));
        cursor = end;
    }
    return split;
}

std::vector<UpdateOp> random_delete_batch(const DynamicGraph& graph, std::size_t count,
                                          std::uint64_t rng_seed) {
    std::vector<std::pair<NodeId, NodeId>> edges;
    for (NodeId u = 0; u < graph.node_count(); ++u)
        for (NodeId v : graph.out_neighbors(u))
            if (!graph.undirected() || u <= v)
                edges.emplace_back(u, v);
    if (count > edges.size())
        throw std::invalid_argument("delete count " + std::to_string(count) + " exceeds edge count " +
                                    std::to_string(edges.size()));
    std::vector<std::pair<NodeId, NodeId>> sampled;
    std::mt19937_64 rng(rng_seed);
    std::sample(edges.begin(), edges.end(), std::back_inserter(sampled), count, rng);
    std::vector<UpdateOp> ops;
    ops.reserve(sampled.size());
    for (const auto& [u, v] : sampled)
        ops.push_back(UpdateOp::delete_edge(u, v));
    return ops;
}

NodeId IdMap::get_or_add(std::uint64_t original) {
    auto [it, inserted] = to_dense_.try_emplace(original, static_cast<NodeId>(originals_.size()));
    if (inserted)
        originals_.push_back(original);
    return it->second;
}

void IdMap::write_sidecar(std::ostream& out) const {
    for (std::size_t dense = 0; dense < originals_.size(); ++dense)
        out << originals_[dense] << ' ' << dense << '\n';
}

BuildResult build_graph(const EdgeStream& stream, bool undirected, std::size_t min_node_count) {
    std::size_t n = min_node_count;
    if (!stream.edges.empty())
        n = std::max<std::size_t>(n, stream.max_node_id() + 1);
    BuildResult result{DynamicGraph(n, undirected), 0};
    for (const auto& [u, v] : stream.edges) {
        if (result.graph.has_edge(u, v)) {
            ++result.duplicate_edges_skipped;
            continue;
        }
        const UpdateOp op = UpdateOp::insert_edge(u, v);
        result.graph.apply_batch(std::span(&op, 1), /*strict=*/false);
    }
    return result;
}

EdgeStream generate_power_law_stream(std::size_t node_count, std::size_t edge_count,
                                     std::uint64_t rng_seed, double exponent) {
    if (node_count < 2)
        throw std::invalid_argument("need at least two nodes");
    std::vector<double> weights(node_count);
    for (std::size_t i = 0; i < node_count; ++i)
        weights[i] = std::pow(static_cast<double>(i + 1), -exponent);
    std::discrete_distribution<std::size_t> pick(weights.begin(), weights.end());
    std::mt19937_64 rng(rng_seed);

    EdgeStream stream;
    std::unordered_set<std::uint64_t> seen;
    const std::size_t max_attempts = edge_count * 100;
    std::size_t attempts = 0;
    while (stream.edges.size() < edge_count) {
        if (++attempts > max_attempts)
            throw std::runtime_error("edge target too dense for the node count");
        const NodeId u = static_cast<NodeId>(pick(rng));
        const NodeId v = static_cast<NodeId>(pick(rng));
        if (u == v)
            continue;
        const std::uint64_t key = (static_cast<std::uint64_t>(u) << 32) | v;
        if (!seen.insert(key).second)
            continue;
        stream.edges.emplace_back(u, v);
    }
    return stream;
}

} // namespace rwr
