#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "rwr/graph.hpp"
#include "test_support.hpp"

using namespace rwr;

namespace {

DynamicGraph make_graph(std::size_t n, std::initializer_list<std::pair<NodeId, NodeId>> edges,
                        bool undirected = false) {
    DynamicGraph g(n, undirected);
    std::vector<UpdateOp> ops;
    for (auto [u, v] : edges)
        ops.push_back(UpdateOp::insert_edge(u, v));
    g.apply_batch(ops);
    return g;
}

std::vector<NodeId> sorted(std::vector<NodeId> v) {
    std::sort(v.begin(), v.end());
    return v;
}

// row u of the normalized adjacency as a dense vector
std::vector<double> dense_row(const DynamicGraph& g, NodeId u) {
    std::vector<double> row(g.node_count(), 0.0);
    const auto& nbrs = g.out_neighbors(u);
    for (NodeId v : nbrs)
        row[v] = 1.0 / static_cast<double>(nbrs.size());
    return row;
}

void check_mirror(const DynamicGraph& g) {
    for (NodeId u = 0; u < g.node_count(); ++u) {
        for (NodeId v : g.out_neighbors(u)) {
            const auto& in = g.in_neighbors(v);
            CHECK(std::count(in.begin(), in.end(), u) == 1);
        }
        for (NodeId w : g.in_neighbors(u))
            CHECK(g.has_edge(w, u));
    }
    std::size_t total = 0;
    for (NodeId u = 0; u < g.node_count(); ++u)
        total += g.out_degree(u);
    CHECK(total == g.edge_count());
}

} // namespace

TEST_CASE("add_node appends with monotone ids") {
    DynamicGraph g(3);
    CHECK(g.add_node() == 3);
    CHECK(g.node_count() == 4);

    DynamicGraph empty;
    CHECK(empty.add_node() == 0);

    DynamicGraph five(5);
    CHECK(five.add_node() == 5);
    CHECK(five.add_node() == 6);
}

TEST_CASE("apply_batch records before/after rows") {
    auto g = make_graph(3, {{0, 1}, {0, 2}});
    const UpdateOp del = UpdateOp::delete_edge(0, 2);
    auto changes = g.apply_batch(std::span(&del, 1));
    REQUIRE(changes.rows.size() == 1);
    const RowChange& row = changes.rows.at(0);
    CHECK(row.old_degree() == 2);
    CHECK(sorted(row.old_neighbors) == std::vector<NodeId>{1, 2});
    CHECK(row.new_degree() == 1);
    CHECK(row.new_neighbors == std::vector<NodeId>{1});
}

TEST_CASE("dead-end row gaining an edge") {
    auto g = make_graph(2, {{0, 1}});
    const UpdateOp ins = UpdateOp::insert_edge(1, 0);
    auto changes = g.apply_batch(std::span(&ins, 1));
    REQUIRE(changes.rows.size() == 1);
    CHECK(changes.rows.at(1).old_degree() == 0);
    CHECK(changes.rows.at(1).new_neighbors == std::vector<NodeId>{0});
}

TEST_CASE("DeleteNode removes in-edges and records all touched rows") {
    auto g = make_graph(3, {{0, 1}, {0, 2}, {1, 2}});
    const UpdateOp del = UpdateOp::delete_node(2);
    auto changes = g.apply_batch(std::span(&del, 1));

    CHECK(g.node_count() == 3); // slot stays allocated
    CHECK(g.out_degree(2) == 0);
    CHECK(g.in_neighbors(2).empty());
    CHECK(g.edge_count() == 1);

    REQUIRE(changes.rows.size() == 3);
    CHECK(changes.rows.at(2).old_neighbors.empty());
    CHECK(changes.rows.at(2).new_neighbors.empty());
    CHECK(sorted(changes.rows.at(0).old_neighbors) == std::vector<NodeId>{1, 2});
    CHECK(changes.rows.at(0).new_neighbors == std::vector<NodeId>{1});
    CHECK(changes.rows.at(1).old_neighbors == std::vector<NodeId>{2});
    CHECK(changes.rows.at(1).new_neighbors.empty());
    CHECK(changes.deleted_nodes == std::vector<NodeId>{2});
    check_mirror(g);
}

TEST_CASE("strict mode rejects duplicate insert and missing delete") {
    auto g = make_graph(2, {{0, 1}});
    const UpdateOp dup = UpdateOp::insert_edge(0, 1);
    CHECK_THROWS_AS(g.apply_batch(std::span(&dup, 1)), GraphUpdateError);
    const UpdateOp missing = UpdateOp::delete_edge(1, 0);
    CHECK_THROWS_AS(g.apply_batch(std::span(&missing, 1)), GraphUpdateError);
    const UpdateOp bad = UpdateOp::insert_edge(0, 7);
    CHECK_THROWS_AS(g.apply_batch(std::span(&bad, 1)), std::out_of_range);
}

TEST_CASE("lenient mode counts skipped ops") {
    auto g = make_graph(2, {{0, 1}});
    std::vector<UpdateOp> ops{UpdateOp::insert_edge(0, 1), UpdateOp::delete_edge(1, 0)};
    auto changes = g.apply_batch(ops, /*strict=*/false);
    CHECK(changes.skipped_ops == 2);
    CHECK(changes.rows.empty());
}

TEST_CASE("delete+reinsert inside one batch yields no row change") {
    auto g = make_graph(3, {{0, 1}, {0, 2}});
    std::vector<UpdateOp> ops{UpdateOp::delete_edge(0, 2), UpdateOp::insert_edge(0, 2)};
    auto changes = g.apply_batch(ops);
    CHECK(changes.empty());
}

TEST_CASE("undirected ops touch both rows") {
    auto g = make_graph(3, {}, true);
    const UpdateOp ins = UpdateOp::insert_edge(0, 1);
    auto changes = g.apply_batch(std::span(&ins, 1));
    CHECK(g.edge_count() == 2);
    CHECK(g.has_edge(0, 1));
    CHECK(g.has_edge(1, 0));
    CHECK(changes.rows.size() == 2);

    // self-loop stores a single arc
    const UpdateOp loop = UpdateOp::insert_edge(2, 2);
    g.apply_batch(std::span(&loop, 1));
    CHECK(g.out_degree(2) == 1);
}

TEST_CASE("row_change_l1 hand-evaluated values") {
    const double c = 0.15;
    std::vector<double> r_old{0.1, 0.2, 0.3};

    RowChangeSet empty;
    CHECK(row_change_l1(empty, r_old, c) == 0.0);

    // old {1,2} deg 2 -> new {1} deg 1: D_uu = |1 - 1/2| + |0 - 1/2| = 1
    RowChangeSet shrink;
    shrink.rows.emplace(0, RowChange{{1, 2}, {1}});
    CHECK(row_change_l1(shrink, r_old, c) == doctest::Approx(0.85 * r_old[0]).epsilon(1e-12));

    // dead end gaining one edge: D_uu = 1
    RowChangeSet gain;
    gain.rows.emplace(2, RowChange{{}, {0}});
    CHECK(row_change_l1(gain, r_old, c) == doctest::Approx(0.85 * r_old[2]).epsilon(1e-12));

    CHECK_THROWS(row_change_l1(shrink, std::vector<double>{}, c));
}

TEST_CASE("change set matches brute-force dense row subtraction") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 40; ++trial) {
        auto g = rwr::test::random_digraph(5 + rng() % 45, 3.0, rng);
        // dense rows of the old matrix
        std::vector<std::vector<double>> old_rows(g.node_count());
        for (NodeId u = 0; u < g.node_count(); ++u)
            old_rows[u] = dense_row(g, u);

        auto ops = rwr::test::random_edge_batch(g, 1 + rng() % 10, rng);
        auto changes = g.apply_batch(ops);

        for (NodeId u = 0; u < g.node_count(); ++u) {
            std::vector<double> expect = dense_row(g, u);
            for (std::size_t j = 0; j < expect.size(); ++j)
                expect[j] -= old_rows[u][j];
            const bool any = std::any_of(expect.begin(), expect.end(),
                                         [](double x) { return x != 0.0; });
            auto it = changes.rows.find(u);
            if (!any) {
                CHECK(it == changes.rows.end());
                continue;
            }
            REQUIRE(it != changes.rows.end());
            // rebuild the delta row from the snapshots alone
            std::vector<double> rebuilt(g.node_count(), 0.0);
            const RowChange& row = it->second;
            for (NodeId v : row.old_neighbors)
                rebuilt[v] -= 1.0 / static_cast<double>(row.old_degree());
            for (NodeId v : row.new_neighbors)
                rebuilt[v] += 1.0 / static_cast<double>(row.new_degree());
            for (std::size_t j = 0; j < expect.size(); ++j)
                CHECK(rebuilt[j] == doctest::Approx(expect[j]).epsilon(1e-12));
        }
    }
}

TEST_CASE("round trip: inverse batch restores the graph") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 25; ++trial) {
        auto g = rwr::test::random_digraph(30, 2.5, rng);
        const DynamicGraph before = g;
        auto ops = rwr::test::random_edge_batch(g, 12, rng);
        g.apply_batch(ops);
        g.apply_batch(invert_ops(ops));
        for (NodeId u = 0; u < g.node_count(); ++u) {
            CHECK(sorted(g.out_neighbors(u)) == sorted(before.out_neighbors(u)));
            CHECK(sorted(g.in_neighbors(u)) == sorted(before.in_neighbors(u)));
        }
        CHECK(g.edge_count() == before.edge_count());
        check_mirror(g);
    }
}
