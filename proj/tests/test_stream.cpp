#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>
#include <sstream>

#include "rwr/stream.hpp"

using namespace rwr;

TEST_CASE("parse_edge_list") {
    std::istringstream in("# comment\n0 1\n1 2\n");
    auto stream = parse_edge_list(in);
    REQUIRE(stream.size() == 2);
    CHECK(stream.edges[0] == std::pair<NodeId, NodeId>{0, 1});
    CHECK(stream.edges[1] == std::pair<NodeId, NodeId>{1, 2});

    std::istringstream tabs("0\t1\n");
    CHECK(parse_edge_list(tabs).edges[0] == std::pair<NodeId, NodeId>{0, 1});

    std::istringstream blank("\n0 1\n\n");
    CHECK(parse_edge_list(blank).size() == 1);

    std::istringstream arity("0 1 2\n");
    CHECK_THROWS_WITH_AS(parse_edge_list(arity), doctest::Contains("line 1"), ParseError);

    std::istringstream garbage("0 x\n");
    CHECK_THROWS_AS(parse_edge_list(garbage), ParseError);
}

TEST_CASE("edge list serialize/parse round trip") {
    EdgeStream stream;
    stream.edges = {{3, 1}, {0, 7}, {3, 1}};
    std::stringstream buffer;
    serialize_edge_list(buffer, stream);
    auto parsed = parse_edge_list(buffer);
    CHECK(parsed.edges == stream.edges);
}

TEST_CASE("parse_update_stream") {
    std::istringstream in("+ 0 1\n- 0 1\n");
    auto ops = parse_update_stream(in);
    REQUIRE(ops.size() == 2);
    CHECK(ops[0] == UpdateOp::insert_edge(0, 1));
    CHECK(ops[1] == UpdateOp::delete_edge(0, 1));

    std::istringstream nodes("+n\n-n 5\n");
    auto node_ops = parse_update_stream(nodes);
    CHECK(node_ops[0].kind == UpdateOp::Kind::InsertNode);
    CHECK(node_ops[1] == UpdateOp::delete_node(5));

    std::istringstream bad("* 0 1\n");
    CHECK_THROWS_AS(parse_update_stream(bad), ParseError);
}

TEST_CASE("make_snapshots splits deterministically") {
    EdgeStream stream;
    for (NodeId i = 0; i < 100; ++i)
        stream.edges.emplace_back(i, (i + 1) % 100);
    SnapshotPlan plan{0.5, 10, 7};

    auto split = make_snapshots(stream, plan);
    CHECK(split.initial_edges.size() == 50);
    REQUIRE(split.batches.size() == 10);
    for (const auto& batch : split.batches)
        CHECK(batch.size() == 5);

    auto split2 = make_snapshots(stream, plan);
    CHECK(split2.initial_edges == split.initial_edges);
    for (std::size_t b = 0; b < 10; ++b)
        CHECK(split2.batches[b] == split.batches[b]);

    // partition: initial + batches cover the stream exactly once
    std::multiset<std::pair<NodeId, NodeId>> seen(split.initial_edges.begin(),
                                                  split.initial_edges.end());
    for (const auto& batch : split.batches)
        for (const UpdateOp& op : batch)
            seen.emplace(op.src, op.dst);
    std::multiset<std::pair<NodeId, NodeId>> expect(stream.edges.begin(), stream.edges.end());
    CHECK(seen == expect);
}

TEST_CASE("make_snapshots remainder goes to the last batch") {
    EdgeStream stream;
    for (NodeId i = 0; i < 101; ++i)
        stream.edges.emplace_back(i, i + 1);
    auto split = make_snapshots(stream, SnapshotPlan{0.5, 10, 1});
    CHECK(split.initial_edges.size() == 50);
    for (std::size_t b = 0; b < 9; ++b)
        CHECK(split.batches[b].size() == 5);
    CHECK(split.batches[9].size() == 6);
}

TEST_CASE("make_snapshots rejects short streams") {
    EdgeStream stream;
    stream.edges = {{0, 1}, {1, 2}};
    CHECK_THROWS(make_snapshots(stream, SnapshotPlan{0.5, 10, 0}));
}

TEST_CASE("random_delete_batch samples distinct existing edges") {
    EdgeStream stream;
    for (NodeId i = 0; i < 20; ++i)
        for (NodeId j = 0; j < 20; ++j)
            if (i != j && (i + j) % 3 == 0)
                stream.edges.emplace_back(i, j);
    auto graph = build_graph(stream, false).graph;

    auto ops = random_delete_batch(graph, 15, 5);
    CHECK(ops.size() == 15);
    std::set<std::pair<NodeId, NodeId>> distinct;
    for (const UpdateOp& op : ops) {
        CHECK(op.kind == UpdateOp::Kind::DeleteEdge);
        CHECK(graph.has_edge(op.src, op.dst));
        CHECK(distinct.emplace(op.src, op.dst).second);
    }

    CHECK(random_delete_batch(graph, 0, 1).empty());
    auto all = random_delete_batch(graph, graph.edge_count(), 1);
    CHECK(all.size() == graph.edge_count());
    CHECK_THROWS(random_delete_batch(graph, graph.edge_count() + 1, 1));

    auto same = random_delete_batch(graph, 15, 5);
    CHECK(same == ops); // deterministic per seed
}

TEST_CASE("build_graph skips duplicates and keeps self-loops") {
    EdgeStream stream;
    stream.edges = {{0, 1}, {0, 1}, {2, 2}, {1, 0}};
    auto result = build_graph(stream, false);
    CHECK(result.duplicate_edges_skipped == 1);
    CHECK(result.graph.edge_count() == 3);
    CHECK(result.graph.has_edge(2, 2));
}

TEST_CASE("id map compacts sparse ids in first-seen order") {
    IdMap ids;
    CHECK(ids.get_or_add(1000) == 0);
    CHECK(ids.get_or_add(5) == 1);
    CHECK(ids.get_or_add(1000) == 0);
    CHECK(ids.size() == 2);
    CHECK(ids.original(1) == 5);

    std::stringstream out;
    ids.write_sidecar(out);
    CHECK(out.str() == "1000 0\n5 1\n");
}

TEST_CASE("power-law stream generator") {
    auto stream = generate_power_law_stream(500, 2000, 11);
    CHECK(stream.size() == 2000);
    std::set<std::pair<NodeId, NodeId>> distinct(stream.edges.begin(), stream.edges.end());
    CHECK(distinct.size() == 2000);
    for (const auto& [u, v] : stream.edges) {
        CHECK(u != v);
        CHECK(u < 500);
        CHECK(v < 500);
    }
    auto again = generate_power_law_stream(500, 2000, 11);
    CHECK(again.edges == stream.edges);

    // heavier mass on low ids
    auto graph = build_graph(stream, false).graph;
    std::size_t head = 0;
    for (NodeId u = 0; u < 50; ++u)
        head += graph.out_degree(u);
    CHECK(head > 2000 / 10);
}
