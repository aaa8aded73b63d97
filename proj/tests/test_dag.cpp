#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <utility>
#include <vector>

#include "detnet/dag.hpp"
#include "detnet/errors.hpp"

using namespace detnet;

namespace {

// The 11-sensor example network used across the experiments.
std::vector<std::pair<int, int>> acyclic11_edges() {
    return {{2, 7}, {3, 1}, {4, 1}, {4, 3}, {5, 7}, {6, 3}, {7, 1},
            {7, 3}, {7, 6}, {8, 9}, {9, 4}, {10, 5}, {11, 6}, {11, 9}};
}

// The canonical 11-node binary tree: 2,3 -> 1; 4,5 -> 2; 6,7 -> 3;
// 8,9 -> 4; 10,11 -> 5.
std::vector<std::pair<int, int>> tree11_edges() {
    return {{2, 1}, {3, 1}, {4, 2}, {5, 2}, {6, 3}, {7, 3}, {8, 4}, {9, 4}, {10, 5}, {11, 5}};
}

}  // namespace

TEST_CASE("construction rejects malformed inputs") {
    CHECK_THROWS_AS(dag_from_edges(0, {}), ValidationError);
    CHECK_THROWS_AS(dag_from_edges(2, {{1, 3}}), ValidationError);   // out of range
    CHECK_THROWS_AS(dag_from_edges(2, {{2, 2}}), ValidationError);   // self loop
    CHECK_THROWS_AS(dag_from_edges(2, {{2, 1}, {2, 1}}), ValidationError);  // duplicate
    CHECK_THROWS_AS(dag_from_edges(2, {}), ValidationError);         // disconnected
    CHECK_THROWS_AS(dag_from_edges(4, {{2, 1}, {3, 4}}), ValidationError);  // two components
    CHECK_THROWS_AS(dag_from_edges(3, {{2, 3}, {3, 2}, {2, 1}}), CyclicGraphError);
    CHECK_THROWS_AS(dag_from_edges(4, {{2, 3}, {3, 4}, {4, 2}, {2, 1}}), CyclicGraphError);
    CHECK_NOTHROW(dag_from_edges(1, {}));
    CHECK_NOTHROW(dag_from_edges(2, {{2, 1}}));
}

TEST_CASE("in-degree cap guards threshold-table blowup") {
    const int n = kMaxInDegree + 2;
    std::vector<std::pair<int, int>> edges;
    for (int k = 2; k <= n; ++k) edges.push_back({k, 1});
    CHECK_THROWS_AS(dag_from_edges(n, edges), ValidationError);
    edges.pop_back();  // in-degree exactly kMaxInDegree is allowed
    CHECK_NOTHROW(dag_from_edges(n - 1, edges));
}

TEST_CASE("adjacency, parents, and offspring of the 11-node example") {
    const Dag d = dag_from_edges(11, acyclic11_edges());
    CHECK(d.n() == 11);
    CHECK(d.edges().size() == 14);
    CHECK(d.arrow(2, 7));
    CHECK_FALSE(d.arrow(7, 2));
    CHECK_FALSE(d.arrow(1, 3));
    CHECK(parents(d, 7) == std::vector<int>{2, 5});
    CHECK(offspring(d, 7) == std::vector<int>{1, 3, 6});
    CHECK(parents(d, 1) == std::vector<int>{3, 4, 7});
    CHECK(parents(d, 2).empty());
    CHECK(d.in_degree(3) == 3);   // 4, 6, 7
    CHECK(d.in_degree(9) == 2);   // 8, 11
    CHECK_THROWS_AS(d.arrow(0, 1), ValidationError);
    CHECK_THROWS_AS(parents(d, 12), ValidationError);
}

TEST_CASE("threshold-table totals") {
    CHECK(threshold_count(dag_from_edges(11, acyclic11_edges())) == 36);
    CHECK(threshold_count(dag_from_edges(11, tree11_edges())) == 26);
    CHECK(threshold_count(dag_from_edges(1, {})) == 1);
    CHECK(threshold_count(dag_from_edges(2, {{2, 1}})) == 3);
}

TEST_CASE("topological order puts every node after its parents, deterministically") {
    for (const auto& edges : {acyclic11_edges(), tree11_edges()}) {
        const Dag d = dag_from_edges(11, edges);
        const auto order = topological_order(d);
        REQUIRE(order.size() == 11);
        std::vector<int> pos(12, -1);
        for (int i = 0; i < 11; ++i) pos[order[i]] = i;
        for (int k = 1; k <= 11; ++k) {
            CHECK(pos[k] >= 0);
            for (int p : parents(d, k)) CHECK(pos[p] < pos[k]);
        }
        CHECK(order == topological_order(d));  // stable across calls
    }
    // Lowest ready index first.
    const Dag chain = dag_from_edges(3, {{3, 2}, {2, 1}});
    CHECK(topological_order(chain) == std::vector<int>{3, 2, 1});
}

TEST_CASE("parent pattern index uses the lowest parent as the least-significant bit") {
    const Dag d = dag_from_edges(11, acyclic11_edges());
    // Node 1 has parents 3, 4, 7 -> bits 0, 1, 2 of the pattern.
    CHECK(parent_context(d, 1, 0) == 0);
    CHECK(parent_context(d, 1, std::uint64_t{1} << 2) == 1);       // node 3 decided 1
    CHECK(parent_context(d, 1, std::uint64_t{1} << 3) == 2);       // node 4 decided 1
    CHECK(parent_context(d, 1, std::uint64_t{1} << 6) == 4);       // node 7 decided 1
    CHECK(parent_context(d, 1, (std::uint64_t{1} << 2) | (std::uint64_t{1} << 6)) == 5);
    // Nodes without parents always see pattern 0.
    CHECK(parent_context(d, 2, ~std::uint64_t{0}) == 0);
    // Node 7 has parents 2, 5.
    CHECK(parent_context(d, 7, std::uint64_t{1} << 1) == 1);
    CHECK(parent_context(d, 7, std::uint64_t{1} << 4) == 2);
}
