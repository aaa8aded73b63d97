#pragma once

#include <cstdint>
#include <utility>
#include <vector>

namespace detnet {

// Directed acyclic sensor network.  Nodes are 1-based; node 1 is the fusion
// center.  a(i,j) == true means an arrow X_i -> X_j (node j receives node i's
// decision).  Construct through dag_from_edges, which validates acyclicity,
// connectivity and in-degree bounds.
class Dag {
public:
    int n() const { return n_; }
    bool arrow(int from, int to) const;  // 1-based
    const std::vector<int>& parents(int k) const;    // ascending
    const std::vector<int>& offspring(int k) const;  // ascending
    int in_degree(int k) const;
    const std::vector<std::pair<int, int>>& edges() const { return edges_; }

private:
    friend Dag dag_from_edges(int n, const std::vector<std::pair<int, int>>& edges);
    int n_ = 0;
    std::vector<std::pair<int, int>> edges_;        // as given, validated
    std::vector<std::vector<bool>> adj_;            // adj_[i][j], 0-based
    std::vector<std::vector<int>> parents_;         // 1-based node ids, ascending
    std::vector<std::vector<int>> offspring_;
};

// Maximum supported in-degree; threshold tables have 2^{in_degree} entries.
inline constexpr int kMaxInDegree = 20;

// Throws CyclicGraphError on cycles, ValidationError on self-loops, duplicate
// edges, out-of-range indices, disconnected graphs (n > 1), or in-degree
// beyond kMaxInDegree.
Dag dag_from_edges(int n, const std::vector<std::pair<int, int>>& edges);

const std::vector<int>& parents(const Dag& d, int k);
const std::vector<int>& offspring(const Dag& d, int k);

// Total number of thresholds needed by a rule set on d: sum over nodes of
// 2^{in_degree}.
std::uint64_t threshold_count(const Dag& d);

// Kahn order: every node after all of its parents; ties by ascending index.
std::vector<int> topological_order(const Dag& d);

// Index into node k's threshold table for the parent decisions contained in
// decision_mask (bit i-1 of the mask = decision of node i).  The lowest
// parent index occupies the least-significant bit of the result.
std::uint32_t parent_context(const Dag& d, int k, std::uint64_t decision_mask);

}  // namespace detnet
