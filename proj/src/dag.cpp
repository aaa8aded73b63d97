#include "detnet/dag.hpp"

#include <algorithm>
#include <set>
#include <string>

#include "detnet/errors.hpp"

namespace detnet {

namespace {

void check_node(const Dag& d, int k) {
    if (k < 1 || k > d.n())
        throw ValidationError("node index " + std::to_string(k) + " out of range 1.." +
                              std::to_string(d.n()));
}

}  // namespace

bool Dag::arrow(int from, int to) const {
    check_node(*this, from);
    check_node(*this, to);
    return adj_[from - 1][to - 1];
}

const std::vector<int>& Dag::parents(int k) const {
    check_node(*this, k);
    return parents_[k - 1];
}

const std::vector<int>& Dag::offspring(int k) const {
    check_node(*this, k);
    return offspring_[k - 1];
}

int Dag::in_degree(int k) const { return static_cast<int>(parents(k).size()); }

Dag dag_from_edges(int n, const std::vector<std::pair<int, int>>& edges) {
    if (n < 1) throw ValidationError("node count must be >= 1, got " + std::to_string(n));
    Dag d;
    d.n_ = n;
    d.adj_.assign(n, std::vector<bool>(n, false));
    d.parents_.assign(n, {});
    d.offspring_.assign(n, {});

    std::set<std::pair<int, int>> seen;
    for (const auto& [from, to] : edges) {
        if (from < 1 || from > n || to < 1 || to > n)
            throw ValidationError("edge (" + std::to_string(from) + "," + std::to_string(to) +
                                  ") out of range 1.." + std::to_string(n));
        if (from == to)
            throw ValidationError("self-loop at node " + std::to_string(from));
        if (!seen.insert({from, to}).second)
            throw ValidationError("duplicate edge (" + std::to_string(from) + "," +
                                  std::to_string(to) + ")");
        d.adj_[from - 1][to - 1] = true;
        d.offspring_[from - 1].push_back(to);
        d.parents_[to - 1].push_back(from);
    }
    d.edges_.assign(seen.begin(), seen.end());
    for (auto& v : d.parents_) std::sort(v.begin(), v.end());
    for (auto& v : d.offspring_) std::sort(v.begin(), v.end());

    for (int k = 1; k <= n; ++k)
        if (d.in_degree(k) > kMaxInDegree)
            throw ValidationError("node " + std::to_string(k) + " has in-degree " +
                                  std::to_string(d.in_degree(k)) + " > supported maximum " +
                                  std::to_string(kMaxInDegree));

    // Acyclicity: Kahn peeling; leftovers are on a directed cycle.
    {
        std::vector<int> indeg(n);
        for (int k = 0; k < n; ++k) indeg[k] = static_cast<int>(d.parents_[k].size());
        std::vector<int> stack;
        for (int k = 0; k < n; ++k)
            if (indeg[k] == 0) stack.push_back(k);
        int processed = 0;
        while (!stack.empty()) {
            const int k = stack.back();
            stack.pop_back();
            ++processed;
            for (int j : d.offspring_[k])
                if (--indeg[j - 1] == 0) stack.push_back(j - 1);
        }
        if (processed != n)
            throw CyclicGraphError(
                "directed cycle detected: sensors on a cycle exchange full information and "
                "jointly behave like a single centralized sensor; only acyclic networks are "
                "supported");
    }

    // Weak connectivity (undirected reachability from node 1).
    if (n > 1) {
        std::vector<bool> vis(n, false);
        std::vector<int> stack{0};
        vis[0] = true;
        int count = 1;
        while (!stack.empty()) {
            const int k = stack.back();
            stack.pop_back();
            for (int j = 0; j < n; ++j) {
                if (!vis[j] && (d.adj_[k][j] || d.adj_[j][k])) {
                    vis[j] = true;
                    stack.push_back(j);
                    ++count;
                }
            }
        }
        if (count != n) throw ValidationError("network is not weakly connected");
    }
    return d;
}

const std::vector<int>& parents(const Dag& d, int k) { return d.parents(k); }
const std::vector<int>& offspring(const Dag& d, int k) { return d.offspring(k); }

std::uint64_t threshold_count(const Dag& d) {
    std::uint64_t total = 0;
    for (int k = 1; k <= d.n(); ++k) total += std::uint64_t{1} << d.in_degree(k);
    return total;
}

std::vector<int> topological_order(const Dag& d) {
    const int n = d.n();
    std::vector<int> indeg(n);
    for (int k = 0; k < n; ++k) indeg[k] = d.in_degree(k + 1);
    std::vector<bool> emitted(n, false);
    std::vector<int> order;
    order.reserve(n);
    while (static_cast<int>(order.size()) < n) {
        // Lowest-index ready node first: deterministic schedule.
        for (int k = 0; k < n; ++k) {
            if (!emitted[k] && indeg[k] == 0) {
                emitted[k] = true;
                order.push_back(k + 1);
                for (int j : d.offspring(k + 1)) --indeg[j - 1];
                break;
            }
        }
    }
    return order;
}

std::uint32_t parent_context(const Dag& d, int k, std::uint64_t decision_mask) {
    std::uint32_t ctx = 0;
    int bit = 0;
    for (int p : d.parents(k)) {
        if (decision_mask >> (p - 1) & 1u) ctx |= 1u << bit;
        ++bit;
    }
    return ctx;
}

}  // namespace detnet
