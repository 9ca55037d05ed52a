#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "tridecomp/cliques.hpp"
#include "tridecomp/decomposition.hpp"
#include "tridecomp/divisibility.hpp"
#include "tridecomp/graph.hpp"

namespace tridecomp {

enum class OracleStatus { found, none, budget_exhausted };

struct OracleResult {
    OracleStatus status = OracleStatus::none;
    TriangleDecomposition decomposition;  // meaningful iff status == found
    std::uint64_t nodes_expanded = 0;
};

namespace detail {

class ExactCoverSearch {
public:
    ExactCoverSearch(const Graph& g, std::uint64_t budget) : budget_(budget) {
        const auto& edges = g.edges();
        for (size_t i = 0; i < edges.size(); ++i) edge_id_[edges[i]] = static_cast<int>(i);
        triangles_ = enumerate_triangles(g);
        tri_edges_.resize(triangles_.size());
        edge_tris_.resize(edges.size());
        for (size_t t = 0; t < triangles_.size(); ++t) {
            auto es = triangle_edges(triangles_[t]);
            for (int k = 0; k < 3; ++k) {
                int id = edge_id_.at(es[k]);
                tri_edges_[t][k] = id;
                edge_tris_[id].push_back(static_cast<int>(t));
            }
        }
        covered_.assign(edges.size(), false);
        uncovered_ = static_cast<long>(edges.size());
    }

    OracleStatus run(std::vector<int>* chosen_out) {
        bool complete = solve();
        if (found_) {
            *chosen_out = chosen_;
            return OracleStatus::found;
        }
        return complete ? OracleStatus::none : OracleStatus::budget_exhausted;
    }

    std::uint64_t nodes() const { return nodes_; }

private:
    bool tri_available(int t) const {
        return !covered_[tri_edges_[t][0]] && !covered_[tri_edges_[t][1]] &&
               !covered_[tri_edges_[t][2]];
    }

    // Returns true if the search below this node ran to completion (no budget stop).
    bool solve() {
        if (uncovered_ == 0) {
            found_ = true;
            return true;
        }
        if (nodes_ >= budget_) return false;
        ++nodes_;
        // Fail-first: branch on the uncovered edge with fewest available
        // triangles; ties broken by canonical edge order.
        int best_edge = -1;
        long best_count = -1;
        for (size_t e = 0; e < covered_.size(); ++e) {
            if (covered_[e]) continue;
            long c = 0;
            for (int t : edge_tris_[e])
                if (tri_available(t)) ++c;
            if (best_edge == -1 || c < best_count) {
                best_edge = static_cast<int>(e);
                best_count = c;
                if (c == 0) break;
            }
        }
        if (best_count == 0) return true;  // dead end, exhaustively refuted
        bool complete = true;
        for (int t : edge_tris_[best_edge]) {
            if (!tri_available(t)) continue;
            place(t);
            bool sub = solve();
            if (found_) return sub;
            unplace(t);
            if (!sub) complete = false;
        }
        return complete;
    }

    void place(int t) {
        for (int e : tri_edges_[t]) covered_[e] = true;
        uncovered_ -= 3;
        chosen_.push_back(t);
    }
    void unplace(int t) {
        for (int e : tri_edges_[t]) covered_[e] = false;
        uncovered_ += 3;
        chosen_.pop_back();
    }

public:
    std::vector<Triangle> triangles_;

private:
    std::map<Edge, int> edge_id_;
    std::vector<std::array<int, 3>> tri_edges_;
    std::vector<std::vector<int>> edge_tris_;
    std::vector<bool> covered_;
    std::vector<int> chosen_;
    long uncovered_ = 0;
    std::uint64_t nodes_ = 0, budget_;
    bool found_ = false;
};

}  // namespace detail

inline constexpr std::uint64_t kDefaultOracleBudget = 10'000'000;

// Exact-cover backtracking over triangles. "none" is a proof of non-existence;
// "budget_exhausted" is inconclusive. Deterministic for fixed input and budget.
inline OracleResult oracle_decompose(const Graph& g,
                                     std::uint64_t budget = kDefaultOracleBudget) {
    OracleResult res;
    res.decomposition.host_edge_count = g.edge_count();
    if (g.edge_count() == 0) {
        res.status = OracleStatus::found;  // empty graph has the empty decomposition
        return res;
    }
    if (!is_k3_divisible(g)) {
        res.status = OracleStatus::none;  // divisibility is necessary
        return res;
    }
    detail::ExactCoverSearch search(g, budget);
    std::vector<int> chosen;
    res.status = search.run(&chosen);
    res.nodes_expanded = search.nodes();
    if (res.status == OracleStatus::found) {
        for (int t : chosen) res.decomposition.triangles.push_back(search.triangles_[t]);
        std::sort(res.decomposition.triangles.begin(), res.decomposition.triangles.end());
    }
    return res;
}

}  // namespace tridecomp
