#pragma once

#include <stdexcept>
#include <vector>

#include "tridecomp/cliques.hpp"
#include "tridecomp/graph.hpp"

namespace tridecomp {

enum class ExtremalVariant {
    two_cliques,  // each side is a union of two disjoint (6k+3)-cliques
};

// The minimum-degree extremal family: G1, G2 disjoint (6k+2)-regular graphs on
// 12k+6 vertices each, G3 the complete bipartite graph between them. The result
// is K3-divisible with delta(G) = 3n/4 - 1 on n = 24k+12 vertices, yet has no
// triangle decomposition.
inline Graph build_extremal_example(int k, ExtremalVariant variant = ExtremalVariant::two_cliques) {
    if (k <= 0) throw std::invalid_argument("k must be positive");
    (void)variant;
    const int side = 12 * k + 6;       // |G1| = |G2|
    const int clique = 6 * k + 3;      // half of a side
    const int n = 2 * side;
    std::vector<Edge> edges;
    // G1 and G2: two disjoint (6k+3)-cliques each.
    for (int part = 0; part < 4; ++part) {
        int base = part * clique;
        for (int i = 0; i < clique; ++i)
            for (int j = i + 1; j < clique; ++j) edges.push_back({base + i, base + j});
    }
    // G3: complete bipartite between the sides.
    for (int u = 0; u < side; ++u)
        for (int v = side; v < n; ++v) edges.push_back({u, v});
    return Graph(n, std::move(edges));
}

// Inner edges of the extremal example: E(G1 u G2).
inline std::vector<Edge> extremal_inner_edges(int k) {
    if (k <= 0) throw std::invalid_argument("k must be positive");
    const int clique = 6 * k + 3;
    std::vector<Edge> edges;
    for (int part = 0; part < 4; ++part) {
        int base = part * clique;
        for (int i = 0; i < clique; ++i)
            for (int j = i + 1; j < clique; ++j) edges.push_back({base + i, base + j});
    }
    return edges;
}

// Counting certificate of non-decomposability: if every triangle of g uses at
// least one inner edge and 2|inner| < |E(g)| - |inner|, then the inner edges
// cannot cover enough triangles and no decomposition exists.
inline bool certify_no_decomposition_by_counting(const Graph& g, const std::vector<Edge>& inner_edges) {
    std::vector<Edge> inner(inner_edges);
    std::sort(inner.begin(), inner.end());
    inner.erase(std::unique(inner.begin(), inner.end()), inner.end());
    for (const auto& e : inner)
        if (!g.has_edge(e)) throw std::invalid_argument("inner edge not in graph");
    auto is_inner = [&](int u, int v) {
        return std::binary_search(inner.begin(), inner.end(), make_edge(u, v));
    };
    for (const auto& t : enumerate_triangles(g)) {
        if (!is_inner(t[0], t[1]) && !is_inner(t[0], t[2]) && !is_inner(t[1], t[2]))
            return false;
    }
    long in = static_cast<long>(inner.size());
    long out = g.edge_count() - in;
    return 2 * in < out;
}

}  // namespace tridecomp
