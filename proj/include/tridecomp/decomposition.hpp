#pragma once

#include <algorithm>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "tridecomp/graph.hpp"

namespace tridecomp {

// An exact partition of a host edge set into triangles.
struct TriangleDecomposition {
    std::vector<Triangle> triangles;
    long host_edge_count = 0;

    bool shape_ok() const {
        return 3 * static_cast<long>(triangles.size()) == host_edge_count;
    }
};

// True iff the triples are pairwise edge-disjoint triangles of g whose edge
// sets union to E(g) exactly. Malformed triples yield false, not exceptions.
inline bool verify_decomposition(const Graph& g, const TriangleDecomposition& d) {
    if (!d.shape_ok()) return false;
    if (d.host_edge_count != g.edge_count()) return false;
    std::vector<Edge> covered;
    covered.reserve(d.triangles.size() * 3);
    for (const auto& t : d.triangles) {
        if (t[0] >= t[1] || t[1] >= t[2]) return false;
        if (t[0] < 0 || t[2] >= g.vertex_count()) return false;
        if (!g.has_edge(t[0], t[1]) || !g.has_edge(t[0], t[2]) || !g.has_edge(t[1], t[2]))
            return false;
        for (const auto& e : triangle_edges(t)) covered.push_back(e);
    }
    std::sort(covered.begin(), covered.end());
    if (std::adjacent_find(covered.begin(), covered.end()) != covered.end()) return false;
    // Pairwise disjoint and all in E(g); counts match, so the union is E(g).
    return static_cast<long>(covered.size()) == g.edge_count();
}

// Verify a claimed decomposition of an arbitrary edge set (not a full graph).
inline bool verify_partition_of(const std::vector<Edge>& host_edges,
                                const std::vector<Triangle>& triangles) {
    std::vector<Edge> host(host_edges);
    std::sort(host.begin(), host.end());
    host.erase(std::unique(host.begin(), host.end()), host.end());
    std::vector<Edge> covered;
    for (const auto& t : triangles) {
        if (t[0] >= t[1] || t[1] >= t[2] || t[0] < 0) return false;
        for (const auto& e : triangle_edges(t)) covered.push_back(e);
    }
    std::sort(covered.begin(), covered.end());
    if (std::adjacent_find(covered.begin(), covered.end()) != covered.end()) return false;
    return covered == host;
}

// Decomposition text format: one triangle per line "u v w".
inline TriangleDecomposition read_decomposition(std::istream& in, long host_edge_count) {
    TriangleDecomposition d;
    d.host_edge_count = host_edge_count;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto pos = line.find_first_not_of(" \t\r");
        if (pos == std::string::npos || line[pos] == '#') continue;
        std::istringstream ls(line);
        int u, v, w;
        ls >> u >> v >> w;
        if (ls.fail())
            throw std::runtime_error("line " + std::to_string(lineno) + ": expected 'u v w'");
        d.triangles.push_back(make_triangle(u, v, w));
    }
    return d;
}

inline void write_decomposition(std::ostream& out, const TriangleDecomposition& d) {
    for (const auto& t : d.triangles) out << t[0] << " " << t[1] << " " << t[2] << "\n";
}

}  // namespace tridecomp
