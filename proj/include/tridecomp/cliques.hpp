#pragma once

#include <array>
#include <vector>

#include "tridecomp/graph.hpp"

namespace tridecomp {

// All 3-cliques, lexicographic over sorted vertex labels.
inline std::vector<Triangle> enumerate_triangles(const Graph& g) {
    std::vector<Triangle> out;
    const int n = g.vertex_count();
    for (int u = 0; u < n; ++u) {
        for (int v : g.neighbors(u)) {
            if (v <= u) continue;
            Bitset common = g.adj_bits(u) & g.adj_bits(v);
            for (auto w = common.find_next(v); w != Bitset::npos; w = common.find_next(w))
                out.push_back({u, v, static_cast<int>(w)});
        }
    }
    return out;
}

// All 5-cliques, lexicographic.
inline std::vector<std::array<int, 5>> enumerate_k5(const Graph& g) {
    std::vector<std::array<int, 5>> out;
    const int n = g.vertex_count();
    for (int a = 0; a < n; ++a) {
        for (int b : g.neighbors(a)) {
            if (b <= a) continue;
            Bitset ab = g.adj_bits(a) & g.adj_bits(b);
            for (auto c = ab.find_next(b); c != Bitset::npos; c = ab.find_next(c)) {
                Bitset abc = ab & g.adj_bits(static_cast<int>(c));
                for (auto d = abc.find_next(c); d != Bitset::npos; d = abc.find_next(d)) {
                    Bitset abcd = abc & g.adj_bits(static_cast<int>(d));
                    for (auto e = abcd.find_next(d); e != Bitset::npos; e = abcd.find_next(e))
                        out.push_back({a, b, static_cast<int>(c), static_cast<int>(d),
                                       static_cast<int>(e)});
                }
            }
        }
    }
    return out;
}

// |T^(3)(e)|: triangles of g containing the edge e.
inline long triangle_count_at_edge(const Graph& g, const Edge& e) {
    return static_cast<long>((g.adj_bits(e.first) & g.adj_bits(e.second)).count());
}

// Number of triangles inside the vertex set s.
inline long count_triangles_in(const Graph& g, const Bitset& s) {
    long c = 0;
    for (auto u = s.find_first(); u != Bitset::npos; u = s.find_next(u)) {
        Bitset su = s & g.adj_bits(static_cast<int>(u));
        for (auto v = su.find_next(u); v != Bitset::npos; v = su.find_next(v)) {
            Bitset suv = su & g.adj_bits(static_cast<int>(v));
            for (auto w = suv.find_next(v); w != Bitset::npos; w = suv.find_next(w)) ++c;
        }
    }
    return c;
}

// |T^(5)(e)|: K_5's containing edge e == triangles inside the common
// neighbourhood of its endpoints.
inline long k5_count_at_edge(const Graph& g, const Edge& e) {
    Bitset common = g.adj_bits(e.first) & g.adj_bits(e.second);
    return count_triangles_in(g, common);
}

}  // namespace tridecomp
