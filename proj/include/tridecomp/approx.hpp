#pragma once

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "tridecomp/cliques.hpp"
#include "tridecomp/decomposition.hpp"
#include "tridecomp/graph.hpp"
#include "tridecomp/rational.hpp"
#include "tridecomp/rng.hpp"

namespace tridecomp {

// Outcome of an approximate decomposition: a triangle decomposition of some
// subgraph H of the input together with the maximum degree of what is left.
struct ApproxResult {
    TriangleDecomposition decomposed;  // partition of E(H)
    long leftover_max_degree = 0;
    bool target_met = false;  // leftover_max_degree <= gamma * n

    Graph covered_subgraph(int n) const {
        std::vector<Edge> es;
        for (const auto& t : decomposed.triangles)
            for (const auto& e : triangle_edges(t)) es.push_back(e);
        return Graph(n, std::move(es));
    }

    Graph leftover(const Graph& g) const { return g.minus(covered_subgraph(g.vertex_count())); }
};

// A collection of triangles in which every host edge appears (1 +- xi) p^2 n
// times; the quasirandom stand-in for "plenty of triangles everywhere".
struct RegularCollection {
    std::vector<Triangle> triangles;
    Rational xi;
    Rational p;
};

inline bool validate_regular_collection(const Graph& g, const RegularCollection& coll,
                                        std::string* why = nullptr) {
    auto fail = [&](const std::string& msg) {
        if (why) *why = msg;
        return false;
    };
    if (!(coll.xi > 0 && coll.xi < 1) || !(coll.p > 0 && coll.p <= 1))
        return fail("parameters out of range");
    std::map<Edge, long> count;
    for (const auto& e : g.edges()) count[e] = 0;
    for (const auto& t : coll.triangles) {
        for (const auto& e : triangle_edges(t)) {
            auto it = count.find(e);
            if (it == count.end()) return fail("collection triangle leaves the host");
            ++it->second;
        }
    }
    const long n = g.vertex_count();
    Rational target = rat_pow(coll.p, 2) * n;
    Rational lo = (1 - coll.xi) * target, hi = (1 + coll.xi) * target;
    for (const auto& [e, c] : count)
        if (Rational(c) < lo || Rational(c) > hi)
            return fail("edge " + std::to_string(e.first) + "-" + std::to_string(e.second) +
                        " lies in " + std::to_string(c) + " triangles, outside the window");
    return true;
}

namespace detail {

// Random greedy packing: pick uniformly among the still-usable triangles
// (rejection sampling over a shrinking pool), then shift leftover degree off
// hot vertices by local rotations: replace a packed triangle v-w-x by u-v-w
// when uv, uw are uncovered, moving two units of leftover from u to x.
class GreedyPacker {
public:
    GreedyPacker(const Graph& g, std::vector<Triangle> pool, Rng& rng)
        : g_(g), pool_(std::move(pool)), rng_(rng) {}

    std::vector<Triangle> run() {
        for (size_t i = 0; i < pool_.size(); ++i) index_[pool_[i]] = static_cast<int>(i);
        std::vector<int> alive(pool_.size());
        std::iota(alive.begin(), alive.end(), 0);
        while (!alive.empty()) {
            std::uniform_int_distribution<size_t> d(0, alive.size() - 1);
            size_t at = d(rng_);
            int idx = alive[at];
            alive[at] = alive.back();
            alive.pop_back();
            if (usable(pool_[idx])) take(idx);
        }
        compact();
        rebalance();
        std::vector<Triangle> out;
        for (size_t i = 0; i < pool_.size(); ++i)
            if (taken_.count(static_cast<int>(i))) out.push_back(pool_[i]);
        std::sort(out.begin(), out.end());
        return out;
    }

private:
    bool usable(const Triangle& t) const {
        for (const auto& e : triangle_edges(t))
            if (cover_.count(e)) return false;
        return true;
    }

    void take(int idx) {
        taken_.insert(idx);
        for (const auto& e : triangle_edges(pool_[idx])) cover_[e] = idx;
    }

    void drop(int idx) {
        taken_.erase(idx);
        for (const auto& e : triangle_edges(pool_[idx])) cover_.erase(e);
    }

    long leftover_degree(int v) const {
        long d = g_.degree(v);
        for (int u : g_.neighbors(v))
            if (cover_.count(make_edge(u, v))) --d;
        return d;
    }

    // One improving rotation at hot vertex u, or false.
    bool rotate_at(int u, long du) {
        for (int v : g_.neighbors(u)) {
            if (cover_.count(make_edge(u, v))) continue;  // need uv uncovered
            for (int w : g_.neighbors(u)) {
                if (w == v || !g_.has_edge(v, w)) continue;
                if (cover_.count(make_edge(u, w))) continue;  // need uw uncovered
                auto it = cover_.find(make_edge(v, w));
                if (it == cover_.end()) continue;  // vw must be covered...
                const Triangle& t = pool_[it->second];
                int x = t[0] ^ t[1] ^ t[2] ^ v ^ w;  // ...by a triangle v-w-x
                if (x == u) continue;
                if (leftover_degree(x) + 2 >= du) continue;  // only strict improvements
                Triangle repl = make_triangle(u, v, w);
                auto ridx = index_.find(repl);
                if (ridx == index_.end()) continue;  // restricted pools may lack u-v-w
                drop(it->second);
                take(ridx->second);
                return true;
            }
        }
        return false;
    }

    // Split one packed triangle a-b-c into two: a-b-x and a-c-y whose four new
    // edges are all uncovered.  The swap covers ax, bx, ay, cy and frees only
    // bc, a net gain of three edges; bc rejoins the leftover.
    bool split_one(int idx) {
        const Triangle t = pool_[idx];
        for (int s = 0; s < 3; ++s) {
            int a = t[s], b = t[(s + 1) % 3], c = t[(s + 2) % 3];
            for (int x : g_.neighbors(a)) {
                if (x == b || x == c || !g_.has_edge(b, x)) continue;
                if (cover_.count(make_edge(a, x)) || cover_.count(make_edge(b, x))) continue;
                auto i1 = index_.find(make_triangle(a, b, x));
                if (i1 == index_.end()) continue;
                for (int y : g_.neighbors(a)) {
                    if (y == x || y == b || y == c || !g_.has_edge(c, y)) continue;
                    if (cover_.count(make_edge(a, y)) || cover_.count(make_edge(c, y))) continue;
                    auto i2 = index_.find(make_triangle(a, c, y));
                    if (i2 == index_.end()) continue;
                    drop(idx);
                    take(i1->second);
                    take(i2->second);
                    return true;
                }
            }
        }
        return false;
    }

    void compact() {
        for (bool moved = true; moved;) {
            moved = false;
            std::vector<int> snapshot(taken_.begin(), taken_.end());
            for (int idx : snapshot)
                if (taken_.count(idx) && split_one(idx)) moved = true;
        }
    }

    void rebalance() {
        const long cap = 40L * g_.vertex_count();
        for (long step = 0; step < cap; ++step) {
            int hot = -1;
            long dmax = -1;
            for (int v = 0; v < g_.vertex_count(); ++v) {
                long d = leftover_degree(v);
                if (d > dmax) {
                    dmax = d;
                    hot = v;
                }
            }
            if (hot < 0 || dmax <= 2) return;
            bool moved = rotate_at(hot, dmax);
            if (!moved) {
                // Try the remaining vertices at the same height before giving up.
                for (int v = 0; v < g_.vertex_count() && !moved; ++v)
                    if (v != hot && leftover_degree(v) == dmax) moved = rotate_at(v, dmax);
            }
            if (!moved) return;
        }
    }

    const Graph& g_;
    std::vector<Triangle> pool_;
    Rng& rng_;
    std::map<Triangle, int> index_;
    std::map<Edge, int> cover_;
    std::set<int> taken_;
};

inline ApproxResult finish(const Graph& g, std::vector<Triangle> chosen, const Rational& gamma) {
    ApproxResult res;
    res.decomposed.triangles = std::move(chosen);
    res.decomposed.host_edge_count = 3 * static_cast<long>(res.decomposed.triangles.size());
    res.leftover_max_degree = res.leftover(g).max_degree();
    res.target_met = Rational(res.leftover_max_degree) <= gamma * g.vertex_count();
    return res;
}

}  // namespace detail

inline ApproxResult approx_decompose_greedy(const Graph& g, const Rational& gamma,
                                            std::uint64_t seed) {
    auto rng = make_rng(seed);
    detail::GreedyPacker packer(g, enumerate_triangles(g), rng);
    return detail::finish(g, packer.run(), gamma);
}

inline ApproxResult approx_decompose_from_collection(const Graph& g,
                                                     const RegularCollection& coll,
                                                     const Rational& gamma,
                                                     std::uint64_t seed) {
    std::string why;
    if (!validate_regular_collection(g, coll, &why))
        throw std::invalid_argument("collection is not regular on the host: " + why);
    auto rng = make_rng(seed);
    std::vector<Triangle> pool = coll.triangles;
    std::sort(pool.begin(), pool.end());
    pool.erase(std::unique(pool.begin(), pool.end()), pool.end());
    detail::GreedyPacker packer(g, std::move(pool), rng);
    return detail::finish(g, packer.run(), gamma);
}

}  // namespace tridecomp
