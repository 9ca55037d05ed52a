#pragma once

#include <numeric>
#include <optional>
#include <queue>
#include <set>
#include <string>
#include <vector>

#include "tridecomp/graph.hpp"
#include "tridecomp/rational.hpp"
#include "tridecomp/rng.hpp"

namespace tridecomp {

// ---------------------------------------------------------------------------
// Maximum matching in general graphs via blossom contraction (O(V^3)).
// match[v] is v's partner or -1.
// ---------------------------------------------------------------------------

inline std::vector<int> maximum_matching(const Graph& g) {
    const int n = g.vertex_count();
    std::vector<int> match(n, -1), parent(n, -1), base(n);
    std::vector<char> used(n, 0), blossom(n, 0);

    auto lowest_common_base = [&](int a, int b) {
        std::vector<char> seen(n, 0);
        for (;;) {
            a = base[a];
            seen[a] = 1;
            if (match[a] == -1) break;
            a = parent[match[a]];
        }
        for (;;) {
            b = base[b];
            if (seen[b]) return b;
            b = parent[match[b]];
        }
    };

    auto mark_path = [&](int v, int b, int child) {
        while (base[v] != b) {
            blossom[base[v]] = 1;
            blossom[base[match[v]]] = 1;
            parent[v] = child;
            child = match[v];
            v = parent[match[v]];
        }
    };

    auto find_augmenting_path = [&](int root) -> int {
        std::fill(used.begin(), used.end(), 0);
        std::fill(parent.begin(), parent.end(), -1);
        std::iota(base.begin(), base.end(), 0);
        used[root] = 1;
        std::queue<int> q;
        q.push(root);
        while (!q.empty()) {
            int v = q.front();
            q.pop();
            for (int to : g.neighbors(v)) {
                if (base[v] == base[to] || match[v] == to) continue;
                if (to == root || (match[to] != -1 && parent[match[to]] != -1)) {
                    int cur = lowest_common_base(v, to);
                    std::fill(blossom.begin(), blossom.end(), 0);
                    mark_path(v, cur, to);
                    mark_path(to, cur, v);
                    for (int i = 0; i < n; ++i) {
                        if (blossom[base[i]]) {
                            base[i] = cur;
                            if (!used[i]) {
                                used[i] = 1;
                                q.push(i);
                            }
                        }
                    }
                } else if (parent[to] == -1) {
                    parent[to] = v;
                    if (match[to] == -1) return to;
                    used[match[to]] = 1;
                    q.push(match[to]);
                }
            }
        }
        return -1;
    };

    for (int v = 0; v < n; ++v) {
        if (match[v] != -1) continue;
        int u = find_augmenting_path(v);
        while (u != -1) {  // flip the alternating path back to the root
            int pv = parent[u], ppv = match[pv];
            match[u] = pv;
            match[pv] = u;
            u = ppv;
        }
    }
    return match;
}

// Perfect matching of g on its full vertex set, or none.
inline std::optional<std::vector<Edge>> perfect_matching(const Graph& g) {
    if (g.vertex_count() % 2 != 0) return std::nullopt;
    auto match = maximum_matching(g);
    std::vector<Edge> out;
    for (int v = 0; v < g.vertex_count(); ++v) {
        if (match[v] == -1) return std::nullopt;
        if (v < match[v]) out.push_back(make_edge(v, match[v]));
    }
    return out;
}

// Perfect matching of g[vs] reported in the original labels.
inline std::optional<std::vector<Edge>> perfect_matching_on(const Graph& g,
                                                            const std::vector<int>& vs) {
    std::vector<int> labels;
    Graph sub = g.induced_compact(vs, &labels);
    auto m = perfect_matching(sub);
    if (!m) return std::nullopt;
    std::vector<Edge> out;
    for (const auto& [a, b] : *m) out.push_back(make_edge(labels[a], labels[b]));
    std::sort(out.begin(), out.end());
    return out;
}

// ---------------------------------------------------------------------------
// Link families: the vertex sets whose induced graphs must carry pairwise
// edge-disjoint perfect matchings.  Validation mirrors the four hypotheses;
// fractional powers of rho are compared by raising both sides to an integer
// power, keeping every check exact.
// ---------------------------------------------------------------------------

struct LinkFamily {
    std::vector<std::vector<int>> sets;
    Rational rho;
};

struct LinkFamilyReport {
    bool even_sizes = true;        // 2 | |U_i|
    bool degree_condition = true;  // delta(G[U_i]) >= (1/2 + 4 rho^{1/6}) |U_i|
    bool size_floor = true;        // |U_i| >= rho^{4/3} n
    bool intersection_cap = true;  // |U_i cap U_j| <= rho^2 n
    bool membership_cap = true;    // every vertex in <= rho n sets
    std::vector<std::string> notes;

    bool ok() const {
        return even_sizes && degree_condition && size_floor && intersection_cap &&
               membership_cap;
    }
};

inline LinkFamilyReport validate_link_family(const Graph& g, const LinkFamily& f) {
    LinkFamilyReport r;
    const long n = g.vertex_count();
    const int N = static_cast<int>(f.sets.size());
    std::vector<Bitset> bits;
    for (const auto& u : f.sets) {
        Bitset b(g.vertex_count());
        for (int v : u) b.set(v);
        bits.push_back(std::move(b));
    }
    for (int i = 0; i < N; ++i) {
        const long sz = static_cast<long>(f.sets[i].size());
        if (sz % 2 != 0) {
            r.even_sizes = false;
            r.notes.push_back("set " + std::to_string(i) + " has odd size");
        }
        long dmin = sz;
        for (int v : f.sets[i]) dmin = std::min(dmin, static_cast<long>(g.degree_into(v, bits[i])));
        // delta/|U_i| - 1/2 >= 4 rho^{1/6}  <=>  ((delta/|U_i| - 1/2)/4)^6 >= rho
        Rational slack = sz == 0 ? Rational(0) : Rational(dmin) / sz - Rational(1, 2);
        if (slack < 0 || rat_pow(slack / 4, 6) < f.rho) {
            r.degree_condition = false;
            r.notes.push_back("set " + std::to_string(i) + " fails the induced degree bound");
        }
        // |U_i| >= rho^{4/3} n  <=>  |U_i|^3 >= rho^4 n^3
        if (rat_pow(Rational(sz), 3) < rat_pow(f.rho, 4) * rat_pow(Rational(n), 3)) {
            r.size_floor = false;
            r.notes.push_back("set " + std::to_string(i) + " below the size floor");
        }
    }
    for (int i = 0; i < N; ++i)
        for (int j = i + 1; j < N; ++j)
            if (Rational(static_cast<long>((bits[i] & bits[j]).count())) >
                rat_pow(f.rho, 2) * n) {
                r.intersection_cap = false;
                r.notes.push_back("sets " + std::to_string(i) + "," + std::to_string(j) +
                                  " intersect too much");
            }
    std::vector<long> member(g.vertex_count(), 0);
    for (const auto& u : f.sets)
        for (int v : u) ++member[v];
    for (int v = 0; v < g.vertex_count(); ++v)
        if (Rational(member[v]) > f.rho * n) {
            r.membership_cap = false;
            r.notes.push_back("vertex " + std::to_string(v) + " lies in too many sets");
        }
    return r;
}

// Smallest integer t with t >= 2 rho^{3/2} n, i.e. minimal t with t^2 >= 4 rho^3 n^2.
inline int matching_extraction_count(const Rational& rho, long n) {
    Rational target = 4 * rat_pow(rho, 3) * n * n;
    int t = 0;
    while (Rational(t) * t < target) ++t;
    return std::max(t, 1);
}

struct MatchingsOptions {
    int pass_retries = 20;
    bool strict = true;        // require the full hypothesis set before running
    int t_override = -1;       // forced extraction count (desk-scale escape hatch)
    bool enforce_delta = true;  // abort when delta(G'_i) < |U_i|/2 + t (else record only)
    bool enforce_overlap = true;  // abort when Delta(H_{i-1}[U_i]) > rho^{3/2} n (else record only)
};

struct MatchingsOutcome {
    bool ok = false;
    std::vector<std::vector<Edge>> matchings;  // one per set, perfect on it
    std::string error;
    int failed_index = -1;  // set index where the last pass gave up
    int passes_used = 0;
    int t = 0;
    long max_overlap_degree = 0;       // max Delta(H_{i-1}[U_i]) over successful steps
    bool delta_assertion_fired = false;  // delta(G'_i) >= |U_i|/2 + t ever violated
    bool overlap_assertion_fired = false;  // Delta(H_{i-1}[U_i]) <= rho^{3/2} n ever violated
};

// Randomized construction: at step i, extract t edge-disjoint
// perfect matchings of (G - H_{i-1})[U_i] and keep one uniformly at random.
// A pass aborts if the chosen matchings pile up too much on a later set; the
// whole pass is then retried with fresh randomness.
inline MatchingsOutcome edge_disjoint_matchings(const Graph& g, const LinkFamily& f,
                                                std::uint64_t seed,
                                                const MatchingsOptions& opt = {}) {
    MatchingsOutcome out;
    if (opt.strict) {
        auto rep = validate_link_family(g, f);
        if (!rep.ok()) {
            out.error = "link family fails validation: " +
                        (rep.notes.empty() ? std::string("(no detail)") : rep.notes.front());
            return out;
        }
    }
    const long n = g.vertex_count();
    const int t = opt.t_override > 0 ? opt.t_override : matching_extraction_count(f.rho, n);
    out.t = t;
    const Rational overlap_cap_sq = rat_pow(f.rho, 3) * n * n;  // (rho^{3/2} n)^2
    auto rng = make_rng(seed);

    for (int pass = 0; pass < opt.pass_retries; ++pass) {
        ++out.passes_used;
        std::vector<std::vector<Edge>> chosen;
        std::set<Edge> h_edges;
        bool pass_ok = true;
        for (size_t i = 0; i < f.sets.size() && pass_ok; ++i) {
            const auto& u = f.sets[i];
            Bitset ub(g.vertex_count());
            for (int v : u) ub.set(v);
            // Delta(H_{i-1}[U_i]) <= rho^{3/2} n, compared squared for exactness.
            long hmax = 0;
            {
                std::vector<int> hdeg(g.vertex_count(), 0);
                for (const auto& e : h_edges)
                    if (ub.test(e.first) && ub.test(e.second)) {
                        ++hdeg[e.first];
                        ++hdeg[e.second];
                    }
                for (int v : u) hmax = std::max(hmax, static_cast<long>(hdeg[v]));
            }
            if (Rational(hmax) * hmax > overlap_cap_sq) {
                out.overlap_assertion_fired = true;
                if (opt.enforce_overlap) {
                    out.failed_index = static_cast<int>(i);
                    out.error = "chosen matchings overload set " + std::to_string(i);
                    pass_ok = false;
                    break;
                }
            }
            out.max_overlap_degree = std::max(out.max_overlap_degree, hmax);

            std::vector<Edge> rm(h_edges.begin(), h_edges.end());
            Graph avail = g.minus_edges(rm);
            // The displayed inequality the asymptotic analysis relies on before extraction.
            long dmin = static_cast<long>(u.size());
            for (int v : u) dmin = std::min(dmin, static_cast<long>(avail.degree_into(v, ub)));
            if (Rational(dmin) < Rational(static_cast<long>(u.size()), 2) + t) {
                out.delta_assertion_fired = true;
                if (opt.enforce_delta) {
                    out.failed_index = static_cast<int>(i);
                    out.error = "minimum degree of the available link graph fell below |U|/2 + t";
                    pass_ok = false;
                    break;
                }
            }

            std::vector<std::vector<Edge>> candidates;
            Graph work = std::move(avail);
            for (int k = 0; k < t; ++k) {
                // Relabel the link graph randomly before matching: the blossom
                // search is deterministic, so this is what lets retry passes
                // explore genuinely different unions of matchings.
                std::vector<int> labels;
                Graph sub = work.induced_compact(u, &labels);
                std::vector<int> perm(labels.size());
                std::iota(perm.begin(), perm.end(), 0);
                std::shuffle(perm.begin(), perm.end(), rng);
                std::vector<Edge> pe;
                for (const auto& e : sub.edges()) pe.push_back(make_edge(perm[e.first], perm[e.second]));
                auto pm = perfect_matching(Graph(sub.vertex_count(), std::move(pe)));
                std::optional<std::vector<Edge>> m;
                if (pm) {
                    std::vector<int> inv(perm.size());
                    for (size_t a = 0; a < perm.size(); ++a) inv[perm[a]] = static_cast<int>(a);
                    std::vector<Edge> back;
                    for (const auto& e : *pm)
                        back.push_back(make_edge(labels[inv[e.first]], labels[inv[e.second]]));
                    std::sort(back.begin(), back.end());
                    m = std::move(back);
                }
                if (!m) {
                    out.failed_index = static_cast<int>(i);
                    out.error = "could not extract matching " + std::to_string(k + 1) +
                                " of " + std::to_string(t) + " on set " + std::to_string(i);
                    pass_ok = false;
                    break;
                }
                work = work.minus_edges(*m);
                candidates.push_back(std::move(*m));
            }
            if (!pass_ok) break;
            std::uniform_int_distribution<int> pick(0, t - 1);
            auto& m = candidates[pick(rng)];
            h_edges.insert(m.begin(), m.end());
            chosen.push_back(std::move(m));
        }
        if (pass_ok) {
            out.ok = true;
            out.failed_index = -1;
            out.error.clear();
            out.matchings = std::move(chosen);
            return out;
        }
    }
    return out;
}

}  // namespace tridecomp
