#pragma once

#include <functional>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "tridecomp/approx.hpp"
#include "tridecomp/decomposition.hpp"
#include "tridecomp/graph.hpp"
#include "tridecomp/matching.hpp"
#include "tridecomp/rational.hpp"
#include "tridecomp/rng.hpp"

namespace tridecomp {

// ---------------------------------------------------------------------------
// Cover down: absorb everything outside a small vortex set U into a
// decomposable subgraph H with G - G[U] <= H and Delta(H[U]) small.  Stages:
// reserve graph, approximate decomposition of the rest, greedy apex vertices
// for leftover W-W edges, then edge-disjoint link matchings inside U.
// ---------------------------------------------------------------------------

struct CoverDownParams {
    Rational epsilon{3, 10};
    Rational rho{1, 5};
    Rational gamma{1, 10};
    Rational delta_threshold{2, 3};
    // The asymptotic windows on the reserve properties close only for large n;
    // reserve_slack widens the (1 +- rho) factors, and pair_check toggles the
    // exhaustive pairwise-intersection window (quadratically many constraints
    // that no finite sample satisfies all at once at desk scale).
    Rational reserve_slack{7, 8};
    // Hard per-vertex membership cap as a multiple of rho |W| (0 disables): a
    // sharpened form of property (e).  Every set membership of u later costs
    // one G[U] edge at u, so the binomial upper tail is what exhausts a
    // vertex; sampling skips u once it hits the cap.
    Rational member_cap{9, 8};
    bool pair_check = false;
    int reserve_retries = 20;
    int run_retries = 10;
    int matcher_t = 1;

    void validate() const {
        if (!(epsilon > 0 && epsilon < 1)) throw std::invalid_argument("epsilon outside (0,1)");
        if (!(rho > 0 && rho < 1))
            throw std::invalid_argument("rho must lie strictly inside (0,1)");
        if (!(gamma > 0)) throw std::invalid_argument("gamma must be positive");
        if (!(reserve_slack > 0 && reserve_slack < 1))
            throw std::invalid_argument("reserve_slack outside (0,1)");
    }

    // The asymptotic constant hierarchy; desk parameters generally break it and
    // the run reports rather than refuses.
    bool hierarchy_ok() const { return gamma < rat_pow(rho, 3) && rho < rat_pow(epsilon, 3); }
};

struct ReserveGraph {
    std::vector<int> w;                   // W = V \ U, ascending
    std::vector<std::vector<int>> sets;   // U_i for w[i], sorted
    std::vector<Edge> edges() const {
        std::vector<Edge> es;
        for (size_t i = 0; i < w.size(); ++i)
            for (int u : sets[i]) es.push_back(make_edge(w[i], u));
        std::sort(es.begin(), es.end());
        return es;
    }
};

struct ReserveOutcome {
    bool ok = false;
    ReserveGraph reserve;
    int retries_used = 0;
    std::string failed_property;  // "(a)".."(e)" or a precondition note
};

namespace detail {

inline Bitset to_bits(int n, const std::vector<int>& vs) {
    Bitset b(n);
    for (int v : vs) b.set(v);
    return b;
}

}  // namespace detail

// Independent rho-sampling of reserve sets U_i <= N_G(w_i) cap U, validated
// against the construction's properties (a)-(e) with the configured slack.
inline ReserveOutcome build_reserve(const Graph& g, const std::vector<int>& u_set,
                                    const CoverDownParams& params, std::uint64_t seed) {
    params.validate();
    ReserveOutcome out;
    const int n = g.vertex_count();
    const long usz = static_cast<long>(u_set.size());
    Bitset ub = detail::to_bits(n, u_set);
    std::vector<int> w;
    for (int v = 0; v < n; ++v)
        if (!ub.test(v)) w.push_back(v);

    const Rational& rho = params.rho;
    const Rational& slack = params.reserve_slack;
    auto rng = make_rng(seed);
    for (int attempt = 0; attempt <= params.reserve_retries; ++attempt) {
        out.retries_used = attempt;
        out.failed_property.clear();
        ReserveGraph r;
        r.w = w;
        r.sets.assign(w.size(), {});
        std::vector<long> member(n, 0);
        long cap = -1;
        if (params.member_cap > 0) {
            cap = 0;
            Rational target = params.member_cap * rho * static_cast<long>(w.size());
            while (Rational(cap) < target) ++cap;
        }
        bool fine = true;
        for (size_t i = 0; i < w.size() && fine; ++i) {
            Bitset link = g.adj_bits(w[i]) & ub;
            long link_sz = static_cast<long>(link.count());
            for (auto u = link.find_first(); u != Bitset::npos; u = link.find_next(u))
                if ((cap < 0 || member[u] < cap) && bernoulli_exact(rng, rho)) {
                    r.sets[i].push_back(static_cast<int>(u));
                    ++member[u];
                }
            long sz = static_cast<long>(r.sets[i].size());
            // (b): |U_i| = (1 +- slack) rho |N(w_i) cap U|
            if (Rational(sz) < (1 - slack) * rho * link_sz ||
                Rational(sz) > (1 + slack) * rho * link_sz) {
                out.failed_property = "(b)";
                fine = false;
                break;
            }
            // (d): d_G(u, U_i) >= (1 - slack) rho (1/2 + 3 eps) |N(w_i) cap U|
            Bitset si = detail::to_bits(n, r.sets[i]);
            Rational floor_d =
                (1 - slack) * rho * (Rational(1, 2) + 3 * params.epsilon) * link_sz;
            for (int u : u_set)
                if (Rational(static_cast<long>(g.degree_into(u, si))) < floor_d) {
                    out.failed_property = "(d)";
                    fine = false;
                    break;
                }
        }
        // (c): pairwise intersections, exhaustive when enabled.
        if (fine && params.pair_check) {
            std::vector<Bitset> bits;
            for (const auto& s : r.sets) bits.push_back(detail::to_bits(n, s));
            for (size_t i = 0; i < bits.size() && fine; ++i)
                for (size_t j = i + 1; j < bits.size(); ++j) {
                    Rational inter(static_cast<long>((bits[i] & bits[j]).count()));
                    if (inter < rat_pow(rho, 2) * usz / 4 || inter > 2 * rat_pow(rho, 2) * usz) {
                        out.failed_property = "(c)";
                        fine = false;
                        break;
                    }
                }
        }
        // (e): each u lies in at most 2 rho n of the sets.
        if (fine)
            for (int u : u_set)
                if (Rational(member[u]) > 2 * rho * n) {
                    out.failed_property = "(e)";
                    fine = false;
                    break;
                }
        if (fine) {
            out.ok = true;
            out.reserve = std::move(r);
            return out;
        }
    }
    return out;
}

using ApproxStrategy =
    std::function<ApproxResult(const Graph&, const Rational&, std::uint64_t)>;

struct CoverDownOutcome {
    bool ok = false;
    Graph h{0, {}};
    TriangleDecomposition decomposition;
    std::string failed_stage;  // reserve | approximation | greedy-cover | parity | matching | degree-bound
    std::string error;
    // Stage report.
    int attempts = 0;
    int reserve_retries = 0;
    long leftover_max_degree = -1;
    long ww_leftover_edges = -1;   // after the shedding rotations
    long max_hu_degree = -1;       // Delta(H[U]) recomputed on success
    bool hierarchy_ok = false;
    bool degree_preconditions_ok = false;  // the asymptotic (delta + 3 eps) n floor
    bool matcher_delta_fired = false;
    bool matcher_overlap_fired = false;
};

namespace detail {

// Rotate leftover weight off W-W edges.  For a leftover W-W edge ab, any
// w in W adjacent to both can absorb it via the triangle {w,a,b} provided wa
// and wb are each either uncovered or covered by a triangle whose third
// vertex lies in U: dropping those U-apex triangles frees wa/wb and leaves
// only U-W edges uncovered.  Every move removes at least one W-W leftover
// edge and never creates one, so the pass terminates.
inline void shed_ww_leftover(const Graph& gp, const Bitset& ub,
                             std::vector<Triangle>& triangles) {
    std::map<Edge, int> cover;
    for (size_t i = 0; i < triangles.size(); ++i)
        for (const auto& e : triangle_edges(triangles[i])) cover[e] = static_cast<int>(i);

    auto drop = [&](int idx) {
        for (const auto& e : triangle_edges(triangles[idx])) cover.erase(e);
        triangles[idx] = make_triangle(-3, -2, -1);  // tombstone, filtered at the end
    };
    // Returns the index of the U-apex triangle covering edge wv, -1 if wv is
    // uncovered, -2 if it is covered but not exchangeable.
    auto apex_cover = [&](int w, int v) {
        auto it = cover.find(make_edge(w, v));
        if (it == cover.end()) return -1;
        const Triangle& t = triangles[it->second];
        int x = t[0] ^ t[1] ^ t[2] ^ w ^ v;
        return ub.test(x) ? it->second : -2;
    };

    // Dropping a U-apex triangle dumps two fresh leftover edges on its U
    // vertex, and every leftover edge at u later costs one G[U] edge at u in
    // the matching stage; track the running leftover load and steer each move
    // toward cold apexes.  shed_load likewise spreads the new U-W leftover
    // over the w's so no single link set downstream takes the whole hit.
    std::vector<int> u_load(gp.vertex_count(), 0);
    for (const auto& e : gp.edges())
        if (!cover.count(e)) {
            if (ub.test(e.first)) ++u_load[e.first];
            if (ub.test(e.second)) ++u_load[e.second];
        }
    std::vector<int> shed_load(gp.vertex_count(), 0);
    auto apex_of = [&](int idx, int w, int v) {
        const Triangle& t = triangles[idx];
        return t[0] ^ t[1] ^ t[2] ^ w ^ v;
    };
    bool moved = true;
    while (moved) {
        moved = false;
        std::vector<Edge> ww;
        for (const auto& e : gp.edges())
            if (!ub.test(e.first) && !ub.test(e.second) && !cover.count(e)) ww.push_back(e);
        for (const auto& [a, b] : ww) {
            if (cover.count(make_edge(a, b))) continue;  // fixed by an earlier move
            Bitset cand = gp.adj_bits(a) & gp.adj_bits(b);
            int best_w = -1;
            std::tuple<int, int, int> best_key{3, 0, 0};  // (drops, apex load, load at w)
            for (auto wi = cand.find_first(); wi != Bitset::npos; wi = cand.find_next(wi)) {
                int w = static_cast<int>(wi);
                if (ub.test(w)) continue;
                int ca = apex_cover(w, a), cb = apex_cover(w, b);
                if (ca == -2 || cb == -2) continue;
                int hot = 0;
                if (ca >= 0) hot = std::max(hot, u_load[apex_of(ca, w, a)] + 2);
                if (cb >= 0) hot = std::max(hot, u_load[apex_of(cb, w, b)] + 2);
                std::tuple<int, int, int> key{(ca >= 0) + (cb >= 0), hot, shed_load[w]};
                if (best_w < 0 || key < best_key) {
                    best_key = key;
                    best_w = w;
                }
            }
            if (best_w < 0) continue;
            shed_load[best_w] += 2 * std::get<0>(best_key);
            int ca = apex_cover(best_w, a), cb = apex_cover(best_w, b);
            if (ca >= 0) u_load[apex_of(ca, best_w, a)] += 2;
            if (cb >= 0) u_load[apex_of(cb, best_w, b)] += 2;
            if (ca >= 0) drop(ca);
            if (cb >= 0) drop(cb);
            triangles.push_back(make_triangle(best_w, a, b));
            for (const auto& e : triangle_edges(triangles.back()))
                cover[e] = static_cast<int>(triangles.size()) - 1;
            moved = true;
        }
    }
    std::erase_if(triangles, [](const Triangle& t) { return t[0] < 0; });
}

}  // namespace detail

inline CoverDownOutcome cover_down(const Graph& g, const std::vector<int>& u_set,
                                   const CoverDownParams& params, std::uint64_t seed,
                                   const ApproxStrategy& strategy = {}) {
    params.validate();
    CoverDownOutcome out;
    out.hierarchy_ok = params.hierarchy_ok();
    const int n = g.vertex_count();
    const long usz = static_cast<long>(u_set.size());
    Bitset ub = detail::to_bits(n, u_set);

    // Hard precondition: even degree outside U (parity of the link sets rests
    // on it).  The asymptotic minimum-degree floors involve (delta + 3 eps) n,
    // which desk-scale epsilon pushes past n; they are reported, not enforced.
    for (int x = 0; x < n; ++x)
        if (!ub.test(x) && g.degree(x) % 2 != 0) {
            out.failed_stage = "precondition";
            out.error = "vertex " + std::to_string(x) + " outside U has odd degree";
            return out;
        }
    {
        Rational floor_v = (params.delta_threshold + 3 * params.epsilon) * n;
        Rational floor_u = (params.delta_threshold + 2 * params.epsilon) * usz;
        out.degree_preconditions_ok = true;
        for (int x = 0; x < n; ++x) {
            if (Rational(g.degree(x)) < floor_v ||
                Rational(static_cast<long>(g.degree_into(x, ub))) < floor_u)
                out.degree_preconditions_ok = false;
        }
    }

    ApproxStrategy strat = strategy;
    if (!strat)
        strat = [](const Graph& host, const Rational& gamma, std::uint64_t s) {
            return approx_decompose_greedy(host, gamma, s);
        };

    Graph g_minus_u = g.minus(g.restrict_to(ub));  // G - G[U]
    for (int attempt = 0; attempt < params.run_retries; ++attempt) {
        ++out.attempts;
        std::uint64_t sub = seed * 1000003u + static_cast<std::uint64_t>(attempt);

        auto res = build_reserve(g, u_set, params, sub);
        out.reserve_retries = res.retries_used;
        if (!res.ok) {
            out.failed_stage = "reserve";
            out.error = "reserve property " + res.failed_property + " kept failing";
            continue;
        }
        const ReserveGraph& r = res.reserve;
        std::vector<Edge> r_edges = r.edges();
        Graph gp = g_minus_u.minus_edges(r_edges);  // G' = G - G[U] - R

        ApproxResult ap = strat(gp, params.gamma, sub ^ 0x9e3779b97f4a7c15ull);
        out.leftover_max_degree = ap.leftover_max_degree;
        if (Rational(out.leftover_max_degree) > params.gamma * n) {
            out.failed_stage = "approximation";
            out.error = "leftover max degree " + std::to_string(out.leftover_max_degree) +
                        " exceeds gamma n";
            continue;
        }
        // Shed W-W leftover into U-W leftover (the gamma contract above is the
        // strategy's; shedding only reclassifies which edges stay uncovered).
        std::vector<Triangle> taken = ap.decomposed.triangles;
        detail::shed_ww_leftover(gp, ub, taken);
        Graph covered(n, [&] {
            std::vector<Edge> es;
            for (const auto& t : taken)
                for (const auto& e : triangle_edges(t)) es.push_back(e);
            return es;
        }());
        Graph leftover = gp.minus(covered);

        // Split the leftover into W-W and U-W parts.
        std::vector<Edge> ww, uw;
        for (const auto& e : leftover.edges())
            (ub.test(e.first) || ub.test(e.second) ? uw : ww).push_back(e);
        out.ww_leftover_edges = static_cast<long>(ww.size());

        // Greedy apex vertices: u_e in U_i cap U_j, distinct on touching edges.
        std::map<int, int> w_index;
        for (size_t i = 0; i < r.w.size(); ++i) w_index[r.w[i]] = static_cast<int>(i);
        std::map<Edge, int> apex;
        std::map<int, std::set<int>> used_at;  // w vertex -> apexes taken there
        bool stuck = false;
        for (const auto& e : ww) {
            const auto& si = r.sets[w_index.at(e.first)];
            const auto& sj = r.sets[w_index.at(e.second)];
            std::vector<int> inter;
            std::set_intersection(si.begin(), si.end(), sj.begin(), sj.end(),
                                  std::back_inserter(inter));
            int pick = -1;
            for (int u : inter)
                if (!used_at[e.first].count(u) && !used_at[e.second].count(u)) {
                    pick = u;  // lowest label first
                    break;
                }
            if (pick < 0) {
                stuck = true;
                break;
            }
            apex[e] = pick;
            used_at[e.first].insert(pick);
            used_at[e.second].insert(pick);
        }
        if (stuck) {
            out.failed_stage = "greedy-cover";
            out.error =
                "no apex left for a W-W leftover edge (the greedy bound needs 2 Delta(L) < rho^2 |U|/4)";
            continue;
        }

        // R' = (R - H-hat) u L[U, W]; link sets U_i' = N_{R'}(w_i).
        std::set<Edge> rp(r_edges.begin(), r_edges.end());
        for (const auto& [e, u] : apex) {
            rp.erase(make_edge(u, e.first));
            rp.erase(make_edge(u, e.second));
        }
        rp.insert(uw.begin(), uw.end());
        std::vector<std::vector<int>> links(r.w.size());
        for (const auto& e : rp) {
            int wv = ub.test(e.first) ? e.second : e.first;
            int uv = ub.test(e.first) ? e.first : e.second;
            links[w_index.at(wv)].push_back(uv);
        }
        bool parity_bug = false;
        for (auto& l : links) {
            std::sort(l.begin(), l.end());
            if (l.size() % 2 != 0) parity_bug = true;
        }
        if (parity_bug) {
            out.failed_stage = "parity";
            out.error = "some link set U_i' has odd size; this indicates a bookkeeping bug";
            return out;  // not retryable: the parity argument is deterministic
        }

        // Edge-disjoint perfect matchings of G[U] on the nonempty links.
        LinkFamily fam;
        fam.rho = params.rho;
        std::vector<int> link_owner;
        for (size_t i = 0; i < links.size(); ++i)
            if (!links[i].empty()) {
                fam.sets.push_back(links[i]);
                link_owner.push_back(r.w[i]);
            }
        MatchingsOptions mopt;
        mopt.strict = false;
        mopt.t_override = params.matcher_t;
        mopt.enforce_delta = false;    // depleted desk hosts: record, let blossom decide
        mopt.enforce_overlap = false;  // likewise for the accumulated-overlap cap
        auto match = edge_disjoint_matchings(g.restrict_to(ub), fam, sub + 17, mopt);
        out.matcher_delta_fired = match.delta_assertion_fired;
        out.matcher_overlap_fired = match.overlap_assertion_fired;
        if (!match.ok) {
            out.failed_stage = "matching";
            out.error = match.error;
            continue;
        }

        // Assemble H and its decomposition.
        std::vector<Triangle> tris = taken;
        for (const auto& [e, u] : apex) tris.push_back(make_triangle(u, e.first, e.second));
        std::vector<Edge> h_edges = g_minus_u.edges();
        for (size_t i = 0; i < fam.sets.size(); ++i)
            for (const auto& [a, b] : match.matchings[i]) {
                tris.push_back(make_triangle(link_owner[i], a, b));
                h_edges.push_back(make_edge(a, b));
            }
        Graph h(n, h_edges);
        TriangleDecomposition dec;
        dec.triangles = std::move(tris);
        std::sort(dec.triangles.begin(), dec.triangles.end());
        dec.host_edge_count = h.edge_count();
        if (!verify_decomposition(h, dec)) {
            out.failed_stage = "degree-bound";
            out.error = "assembled decomposition failed verification";
            continue;
        }
        long hu = h.restrict_to(ub).max_degree();
        out.max_hu_degree = hu;
        if (Rational(hu) > 3 * params.rho * n) {
            out.failed_stage = "degree-bound";
            out.error = "Delta(H[U]) = " + std::to_string(hu) + " exceeds 3 rho n";
            continue;
        }
        out.ok = true;
        out.failed_stage.clear();
        out.error.clear();
        out.h = std::move(h);
        out.decomposition = std::move(dec);
        return out;
    }
    return out;
}

}  // namespace tridecomp
