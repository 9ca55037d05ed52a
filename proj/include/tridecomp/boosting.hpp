#pragma once

#include <algorithm>
#include <array>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "tridecomp/approx.hpp"
#include "tridecomp/cliques.hpp"
#include "tridecomp/fractional.hpp"
#include "tridecomp/graph.hpp"
#include "tridecomp/rational.hpp"
#include "tridecomp/rng.hpp"

namespace tridecomp {

// ---------------------------------------------------------------------------
// K5-shifters: for an edge e inside a 5-clique J, the signed triangle weights
// whose per-edge aggregate is 1 on e and 0 on every other edge.  Summed with
// exact corrections c_e they flatten the per-edge triangle weight to p^2 n / 4.
// ---------------------------------------------------------------------------

struct ShifterTerm {
    Edge base_edge;
    std::array<int, 5> clique;
    std::map<Triangle, Rational> coefficients;  // the 10 triangles inside J

    Rational edge_aggregate(const Edge& e) const {
        Rational s = 0;
        for (const auto& [t, w] : coefficients) {
            auto es = triangle_edges(t);
            if (std::find(es.begin(), es.end(), e) != es.end()) s += w;
        }
        return s;
    }
};

inline ShifterTerm shifter(const Graph& g, const Edge& e, const std::array<int, 5>& j) {
    std::vector<int> js(j.begin(), j.end());
    std::sort(js.begin(), js.end());
    if (std::unique(js.begin(), js.end()) != js.end())
        throw std::invalid_argument("5-set has repeated vertices");
    if (!g.spans_clique(js)) throw std::invalid_argument("5-set does not span a clique");
    if (!std::count(js.begin(), js.end(), e.first) || !std::count(js.begin(), js.end(), e.second))
        throw std::invalid_argument("base edge not inside the 5-set");

    ShifterTerm term;
    term.base_edge = e;
    std::copy(js.begin(), js.end(), term.clique.begin());
    for (int a = 0; a < 5; ++a)
        for (int b = a + 1; b < 5; ++b)
            for (int c = b + 1; c < 5; ++c) {
                Triangle t = make_triangle(js[a], js[b], js[c]);
                int hit = 0;
                for (int v : t) hit += (v == e.first || v == e.second);
                term.coefficients[t] =
                    hit == 1 ? Rational(-1, 6) : Rational(1, 3);  // 0 or 2 shared: 1/3
            }
    return term;
}

// ---------------------------------------------------------------------------
// Corrections: c_e = (p^2 n - |T^(3)(e)|) / (4 |T^(5)(e)|), exact.
// ---------------------------------------------------------------------------

struct Correction {
    std::map<Edge, Rational> c;
    Rational max_abs;  // for comparison with 3 xi / (p^7 n^2)
};

inline Correction compute_correction(const Graph& g, const Rational& p) {
    Correction out;
    out.max_abs = 0;
    const long n = g.vertex_count();
    for (const auto& e : g.edges()) {
        long t5 = k5_count_at_edge(g, e);
        if (t5 == 0)
            throw std::invalid_argument("edge " + std::to_string(e.first) + "-" +
                                        std::to_string(e.second) +
                                        " lies in no 5-clique; host too sparse to boost");
        Rational ce = (rat_pow(p, 2) * n - triangle_count_at_edge(g, e)) / (4 * t5);
        out.max_abs = std::max(out.max_abs, rat_abs(ce));
        out.c.emplace(e, std::move(ce));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Assembly: psi(T) = 1/4 + sum_e c_e sum_{J in T^(5)(e)} psi_{e,J}(T).
//
// Grouped evaluation: the (e,J) pairs touching a fixed T are exactly the K5
// extensions {x,y} of T, and within one extension the shifter coefficients
// depend only on |V(T) cap e|.  Writing S_T for the sum of c over the edges
// of T, N5 for the number of extensions, and m_x = |CN(T) cap N(x)|:
//
//   psi(T) = 1/4 + (1/3)(S_T N5 + sum_{xy in E(G[CN(T)])} c_xy)
//                - (1/6) sum_{t in T} sum_{x in CN(T)} c_tx m_x.
//
// All c_e are put over one global common denominator so the inner loops are
// integer additions; each psi(T) is reduced once at the end.
// ---------------------------------------------------------------------------

struct PsiOutcome {
    FractionalWeighting psi;
    bool in_range = true;  // all psi(T) in [0,1]
    Triangle offender{-1, -1, -1};
    Rational offender_value;
    bool identity_ok = true;  // per-edge aggregate equals p^2 n / 4 exactly
    long max_pair_count = 0;  // max over T of #{(e,J) : T subset J}, vs 5 n^2
    bool support_bound_ok = true;
};

inline PsiOutcome assemble_psi(const Graph& g, const Rational& p) {
    const int n = g.vertex_count();
    Correction corr = compute_correction(g, p);

    // Common denominator L of all corrections; C_e = c_e * L is an integer.
    BigInt L = 1;
    for (const auto& [e, ce] : corr.c) {
        BigInt d = rat_den(ce);
        L *= d / gcd(L, d);
    }
    auto eid = [n](int u, int v) { return u * n + v; };  // u < v
    std::vector<BigInt> C(static_cast<size_t>(n) * n);
    for (const auto& [e, ce] : corr.c)
        C[eid(e.first, e.second)] = rat_num(ce) * (L / rat_den(ce));
    auto cof = [&](int u, int v) -> const BigInt& { return C[u < v ? eid(u, v) : eid(v, u)]; };

    PsiOutcome out;
    const BigInt L12 = 12 * L;
    const BigInt L3 = 3 * L;
    const Rational per_edge_target = rat_pow(p, 2) * n / 4;
    std::map<Edge, std::pair<BigInt, long>> agg;  // edge -> (sum of P_T, #triangles)

    for (const auto& t : enumerate_triangles(g)) {
        const int a = t[0], b = t[1], c = t[2];
        Bitset cn = g.adj_bits(a) & g.adj_bits(b) & g.adj_bits(c);
        BigInt s = cof(a, b) + cof(a, c) + cof(b, c);
        BigInt pen = 0, inner = 0;
        long sum_m = 0;
        for (auto xi = cn.find_first(); xi != Bitset::npos; xi = cn.find_next(xi)) {
            int x = static_cast<int>(xi);
            Bitset nx = cn & g.adj_bits(x);
            long m = static_cast<long>(nx.count());
            sum_m += m;
            if (m > 0) pen += m * (cof(a, x) + cof(b, x) + cof(c, x));
            for (auto yi = nx.find_next(xi); yi != Bitset::npos; yi = nx.find_next(yi))
                inner += cof(x, static_cast<int>(yi));
        }
        const long n5 = sum_m / 2;  // each extension edge counted from both ends
        long pairs = 10 * n5;
        out.max_pair_count = std::max(out.max_pair_count, pairs);
        if (pairs > 5L * n * n) out.support_bound_ok = false;

        // psi(T) = (3L + 2 P_T) / (12 L) with P_T integral.
        BigInt pt = 2 * (s * n5 + inner) - pen;
        Rational value(L3 + 2 * pt, L12);
        if (value < 0 || value > 1) {
            if (out.in_range) {
                out.offender = t;
                out.offender_value = value;
            }
            out.in_range = false;
        }
        for (const auto& e : triangle_edges(t)) {
            auto& slot = agg[e];
            slot.first += pt;
            ++slot.second;
        }
        out.psi.set(t, std::move(value));
    }

    for (const auto& e : g.edges()) {
        auto it = agg.find(e);
        Rational total = it == agg.end()
                             ? Rational(0)
                             : Rational(L3 * it->second.second + 2 * it->second.first, L12);
        if (total != per_edge_target) out.identity_ok = false;
    }
    return out;
}

// Independent per-edge aggregates straight off a weighting (slow path; the
// assembler's identity flag uses its internal integer representation instead).
inline std::map<Edge, Rational> psi_edge_aggregates(const Graph& g,
                                                    const FractionalWeighting& psi) {
    std::map<Edge, Rational> agg;
    for (const auto& e : g.edges()) agg[e] = 0;
    for (const auto& [t, w] : psi.weights())
        for (const auto& e : triangle_edges(t)) agg[e] += w;
    return agg;
}

// ---------------------------------------------------------------------------
// Sampling: include each triangle independently with probability psi(T) and
// keep the draw if the per-edge counts stay within (1 +- xi_cap) p^2 n / 4.
// The asymptotic target window is (1 +- n^{-1/3}); at small n that sits below
// the sampling noise, so the outcome reports the measured deviation exactly
// and flags (via cubed integer comparison) whether the asymptotic window held.
// ---------------------------------------------------------------------------

struct SampleOutcome {
    bool ok = false;
    RegularCollection collection;
    int retries_used = 0;
    Edge worst_edge{-1, -1};
    Rational worst_deviation;       // max over edges of |count - target| / target
    bool asymptotic_window = false;  // worst_deviation^3 * n <= 1
};

inline SampleOutcome sample_regular_collection(const Graph& g, const FractionalWeighting& psi,
                                               const Rational& p, std::uint64_t seed,
                                               int max_retries = 5,
                                               const Rational& xi_cap = Rational(1)) {
    SampleOutcome out;
    const long n = g.vertex_count();
    const Rational target = rat_pow(p, 2) * n / 4;
    auto rng = make_rng(seed);
    for (int attempt = 0; attempt <= max_retries; ++attempt) {
        out.retries_used = attempt;
        std::vector<Triangle> chosen;
        for (const auto& [t, w] : psi.weights())
            if (bernoulli_exact(rng, w)) chosen.push_back(t);
        std::map<Edge, long> count;
        for (const auto& e : g.edges()) count[e] = 0;
        for (const auto& t : chosen)
            for (const auto& e : triangle_edges(t)) ++count[e];
        Rational worst = 0;
        Edge worst_edge{-1, -1};
        for (const auto& [e, c] : count) {
            if (target == 0) continue;
            Rational dev = rat_abs(Rational(c) / target - 1);
            if (dev > worst) {
                worst = dev;
                worst_edge = e;
            }
        }
        out.worst_deviation = worst;
        out.worst_edge = worst_edge;
        out.asymptotic_window = rat_pow(worst, 3) * n <= 1;
        if (g.edge_count() > 0 && (chosen.empty() || worst >= xi_cap)) continue;
        {
            out.ok = true;
            out.collection.triangles = std::move(chosen);
            out.collection.p = p / 2;
            // The certified xi: the measured deviation, held off zero so the
            // collection still validates as (xi, p/2)-regular downstream.
            out.collection.xi = std::max(worst, Rational(1, std::max(n, 2L) * n));
            return out;
        }
    }
    return out;
}

}  // namespace tridecomp
