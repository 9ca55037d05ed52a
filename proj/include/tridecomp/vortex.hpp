#pragma once

#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "tridecomp/graph.hpp"
#include "tridecomp/rational.hpp"
#include "tridecomp/rng.hpp"
#include "tridecomp/typicality.hpp"

namespace tridecomp {

// Nested vertex sets U_0 > U_1 > ... > U_ell with geometric size decay and, in
// the degree variant, d(x, U_i) >= delta*|U_i| for every x in U_{i-1}.
struct Vortex {
    std::vector<std::vector<int>> sets;  // sorted; sets[0] is the whole vertex set
    Rational delta;                      // residual degree fraction (already minus epsilon)
    Rational epsilon;
    long m = 0;

    int levels() const { return static_cast<int>(sets.size()) - 1; }
};

// Size schedule n_0 = n, n_i = floor(eps * n_{i-1}), cut at the last level of
// size >= m_prime (that level's successor is the final one).
inline std::vector<long> vortex_schedule(long n, const Rational& eps, long m_prime) {
    if (!(eps > 0 && eps < 1)) throw std::invalid_argument("epsilon must lie in (0,1)");
    if (m_prime < 1 || n < m_prime) throw std::invalid_argument("need n >= m_prime >= 1");
    std::vector<long> sizes{n};
    while (sizes.back() >= m_prime) sizes.push_back(rat_floor_long(eps * sizes.back()));
    return sizes;  // length ell+1; only the last entry is below m_prime
}

struct VortexOutcome {
    bool ok = false;
    Vortex vortex;
    int failed_level = -1;
    int worst_vertex = -1;
    Rational worst_deficit = 0;  // how far below the required degree the worst vertex fell
    std::string error;
};

namespace detail {

inline Bitset to_bitset(const std::vector<int>& vs, int n) {
    Bitset b(n);
    for (int v : vs) b.set(v);
    return b;
}

}  // namespace detail

// Independent re-check of the vortex conditions against g.
inline bool verify_vortex(const Graph& g, const Vortex& v, std::string* why = nullptr) {
    auto fail = [&](const std::string& msg) {
        if (why) *why = msg;
        return false;
    };
    if (v.sets.empty()) return fail("no levels");
    if (static_cast<int>(v.sets[0].size()) != g.vertex_count())
        return fail("level 0 is not the whole vertex set");
    for (size_t i = 1; i < v.sets.size(); ++i) {
        long expect = rat_floor_long(v.epsilon * static_cast<long>(v.sets[i - 1].size()));
        if (static_cast<long>(v.sets[i].size()) != expect)
            return fail("level " + std::to_string(i) + " size off schedule");
        Bitset prev = detail::to_bitset(v.sets[i - 1], g.vertex_count());
        Bitset cur = detail::to_bitset(v.sets[i], g.vertex_count());
        if ((cur & ~prev).any()) return fail("level " + std::to_string(i) + " not nested");
        for (int x : v.sets[i - 1]) {
            if (Rational(g.degree_into(x, cur)) < v.delta * static_cast<long>(v.sets[i].size()))
                return fail("degree condition fails at level " + std::to_string(i) +
                            " vertex " + std::to_string(x));
        }
    }
    if (static_cast<long>(v.sets.back().size()) != v.m) return fail("m mismatch");
    return true;
}

// Sample a vortex by repeated uniform subset selection; each level is retried
// until every vertex of the previous level keeps a (delta-eps) fraction of its
// degree inside the new set.
inline VortexOutcome find_vortex(const Graph& g, const Rational& delta, const Rational& eps,
                                 long m_prime, std::uint64_t seed, int max_retries = 100) {
    VortexOutcome out;
    const long n = g.vertex_count();
    if (Rational(g.min_degree()) < delta * n) {
        out.error = "minimum degree below delta*n";
        return out;
    }
    std::vector<long> sizes;
    try {
        sizes = vortex_schedule(n, eps, m_prime);
    } catch (const std::invalid_argument& e) {
        out.error = e.what();
        return out;
    }
    const Rational resid = delta - eps;
    auto rng = make_rng(seed);

    Vortex v;
    v.delta = resid;
    v.epsilon = eps;
    v.m = sizes.back();
    v.sets.resize(sizes.size());
    for (int x = 0; x < n; ++x) v.sets[0].push_back(x);

    for (size_t i = 1; i < sizes.size(); ++i) {
        bool accepted = false;
        for (int attempt = 0; attempt < max_retries && !accepted; ++attempt) {
            std::vector<int> cand = sample_subset(v.sets[i - 1], sizes[i], rng);
            Bitset cb = detail::to_bitset(cand, g.vertex_count());
            Rational need = resid * sizes[i];
            int worst = -1;
            Rational worst_gap = 0;
            for (int x : v.sets[i - 1]) {
                Rational gap = need - g.degree_into(x, cb);
                if (gap > worst_gap) {
                    worst_gap = gap;
                    worst = x;
                }
            }
            if (worst < 0) {
                v.sets[i] = std::move(cand);
                accepted = true;
            } else if (worst_gap > out.worst_deficit || out.failed_level != static_cast<int>(i)) {
                out.failed_level = static_cast<int>(i);
                out.worst_vertex = worst;
                out.worst_deficit = worst_gap;
            }
        }
        if (!accepted) {
            out.error = "level " + std::to_string(i) + " rejected " +
                        std::to_string(max_retries) + " samples";
            return out;
        }
    }
    out.ok = true;
    out.failed_level = -1;
    out.worst_vertex = -1;
    out.worst_deficit = 0;
    out.vortex = std::move(v);
    return out;
}

// ---------------------------------------------------------------------------
// Typicality variant: each level must keep common neighbourhoods of small
// vertex sets near p^|A| * |U_i|, with a per-level error budget that doubles
// as the sets shrink.  The budget schedule is an implementation declaration
// reported in the outcome, not a bound taken from anywhere else.
// ---------------------------------------------------------------------------

struct TypicalVortexOutcome {
    bool ok = false;
    Vortex vortex;
    std::vector<Rational> xi_budget;    // cap applied at level i (index 0 unused)
    std::vector<Rational> xi_measured;  // worst relative deviation seen at each level
    bool exact_check = true;            // false once any level fell back to sampling
    int failed_level = -1;
    std::string error;
};

namespace detail {

// Worst relative deviation of |N(A) cap inside| from p^|A| * |inside| over
// sets A of size 1..h drawn from `outer`.  Exact when C(|outer|,h) is small
// (|outer| <= exact_cap), uniformly sampled otherwise.
inline Rational measure_level_xi(const Graph& g, const std::vector<int>& outer,
                                 const Bitset& inside, long inside_size, const Rational& p, int h,
                                 Rng& rng, bool* exact, int exact_cap = 120,
                                 int sample_budget = 100000) {
    Rational worst = 0;
    auto note = [&](long count, int a) {
        Rational target = rat_pow(p, static_cast<unsigned>(a)) * inside_size;
        if (target == 0) { worst = 1; return; }
        worst = std::max(worst, rat_abs(Rational(count) / target - 1));
    };
    if (static_cast<int>(outer.size()) <= exact_cap) {
        *exact = true;
        const int k = static_cast<int>(outer.size());
        for (int a = 0; a < k; ++a) {
            Bitset ba = g.adj_bits(outer[a]) & inside;
            note(static_cast<long>(ba.count()), 1);
            if (h < 2) continue;
            for (int b = a + 1; b < k; ++b) {
                Bitset bab = ba & g.adj_bits(outer[b]);
                note(static_cast<long>(bab.count()), 2);
                if (h < 3) continue;
                for (int c = b + 1; c < k; ++c) {
                    Bitset babc = bab & g.adj_bits(outer[c]);
                    note(static_cast<long>(babc.count()), 3);
                    if (h < 4) continue;
                    for (int d = c + 1; d < k; ++d)
                        note(static_cast<long>((babc & g.adj_bits(outer[d])).count()), 4);
                }
            }
        }
    } else {
        *exact = false;
        int per_size = sample_budget / h;
        for (int a = 1; a <= h; ++a) {
            for (int it = 0; it < per_size; ++it) {
                std::vector<int> pick = sample_subset(outer, a, rng);
                Bitset b = inside;
                for (int x : pick) b &= g.adj_bits(x);
                note(static_cast<long>(b.count()), a);
            }
        }
    }
    return worst;
}

}  // namespace detail

inline TypicalVortexOutcome find_typical_vortex(const Graph& g, const TypicalityParams& params,
                                                const Rational& eps, long m_prime,
                                                std::uint64_t seed, int max_retries = 100) {
    params.validate();
    TypicalVortexOutcome out;
    const long n = g.vertex_count();
    if (n < m_prime) {
        out.error = "m_prime exceeds the vertex count";
        return out;
    }
    std::vector<long> sizes;
    try {
        sizes = vortex_schedule(n, eps, m_prime);
    } catch (const std::invalid_argument& e) {
        out.error = e.what();
        return out;
    }
    auto rng = make_rng(seed);

    Vortex v;
    v.delta = 0;
    v.epsilon = eps;
    v.m = sizes.back();
    v.sets.resize(sizes.size());
    for (int x = 0; x < n; ++x) v.sets[0].push_back(x);
    out.xi_budget.assign(sizes.size(), 0);
    out.xi_measured.assign(sizes.size(), 0);

    Rational budget = params.xi;
    for (size_t i = 1; i < sizes.size(); ++i) {
        budget *= 2;  // declared per-level doubling
        out.xi_budget[i] = budget;
        bool accepted = false;
        for (int attempt = 0; attempt < max_retries && !accepted; ++attempt) {
            std::vector<int> cand = sample_subset(v.sets[i - 1], sizes[i], rng);
            Bitset cb = detail::to_bitset(cand, g.vertex_count());
            bool exact = true;
            Rational xi = detail::measure_level_xi(g, v.sets[i - 1], cb, sizes[i], params.p,
                                                   params.h, rng, &exact);
            out.xi_measured[i] = xi;
            if (!exact) out.exact_check = false;
            if (xi <= budget) {
                v.sets[i] = std::move(cand);
                accepted = true;
            }
        }
        if (!accepted) {
            out.failed_level = static_cast<int>(i);
            out.error = "level " + std::to_string(i) + " exceeded its typicality budget";
            return out;
        }
    }
    out.ok = true;
    out.vortex = std::move(v);
    return out;
}

// ---------------------------------------------------------------------------
// Text format: one line per level, "level i: v1 v2 ...".
// ---------------------------------------------------------------------------

inline void write_vortex(std::ostream& os, const Vortex& v) {
    for (size_t i = 0; i < v.sets.size(); ++i) {
        os << "level " << i << ":";
        for (int x : v.sets[i]) os << " " << x;
        os << "\n";
    }
}

inline std::vector<std::vector<int>> read_vortex_sets(std::istream& in) {
    std::vector<std::vector<int>> sets;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto pos = line.find_first_not_of(" \t\r");
        if (pos == std::string::npos || line[pos] == '#') continue;
        std::istringstream ls(line);
        std::string kw;
        long idx;
        char colon;
        ls >> kw >> idx >> std::ws;
        colon = static_cast<char>(ls.get());
        if (kw != "level" || ls.fail() || colon != ':' ||
            idx != static_cast<long>(sets.size()))
            throw std::runtime_error("line " + std::to_string(lineno) + ": expected 'level i: ...'");
        std::vector<int> vs;
        int x;
        while (ls >> x) vs.push_back(x);
        std::sort(vs.begin(), vs.end());
        sets.push_back(std::move(vs));
    }
    return sets;
}

}  // namespace tridecomp
