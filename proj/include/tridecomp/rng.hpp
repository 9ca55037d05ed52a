#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "tridecomp/graph.hpp"
#include "tridecomp/rational.hpp"

namespace tridecomp {

using Rng = std::mt19937_64;

inline Rng make_rng(std::uint64_t seed) { return Rng(seed); }

// Bernoulli draw with an exact rational probability: compares a uniform 64-bit
// draw against q scaled to 2^64.
inline bool bernoulli_exact(Rng& rng, const Rational& q) {
    if (q <= 0) return false;
    if (q >= 1) return true;
    BigInt threshold = (rat_num(q) << 64) / rat_den(q);
    BigInt draw = rng();
    return draw < threshold;
}

inline Graph sample_gnp(int n, const Rational& p, Rng& rng) {
    std::vector<Edge> edges;
    if (p >= 1) return Graph::complete(n);
    if (p <= 0) return Graph(n, {});
    // Hoist the scaled threshold out of the loop; each draw is one comparison.
    std::uint64_t threshold = static_cast<std::uint64_t>((rat_num(p) << 64) / rat_den(p));
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v)
            if (rng() < threshold) edges.push_back({u, v});
    return Graph(n, std::move(edges));
}

// Uniform subset of the given size, Fisher-Yates prefix.
inline std::vector<int> sample_subset(const std::vector<int>& pool, size_t k, Rng& rng) {
    std::vector<int> v(pool);
    for (size_t i = 0; i < k && i < v.size(); ++i) {
        std::uniform_int_distribution<size_t> d(i, v.size() - 1);
        std::swap(v[i], v[d(rng)]);
    }
    v.resize(std::min(k, v.size()));
    std::sort(v.begin(), v.end());
    return v;
}

}  // namespace tridecomp
