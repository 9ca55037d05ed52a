#pragma once

#include <optional>
#include <stdexcept>
#include <vector>

#include "tridecomp/graph.hpp"
#include "tridecomp/rational.hpp"

namespace tridecomp {

struct TypicalityParams {
    Rational xi;   // in (0,1)
    int h = 1;     // >= 1
    Rational p;    // in (0,1]

    void validate() const {
        if (!(xi > 0 && xi < 1)) throw std::invalid_argument("xi must lie in (0,1)");
        if (!(p > 0 && p <= 1)) throw std::invalid_argument("p must lie in (0,1]");
        if (h < 1) throw std::invalid_argument("h must be >= 1");
    }
};

// min/max common-neighbourhood size over all A with |A| == level, level = 1..h.
struct TypicalityProfile {
    std::vector<long> min_count;  // indexed by |A|-1
    std::vector<long> max_count;

    // Smallest xi for which the graph is (xi,h,p)-typical: the worst relative
    // deviation of any level's extremes from p^|A| * n.
    Rational measured_xi(const Rational& p, long n) const {
        Rational worst = 0;
        for (size_t a = 0; a < min_count.size(); ++a) {
            Rational target = rat_pow(p, static_cast<unsigned>(a + 1)) * n;
            if (target == 0) return Rational(1);
            Rational lo = rat_abs(Rational(min_count[a]) / target - 1);
            Rational hi = rat_abs(Rational(max_count[a]) / target - 1);
            worst = std::max({worst, lo, hi});
        }
        return worst;
    }
};

// Exhaustive common-neighbourhood extremes over all A with 1 <= |A| <= h (h <= 4).
inline TypicalityProfile typicality_profile(const Graph& g, int h) {
    if (h < 1 || h > 4) throw std::invalid_argument("typicality profile supports 1 <= h <= 4");
    const int n = g.vertex_count();
    TypicalityProfile prof;
    prof.min_count.assign(h, n);
    prof.max_count.assign(h, 0);
    auto note = [&](int level, long c) {
        prof.min_count[level - 1] = std::min(prof.min_count[level - 1], c);
        prof.max_count[level - 1] = std::max(prof.max_count[level - 1], c);
    };
    for (int a = 0; a < n; ++a) {
        const Bitset& ba = g.adj_bits(a);
        note(1, static_cast<long>(ba.count()));
        if (h < 2) continue;
        for (int b = a + 1; b < n; ++b) {
            Bitset bab = ba & g.adj_bits(b);
            note(2, static_cast<long>(bab.count()));
            if (h < 3) continue;
            for (int c = b + 1; c < n; ++c) {
                Bitset babc = bab & g.adj_bits(c);
                note(3, static_cast<long>(babc.count()));
                if (h < 4) continue;
                for (int d = c + 1; d < n; ++d)
                    note(4, static_cast<long>((babc & g.adj_bits(d)).count()));
            }
        }
    }
    return prof;
}

// Exact check: every A with 1 <= |A| <= h has common neighbourhood of size
// (1 +- xi) p^|A| n. No floating point enters the comparison.
inline bool is_typical(const Graph& g, const TypicalityParams& params) {
    params.validate();
    const long n = g.vertex_count();
    if (n == 0) return true;
    TypicalityProfile prof = typicality_profile(g, params.h);
    for (int a = 1; a <= params.h; ++a) {
        Rational target = rat_pow(params.p, static_cast<unsigned>(a)) * n;
        Rational lo = (1 - params.xi) * target;
        Rational hi = (1 + params.xi) * target;
        if (Rational(prof.min_count[a - 1]) < lo) return false;
        if (Rational(prof.max_count[a - 1]) > hi) return false;
    }
    return true;
}

}  // namespace tridecomp
