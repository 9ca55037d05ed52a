#pragma once

#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>

#include "tridecomp/graph.hpp"
#include "tridecomp/rational.hpp"

namespace tridecomp {

// Exact-rational map from triangles to weights, with per-edge aggregates.
class FractionalWeighting {
public:
    void set(const Triangle& t, Rational w) { weights_[t] = std::move(w); }

    const Rational* get(const Triangle& t) const {
        auto it = weights_.find(t);
        return it == weights_.end() ? nullptr : &it->second;
    }

    const std::map<Triangle, Rational>& weights() const { return weights_; }
    size_t size() const { return weights_.size(); }

    // Exact sum of weights of triangles containing edge e.
    Rational edge_aggregate(const Edge& e) const {
        Rational s = 0;
        for (const auto& [t, w] : weights_) {
            if ((t[0] == e.first && (t[1] == e.second || t[2] == e.second)) ||
                (t[1] == e.first && t[2] == e.second))
                s += w;
        }
        return s;
    }

private:
    std::map<Triangle, Rational> weights_;
};

// True iff w assigns weights in [0,1] to triangles of g and the exact per-edge
// aggregate equals 1 on every edge of g (a fractional K3-decomposition).
inline bool verify_fractional(const Graph& g, const FractionalWeighting& w) {
    std::map<Edge, Rational> agg;
    for (const auto& e : g.edges()) agg[e] = 0;
    for (const auto& [t, wt] : w.weights()) {
        if (wt < 0 || wt > 1) return false;
        if (!g.has_edge(t[0], t[1]) || !g.has_edge(t[0], t[2]) || !g.has_edge(t[1], t[2]))
            return false;
        for (const auto& e : triangle_edges(t)) agg[e] += wt;
    }
    for (const auto& [e, s] : agg)
        if (s != 1) return false;
    return true;
}

// Weighting text format: one line per triangle, "u v w num/den".
inline void write_weighting(std::ostream& out, const FractionalWeighting& w) {
    for (const auto& [t, wt] : w.weights())
        out << t[0] << " " << t[1] << " " << t[2] << " " << to_string(wt) << "\n";
}

inline FractionalWeighting read_weighting(std::istream& in) {
    FractionalWeighting w;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto pos = line.find_first_not_of(" \t\r");
        if (pos == std::string::npos || line[pos] == '#') continue;
        std::istringstream ls(line);
        int a, b, c;
        std::string frac;
        ls >> a >> b >> c >> frac;
        if (ls.fail())
            throw std::runtime_error("line " + std::to_string(lineno) + ": expected 'u v w q'");
        w.set(make_triangle(a, b, c), parse_rational(frac));
    }
    return w;
}

}  // namespace tridecomp
