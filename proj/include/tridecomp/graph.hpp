#pragma once

#include <algorithm>
#include <array>
#include <boost/dynamic_bitset.hpp>
#include <cstdint>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace tridecomp {

using Bitset = boost::dynamic_bitset<>;
using Edge = std::pair<int, int>;          // always stored with first < second
using Triangle = std::array<int, 3>;       // always stored sorted

inline Edge make_edge(int u, int v) {
    if (u == v) throw std::invalid_argument("loop edge");
    return u < v ? Edge{u, v} : Edge{v, u};
}

inline Triangle make_triangle(int a, int b, int c) {
    Triangle t{a, b, c};
    std::sort(t.begin(), t.end());
    if (t[0] == t[1] || t[1] == t[2]) throw std::invalid_argument("degenerate triangle");
    return t;
}

inline std::array<Edge, 3> triangle_edges(const Triangle& t) {
    return {Edge{t[0], t[1]}, Edge{t[0], t[2]}, Edge{t[1], t[2]}};
}

// Immutable simple undirected graph on vertices 0..n-1.
// Adjacency is kept both as bitsets (for common-neighbourhood queries) and as
// sorted neighbour lists (for enumeration). Derived graphs are new values.
class Graph {
public:
    Graph() : n_(0) {}

    Graph(int n, std::vector<Edge> edges) : n_(n) {
        std::sort(edges.begin(), edges.end());
        edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
        edges_ = std::move(edges);
        adj_.assign(n_, Bitset(n_));
        nbrs_.assign(n_, {});
        for (auto [u, v] : edges_) {
            if (u < 0 || v < 0 || u >= n_ || v >= n_ || u >= v)
                throw std::invalid_argument("edge out of range");
            adj_[u].set(v);
            adj_[v].set(u);
            nbrs_[u].push_back(v);
            nbrs_[v].push_back(u);
        }
        for (auto& l : nbrs_) std::sort(l.begin(), l.end());
    }

    static Graph complete(int n) {
        std::vector<Edge> e;
        for (int u = 0; u < n; ++u)
            for (int v = u + 1; v < n; ++v) e.push_back({u, v});
        return Graph(n, std::move(e));
    }

    static Graph cycle(int n) {
        if (n < 3) throw std::invalid_argument("cycle needs >= 3 vertices");
        std::vector<Edge> e;
        for (int i = 0; i < n; ++i) e.push_back(make_edge(i, (i + 1) % n));
        return Graph(n, std::move(e));
    }

    int vertex_count() const { return n_; }
    long edge_count() const { return static_cast<long>(edges_.size()); }
    const std::vector<Edge>& edges() const { return edges_; }

    bool has_edge(int u, int v) const {
        return u != v && u >= 0 && v >= 0 && u < n_ && v < n_ && adj_[u].test(v);
    }
    bool has_edge(const Edge& e) const { return has_edge(e.first, e.second); }

    int degree(int v) const { return static_cast<int>(nbrs_[v].size()); }
    int min_degree() const {
        int d = n_ == 0 ? 0 : n_;
        for (int v = 0; v < n_; ++v) d = std::min(d, degree(v));
        return d;
    }
    int max_degree() const {
        int d = 0;
        for (int v = 0; v < n_; ++v) d = std::max(d, degree(v));
        return d;
    }

    const std::vector<int>& neighbors(int v) const { return nbrs_[v]; }
    const Bitset& adj_bits(int v) const { return adj_[v]; }

    // d_G(x, S): number of neighbours of x inside S.
    int degree_into(int x, const Bitset& s) const { return static_cast<int>((adj_[x] & s).count()); }

    Bitset common_neighborhood(const std::vector<int>& vs) const {
        Bitset b(n_);
        if (vs.empty()) { b.set(); return b; }
        b = adj_[vs[0]];
        for (size_t i = 1; i < vs.size(); ++i) b &= adj_[vs[i]];
        return b;
    }

    bool spans_clique(const std::vector<int>& vs) const {
        for (size_t i = 0; i < vs.size(); ++i)
            for (size_t j = i + 1; j < vs.size(); ++j)
                if (!has_edge(vs[i], vs[j])) return false;
        return true;
    }

    // Same vertex universe, edges restricted to those with both ends in s.
    Graph restrict_to(const Bitset& s) const {
        std::vector<Edge> e;
        for (const auto& ed : edges_)
            if (s.test(ed.first) && s.test(ed.second)) e.push_back(ed);
        return Graph(n_, std::move(e));
    }

    Graph minus_edges(const std::vector<Edge>& rm) const {
        std::vector<Edge> sorted_rm(rm);
        std::sort(sorted_rm.begin(), sorted_rm.end());
        std::vector<Edge> e;
        for (const auto& ed : edges_)
            if (!std::binary_search(sorted_rm.begin(), sorted_rm.end(), ed)) e.push_back(ed);
        return Graph(n_, std::move(e));
    }

    Graph minus(const Graph& h) const {
        std::vector<Edge> e;
        for (const auto& ed : edges_)
            if (!h.has_edge(ed)) e.push_back(ed);
        return Graph(n_, std::move(e));
    }

    Graph union_with(const Graph& h) const {
        int n = std::max(n_, h.n_);
        std::vector<Edge> e = edges_;
        e.insert(e.end(), h.edges_.begin(), h.edges_.end());
        return Graph(n, std::move(e));
    }

    Graph with_edges(const std::vector<Edge>& add, int min_n = 0) const {
        int n = std::max(n_, min_n);
        for (auto [u, v] : add) n = std::max({n, u + 1, v + 1});
        std::vector<Edge> e = edges_;
        e.insert(e.end(), add.begin(), add.end());
        return Graph(n, std::move(e));
    }

    // Compact induced subgraph on vs; out_map[i] is the original label of new vertex i.
    Graph induced_compact(const std::vector<int>& vs, std::vector<int>* out_map = nullptr) const {
        std::vector<int> sorted_vs(vs);
        std::sort(sorted_vs.begin(), sorted_vs.end());
        std::map<int, int> rev;
        for (size_t i = 0; i < sorted_vs.size(); ++i) rev[sorted_vs[i]] = static_cast<int>(i);
        std::vector<Edge> e;
        for (const auto& ed : edges_) {
            auto iu = rev.find(ed.first), iv = rev.find(ed.second);
            if (iu != rev.end() && iv != rev.end()) e.push_back({iu->second, iv->second});
        }
        if (out_map) *out_map = sorted_vs;
        return Graph(static_cast<int>(sorted_vs.size()), std::move(e));
    }

    bool operator==(const Graph& o) const { return n_ == o.n_ && edges_ == o.edges_; }

private:
    int n_;
    std::vector<Edge> edges_;
    std::vector<Bitset> adj_;
    std::vector<std::vector<int>> nbrs_;
};

// ---------------------------------------------------------------------------
// Edge-list text format: one edge per line "u v"; '#' lines and blank lines
// ignored; optional leading header "n <count>". Arbitrary non-negative labels
// are relabelled to 0..n-1; label_map (new -> original) records the ingest.
// ---------------------------------------------------------------------------

struct EdgeListFile {
    Graph graph;
    std::vector<long> label_map;  // label_map[v] = original label of vertex v
};

inline EdgeListFile read_edge_list(std::istream& in) {
    std::string line;
    int lineno = 0;
    bool have_header = false;
    long header_n = 0;
    std::vector<std::pair<long, long>> raw;
    while (std::getline(in, line)) {
        ++lineno;
        auto pos = line.find_first_not_of(" \t\r");
        if (pos == std::string::npos || line[pos] == '#') continue;
        std::istringstream ls(line);
        if (!have_header && raw.empty() && line[pos] == 'n') {
            char c;
            ls >> c >> header_n;
            if (ls.fail() || header_n < 0)
                throw std::runtime_error("line " + std::to_string(lineno) + ": bad header");
            have_header = true;
            continue;
        }
        long u, v;
        ls >> u >> v;
        if (ls.fail() || u < 0 || v < 0)
            throw std::runtime_error("line " + std::to_string(lineno) + ": expected 'u v'");
        if (u == v)
            throw std::runtime_error("line " + std::to_string(lineno) + ": loop edge");
        raw.push_back({u, v});
    }
    std::vector<long> labels;
    if (have_header) {
        for (long i = 0; i < header_n; ++i) labels.push_back(i);
        for (auto [u, v] : raw)
            if (u >= header_n || v >= header_n)
                throw std::runtime_error("edge label exceeds declared vertex count");
    } else {
        long mx = -1;
        for (auto [u, v] : raw) mx = std::max({mx, u, v});
        for (long i = 0; i <= mx; ++i) labels.push_back(i);
    }
    // Dense 0..max relabelling: identity here, but labels beyond int range rejected.
    std::vector<Edge> edges;
    for (auto [u, v] : raw) edges.push_back(make_edge(static_cast<int>(u), static_cast<int>(v)));
    EdgeListFile f;
    f.graph = Graph(static_cast<int>(labels.size()), std::move(edges));
    f.label_map = std::move(labels);
    return f;
}

inline void write_edge_list(std::ostream& out, const Graph& g) {
    out << "n " << g.vertex_count() << "\n";
    for (auto [u, v] : g.edges()) out << u << " " << v << "\n";
}

}  // namespace tridecomp
