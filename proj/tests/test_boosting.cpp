#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "tridecomp/boosting.hpp"
#include "tridecomp/typicality.hpp"

using namespace tridecomp;

namespace {

// Assembly straight from the definition, for cross-checking the grouped path.
FractionalWeighting naive_psi(const Graph& g, const Rational& p) {
    Correction corr = compute_correction(g, p);
    FractionalWeighting psi;
    for (const auto& t : enumerate_triangles(g)) psi.set(t, Rational(1, 4));
    for (const auto& j : enumerate_k5(g)) {
        for (int a = 0; a < 5; ++a)
            for (int b = a + 1; b < 5; ++b) {
                Edge e = make_edge(j[a], j[b]);
                auto term = shifter(g, e, j);
                const Rational& ce = corr.c.at(e);
                for (const auto& [t, w] : term.coefficients)
                    psi.set(t, *psi.get(t) + ce * w);
            }
    }
    return psi;
}

bool every_edge_in_k5(const Graph& g) {
    for (const auto& e : g.edges())
        if (k5_count_at_edge(g, e) == 0) return false;
    return true;
}

}  // namespace

TEST_CASE("shifter identity is exact on complete hosts") {
    for (int n : {5, 6, 7}) {
        Graph g = Graph::complete(n);
        for (const auto& e : g.edges()) {
            for (const auto& j : enumerate_k5(g)) {
                bool contains = std::count(j.begin(), j.end(), e.first) &&
                                std::count(j.begin(), j.end(), e.second);
                if (!contains) continue;
                auto term = shifter(g, e, j);
                for (const auto& ep : g.edges())
                    CHECK(term.edge_aggregate(ep) == Rational(ep == e ? 1 : 0));
            }
        }
    }
}

TEST_CASE("shifter rejects bad inputs") {
    Graph g = Graph::complete(6);
    CHECK_THROWS(shifter(g, make_edge(0, 5), {0, 1, 2, 3, 4}));  // edge outside the 5-set
    Graph broken = g.minus_edges({make_edge(2, 3)});
    CHECK_THROWS(shifter(broken, make_edge(0, 1), {0, 1, 2, 3, 4}));  // not a clique
    CHECK_THROWS(shifter(g, make_edge(0, 1), {0, 1, 2, 3, 3}));       // repeated vertex
}

TEST_CASE("corrections") {
    // K_5 at p=1: every edge lies in 3 triangles and one K_5.
    auto k5 = compute_correction(Graph::complete(5), Rational(1));
    for (const auto& [e, c] : k5.c) CHECK(c == Rational(1, 2));
    CHECK(k5.max_abs == Rational(1, 2));

    // K_5 padded to 12 vertices, p=1/2: p^2 n = 3 = |T^(3)(e)| exactly.
    Graph padded(12, Graph::complete(5).edges());
    auto zero = compute_correction(padded, Rational(1, 2));
    for (const auto& [e, c] : zero.c) CHECK(c == 0);
    CHECK(zero.max_abs == 0);

    // Sparse hosts are refused outright.
    CHECK_THROWS_AS(compute_correction(Graph::cycle(6), Rational(1, 2)), std::invalid_argument);
    CHECK_THROWS_AS(compute_correction(Graph::complete(4), Rational(1)), std::invalid_argument);
}

TEST_CASE("vanishing corrections give the constant weighting") {
    Graph padded(12, Graph::complete(5).edges());
    auto out = assemble_psi(padded, Rational(1, 2));
    CHECK(out.identity_ok);
    CHECK(out.in_range);
    CHECK(out.support_bound_ok);
    for (const auto& [t, w] : out.psi.weights()) CHECK(w == Rational(1, 4));
    // Per-edge aggregate is |T^(3)(e)|/4 = 3/4 = p^2 n / 4.
    for (const auto& [e, s] : psi_edge_aggregates(padded, out.psi)) CHECK(s == Rational(3, 4));
}

TEST_CASE("grouped assembly matches the definition") {
    Graph k7 = Graph::complete(7);
    auto fast = assemble_psi(k7, Rational(1));
    CHECK(fast.psi.weights() == naive_psi(k7, Rational(1)).weights());
    CHECK(fast.identity_ok);
    CHECK(fast.in_range);
    for (const auto& [e, s] : psi_edge_aggregates(k7, fast.psi)) CHECK(s == Rational(7, 4));

    auto rng = make_rng(5);
    int done = 0;
    while (done < 3) {
        Graph g = sample_gnp(20, Rational(4, 5), rng);
        if (!every_edge_in_k5(g)) continue;
        ++done;
        auto a = assemble_psi(g, Rational(4, 5));
        CHECK(a.psi.weights() == naive_psi(g, Rational(4, 5)).weights());
        CHECK(a.identity_ok);
        CHECK(a.support_bound_ok);
        Rational target = rat_pow(Rational(4, 5), 2) * 20 / 4;
        for (const auto& [e, s] : psi_edge_aggregates(g, a.psi)) CHECK(s == target);
    }
}

TEST_CASE("assembly identity at scale") {
    auto rng = make_rng(21);
    Graph g = sample_gnp(160, Rational(1, 2), rng);
    REQUIRE(every_edge_in_k5(g));
    auto out = assemble_psi(g, Rational(1, 2));
    CHECK(out.identity_ok);  // exact for every edge, straight off the rationals
    CHECK(out.support_bound_ok);
    CHECK(out.max_pair_count <= 5L * 160 * 160);
    // The [0,1] range needs corrections of asymptotic size; at n=160 a few
    // weights dip just below zero and the assembler names one.
    if (!out.in_range) {
        CHECK(out.offender_value < 0);
        CHECK(out.offender_value > Rational(-1, 10));
    }
}

TEST_CASE("correction size against the asymptotic bound") {
    auto rng = make_rng(7);
    Graph g = sample_gnp(60, Rational(3, 4), rng);
    REQUIRE(every_edge_in_k5(g));
    auto corr = compute_correction(g, Rational(3, 4));
    auto prof = typicality_profile(g, 4);
    Rational xi = prof.measured_xi(Rational(3, 4), 60);
    Rational bound = 3 * xi / (rat_pow(Rational(3, 4), 7) * 60 * 60);
    // Both sides are exact rationals.  The comparison only tips the right way
    // once xi <= p^7/20, far out of reach for any desk-size host: here the
    // measured xi is driven to ~0.8 by four-set codegrees, and the bound's
    // 1/n^2 decay loses to the 1/(4 t5) decay of the corrections.
    CHECK(xi > Rational(1, 2));
    CHECK(corr.max_abs > bound);
    CHECK(bound > 0);
}

TEST_CASE("sampling from degenerate weightings") {
    // Three disjoint triangles, p = 2/3: the target p^2 n / 4 = 1 matches the
    // exact per-edge count of the full triangle set.
    Graph g(9, {{0, 1}, {1, 2}, {0, 2}, {3, 4}, {4, 5}, {3, 5}, {6, 7}, {7, 8}, {6, 8}});
    FractionalWeighting ones;
    for (const auto& t : enumerate_triangles(g)) ones.set(t, Rational(1));
    auto out = sample_regular_collection(g, ones, Rational(2, 3), 1);
    REQUIRE(out.ok);
    CHECK(out.collection.triangles.size() == 3);
    CHECK(out.worst_deviation == 0);
    CHECK(out.asymptotic_window);
    CHECK(validate_regular_collection(g, out.collection));

    FractionalWeighting zeros;
    for (const auto& t : enumerate_triangles(g)) zeros.set(t, Rational(0));
    auto bad = sample_regular_collection(g, zeros, Rational(2, 3), 1);
    CHECK_FALSE(bad.ok);
    CHECK(bad.retries_used == 5);

    // An edgeless host accepts vacuously.
    auto trivial = sample_regular_collection(Graph(4, {}), FractionalWeighting{}, Rational(1, 2), 1);
    CHECK(trivial.ok);
}

TEST_CASE("sampled collections feed the approximate decomposer") {
    auto rng = make_rng(21);
    Graph g = sample_gnp(160, Rational(1, 2), rng);
    auto psi = assemble_psi(g, Rational(1, 2));
    // Success per attempt is a coin flip at this scale (the window is count in
    // [1, 2 * target)); scan seeds until one lands and use that collection.
    SampleOutcome hit;
    for (std::uint64_t seed = 1; seed <= 12 && !hit.ok; ++seed)
        hit = sample_regular_collection(g, psi.psi, Rational(1, 2), seed);
    REQUIRE(hit.ok);
    CHECK(hit.worst_deviation < 1);
    CHECK(validate_regular_collection(g, hit.collection));
    auto res = approx_decompose_from_collection(g, hit.collection, Rational(1, 5), 3);
    Graph h = res.covered_subgraph(g.vertex_count());
    CHECK(verify_decomposition(h, res.decomposed));
    CHECK(h.union_with(res.leftover(g)) == g);
}
