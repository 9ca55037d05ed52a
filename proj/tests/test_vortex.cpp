#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>

#include "tridecomp/vortex.hpp"

using namespace tridecomp;

TEST_CASE("size schedule") {
    auto s = vortex_schedule(1000, Rational(1, 10), 50);
    REQUIRE(s.size() == 3);  // levels 0..2
    CHECK(s[0] == 1000);
    CHECK(s[1] == 100);
    CHECK(s[2] == 10);

    CHECK_THROWS(vortex_schedule(1000, Rational(1), 50));
    CHECK_THROWS(vortex_schedule(10, Rational(1, 2), 50));  // n < m_prime
}

TEST_CASE("complete graphs accept immediately") {
    Graph k = Graph::complete(200);
    auto out = find_vortex(k, Rational(3, 4), Rational(3, 10), 10, 1, 1);
    REQUIRE_MESSAGE(out.ok, out.error);
    CHECK(out.vortex.levels() == 3);  // 200, 60, 18, 5
    CHECK(out.vortex.m == 5);
    std::string why;
    CHECK_MESSAGE(verify_vortex(k, out.vortex, &why), why);

    // Determinism under a fixed seed.
    auto again = find_vortex(k, Rational(3, 4), Rational(3, 10), 10, 1, 1);
    CHECK(again.vortex.sets == out.vortex.sets);
    auto other = find_vortex(k, Rational(3, 4), Rational(3, 10), 10, 2, 1);
    CHECK(other.ok);
    CHECK(other.vortex.sets != out.vortex.sets);
}

TEST_CASE("dense random graphs over several seeds") {
    auto rng = make_rng(4242);
    Graph g = sample_gnp(1000, Rational(9, 10), rng);
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        auto out = find_vortex(g, Rational(17, 20), Rational(1, 5), 50, seed, 25);
        REQUIRE_MESSAGE(out.ok, out.error);
        CHECK(out.vortex.m == 40);  // 1000, 200, 40
        std::string why;
        CHECK_MESSAGE(verify_vortex(g, out.vortex, &why), why);
    }
}

TEST_CASE("failure paths") {
    // Minimum degree precondition.
    auto low = find_vortex(Graph::cycle(10), Rational(1, 2), Rational(1, 3), 3, 1, 5);
    CHECK_FALSE(low.ok);
    CHECK(low.error == "minimum degree below delta*n");

    // A single-vertex final level can never serve its own degree condition:
    // the surviving vertex has no neighbour inside its own set.
    std::vector<Edge> bip;
    for (int u = 0; u < 10; ++u)
        for (int v = 10; v < 20; ++v) bip.push_back({u, v});
    Graph kb(20, bip);
    auto out = find_vortex(kb, Rational(1, 2), Rational(3, 10), 4, 7, 10);
    CHECK_FALSE(out.ok);
    CHECK(out.failed_level == 2);
    CHECK(out.worst_deficit > 0);
    CHECK_FALSE(out.error.empty());
}

TEST_CASE("rejects tampered vortices") {
    Graph k = Graph::complete(100);
    auto out = find_vortex(k, Rational(3, 4), Rational(1, 4), 10, 3, 5);
    REQUIRE(out.ok);
    Vortex bad = out.vortex;
    bad.sets[1].pop_back();
    CHECK_FALSE(verify_vortex(k, bad));
    Vortex swapped = out.vortex;
    swapped.sets.back() = {0};  // wrong size/m
    CHECK_FALSE(verify_vortex(k, swapped));
}

TEST_CASE("typical variant on complete graphs") {
    Graph k = Graph::complete(200);
    auto out = find_typical_vortex(k, {Rational(1, 10), 4, Rational(1)}, Rational(1, 2), 20, 5, 5);
    REQUIRE_MESSAGE(out.ok, out.error);
    // 200, 100, 50, 25, 12: removing at most four vertices from a clique level
    // shifts common neighbourhoods by at most 4, well under the doubled budgets.
    REQUIRE(out.xi_budget.size() == 5);
    for (size_t i = 1; i < out.xi_budget.size(); ++i) {
        CHECK(out.xi_budget[i] == Rational(1, 10) * rat_pow(Rational(2), static_cast<unsigned>(i)));
        CHECK(out.xi_measured[i] <= out.xi_budget[i]);
    }
    std::string why;
    CHECK_MESSAGE(verify_vortex(k, out.vortex, &why), why);  // structural part (delta = 0)

    auto bad = find_typical_vortex(k, {Rational(1, 10), 4, Rational(1)}, Rational(1, 2), 500, 5, 5);
    CHECK_FALSE(bad.ok);
    CHECK(bad.error == "m_prime exceeds the vertex count");
}

TEST_CASE("typical variant on sampled graphs") {
    // Desk-scale levels cannot hold a tight window for four-vertex sets (the
    // targets are single digits), so the honest base budget is 1/2.
    int ok = 0;
    for (std::uint64_t seed = 1; seed <= 4; ++seed) {
        auto rng = make_rng(seed * 77);
        Graph g = sample_gnp(600, Rational(1, 2), rng);
        auto out =
            find_typical_vortex(g, {Rational(1, 2), 4, Rational(1, 2)}, Rational(1, 2), 60, seed, 20);
        if (!out.ok) continue;
        ++ok;
        CHECK(out.vortex.m == 37);  // 600, 300, 150, 75, 37
        std::string why;
        CHECK_MESSAGE(verify_vortex(g, out.vortex, &why), why);
        CHECK_FALSE(out.exact_check);  // large early levels fall back to sampling
    }
    CHECK(ok >= 3);
}

TEST_CASE("serialization round trip") {
    Graph k = Graph::complete(60);
    auto out = find_vortex(k, Rational(3, 4), Rational(1, 4), 5, 11, 5);
    REQUIRE(out.ok);
    std::ostringstream os;
    write_vortex(os, out.vortex);
    std::istringstream is(os.str());
    CHECK(read_vortex_sets(is) == out.vortex.sets);

    std::istringstream bad("level 1: 0 1\n");
    CHECK_THROWS(read_vortex_sets(bad));
}
