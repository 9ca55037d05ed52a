#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "tridecomp/pipeline.hpp"

using namespace tridecomp;

TEST_CASE("divisible spanning subgraph enumeration") {
    // A triangle carries exactly two: the empty graph and itself.
    Graph tri(3, {{0, 1}, {0, 2}, {1, 2}});
    auto fam = enumerate_divisible_spanning_subgraphs(tri);
    REQUIRE(fam.size() == 2);
    CHECK(fam[0].empty());
    CHECK(fam[1] == tri.edges());

    // Even-degree subgraphs of a cycle are unions of cycles: empty or all.
    std::vector<Edge> c6{{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}, {0, 5}};
    auto cyc = enumerate_divisible_spanning_subgraphs(Graph(6, c6));
    REQUIRE(cyc.size() == 2);
    CHECK(cyc[1].size() == 6);

    // A lone edge admits only the empty subgraph (odd endpoints otherwise).
    CHECK(enumerate_divisible_spanning_subgraphs(Graph(2, {{0, 1}})).size() == 1);

    // The 2^m scan refuses oversized inputs outright.
    CHECK_THROWS_AS(enumerate_divisible_spanning_subgraphs(Graph::complete(7)),
                    std::invalid_argument);
}

TEST_CASE("final absorption replays stored certificates") {
    // One real absorber, embedded by the library, indexed by its leftover.
    // The absorber of a bare triangle already spans 106 gadget vertices.
    Graph l(3, {{0, 1}, {0, 2}, {1, 2}});
    RootedGadget a = build_absorber(l);
    Graph host = Graph::complete(130);
    std::map<int, int> roots;
    for (int r : a.roots) roots[r] = r;
    EmbedResult em = embed_gadget(host, a, roots);
    REQUIRE(em.ok);

    AbsorberBank bank;
    bank.u_ell = {0, 1, 2};
    AbsorberBank::Entry entry;
    entry.leftover = l.edges();
    entry.edges = em.edges;
    for (const auto& t : a.certificate("base")->triangles)
        entry.base.push_back(em.map_triangle(t));
    for (const auto& t : a.certificate("with_leftover")->triangles)
        entry.with_leftover.push_back(em.map_triangle(t));
    bank.entries.push_back(entry);

    CHECK(bank.a_star() == [&] {
        auto es = em.edges;
        std::sort(es.begin(), es.end());
        return es;
    }());
    CHECK(bank.find(l.edges()) != nullptr);
    CHECK(bank.find({make_edge(0, 1)}) == nullptr);

    TriangleDecomposition d = final_absorb(bank, l.edges());
    std::vector<Edge> all = entry.edges;
    all.insert(all.end(), entry.leftover.begin(), entry.leftover.end());
    CHECK(verify_partition_of(all, d.triangles));

    // Unknown leftovers and edges escaping U_ell are refused.
    CHECK_THROWS_AS(final_absorb(bank, {make_edge(0, 1)}), std::invalid_argument);
    CHECK_THROWS_AS(final_absorb(bank, {make_edge(3, 4)}), std::invalid_argument);
}

TEST_CASE("hybrid decomposition of complete hosts") {
    PipelineParams p;
    auto run = [&](int n) {
        Graph g = Graph::complete(n);
        auto out = decompose(g, p, 1);
        REQUIRE(out.ok);
        CHECK(verify_decomposition(g, out.decomposition));
        CHECK(out.levels == 1);
        CHECK(out.withheld_edges > 0);
    };
    run(19);
    run(25);
}

TEST_CASE("non-divisible input is rejected before any work") {
    auto out = decompose(Graph::complete(20), PipelineParams{}, 1);
    CHECK_FALSE(out.ok);
    CHECK(out.failed_step == "divisibility");
    CHECK(out.m == 0);  // no vortex was attempted
}

TEST_CASE("strict mode enforces the asymptotic degree schedule") {
    PipelineParams p;
    p.strict = true;  // (delta + 8 eps) n exceeds n - 1 on any complete desk host
    auto out = decompose(Graph::complete(19), p, 1);
    CHECK_FALSE(out.ok);
    CHECK(out.failed_step == "vortex");
}

TEST_CASE("faithful mode never emits unverified output") {
    PipelineParams p;
    p.mode = PipelineMode::faithful;
    p.m_prime = 5;
    p.run_retries = 0;
    auto out = decompose(Graph::complete(45), p, 1);
    if (out.ok) {
        CHECK(verify_decomposition(Graph::complete(45), out.decomposition));
    } else {
        CHECK_FALSE(out.failed_step.empty());
        CHECK(out.decomposition.triangles.empty());
    }
}
