#include "oracles.hpp"

#include <canram/errors.hpp>
#include <canram/graphs.hpp>
#include <canram/kgraph.hpp>

#include <doctest.h>

#include <random>
#include <set>

using namespace canram;

TEST_CASE("complete graphs have C(n, k) edges")
{
    CHECK(complete_graph(3, 2).edge_count() == 3);
    CHECK(complete_graph(4, 3).edge_count() == 4);
    CHECK(complete_graph(5, 2).edge_count() == 10);
    CHECK(complete_graph(0, 2).edge_count() == 0);
    CHECK(complete_graph(6, 4).edge_count() == 15);
}

TEST_CASE("complete graphs are vertex transitive")
{
    for (unsigned k = 2; k <= 4; ++k)
        for (Vertex n = k; n <= 8; ++n) {
            auto g = complete_graph(n, k);
            std::size_t expected = 1;
            for (unsigned i = 0; i < k - 1; ++i)
                expected = expected * (n - 1 - i) / (i + 1);
            for (Vertex v = 0; v < n; ++v)
                CHECK(g.degree(v) == expected);
        }
}

TEST_CASE("edges are normalised and validated")
{
    KGraph g{2, 4, {{3, 1}, {0, 2}, {2, 1}}};
    CHECK(g.edges() == std::vector<Edge>{{0, 2}, {1, 2}, {1, 3}});
    CHECK(g.find_edge(std::vector<Vertex>{1, 3}) == EdgeIndex{2});
    CHECK(! g.find_edge(std::vector<Vertex>{0, 1}));
    CHECK(g.pair_edge(3, 1) == 2);
    CHECK(g.pair_edge(0, 3) == -1);
    CHECK_THROWS_AS(KGraph(2, 3, {{0, 1}, {1, 0}}), DomainError);
    CHECK_THROWS_AS(KGraph(2, 3, {{0, 3}}), DomainError);
    CHECK_THROWS_AS(KGraph(2, 3, {{1, 1}}), DomainError);
    CHECK_THROWS_AS(KGraph(3, 3, {{0, 1}}), DomainError);
}

TEST_CASE("named graphs")
{
    CHECK(named_graph("K4") == complete_graph(4, 2));
    CHECK(named_graph("K4^3") == complete_graph(4, 3));
    CHECK(named_graph("C4").edge_count() == 4);
    CHECK(named_graph("P4").edge_count() == 3);
    CHECK(named_graph("P4").vertex_count() == 4);
    CHECK(petersen_graph().edge_count() == 15);
    CHECK_THROWS_AS(named_graph("Q7"), DomainError);
}

TEST_CASE("embedding counts")
{
    auto k3 = complete_graph(3, 2), k4 = complete_graph(4, 2), k5 = complete_graph(5, 2);
    auto c4 = cycle_graph(4);
    CHECK(count_embeddings(k3, k4) == 24);
    CHECK(count_embeddings(k3, c4) == 0);
    CHECK(distinct_subgraph_copies(k3, k4) == 4);
    CHECK(distinct_subgraph_copies(k3, k5) == 10);
    CHECK(distinct_subgraph_copies(c4, k4) == 3);

    SUBCASE("a single k-edge embeds k! e(G) times")
    {
        for (unsigned k = 2; k <= 4; ++k) {
            Edge edge(k);
            std::iota(edge.begin(), edge.end(), Vertex{0});
            auto host = complete_graph(k + 2, k);
            std::uint64_t factorial = 1;
            for (unsigned i = 2; i <= k; ++i)
                factorial *= i;
            CHECK(count_embeddings(KGraph{k, Vertex(k), {edge}}, host) == factorial * host.edge_count());
        }
    }
}

TEST_CASE("enumeration matches brute force on random graphs")
{
    std::mt19937_64 rng{11};
    std::vector<KGraph> patterns{complete_graph(3, 2), cycle_graph(4), path_graph(3), path_graph(4)};
    for (int round = 0; round < 60; ++round) {
        auto & pattern = patterns[round % patterns.size()];
        auto host = oracle::random_graph(rng, 2, 3 + rng() % 4, 0.6);
        std::set<std::vector<Vertex>> seen;
        enumerate_copies(pattern, host, [&](const Embedding & e, std::span<const EdgeIndex> images) {
            CHECK(seen.insert(e.vertex_map).second);
            for (std::size_t i = 0; i < pattern.edge_count(); ++i) {
                Edge mapped;
                for (auto x : pattern.edge(i))
                    mapped.push_back(e.vertex_map[x]);
                std::sort(mapped.begin(), mapped.end());
                CHECK(host.edge(images[i]) == mapped);
            }
            return true;
        });
        auto expected = oracle::embeddings(pattern, host);
        CHECK(seen == std::set<std::vector<Vertex>>(expected.begin(), expected.end()));
        auto automorphisms = count_embeddings(pattern, pattern);
        CHECK(seen.size() % automorphisms == 0);
    }
}

TEST_CASE("3-graph enumeration matches brute force")
{
    std::mt19937_64 rng{12};
    KGraph pattern{3, 4, {{0, 1, 2}, {0, 1, 3}, {1, 2, 3}}};
    for (int round = 0; round < 20; ++round) {
        auto host = oracle::random_graph(rng, 3, 5 + rng() % 2, 0.5);
        CHECK(count_embeddings(pattern, host) == oracle::embeddings(pattern, host).size());
    }
}

TEST_CASE("self embeddings contain the identity")
{
    for (auto & h : {complete_graph(3, 2), cycle_graph(5), path_graph(4), petersen_graph()}) {
        bool identity = false;
        enumerate_copies(h, h, [&](const Embedding & e, std::span<const EdgeIndex>) {
            std::vector<Vertex> id(h.vertex_count());
            std::iota(id.begin(), id.end(), 0);
            identity = identity || e.vertex_map == id;
            return true;
        });
        CHECK(identity);
    }
    CHECK(count_embeddings(petersen_graph(), petersen_graph()) == 120);
}

TEST_CASE("early stop and uniformity mismatch")
{
    int visits = 0;
    auto complete = enumerate_copies(complete_graph(3, 2), complete_graph(5, 2),
        [&](const Embedding &, std::span<const EdgeIndex>) { return ++visits < 3; });
    CHECK(! complete);
    CHECK(visits == 3);
    CHECK_THROWS_AS(count_embeddings(complete_graph(3, 2), complete_graph(4, 3)), UniformityMismatch);
}

TEST_CASE("orderings, colourings and lists")
{
    Ordering sigma{{2, 0, 1}};
    CHECK(sigma.vertex_at(0) == 2);
    CHECK(sigma.position_of(1) == 2);
    CHECK(sigma.reversed().order() == std::vector<Vertex>{1, 0, 2});
    CHECK_THROWS_AS(Ordering({0, 0, 1}), DomainError);

    auto k3 = complete_graph(3, 2);
    auto lists = ListAssignment::constant(k3, {1, 2});
    CHECK(lists.uniform());
    CHECK(lists.compatible(Colouring{{1, 2, 2}}));
    CHECK(! lists.compatible(Colouring{{1, 3, 2}}));
    CHECK_THROWS_AS(Colouring({1, 2}).check_total(k3), DomainError);

    ListAssignment mixed{2, {{1, 2}, {2, 1}, {1, 3}}};
    CHECK(! mixed.uniform());
    auto sub = k3.edge_subgraph(std::vector<EdgeIndex>{0, 2});
    auto restricted = mixed.restricted_to(k3, sub);
    CHECK(restricted.lists() == std::vector<std::vector<Colour>>{{1, 2}, {1, 3}});
    CHECK_THROWS_AS(ListAssignment(2, {{1}}), DomainError);
}
