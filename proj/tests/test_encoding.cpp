#include "oracles.hpp"

#include <canram/density.hpp>
#include <canram/encoding.hpp>
#include <canram/errors.hpp>
#include <canram/graphs.hpp>

#include <doctest.h>

#include <cmath>
#include <map>
#include <random>
#include <set>

using namespace canram;

namespace
{
    // Hyperedges straight from the definition: every embedding, every slot
    // choice, kept when the chosen colours are canonical.
    auto brute_hyperedges(const KGraph & pattern, const std::vector<Vertex> & order, const KGraph & base,
        const ListAssignment & lists) -> std::set<std::vector<EncodingVertex>>
    {
        std::set<std::vector<EncodingVertex>> result;
        auto r = lists.list_length();
        auto m = pattern.edge_count();
        for (auto & map : oracle::embedding_edge_maps(pattern, base)) {
            std::vector<unsigned> slot(m, 0);
            while (true) {
                std::vector<Colour> colours(m);
                for (std::size_t i = 0; i < m; ++i)
                    colours[i] = lists.list(EdgeIndex(map[i]))[slot[i]];
                if (! oracle::canonical_sets(pattern, order, colours).empty()) {
                    std::vector<EncodingVertex> edge;
                    for (std::size_t i = 0; i < m; ++i)
                        edge.push_back(EncodingVertex(map[i] * r + slot[i]));
                    std::sort(edge.begin(), edge.end());
                    result.insert(edge);
                }
                std::size_t i = 0;
                while (i < m && ++slot[i] == r)
                    slot[i++] = 0;
                if (i == m)
                    break;
            }
        }
        return result;
    }

    auto brute_max_degree(const EncodingHypergraph & enc, unsigned j) -> std::uint64_t
    {
        std::uint64_t best = 0;
        auto v = enc.vertex_count();
        std::vector<EncodingVertex> chosen;
        auto extend = [&](auto & self, EncodingVertex from) -> void {
            if (chosen.size() == j) {
                std::uint64_t count = 0;
                for (auto & e : enc.hyperedges())
                    if (std::includes(e.begin(), e.end(), chosen.begin(), chosen.end()))
                        ++count;
                best = std::max(best, count);
                return;
            }
            for (EncodingVertex x = from; x < v; ++x) {
                chosen.push_back(x);
                self(self, x + 1);
                chosen.pop_back();
            }
        };
        extend(extend, 0);
        return best;
    }

    auto random_subgraph(std::mt19937_64 & rng, const KGraph & g, double p) -> KGraph
    {
        std::vector<EdgeIndex> keep;
        std::bernoulli_distribution coin{p};
        for (EdgeIndex e = 0; e < g.edge_count(); ++e)
            if (coin(rng))
                keep.push_back(e);
        return g.edge_subgraph(keep);
    }
}

TEST_CASE("triangle encodings")
{
    auto k3 = complete_graph(3, 2);
    auto natural = Ordering::natural(3);
    auto single = build_encoding(k3, natural, k3, ListAssignment::constant(k3, {7}));
    CHECK(single.edge_count() == 1);
    CHECK(single.vertex_count() == 3);
    auto profile = degree_profile(single, k3);
    REQUIRE(profile.levels.size() == 3);
    for (auto & level : profile.levels)
        CHECK(level.max_degree == 1);

    auto two = build_encoding(k3, natural, k3, ListAssignment::constant(k3, {1, 2}));
    CHECK(two.edge_count() == 8);
    CHECK(two.vertex_count() == 6);
}

TEST_CASE("encoding vertex count is r C(n, 2)")
{
    std::mt19937_64 rng{41};
    for (Vertex n = 3; n <= 6; ++n)
        for (unsigned r = 1; r <= 3; ++r) {
            auto base = complete_graph(n, 2);
            auto lists = ListAssignment{r, oracle::random_lists(rng, base.edge_count(), r, 3)};
            auto enc = build_encoding(cycle_graph(4), Ordering::natural(4), base, lists);
            CHECK(enc.vertex_count() == r * n * (n - 1) / 2);
            for (EdgeIndex e = 0; e < base.edge_count(); ++e)
                for (unsigned s = 0; s < r; ++s) {
                    CHECK(enc.edge_of(enc.vertex(e, s)) == e);
                    CHECK(enc.slot_of(enc.vertex(e, s)) == s);
                }
        }
}

TEST_CASE("hyperedges agree with brute force")
{
    std::mt19937_64 rng{42};
    std::vector<KGraph> patterns{complete_graph(3, 2), path_graph(3), cycle_graph(4), path_graph(4)};
    for (int i = 0; i < 40; ++i) {
        auto & h = patterns[i % patterns.size()];
        auto base = oracle::random_graph(rng, 2, 4 + rng() % 2, 0.8);
        unsigned r = 1 + rng() % 2;
        auto lists = ListAssignment{r, oracle::random_lists(rng, base.edge_count(), r, 3)};
        auto order = oracle::random_order(rng, h.vertex_count());
        auto enc = build_encoding(h, Ordering{order}, base, lists);
        auto expected = brute_hyperedges(h, order, base, lists);
        CHECK(std::set<std::vector<EncodingVertex>>(enc.hyperedges().begin(), enc.hyperedges().end()) == expected);
        CHECK(enc.edge_count() == expected.size());
        for (auto & e : enc.hyperedges()) {
            CHECK(e.size() == h.edge_count());
            CHECK(graph_shadow(enc, e).edge_count() == h.edge_count());
        }
        if (enc.vertex_count() <= 14 && enc.edge_count() > 0) {
            auto profile = degree_profile(enc, h);
            for (auto & level : profile.levels)
                CHECK(level.max_degree == brute_max_degree(enc, level.j));
            for (std::size_t j = 1; j < profile.levels.size(); ++j)
                CHECK(profile.levels[j].max_degree <= profile.levels[j - 1].max_degree);
        }
    }
}

TEST_CASE("degree bound on complete hosts")
{
    std::mt19937_64 rng{43};
    for (auto & h : {complete_graph(3, 2), cycle_graph(4)})
        for (Vertex n = 5; n <= 7; ++n) {
            unsigned r = 2;
            auto base = complete_graph(n, 2);
            auto lists = ListAssignment{r, oracle::random_lists(rng, base.edge_count(), r, 3)};
            auto enc = build_encoding(h, Ordering::natural(h.vertex_count()), base, lists);
            auto profile = degree_profile(enc, h);
            auto m2 = max_k_density(h).value.convert_to<double>();
            for (auto & level : profile.levels) {
                double bound = std::pow(r, h.edge_count()) * std::pow(double(n), -double(level.j - 1) / m2) *
                    std::pow(double(n), double(h.vertex_count()) - 2);
                CHECK(level.bound == doctest::Approx(bound));
                CHECK(level.within_bound);
            }
        }
}

TEST_CASE("degree bound comparison is exact")
{
    auto k7 = complete_graph(7, 2);
    auto c4 = cycle_graph(4);
    auto top = degree_profile(build_encoding(c4, Ordering::natural(4), k7, ListAssignment::constant(k7, {1})), c4);
    CHECK(top.levels[3].max_degree == 1);
    CHECK(top.levels[3].within_bound);

    // Each edge of K7 lies on 3 * 5 * 4 paths with three edges, above n^2 = 49.
    auto p4 = path_graph(4);
    auto paths = degree_profile(build_encoding(p4, Ordering::natural(4), k7, ListAssignment::constant(k7, {1})), p4);
    CHECK(paths.levels[0].max_degree == 60);
    CHECK(paths.levels[0].bound == doctest::Approx(49.0));
    CHECK_FALSE(paths.levels[0].within_bound);
}

TEST_CASE("container degree check")
{
    auto k3 = complete_graph(3, 2);
    auto enc = build_encoding(k3, Ordering::natural(3), k3, ListAssignment::constant(k3, {1, 2}));
    auto profile = degree_profile(enc, k3);
    auto loose = container_degree_check(enc, profile, 100.0, 1.0);
    CHECK(loose.holds);
    CHECK(loose.bounds[0] == doctest::Approx(100.0 * 8.0 / 6.0));
    auto tight = container_degree_check(enc, profile, 0.01, 0.5);
    CHECK(! tight.holds);
}

TEST_CASE("graph shadows and colouring vertex sets")
{
    auto k3 = complete_graph(3, 2);
    auto enc = build_encoding(k3, Ordering::natural(3), k3, ListAssignment::constant(k3, {1, 2}));
    CHECK(graph_shadow(enc, std::vector<EncodingVertex>{}).edge_count() == 0);
    CHECK(graph_shadow(enc, std::vector<EncodingVertex>{2, 3}).edges() == std::vector<Edge>{{0, 2}});
    std::vector<EncodingVertex> all{0, 1, 2, 3, 4, 5};
    CHECK(graph_shadow(enc, all) == k3);
    CHECK_THROWS_AS(graph_shadow(enc, std::vector<EncodingVertex>{6}), DomainError);

    auto w = colouring_to_vertexset(enc, k3, Colouring::constant(k3, 1));
    CHECK(w == std::vector<EncodingVertex>{0, 2, 4});
    CHECK(graph_shadow(enc, w) == k3);
    CHECK(! is_independent(enc, w));
    CHECK(colouring_to_vertexset(enc, KGraph{2, 3}, Colouring{}).empty());
    CHECK_THROWS_AS(colouring_to_vertexset(enc, k3, Colouring::constant(k3, 5)), IncompatibleColouring);

    KGraph edge{2, 2, {{0, 1}}};
    auto repeated = build_encoding(KGraph{2, 2, {{0, 1}}}, Ordering::natural(2), edge, ListAssignment::constant(edge, {3, 3}));
    CHECK(colouring_to_vertexset(repeated, edge, Colouring{{3}}) == std::vector<EncodingVertex>{0, 1});
}

TEST_CASE("colouring vertex sets round trip through the shadow")
{
    std::mt19937_64 rng{44};
    for (int i = 0; i < 50; ++i) {
        auto base = oracle::random_graph(rng, 2, 5, 0.7);
        unsigned r = 1 + rng() % 3;
        auto lists = ListAssignment{r, oracle::random_lists(rng, base.edge_count(), r, 3)};
        auto enc = build_encoding(path_graph(3), Ordering::natural(3), base, lists);
        auto g = random_subgraph(rng, base, 0.6);
        std::vector<Colour> chi;
        for (auto & e : g.edges())
            chi.push_back(lists.list(*base.find_edge(e))[rng() % r]);
        CHECK(graph_shadow(enc, colouring_to_vertexset(enc, g, Colouring{chi})) == g);
    }
}

TEST_CASE("independence transfer")
{
    std::mt19937_64 rng{45};
    std::vector<KGraph> patterns{complete_graph(3, 2), path_graph(3), cycle_graph(4)};
    for (int i = 0; i < 100; ++i) {
        auto & h = patterns[i % patterns.size()];
        auto base = oracle::random_graph(rng, 2, 5, 0.6);
        unsigned r = 1 + rng() % 2;
        auto lists = ListAssignment{r, oracle::random_lists(rng, base.edge_count(), r, 3)};
        auto order = oracle::random_order(rng, h.vertex_count());
        auto enc = build_encoding(h, Ordering{order}, base, lists);
        auto g = random_subgraph(rng, base, 0.8);
        std::vector<Colour> chi;
        for (auto & e : g.edges())
            chi.push_back(lists.list(*base.find_edge(e))[rng() % r]);
        auto w = colouring_to_vertexset(enc, g, Colouring{chi});
        CHECK(is_independent(enc, w) == ! oracle::CopyChecker(h, order, g).has_canonical_copy(chi));
        CHECK((count_canonical_copies(g, Colouring{chi}, h, Ordering{order}) == 0) == is_independent(enc, w));
    }
}

TEST_CASE("canonical copy counts")
{
    auto k3 = complete_graph(3, 2);
    auto natural = Ordering::natural(3);
    auto k5 = complete_graph(5, 2), k4 = complete_graph(4, 2);
    CHECK(count_canonical_copies(k5, Colouring::constant(k5, 1), k3, natural) == 10);
    CHECK(count_canonical_copies(k4, Colouring{{1, 2, 3, 4, 5, 6}}, k3, natural) == 4);
    auto c6 = cycle_graph(6);
    CHECK(count_canonical_copies(c6, Colouring::constant(c6, 1), k3, natural) == 0);
    CHECK_THROWS_AS(count_canonical_copies(complete_graph(4, 3), Colouring::constant(complete_graph(4, 3), 1), k3,
                        natural),
        UniformityMismatch);
}

TEST_CASE("abundance examples")
{
    auto k3 = complete_graph(3, 2);
    auto enc = build_encoding(k3, Ordering::natural(3), k3, ListAssignment::constant(k3, {1, 2}));
    auto everything = check_abundance(enc, 1.0, 0.1, AbundanceMode::exhaustive);
    CHECK(everything.increasing);
    CHECK(! everything.minimum_size);
    REQUIRE(everything.size_witness);
    CHECK(everything.size_witness->empty());
    CHECK(! everything.holds());

    auto full_shadow = check_abundance(enc, 0.0, 0.125, AbundanceMode::exhaustive);
    CHECK(full_shadow.exhaustive);
    CHECK(full_shadow.increasing);
    CHECK(full_shadow.minimum_size);
    CHECK(full_shadow.dense);
    CHECK(full_shadow.holds());

    auto sampled = check_abundance(enc, 0.0, 0.125, AbundanceMode::sampled, 50, 3);
    CHECK(! sampled.exhaustive);
    CHECK(sampled.increasing);
    CHECK_THROWS_AS(check_abundance(enc, 0.5, 0.0, AbundanceMode::exhaustive), DomainError);
}

TEST_CASE("exhaustive abundance agrees with brute force")
{
    std::mt19937_64 rng{46};
    for (int i = 0; i < 30; ++i) {
        auto base = oracle::random_graph(rng, 2, 4, 0.8);
        unsigned r = 1 + rng() % 2;
        if (base.edge_count() * r > 12)
            continue;
        auto lists = ListAssignment{r, oracle::random_lists(rng, base.edge_count(), r, 2)};
        auto enc = build_encoding(path_graph(3), Ordering::natural(3), base, lists);
        double gamma = double(rng() % 5) / 4.0, epsilon = double(1 + rng() % 8) / 8.0;
        auto report = check_abundance(enc, gamma, epsilon, AbundanceMode::exhaustive);

        bool minimum_size = true, dense = true;
        auto v = enc.vertex_count();
        for (std::uint32_t mask = 0; mask < (1u << v); ++mask) {
            std::vector<EncodingVertex> w;
            std::set<EdgeIndex> shadow;
            for (EncodingVertex x = 0; x < v; ++x)
                if (mask & (1u << x)) {
                    w.push_back(x);
                    shadow.insert(enc.edge_of(x));
                }
            if (double(shadow.size()) < (1.0 - gamma) * double(base.edge_count()))
                continue;
            if (double(w.size()) < epsilon * double(v))
                minimum_size = false;
            std::size_t inside = 0;
            for (auto & e : enc.hyperedges())
                if (std::includes(w.begin(), w.end(), e.begin(), e.end()))
                    ++inside;
            if (double(inside) < epsilon * double(enc.edge_count()))
                dense = false;
        }
        CHECK(report.minimum_size == minimum_size);
        CHECK(report.dense == dense);
    }
}

TEST_CASE("encoding guards")
{
    auto k3 = complete_graph(3, 2);
    auto k6 = complete_graph(6, 2);
    CHECK_THROWS_AS(build_encoding(k3, Ordering::natural(3), k6, ListAssignment::constant(k6, {1, 2, 3}), 100),
        GuardExceeded);
    auto k4_3 = complete_graph(4, 3);
    CHECK_THROWS_AS(build_encoding(k3, Ordering::natural(3), k4_3, ListAssignment::constant(k4_3, {1})),
        UniformityMismatch);
}
