#include "oracles.hpp"

#include <canram/errors.hpp>
#include <canram/graphs.hpp>
#include <canram/io.hpp>

#include <doctest.h>

#include <random>
#include <sstream>

using namespace canram;

namespace
{
    auto graph_from(const std::string & text) -> KGraph
    {
        std::istringstream in{text};
        return parse_graph(in, "test");
    }

    auto parse_line_of(const std::string & text) -> std::size_t
    {
        try {
            graph_from(text);
        }
        catch (const ParseError & e) {
            return e.line;
        }
        return 0;
    }
}

TEST_CASE("graph files")
{
    CHECK(graph_from("2 3\n0 1\n0 2\n1 2") == complete_graph(3, 2));
    CHECK(graph_from("3 4\n0 1 2\n0 1 3\n0 2 3\n1 2 3") == complete_graph(4, 3));
    CHECK(graph_from("# triangle\n\n2 3\n2 1\n  0 1\n\n0 2\n") == complete_graph(3, 2));
    CHECK(graph_from("2 5\n").edge_count() == 0);
    CHECK_THROWS_AS(graph_from("2 3\n0 1\n0 1"), ParseError);
    CHECK(parse_line_of("2 3\n0 1\n0 1") == 3);
    CHECK(parse_line_of("2 3\n0 1\n0 x") == 3);
    CHECK(parse_line_of("2 3\n0 1\n0 3") == 3);
    CHECK(parse_line_of("2 3\n0 1 2") == 2);
    CHECK(parse_line_of("2 3\n1 1") == 2);
    CHECK(parse_line_of("2\n0 1") == 1);
    CHECK_THROWS_AS(graph_from(""), ParseError);
    CHECK_THROWS_AS(graph_from("2 3\n0 -1"), ParseError);
}

TEST_CASE("graph round trip")
{
    std::mt19937_64 rng{81};
    for (int i = 0; i < 50; ++i) {
        auto g = oracle::random_graph(rng, 2 + rng() % 2, 3 + rng() % 6, 0.5);
        auto text = serialise_graph(g);
        CHECK(graph_from(text) == g);
        CHECK(serialise_graph(graph_from(text)) == text);
    }
    CHECK(serialise_graph(complete_graph(3, 2)) == "2 3\n0 1\n0 2\n1 2\n");
}

TEST_CASE("list files")
{
    auto k3 = complete_graph(3, 2);
    std::istringstream in{"# lists\n1 0 : 1 2\n0 2 : 3 3\n1 2 : 2 1\n"};
    auto lists = parse_lists(in, k3);
    CHECK(lists.list_length() == 2);
    CHECK(lists.lists() == std::vector<std::vector<Colour>>{{1, 2}, {3, 3}, {2, 1}});
    CHECK(serialise_lists(k3, lists) == "0 1 : 1 2\n0 2 : 3 3\n1 2 : 2 1\n");

    auto parse = [&](const std::string & text) {
        std::istringstream s{text};
        return parse_lists(s, k3);
    };
    CHECK_NOTHROW(parse("0 1 : 1\n0 2 : 1\n1 2 : 1\n5 6 : 1\n"));
    CHECK_THROWS_AS(parse("0 1 : 1\n0 2 : 1\n"), ParseError);
    CHECK_THROWS_AS(parse("0 1 : 1\n0 2 : 1\n1 2 : 1 2\n"), ParseError);
    CHECK_THROWS_AS(parse("0 1 : 1\n0 1 : 1\n0 2 : 1\n1 2 : 1\n"), ParseError);
    CHECK_THROWS_AS(parse("0 1 1\n0 2 : 1\n1 2 : 1\n"), ParseError);
    CHECK_THROWS_AS(parse("0 1 :\n0 2 : 1\n1 2 : 1\n"), ParseError);

    std::mt19937_64 rng{82};
    auto k5 = complete_graph(5, 2);
    ListAssignment random{3, oracle::random_lists(rng, k5.edge_count(), 3, 9)};
    std::istringstream again{serialise_lists(k5, random)};
    CHECK(parse_lists(again, k5).lists() == random.lists());
}

TEST_CASE("colouring files")
{
    auto k3 = complete_graph(3, 2);
    std::istringstream in{"0 1 : 4\n0 2 : 5\n1 2 : 4\n"};
    auto colouring = parse_colouring(in, k3);
    CHECK(colouring == Colouring{{4, 5, 4}});
    CHECK(serialise_colouring(k3, colouring) == "0 1 : 4\n0 2 : 5\n1 2 : 4\n");
    std::istringstream two{"0 1 : 4 5\n0 2 : 5\n1 2 : 4\n"};
    CHECK_THROWS_AS(parse_colouring(two, k3), ParseError);
}

TEST_CASE("orderings and fractions")
{
    CHECK(parse_ordering("2,0,1", 3).order() == std::vector<Vertex>{2, 0, 1});
    CHECK(ordering_to_string(Ordering{{2, 0, 1}}) == "2,0,1");
    CHECK_THROWS_AS(parse_ordering("2,0", 3), DomainError);
    CHECK_THROWS_AS(parse_ordering("2,,0", 3), DomainError);
    CHECK_THROWS_AS(parse_ordering("2,0,0", 3), DomainError);
    CHECK_THROWS_AS(parse_ordering("a,b,c", 3), DomainError);

    CHECK(parse_fraction("3/4") == Rational(3, 4));
    CHECK(parse_fraction("0.05") == Rational(1, 20));
    CHECK(parse_fraction("2") == Rational(2));
    CHECK(parse_fraction(".5") == Rational(1, 2));
    CHECK(parse_fraction("0.8") == Rational(4, 5));
    CHECK(parse_fraction("010") == Rational(10));
    CHECK(parse_fraction("09/018") == Rational(1, 2));
    CHECK(parse_fraction("0") == Rational(0));
    CHECK(parse_fraction("-1/3") == Rational(-1, 3));
    CHECK_THROWS_AS(parse_fraction("1/0"), DomainError);
    CHECK_THROWS_AS(parse_fraction("abc"), DomainError);
    CHECK_THROWS_AS(parse_fraction("1."), DomainError);
    CHECK_THROWS_AS(parse_fraction(""), DomainError);
}

TEST_CASE("graph loading")
{
    CHECK(load_graph("K4") == complete_graph(4, 2));
    CHECK_THROWS_AS(load_graph("/nonexistent/graph.hg"), DomainError);
    CHECK_THROWS_AS(parse_graph_file("/nonexistent/graph.hg"), DomainError);
}
