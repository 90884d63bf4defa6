#pragma once

#include <canram/density.hpp>
#include <canram/kgraph.hpp>

#include <iosfwd>
#include <string>
#include <string_view>

namespace canram
{
    // Graph files: a `k n` header line, then one edge per line as k vertex
    // labels. Blank lines and lines starting with '#' are ignored.
    auto parse_graph(std::istream & in, const std::string & source = "<input>") -> KGraph;
    auto parse_graph_file(const std::string & path) -> KGraph;
    auto serialise_graph(const KGraph & g) -> std::string;

    // A graph file if `spec` names an existing file, otherwise a built-in name
    // such as K4, C6 or K4^3.
    auto load_graph(const std::string & spec) -> KGraph;

    // List files: `v1 ... vk : c1 ... cr` per edge. Lines for edges outside
    // `carrier` are skipped; every edge of `carrier` needs exactly one line.
    auto parse_lists(std::istream & in, const KGraph & carrier, const std::string & source = "<input>")
        -> ListAssignment;
    auto parse_lists_file(const std::string & path, const KGraph & carrier) -> ListAssignment;
    auto serialise_lists(const KGraph & carrier, const ListAssignment & lists) -> std::string;

    // Colouring files: `v1 ... vk : c` per edge of `carrier`.
    auto parse_colouring(std::istream & in, const KGraph & carrier, const std::string & source = "<input>")
        -> Colouring;
    auto parse_colouring_file(const std::string & path, const KGraph & carrier) -> Colouring;
    auto serialise_colouring(const KGraph & carrier, const Colouring & colouring) -> std::string;

    // "2,0,1": the vertex in each position, 0-based.
    auto parse_ordering(std::string_view text, Vertex size) -> Ordering;
    auto ordering_to_string(const Ordering & sigma) -> std::string;

    // "3/4", "0.05" or "2", parsed exactly.
    auto parse_fraction(std::string_view text) -> Rational;
}
