#pragma once

#include <canram/kgraph.hpp>

#include <string_view>

namespace canram
{
    auto cycle_graph(Vertex length) -> KGraph;

    // Path on `vertices` vertices (so `vertices - 1` edges).
    auto path_graph(Vertex vertices) -> KGraph;

    auto petersen_graph() -> KGraph;

    // Names understood by the CLI and experiment configs: "K<m>", "C<m>",
    // "P<m>" (m vertices), and "K<m>^<k>" for the complete k-graph.
    auto named_graph(std::string_view name) -> KGraph;
}
