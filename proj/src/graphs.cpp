#include <canram/errors.hpp>
#include <canram/graphs.hpp>

#include <charconv>
#include <string>

namespace canram
{
    auto cycle_graph(Vertex length) -> KGraph
    {
        if (length < 3)
            throw DomainError("a cycle needs at least 3 vertices");
        std::vector<Edge> edges;
        for (Vertex i = 0; i < length; ++i)
            edges.push_back({i, (i + 1) % length});
        return KGraph{2, length, std::move(edges)};
    }

    auto path_graph(Vertex vertices) -> KGraph
    {
        std::vector<Edge> edges;
        for (Vertex i = 0; i + 1 < vertices; ++i)
            edges.push_back({i, i + 1});
        return KGraph{2, vertices, std::move(edges)};
    }

    auto petersen_graph() -> KGraph
    {
        std::vector<Edge> edges;
        for (Vertex i = 0; i < 5; ++i) {
            edges.push_back({i, (i + 1) % 5});
            edges.push_back({i, i + 5});
            edges.push_back({5 + i, 5 + (i + 2) % 5});
        }
        return KGraph{2, 10, std::move(edges)};
    }

    namespace
    {
        auto parse_number(std::string_view text, std::string_view whole) -> unsigned
        {
            unsigned value = 0;
            auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
            if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty())
                throw DomainError("unknown graph name '" + std::string(whole) + "'");
            return value;
        }
    }

    auto named_graph(std::string_view name) -> KGraph
    {
        if (name.size() < 2)
            throw DomainError("unknown graph name '" + std::string(name) + "'");

        auto kind = name.front();
        auto rest = name.substr(1);
        switch (kind) {
            case 'K': {
                auto hat = rest.find('^');
                if (hat == std::string_view::npos)
                    return complete_graph(parse_number(rest, name), 2);
                return complete_graph(parse_number(rest.substr(0, hat), name), parse_number(rest.substr(hat + 1), name));
            }
            case 'C': return cycle_graph(parse_number(rest, name));
            case 'P': return path_graph(parse_number(rest, name));
            default: throw DomainError("unknown graph name '" + std::string(name) + "'");
        }
    }
}
