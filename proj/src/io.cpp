#include <canram/errors.hpp>
#include <canram/graphs.hpp>
#include <canram/io.hpp>

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace canram
{
    namespace
    {
        // Splits a line into whitespace-separated tokens; false for blank and
        // comment lines.
        auto tokenise(const std::string & line, std::vector<std::string> & tokens) -> bool
        {
            tokens.clear();
            std::istringstream in{line};
            std::string t;
            while (in >> t)
                tokens.push_back(t);
            return ! tokens.empty() && tokens.front().front() != '#';
        }

        auto parse_unsigned(const std::string & token, const std::string & source, std::size_t line)
            -> std::uint64_t
        {
            std::uint64_t value = 0;
            auto [end, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
            if (ec != std::errc{} || end != token.data() + token.size())
                throw ParseError(source, line, "expected a non-negative integer, got '" + token + "'");
            return value;
        }

        auto open(const std::string & path) -> std::ifstream
        {
            std::ifstream in{path};
            if (! in)
                throw DomainError("cannot open '" + path + "'");
            return in;
        }

        // Reads `v1 .. vk : values...` lines, resolving each edge in `carrier`.
        // Edges missing from the carrier are skipped.
        template <typename Handle>
        void parse_edge_records(std::istream & in, const KGraph & carrier, const std::string & source,
            const Handle & handle)
        {
            std::vector<std::string> tokens;
            std::string text;
            std::size_t line = 0;
            std::vector<bool> seen(carrier.edge_count(), false);
            while (std::getline(in, text)) {
                ++line;
                if (! tokenise(text, tokens))
                    continue;
                auto colon = std::find(tokens.begin(), tokens.end(), ":");
                if (colon == tokens.end())
                    throw ParseError(source, line, "expected ':' between the edge and its colours");
                Edge edge;
                for (auto it = tokens.begin(); it != colon; ++it)
                    edge.push_back(Vertex(parse_unsigned(*it, source, line)));
                if (edge.size() != carrier.uniformity())
                    throw ParseError(source, line,
                        "edge has " + std::to_string(edge.size()) + " vertices, expected " +
                            std::to_string(carrier.uniformity()));
                std::sort(edge.begin(), edge.end());
                std::vector<Colour> values;
                for (auto it = colon + 1; it != tokens.end(); ++it)
                    values.push_back(parse_unsigned(*it, source, line));
                if (values.empty())
                    throw ParseError(source, line, "no colours after ':'");

                auto e = carrier.find_edge(edge);
                if (! e)
                    continue;
                if (seen[*e])
                    throw ParseError(source, line, "edge {" + edge_to_string(edge) + "} appears twice");
                seen[*e] = true;
                handle(*e, std::move(values), line);
            }
            for (EdgeIndex e = 0; e < carrier.edge_count(); ++e)
                if (! seen[e])
                    throw ParseError(source, line, "no entry for edge {" + edge_to_string(carrier.edge(e)) + "}");
        }
    }

    auto parse_graph(std::istream & in, const std::string & source) -> KGraph
    {
        std::vector<std::string> tokens;
        std::string text;
        std::size_t line = 0;
        std::optional<std::pair<unsigned, Vertex>> header;
        std::vector<Edge> edges;
        std::vector<std::size_t> edge_lines;

        while (std::getline(in, text)) {
            ++line;
            if (! tokenise(text, tokens))
                continue;
            if (! header) {
                if (tokens.size() != 2)
                    throw ParseError(source, line, "expected header 'k n'");
                auto k = parse_unsigned(tokens[0], source, line);
                auto n = parse_unsigned(tokens[1], source, line);
                if (k == 0)
                    throw ParseError(source, line, "uniformity must be positive");
                header.emplace(unsigned(k), Vertex(n));
                continue;
            }
            if (tokens.size() != header->first)
                throw ParseError(source, line,
                    "edge has " + std::to_string(tokens.size()) + " vertices, expected " +
                        std::to_string(header->first));
            Edge edge;
            for (auto & t : tokens) {
                auto v = parse_unsigned(t, source, line);
                if (v >= header->second)
                    throw ParseError(source, line, "vertex " + t + " out of range");
                edge.push_back(Vertex(v));
            }
            std::sort(edge.begin(), edge.end());
            if (std::adjacent_find(edge.begin(), edge.end()) != edge.end())
                throw ParseError(source, line, "repeated vertex in edge");
            edges.push_back(std::move(edge));
            edge_lines.push_back(line);
        }
        if (! header)
            throw ParseError(source, line, "missing header 'k n'");

        std::vector<std::size_t> order(edges.size());
        for (std::size_t i = 0; i < order.size(); ++i)
            order[i] = i;
        std::sort(order.begin(), order.end(), [&](auto a, auto b) { return edges[a] < edges[b]; });
        for (std::size_t i = 1; i < order.size(); ++i)
            if (edges[order[i]] == edges[order[i - 1]])
                throw ParseError(source, std::max(edge_lines[order[i]], edge_lines[order[i - 1]]),
                    "duplicate edge {" + edge_to_string(edges[order[i]]) + "}");

        return KGraph{header->first, header->second, std::move(edges)};
    }

    auto parse_graph_file(const std::string & path) -> KGraph
    {
        auto in = open(path);
        return parse_graph(in, path);
    }

    auto serialise_graph(const KGraph & g) -> std::string
    {
        std::string out = std::to_string(g.uniformity()) + " " + std::to_string(g.vertex_count()) + "\n";
        for (auto & e : g.edges())
            out += edge_to_string(e) + "\n";
        return out;
    }

    auto load_graph(const std::string & spec) -> KGraph
    {
        if (std::filesystem::exists(spec))
            return parse_graph_file(spec);
        try {
            return named_graph(spec);
        }
        catch (const DomainError &) {
            throw DomainError("'" + spec + "' is neither a graph file nor a built-in graph name");
        }
    }

    auto parse_lists(std::istream & in, const KGraph & carrier, const std::string & source) -> ListAssignment
    {
        std::vector<std::vector<Colour>> lists(carrier.edge_count());
        std::optional<std::size_t> r;
        parse_edge_records(in, carrier, source, [&](EdgeIndex e, std::vector<Colour> values, std::size_t line) {
            if (! r)
                r = values.size();
            else if (*r != values.size())
                throw ParseError(source, line,
                    "list has " + std::to_string(values.size()) + " entries, expected " + std::to_string(*r));
            lists[e] = std::move(values);
        });
        return ListAssignment{unsigned(r.value_or(0)), std::move(lists)};
    }

    auto parse_lists_file(const std::string & path, const KGraph & carrier) -> ListAssignment
    {
        auto in = open(path);
        return parse_lists(in, carrier, path);
    }

    auto serialise_lists(const KGraph & carrier, const ListAssignment & lists) -> std::string
    {
        lists.check_total(carrier);
        std::string out;
        for (EdgeIndex e = 0; e < carrier.edge_count(); ++e) {
            out += edge_to_string(carrier.edge(e)) + " :";
            for (auto c : lists.list(e))
                out += " " + std::to_string(c);
            out += "\n";
        }
        return out;
    }

    auto parse_colouring(std::istream & in, const KGraph & carrier, const std::string & source) -> Colouring
    {
        std::vector<Colour> colours(carrier.edge_count());
        parse_edge_records(in, carrier, source, [&](EdgeIndex e, std::vector<Colour> values, std::size_t line) {
            if (values.size() != 1)
                throw ParseError(source, line, "expected exactly one colour per edge");
            colours[e] = values.front();
        });
        return Colouring{std::move(colours)};
    }

    auto parse_colouring_file(const std::string & path, const KGraph & carrier) -> Colouring
    {
        auto in = open(path);
        return parse_colouring(in, carrier, path);
    }

    auto serialise_colouring(const KGraph & carrier, const Colouring & colouring) -> std::string
    {
        colouring.check_total(carrier);
        std::string out;
        for (EdgeIndex e = 0; e < carrier.edge_count(); ++e)
            out += edge_to_string(carrier.edge(e)) + " : " + std::to_string(colouring[e]) + "\n";
        return out;
    }

    auto parse_ordering(std::string_view text, Vertex size) -> Ordering
    {
        std::vector<Vertex> order;
        std::size_t start = 0;
        while (start <= text.size() && ! text.empty()) {
            auto comma = text.find(',', start);
            auto part = text.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
            Vertex v = 0;
            auto [end, ec] = std::from_chars(part.data(), part.data() + part.size(), v);
            if (part.empty() || ec != std::errc{} || end != part.data() + part.size())
                throw DomainError("bad ordering '" + std::string(text) + "'");
            order.push_back(v);
            if (comma == std::string_view::npos)
                break;
            start = comma + 1;
        }
        if (order.size() != size)
            throw DomainError("ordering lists " + std::to_string(order.size()) + " vertices, the pattern has " +
                std::to_string(size));
        return Ordering{std::move(order)};
    }

    auto ordering_to_string(const Ordering & sigma) -> std::string
    {
        std::string out;
        for (Vertex i = 0; i < sigma.size(); ++i) {
            if (i)
                out += ",";
            out += std::to_string(sigma.vertex_at(i));
        }
        return out;
    }

    auto parse_fraction(std::string_view text) -> Rational
    {
        namespace mp = boost::multiprecision;
        auto bad = [&]() { return DomainError("bad number '" + std::string(text) + "'"); };
        auto digits = [&](std::string_view s) {
            return ! s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
        };

        // cpp_int reads a leading zero as an octal prefix.
        auto integer = [](std::string_view s) {
            auto first = s.find_first_not_of('0');
            return mp::cpp_int{first == std::string_view::npos ? std::string("0") : std::string(s.substr(first))};
        };

        bool negative = ! text.empty() && text.front() == '-';
        auto body = negative ? text.substr(1) : text;
        Rational value;
        if (auto slash = body.find('/'); slash != std::string_view::npos) {
            auto num = body.substr(0, slash), den = body.substr(slash + 1);
            if (! digits(num) || ! digits(den))
                throw bad();
            auto d = integer(den);
            if (d == 0)
                throw bad();
            value = Rational(integer(num), d);
        }
        else {
            auto dot = body.find('.');
            auto whole = body.substr(0, dot);
            auto frac = dot == std::string_view::npos ? std::string_view{} : body.substr(dot + 1);
            if ((whole.empty() && frac.empty()) || (! whole.empty() && ! digits(whole)) ||
                (! frac.empty() && ! digits(frac)) || (dot != std::string_view::npos && frac.empty()))
                throw bad();
            mp::cpp_int scale = 1;
            for (std::size_t i = 0; i < frac.size(); ++i)
                scale *= 10;
            value = Rational(integer(std::string(whole) + std::string(frac)), scale);
        }
        return negative ? Rational(-value) : value;
    }
}
