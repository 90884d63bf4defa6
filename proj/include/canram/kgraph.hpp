#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace canram
{
    using Vertex = std::uint32_t;
    using EdgeIndex = std::uint32_t;
    using Colour = std::uint64_t;

    // A k-set of vertices, always stored in increasing label order.
    using Edge = std::vector<Vertex>;

    auto edge_to_string(std::span<const Vertex> edge) -> std::string;

    // k-uniform hypergraph on vertices 0..n-1. Edges are kept sorted
    // lexicographically, so an EdgeIndex is stable for the lifetime of the graph
    // and iteration order is deterministic.
    class KGraph
    {
    public:
        KGraph(unsigned uniformity, Vertex vertex_count);

        // Vertices inside each edge may come in any order; the edge list is
        // sorted. Throws DomainError on a bad edge or a duplicate.
        KGraph(unsigned uniformity, Vertex vertex_count, std::vector<Edge> edges);

        auto uniformity() const -> unsigned { return _uniformity; }
        auto vertex_count() const -> Vertex { return _vertex_count; }
        auto edge_count() const -> std::size_t { return _edges.size(); }
        auto edges() const -> const std::vector<Edge> & { return _edges; }
        auto edge(EdgeIndex e) const -> const Edge & { return _edges[e]; }

        // `vertices` must be sorted.
        auto find_edge(std::span<const Vertex> vertices) const -> std::optional<EdgeIndex>;

        // Fast path for graphs (k = 2); -1 when u, v are not adjacent.
        auto pair_edge(Vertex u, Vertex v) const -> std::int64_t
        {
            return _pair_index[std::size_t(u) * _vertex_count + v];
        }

        auto degree(Vertex v) const -> std::size_t { return _incident[v].size(); }
        auto incident_edges(Vertex v) const -> const std::vector<EdgeIndex> & { return _incident[v]; }

        // Only meaningful for k = 2.
        auto neighbours(Vertex v) const -> const std::vector<Vertex> & { return _neighbours[v]; }

        // Spanning subgraph keeping the given edges of this graph.
        auto edge_subgraph(std::span<const EdgeIndex> keep) const -> KGraph;

        auto operator==(const KGraph & other) const -> bool
        {
            return _uniformity == other._uniformity && _vertex_count == other._vertex_count && _edges == other._edges;
        }

    private:
        void build_indices();
        auto pack(std::span<const Vertex> vertices) const -> std::uint64_t;

        unsigned _uniformity;
        Vertex _vertex_count;
        std::vector<Edge> _edges;
        std::vector<std::int32_t> _pair_index;
        std::unordered_map<std::uint64_t, EdgeIndex> _packed_index;
        std::vector<std::vector<EdgeIndex>> _incident;
        std::vector<std::vector<Vertex>> _neighbours;
    };

    auto complete_graph(Vertex n, unsigned k) -> KGraph;

    // A linear order of the vertices 0..v-1: vertex_at(i) is the vertex in
    // position i (0-based), position_of is its inverse.
    class Ordering
    {
    public:
        explicit Ordering(std::vector<Vertex> vertex_at_position);

        static auto natural(Vertex size) -> Ordering;

        auto size() const -> Vertex { return Vertex(_order.size()); }
        auto vertex_at(std::size_t position) const -> Vertex { return _order[position]; }
        auto position_of(Vertex v) const -> std::size_t { return _position[v]; }
        auto order() const -> const std::vector<Vertex> & { return _order; }
        auto reversed() const -> Ordering;

        auto operator==(const Ordering & other) const -> bool { return _order == other._order; }
        auto operator<(const Ordering & other) const -> bool { return _order < other._order; }

    private:
        std::vector<Vertex> _order;
        std::vector<std::size_t> _position;
    };

    // Colour of each edge of a carrier graph, indexed by EdgeIndex.
    class Colouring
    {
    public:
        Colouring() = default;
        explicit Colouring(std::vector<Colour> colours) : _colours(std::move(colours)) {}

        static auto constant(const KGraph & carrier, Colour c) -> Colouring;

        auto size() const -> std::size_t { return _colours.size(); }
        auto operator[](EdgeIndex e) const -> Colour { return _colours[e]; }
        auto operator[](EdgeIndex e) -> Colour & { return _colours[e]; }
        auto values() const -> const std::vector<Colour> & { return _colours; }

        // Throws DomainError unless the colouring is total on the carrier's edges.
        void check_total(const KGraph & carrier) const;

        auto operator==(const Colouring &) const -> bool = default;

    private:
        std::vector<Colour> _colours;
    };

    // An ordered r-tuple of colours for every edge of a carrier graph. Repeats
    // inside a tuple are allowed.
    class ListAssignment
    {
    public:
        ListAssignment(unsigned list_length, std::vector<std::vector<Colour>> lists);

        static auto constant(const KGraph & carrier, std::vector<Colour> list) -> ListAssignment;

        auto list_length() const -> unsigned { return _r; }
        auto size() const -> std::size_t { return _lists.size(); }
        auto list(EdgeIndex e) const -> const std::vector<Colour> & { return _lists[e]; }
        auto lists() const -> const std::vector<std::vector<Colour>> & { return _lists; }

        // True when every edge offers the same set of distinct colours.
        auto uniform() const -> bool;

        void check_total(const KGraph & carrier) const;

        // Lists for `sub`, whose edges must all be edges of `carrier`.
        auto restricted_to(const KGraph & carrier, const KGraph & sub) const -> ListAssignment;

        auto compatible(const Colouring & colouring) const -> bool;

    private:
        unsigned _r;
        std::vector<std::vector<Colour>> _lists;
    };

    struct Embedding
    {
        std::vector<Vertex> vertex_map;

        auto operator==(const Embedding &) const -> bool = default;
    };

    // Called once per embedding with the host edge each pattern edge lands on
    // (indexed by the pattern's EdgeIndex). Return false to stop early.
    using EmbeddingVisitor = std::function<bool(const Embedding &, std::span<const EdgeIndex>)>;

    // Streams every injective edge-preserving map V(pattern) -> V(host), each
    // exactly once, in a deterministic order. Returns false if the visitor
    // stopped the enumeration.
    auto enumerate_copies(const KGraph & pattern, const KGraph & host, const EmbeddingVisitor & visit) -> bool;

    auto count_embeddings(const KGraph & pattern, const KGraph & host) -> std::uint64_t;

    // Distinct subgraphs of `host` isomorphic to `pattern`, found by
    // deduplicating embedding images.
    auto distinct_subgraph_copies(const KGraph & pattern, const KGraph & host) -> std::uint64_t;
}
