#pragma once

#include <canram/kgraph.hpp>
#include <canram/patterns.hpp>

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace canram
{
    // Vertex (e, s) of the encoding stands for "edge e takes the s-th entry of
    // its list"; slots are 0-based here. Its id is e * r + s.
    using EncodingVertex = std::uint32_t;

    class EncodingHypergraph
    {
    public:
        EncodingHypergraph(KGraph base, ListAssignment lists, unsigned pattern_edges,
            std::vector<std::vector<EncodingVertex>> hyperedges);

        auto base() const -> const KGraph & { return _base; }
        auto lists() const -> const ListAssignment & { return _lists; }
        auto list_length() const -> unsigned { return _lists.list_length(); }
        auto uniformity() const -> unsigned { return _pattern_edges; }
        auto vertex_count() const -> std::size_t { return _base.edge_count() * _lists.list_length(); }
        auto edge_count() const -> std::size_t { return _hyperedges.size(); }
        auto hyperedges() const -> const std::vector<std::vector<EncodingVertex>> & { return _hyperedges; }

        auto vertex(EdgeIndex e, unsigned slot) const -> EncodingVertex { return e * list_length() + slot; }
        auto edge_of(EncodingVertex v) const -> EdgeIndex { return v / list_length(); }
        auto slot_of(EncodingVertex v) const -> unsigned { return v % list_length(); }

        // Hyperedges entirely inside W (W sorted, duplicates allowed).
        auto induced_edge_count(std::span<const EncodingVertex> w) const -> std::size_t;

    private:
        KGraph _base;
        ListAssignment _lists;
        unsigned _pattern_edges;
        std::vector<std::vector<EncodingVertex>> _hyperedges;
    };

    // Hyperedges are the vertex sets {(e_1, s_1), ..., (e_m, s_m)} whose edges
    // form a copy of the pattern that becomes canonical under sigma when each
    // e_i gets list entry s_i. Throws GuardExceeded when copies * r^e(H) would
    // exceed `max_work`.
    auto build_encoding(const KGraph & pattern, const Ordering & sigma, const KGraph & base,
        const ListAssignment & lists, std::uint64_t max_work = 50'000'000) -> EncodingHypergraph;

    auto graph_shadow(const EncodingHypergraph & encoding, std::span<const EncodingVertex> w) -> KGraph;

    // W(G, chi) = {(e, s) : e in E(G), chi(e) = L(e)[s]}, sorted. G must be a
    // subgraph of the base graph and chi a colouring of G.
    auto colouring_to_vertexset(const EncodingHypergraph & encoding, const KGraph & g, const Colouring & chi)
        -> std::vector<EncodingVertex>;

    // Whether no hyperedge lies inside W (W sorted).
    auto is_independent(const EncodingHypergraph & encoding, std::span<const EncodingVertex> w) -> bool;

    struct DegreeProfile
    {
        struct Level
        {
            unsigned j;
            std::uint64_t max_degree;
            // r^e(H) * n^(-(j-1)/m_k(H)) * n^(v(H)-k)
            double bound;
            bool within_bound;
        };

        std::vector<Level> levels;
    };

    // Exact Delta_j for j = 1..e(H). Throws GuardExceeded if the total number
    // of j-subsets to scan exceeds `max_work`.
    auto degree_profile(const EncodingHypergraph & encoding, const KGraph & pattern,
        std::uint64_t max_work = 50'000'000) -> DegreeProfile;

    // Delta_j <= D0 * q^(j-1) * e / v for every level, with e and v the edge
    // and vertex counts of the encoding.
    struct ContainerDegreeCheck
    {
        std::vector<double> bounds;
        std::vector<bool> within;
        bool holds = true;
    };

    auto container_degree_check(const EncodingHypergraph & encoding, const DegreeProfile & profile, double d0,
        double q) -> ContainerDegreeCheck;

    // Distinct copies of the pattern in `host` that are canonical under sigma.
    auto count_canonical_copies(const KGraph & host, const Colouring & chi, const KGraph & pattern,
        const Ordering & sigma, CopyMode mode = CopyMode::any_embedding) -> std::uint64_t;

    enum class AbundanceMode
    {
        exhaustive,
        sampled
    };

    struct AbundanceReport
    {
        bool exhaustive = false;
        // The family of W whose shadow keeps a (1 - gamma) share of the base
        // edges is closed under supersets because shadows only grow.
        bool increasing = true;
        bool minimum_size = true;
        bool dense = true;
        std::optional<std::vector<EncodingVertex>> size_witness;
        std::optional<std::vector<EncodingVertex>> density_witness;
        std::uint64_t sets_tested = 0;

        auto holds() const -> bool { return increasing && minimum_size && dense; }
    };

    inline constexpr std::size_t max_exhaustive_abundance_vertices = 20;

    // Checks the abundance conditions for the family above with parameter
    // epsilon. The minimum size condition is decided exactly in both modes:
    // the smallest member picks one slot on each of ceil((1 - gamma) e(base))
    // edges. Exhaustive mode enumerates every W and needs v <= 20; sampled mode
    // tests `samples` random smallest members plus each single-slot family.
    auto check_abundance(const EncodingHypergraph & encoding, double gamma, double epsilon, AbundanceMode mode,
        std::uint64_t samples = 1000, std::uint64_t seed = 1) -> AbundanceReport;
}
