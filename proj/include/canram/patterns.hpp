#pragma once

#include <canram/kgraph.hpp>

#include <cstdint>
#include <functional>
#include <initializer_list>
#include <span>
#include <utility>
#include <vector>

namespace canram
{
    inline constexpr unsigned max_pattern_uniformity = 8;

    // A subset S of the positions [k]; bit i stands for position i + 1.
    using PositionSet = std::uint32_t;

    // From 1-based positions, e.g. position_set({1, 3}).
    auto position_set(std::initializer_list<unsigned> positions) -> PositionSet;
    auto positions_of(PositionSet s) -> std::vector<unsigned>;

    // The vertices of `t` that sit at the positions in `s` once `t` is sorted by
    // `sigma`, returned in increasing label order.
    auto project(std::span<const Vertex> t, PositionSet s, const Ordering & sigma) -> std::vector<Vertex>;

    struct PatternWitness
    {
        struct Entry
        {
            PositionSet positions;
            // The induced injective colour map on realised projections.
            std::vector<std::pair<std::vector<Vertex>, Colour>> assignment;
        };

        std::vector<Entry> witnesses;

        auto canonical() const -> bool { return ! witnesses.empty(); }
        auto contains(PositionSet s) const -> bool;
        auto sets() const -> std::vector<PositionSet>;
    };

    // All S for which the colouring factors injectively through the
    // S-projection of the edges of `pattern` under `sigma`.
    auto classify_pattern(const KGraph & pattern, const Ordering & sigma, const Colouring & colouring) -> PatternWitness;

    // Canonical form of a colour vector up to relabelling: a restricted growth
    // string packed four bits per entry. Supports at most 16 entries.
    using PartitionKey = std::uint64_t;
    inline constexpr unsigned max_partition_entries = 16;

    auto partition_key(std::span<const Colour> colours) -> PartitionKey;
    auto partition_key_of_labels(std::span<const unsigned> labels) -> PartitionKey;

    // The edge partitions of `pattern` that count as canonical under `sigma`:
    // for each S, edges sharing an S-projection share a block. A colouring of
    // the pattern is canonical iff its colour partition is one of these.
    class CanonicalPartitions
    {
    public:
        CanonicalPartitions(const KGraph & pattern, const Ordering & sigma);

        auto keys() const -> const std::vector<PartitionKey> & { return _keys; }

        // Colours indexed by the pattern's EdgeIndex.
        auto canonical(std::span<const Colour> colours) const -> bool;

        // Which S produce the given partition.
        auto sets_for(PartitionKey key) const -> std::vector<PositionSet>;

    private:
        std::vector<PartitionKey> _keys;
        std::vector<std::pair<PartitionKey, PositionSet>> _by_set;
    };

    // Whether a copy counts as canonical when some embedding onto it is
    // canonical (the default), or only when the first embedding found onto that
    // image is.
    enum class CopyMode
    {
        any_embedding,
        strict
    };

    using CanonicalCopyVisitor = std::function<bool(const Embedding &, const PatternWitness &)>;

    // Streams every embedding of `pattern` into `host` under which the
    // inherited colouring is canonical, with its witnessing sets.
    auto enumerate_canonical_copies(const KGraph & pattern, const Ordering & sigma, const KGraph & host,
        const Colouring & colouring, const CanonicalCopyVisitor & visit, CopyMode mode = CopyMode::any_embedding)
        -> bool;

    // Distinct subgraph copies of `pattern` in `host` that are canonical.
    auto count_distinct_canonical_copies(const KGraph & pattern, const Ordering & sigma, const KGraph & host,
        const Colouring & colouring, CopyMode mode = CopyMode::any_embedding) -> std::uint64_t;

    // One entry per distinct copy (as a set of host edges): the copy's edges in
    // increasing index order, and the sorted partition keys over those positions
    // that make the copy canonical under some admissible embedding.
    struct CopyConstraint
    {
        std::vector<EdgeIndex> edges;
        std::vector<PartitionKey> canonical_keys;

        auto canonical(std::span<const Colour> colours_by_position) const -> bool;
    };

    // Every embedding of a pattern into a host, grouped by copy. Built once and
    // reused to derive constraints for any number of orderings.
    class CopyIndex
    {
    public:
        // Throws GuardExceeded if more than `max_embeddings` embeddings exist.
        CopyIndex(const KGraph & pattern, const KGraph & host, std::uint64_t max_embeddings);

        auto copy_count() const -> std::size_t { return _copies.size(); }
        auto embedding_count() const -> std::uint64_t { return _embeddings; }
        auto copy_edges(std::size_t copy) const -> const std::vector<EdgeIndex> & { return _copies[copy].edges; }

        auto constraints(const CanonicalPartitions & partitions, CopyMode mode) const -> std::vector<CopyConstraint>;

    private:
        struct Copy
        {
            std::vector<EdgeIndex> edges;
            // One row per embedding onto this copy: the pattern edge that lands
            // on each position of `edges`.
            std::vector<std::vector<std::uint8_t>> pattern_edge_at;
        };

        std::size_t _pattern_edges;
        std::uint64_t _embeddings = 0;
        std::vector<Copy> _copies;
    };

    // Throws GuardExceeded if more than `max_embeddings` embeddings exist.
    auto canonical_copy_constraints(const KGraph & pattern, const Ordering & sigma, const KGraph & host,
        CopyMode mode, std::uint64_t max_embeddings) -> std::vector<CopyConstraint>;
}
