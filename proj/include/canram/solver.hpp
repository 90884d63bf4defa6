#pragma once

#include <canram/kgraph.hpp>
#include <canram/patterns.hpp>

#include <cstdint>
#include <optional>
#include <vector>

namespace canram
{
    struct AvoidanceInstance
    {
        KGraph host;
        KGraph pattern;
        Ordering sigma;
        ListAssignment lists;
    };

    enum class SolverBackend
    {
        // Clause learning for list colourings, backtracking otherwise.
        automatic,
        backtracking,
        clause_learning
    };

    struct SolverOptions
    {
        std::uint64_t max_nodes = 200'000'000;
        std::uint64_t max_embeddings = 20'000'000;
        // Worker threads for root-level splitting; 1 is fully deterministic.
        unsigned workers = 1;
        CopyMode mode = CopyMode::any_embedding;
        // Prune list entries that would complete a canonical copy.
        bool propagate = true;
        SolverBackend backend = SolverBackend::automatic;
        // Components whose clause encoding would be larger fall back to
        // backtracking.
        std::uint64_t max_clauses = 5'000'000;
    };

    struct SolverStatistics
    {
        std::uint64_t nodes = 0;
        std::uint64_t prunings = 0;
        std::uint64_t propagations = 0;
        std::uint64_t copies = 0;
        std::uint64_t components = 0;

        auto operator+=(const SolverStatistics & other) -> SolverStatistics &;
    };

    enum class Outcome
    {
        avoiding_colouring_found,
        none_exists
    };

    auto to_string(Outcome outcome) -> const char *;

    struct SolverResult
    {
        Outcome outcome = Outcome::none_exists;
        std::optional<Colouring> certificate;
        SolverStatistics statistics;
    };

    // Complete search for a list-compatible colouring of the host with no copy
    // of the pattern that is canonical with respect to sigma. Throws
    // GuardExceeded when the node or embedding cap is hit.
    auto find_avoiding_colouring(const AvoidanceInstance & instance, const SolverOptions & options = {}) -> SolverResult;

    // Orderings of V(pattern) up to the symmetries that preserve the set of
    // canonical copies: automorphisms of the pattern (any-embedding mode only)
    // and reversal. Sorted lexicographically.
    auto ordering_representatives(const KGraph & pattern, CopyMode mode = CopyMode::any_embedding,
        std::uint64_t max_orderings = 3'628'800) -> std::vector<Ordering>;

    struct CanarrowReport
    {
        bool holds = false;
        // When it fails: an ordering and a colouring with no canonical copy.
        std::optional<Ordering> avoided_ordering;
        std::optional<Colouring> certificate;
        std::uint64_t orderings_checked = 0;
        SolverStatistics statistics;
    };

    // Every list-compatible colouring of the host contains, for every ordering,
    // a canonical copy of the pattern.
    auto decide_canarrow_lists(const KGraph & host, const KGraph & pattern, const ListAssignment & lists,
        const SolverOptions & options = {}) -> CanarrowReport;

    // Every colouring with arbitrary colours (searched as set partitions of the
    // edges) contains, for every ordering, a canonical copy of the pattern.
    auto decide_canarrow_unrestricted(const KGraph & host, const KGraph & pattern, const SolverOptions & options = {})
        -> CanarrowReport;

    struct RamseyNumberResult
    {
        std::optional<Vertex> value;
        // Every complete graph below this size was shown not to arrow.
        Vertex lower_bound = 0;
        bool guard_exceeded = false;
    };

    // Smallest n <= n_max with K_n arrowing the pattern canonically.
    auto canonical_ramsey_number(const KGraph & pattern, Vertex n_max, const SolverOptions & options = {})
        -> RamseyNumberResult;
}
