#pragma once

#include <canram/density.hpp>
#include <canram/kgraph.hpp>

#include <cstdint>
#include <optional>
#include <vector>

namespace canram
{
    enum class DensenessMode
    {
        exact,
        sampled
    };

    struct DensenessResult
    {
        bool dense = true;
        // Every subset of this size was checked (exact mode) or sampled.
        std::size_t subset_size = 0;
        std::uint64_t subsets_checked = 0;
        bool exhaustive = false;
        std::optional<std::vector<Vertex>> witness;
    };

    inline constexpr std::uint64_t default_denseness_guard = 10'000'000;

    // (rho, d)-denseness of a graph: every vertex subset S with |S| = ceil(rho n)
    // spans at least d * C(|S|, 2) edges. Checking this size suffices for all
    // larger subsets. Exact mode throws GuardExceeded above `max_subsets`
    // subsets; sampled mode only ever refutes.
    auto is_locally_dense(const KGraph & g, const Rational & rho, const Rational & d,
        DensenessMode mode = DensenessMode::exact, std::uint64_t max_subsets = default_denseness_guard,
        std::uint64_t samples = 10'000, std::uint64_t seed = 1) -> DensenessResult;

    auto count_cliques(const KGraph & g, unsigned order) -> std::uint64_t;

    template <typename Number>
    struct ResilienceBound
    {
        Number d_prime;
        // gamma <= rho^2 d / 4, which gives d' >= d / 2.
        bool corollary = false;
        bool negative = false;
    };

    // d' = d - 2 gamma / rho^2.
    auto resilience_bound(const Rational & d, const Rational & gamma, const Rational & rho)
        -> ResilienceBound<Rational>;
    auto resilience_bound(double d, double gamma, double rho) -> ResilienceBound<double>;

    struct ResilienceTrial
    {
        std::size_t edges_removed = 0;
        // Dense with the asymptotic d' = d - 2 gamma / rho^2.
        bool asymptotic_holds = false;
        // Dense with d - gamma e(G) / C(s, 2), the exact count bound for s-sets.
        bool exact_holds = false;
    };

    struct ResilienceReport
    {
        Rational d_asymptotic;
        Rational d_exact;
        std::vector<ResilienceTrial> trials;

        auto all_exact() const -> bool;
        auto all_asymptotic() const -> bool;
    };

    // Deletes floor(gamma e(G)) random edges `trials` times from a graph that
    // must itself be (rho, d)-dense, and checks both bounds exactly.
    auto check_resilience(const KGraph & g, const Rational & rho, const Rational & d, const Rational & gamma,
        unsigned trials, std::uint64_t seed, std::uint64_t max_subsets = default_denseness_guard) -> ResilienceReport;
}
