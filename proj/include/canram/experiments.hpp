#pragma once

#include <canram/density.hpp>
#include <canram/kgraph.hpp>
#include <canram/solver.hpp>

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace canram
{
    // Each of the C(n, k) possible edges is kept independently with
    // probability p, drawn from mt19937_64 in lexicographic edge order.
    auto sample_gnp(Vertex n, unsigned k, double p, std::uint64_t seed) -> KGraph;

    auto splitmix64(std::uint64_t & state) -> std::uint64_t;

    // Independent substream seed for (point, trial).
    auto trial_seed(std::uint64_t seed, std::uint64_t point, std::uint64_t trial) -> std::uint64_t;

    struct ListSpec
    {
        enum class Kind
        {
            constant,
            random
        };

        Kind kind = Kind::constant;
        // Constant lists: the list every edge gets.
        std::vector<Colour> colours{1, 2};
        // Random lists: r entries drawn uniformly from 1..universe per edge.
        unsigned r = 2;
        std::uint64_t universe = 2;
    };

    // Lists on every edge of `carrier`.
    auto generate_lists(const ListSpec & spec, const KGraph & carrier, std::uint64_t seed) -> ListAssignment;

    struct ExperimentConfig
    {
        Vertex n = 0;
        unsigned k = 2;
        KGraph pattern{2, 0};
        std::string pattern_name;
        ListSpec lists;
        std::vector<double> p_grid;
        std::uint64_t trials = 1;
        std::uint64_t seed = 0;
        // Unset means every ordering must be hit.
        std::optional<Ordering> sigma;
        unsigned workers = 1;
        SolverOptions solver;
        // Wall times break bit-for-bit reproducibility of the CSV.
        bool record_seconds = true;
    };

    // Two-sided exact binomial interval.
    auto clopper_pearson(std::uint64_t successes, std::uint64_t trials, double confidence = 0.95)
        -> std::pair<double, double>;

    struct PointEstimate
    {
        double p = 0.0;
        double ratio_to_scale = 0.0;
        std::uint64_t trials = 0;
        std::uint64_t successes = 0;
        std::uint64_t failures = 0;
        std::uint64_t guard_exceeded = 0;
        // Over decided trials only.
        double estimate = 0.0;
        double ci_lo = 0.0;
        double ci_hi = 1.0;
        double seconds = 0.0;

        auto half_width() const -> double { return (ci_hi - ci_lo) / 2.0; }
    };

    struct TrialOutcome
    {
        enum class Kind
        {
            holds,
            fails,
            guard_exceeded
        };

        Kind kind;
    };

    // One trial: sample the host, restrict the lists, decide.
    auto run_trial(const ExperimentConfig & config, const ListAssignment & full_lists, double p, std::uint64_t seed)
        -> TrialOutcome;

    // Lists for the whole complete k-graph, fixed before any host is sampled.
    auto experiment_lists(const ExperimentConfig & config) -> ListAssignment;

    auto estimate_canram_probability(const ExperimentConfig & config, double p, std::uint64_t point_index = 0)
        -> PointEstimate;

    struct ThresholdCurve
    {
        Rational exponent;
        double scale = 0.0;
        std::vector<PointEstimate> points;
        // More than 5% of all trials hit a solver guard.
        bool unreliable = false;
    };

    auto threshold_sweep(const ExperimentConfig & config) -> ThresholdCurve;

    // `points` values of c * n^(-1/m_k(H)) for c spanning [ratio_min, ratio_max].
    auto threshold_grid(const KGraph & pattern, Vertex n, unsigned points, double ratio_min, double ratio_max,
        bool geometric = true) -> std::vector<double>;

    // Reads a JSON experiment config; relative pattern files are resolved
    // against `base_directory`.
    auto parse_experiment_config(const std::string & json_text, const std::string & base_directory = ".")
        -> ExperimentConfig;

    void write_curve_csv(std::ostream & out, const ThresholdCurve & curve);
}
