#include <canram/errors.hpp>
#include <canram/experiments.hpp>
#include <canram/graphs.hpp>
#include <canram/io.hpp>

#include <boost/math/special_functions/beta.hpp>

#include <json.hpp>

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <mutex>
#include <ostream>
#include <random>
#include <thread>

namespace canram
{
    auto sample_gnp(Vertex n, unsigned k, double p, std::uint64_t seed) -> KGraph
    {
        if (! (p >= 0.0 && p <= 1.0))
            throw DomainError("edge probability must lie in [0, 1]");
        if (k == 0)
            throw DomainError("uniformity must be positive");

        std::mt19937_64 rng{seed};
        std::vector<Edge> edges;
        if (n >= k) {
            Edge current(k);
            for (unsigned i = 0; i < k; ++i)
                current[i] = i;
            while (true) {
                double u = double(rng() >> 11) * 0x1.0p-53;
                if (u < p)
                    edges.push_back(current);
                int i = int(k) - 1;
                while (i >= 0 && current[i] == n - k + unsigned(i))
                    --i;
                if (i < 0)
                    break;
                ++current[i];
                for (unsigned j = unsigned(i) + 1; j < k; ++j)
                    current[j] = current[j - 1] + 1;
            }
        }
        return KGraph{k, n, std::move(edges)};
    }

    auto splitmix64(std::uint64_t & state) -> std::uint64_t
    {
        auto z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    auto trial_seed(std::uint64_t seed, std::uint64_t point, std::uint64_t trial) -> std::uint64_t
    {
        std::uint64_t state = seed;
        auto a = splitmix64(state);
        state = a ^ point;
        auto b = splitmix64(state);
        state = b ^ trial;
        return splitmix64(state);
    }

    auto generate_lists(const ListSpec & spec, const KGraph & carrier, std::uint64_t seed) -> ListAssignment
    {
        if (spec.kind == ListSpec::Kind::constant) {
            if (spec.colours.empty())
                throw DomainError("constant lists need at least one colour");
            return ListAssignment::constant(carrier, spec.colours);
        }
        if (spec.r == 0 || spec.universe == 0)
            throw DomainError("random lists need r >= 1 and a non-empty universe");
        std::mt19937_64 rng{seed};
        std::vector<std::vector<Colour>> lists(carrier.edge_count());
        for (auto & l : lists)
            for (unsigned i = 0; i < spec.r; ++i)
                l.push_back(1 + rng() % spec.universe);
        return ListAssignment{spec.r, std::move(lists)};
    }

    auto clopper_pearson(std::uint64_t successes, std::uint64_t trials, double confidence)
        -> std::pair<double, double>
    {
        if (trials == 0)
            return {0.0, 1.0};
        double alpha = 1.0 - confidence;
        double x = double(successes), n = double(trials);
        double lo = successes == 0 ? 0.0 : boost::math::ibeta_inv(x, n - x + 1.0, alpha / 2.0);
        double hi = successes == trials ? 1.0 : boost::math::ibeta_inv(x + 1.0, n - x, 1.0 - alpha / 2.0);
        return {lo, hi};
    }

    auto experiment_lists(const ExperimentConfig & config) -> ListAssignment
    {
        return generate_lists(config.lists, complete_graph(config.n, config.k), trial_seed(config.seed, ~0ULL, 0));
    }

    auto run_trial(const ExperimentConfig & config, const ListAssignment & full_lists, double p, std::uint64_t seed)
        -> TrialOutcome
    {
        auto host = sample_gnp(config.n, config.k, p, seed);
        auto lists = full_lists.restricted_to(complete_graph(config.n, config.k), host);
        auto options = config.solver;
        options.workers = 1;
        try {
            bool holds;
            if (config.sigma)
                holds = find_avoiding_colouring({host, config.pattern, *config.sigma, lists}, options).outcome ==
                    Outcome::none_exists;
            else
                holds = decide_canarrow_lists(host, config.pattern, lists, options).holds;
            return {holds ? TrialOutcome::Kind::holds : TrialOutcome::Kind::fails};
        }
        catch (const GuardExceeded &) {
            return {TrialOutcome::Kind::guard_exceeded};
        }
    }

    namespace
    {
        auto estimate_with_lists(const ExperimentConfig & config, const ListAssignment & lists, double p,
            std::uint64_t point_index) -> PointEstimate
        {
            if (config.trials == 0)
                throw DomainError("at least one trial per point is needed");

            auto start = std::chrono::steady_clock::now();
            std::vector<TrialOutcome::Kind> outcomes(config.trials, TrialOutcome::Kind::fails);
            std::atomic<std::uint64_t> next{0};
            std::exception_ptr failure;
            std::mutex lock;

            auto work = [&]() {
                try {
                    for (auto t = next.fetch_add(1); t < config.trials; t = next.fetch_add(1))
                        outcomes[t] = run_trial(config, lists, p, trial_seed(config.seed, point_index, t)).kind;
                }
                catch (...) {
                    std::lock_guard guard{lock};
                    failure = std::current_exception();
                    next.store(config.trials);
                }
            };

            auto workers = std::max(1u, config.workers);
            if (workers == 1)
                work();
            else {
                std::vector<std::jthread> threads;
                for (unsigned w = 0; w < workers; ++w)
                    threads.emplace_back(work);
            }
            if (failure)
                std::rethrow_exception(failure);

            PointEstimate point;
            point.p = p;
            point.trials = config.trials;
            for (auto kind : outcomes)
                switch (kind) {
                    case TrialOutcome::Kind::holds: ++point.successes; break;
                    case TrialOutcome::Kind::fails: ++point.failures; break;
                    case TrialOutcome::Kind::guard_exceeded: ++point.guard_exceeded; break;
                }
            auto decided = point.successes + point.failures;
            point.estimate = decided ? double(point.successes) / double(decided) : 0.0;
            std::tie(point.ci_lo, point.ci_hi) = clopper_pearson(point.successes, decided);
            if (config.record_seconds)
                point.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
            return point;
        }

        auto scale_of(const ExperimentConfig & config) -> std::optional<ThresholdScale>
        {
            if (config.pattern.edge_count() < 2 || config.pattern.vertex_count() <= config.pattern.uniformity())
                return std::nullopt;
            return threshold_scale(config.pattern, double(config.n));
        }
    }

    auto estimate_canram_probability(const ExperimentConfig & config, double p, std::uint64_t point_index)
        -> PointEstimate
    {
        auto point = estimate_with_lists(config, experiment_lists(config), p, point_index);
        if (auto scale = scale_of(config))
            point.ratio_to_scale = p / scale->value;
        return point;
    }

    auto threshold_sweep(const ExperimentConfig & config) -> ThresholdCurve
    {
        if (config.p_grid.empty())
            throw DomainError("the probability grid is empty");
        ThresholdCurve curve;
        auto scale = scale_of(config);
        if (scale) {
            curve.exponent = scale->exponent;
            curve.scale = scale->value;
        }

        auto lists = experiment_lists(config);
        std::uint64_t guarded = 0, total = 0;
        for (std::size_t i = 0; i < config.p_grid.size(); ++i) {
            auto point = estimate_with_lists(config, lists, config.p_grid[i], i);
            if (scale)
                point.ratio_to_scale = point.p / scale->value;
            guarded += point.guard_exceeded;
            total += point.trials;
            curve.points.push_back(point);
        }
        curve.unreliable = guarded * 20 > total;
        return curve;
    }

    auto threshold_grid(const KGraph & pattern, Vertex n, unsigned points, double ratio_min, double ratio_max,
        bool geometric) -> std::vector<double>
    {
        if (points == 0 || ! (ratio_min > 0.0) || ratio_max < ratio_min)
            throw DomainError("grid needs at least one point and 0 < ratio_min <= ratio_max");
        auto scale = threshold_scale(pattern, double(n)).value;
        std::vector<double> grid;
        for (unsigned i = 0; i < points; ++i) {
            double t = points == 1 ? 0.0 : double(i) / double(points - 1);
            double ratio = geometric ? ratio_min * std::pow(ratio_max / ratio_min, t)
                                     : ratio_min + (ratio_max - ratio_min) * t;
            grid.push_back(std::min(1.0, ratio * scale));
        }
        return grid;
    }

    auto parse_experiment_config(const std::string & json_text, const std::string & base_directory)
        -> ExperimentConfig
    {
        using nlohmann::json;
        json doc;
        try {
            doc = json::parse(json_text);
        }
        catch (const json::parse_error & e) {
            throw DomainError(std::string("config is not valid JSON: ") + e.what());
        }
        if (! doc.is_object())
            throw DomainError("config must be a JSON object");

        static const std::vector<std::string> known{"n", "k", "pattern", "pattern_file", "lists", "p", "grid",
            "trials", "seed", "sigma", "workers", "guard_nodes", "guard_copies", "record_seconds", "mode"};
        for (auto & [key, value] : doc.items())
            if (std::find(known.begin(), known.end(), key) == known.end())
                throw DomainError("unknown config field '" + key + "'");

        auto require = [&](const char * key) -> const json & {
            if (! doc.contains(key))
                throw DomainError(std::string("config field '") + key + "' is required");
            return doc.at(key);
        };

        try {
            ExperimentConfig config;
            config.n = require("n").get<Vertex>();
            config.k = doc.value("k", 2u);
            config.trials = require("trials").get<std::uint64_t>();
            config.seed = doc.value("seed", std::uint64_t{0});
            config.workers = doc.value("workers", 1u);
            config.record_seconds = doc.value("record_seconds", true);
            if (doc.contains("guard_nodes"))
                config.solver.max_nodes = doc["guard_nodes"].get<std::uint64_t>();
            if (doc.contains("guard_copies"))
                config.solver.max_embeddings = doc["guard_copies"].get<std::uint64_t>();
            if (doc.contains("mode")) {
                auto mode = doc["mode"].get<std::string>();
                if (mode == "strict")
                    config.solver.mode = CopyMode::strict;
                else if (mode != "any")
                    throw DomainError("mode must be 'any' or 'strict'");
            }

            if (doc.contains("pattern") == doc.contains("pattern_file"))
                throw DomainError("config needs exactly one of 'pattern' and 'pattern_file'");
            if (doc.contains("pattern")) {
                config.pattern_name = doc["pattern"].get<std::string>();
                config.pattern = named_graph(config.pattern_name);
            }
            else {
                std::filesystem::path path = doc["pattern_file"].get<std::string>();
                if (path.is_relative())
                    path = std::filesystem::path(base_directory) / path;
                config.pattern_name = path.filename().string();
                config.pattern = parse_graph_file(path.string());
            }
            if (config.pattern.uniformity() != config.k)
                throw UniformityMismatch(config.pattern.uniformity(), config.k);

            if (doc.contains("lists")) {
                auto & l = doc["lists"];
                auto type = l.at("type").get<std::string>();
                if (type == "constant") {
                    config.lists.kind = ListSpec::Kind::constant;
                    config.lists.colours = l.at("colours").get<std::vector<Colour>>();
                }
                else if (type == "random") {
                    config.lists.kind = ListSpec::Kind::random;
                    config.lists.r = l.at("r").get<unsigned>();
                    config.lists.universe = l.at("universe").get<std::uint64_t>();
                }
                else
                    throw DomainError("lists type must be 'constant' or 'random'");
            }

            if (doc.contains("p") == doc.contains("grid"))
                throw DomainError("config needs exactly one of 'p' and 'grid'");
            if (doc.contains("p"))
                config.p_grid = doc["p"].get<std::vector<double>>();
            else {
                auto & g = doc["grid"];
                auto spacing = g.value("spacing", std::string("geometric"));
                if (spacing != "geometric" && spacing != "linear")
                    throw DomainError("grid spacing must be 'geometric' or 'linear'");
                config.p_grid = threshold_grid(config.pattern, config.n, g.at("points").get<unsigned>(),
                    g.at("ratio_min").get<double>(), g.at("ratio_max").get<double>(), spacing == "geometric");
            }
            for (auto p : config.p_grid)
                if (! (p >= 0.0 && p <= 1.0))
                    throw DomainError("probabilities must lie in [0, 1]");

            if (doc.contains("sigma") && ! (doc["sigma"].is_string() && doc["sigma"] == "all"))
                config.sigma = Ordering{doc["sigma"].get<std::vector<Vertex>>()};
            if (config.sigma && config.sigma->size() != config.pattern.vertex_count())
                throw DomainError("sigma must order every vertex of the pattern");
            return config;
        }
        catch (const json::exception & e) {
            throw DomainError(std::string("bad config: ") + e.what());
        }
    }

    void write_curve_csv(std::ostream & out, const ThresholdCurve & curve)
    {
        out << "p,ratio_to_scale,estimate,ci_lo,ci_hi,trials,guard_exceeded,seconds\n";
        char line[256];
        for (auto & point : curve.points) {
            std::snprintf(line, sizeof(line), "%.10g,%.6f,%.6f,%.6f,%.6f,%llu,%llu,%.3f\n", point.p,
                point.ratio_to_scale, point.estimate, point.ci_lo, point.ci_hi,
                static_cast<unsigned long long>(point.trials), static_cast<unsigned long long>(point.guard_exceeded),
                point.seconds);
            out << line;
        }
    }
}
