#include <canram/cli.hpp>
#include <canram/density.hpp>
#include <canram/encoding.hpp>
#include <canram/errors.hpp>
#include <canram/experiments.hpp>
#include <canram/io.hpp>
#include <canram/locally_dense.hpp>
#include <canram/patterns.hpp>
#include <canram/solver.hpp>

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <cstdio>
#include <ostream>
#include <sstream>

namespace canram
{
    namespace
    {
        using nlohmann::json;

        struct GlobalOptions
        {
            bool json = false;
            std::uint64_t guard_nodes = SolverOptions{}.max_nodes;
            std::uint64_t guard_copies = SolverOptions{}.max_embeddings;
            unsigned workers = 1;
            std::string mode = "any";
            std::string backend = "auto";

            auto solver() const -> SolverOptions
            {
                SolverOptions options;
                options.max_nodes = guard_nodes;
                options.max_embeddings = guard_copies;
                options.workers = workers;
                options.mode = mode == "strict" ? CopyMode::strict : CopyMode::any_embedding;
                if (backend == "backtracking")
                    options.backend = SolverBackend::backtracking;
                else if (backend == "clause-learning")
                    options.backend = SolverBackend::clause_learning;
                return options;
            }
        };

        auto rational_json(const Rational & q) -> json
        {
            return {{"text", to_string(q)}, {"numerator", boost::multiprecision::numerator(q).str()},
                {"denominator", boost::multiprecision::denominator(q).str()}, {"value", q.convert_to<double>()}};
        }

        auto colouring_json(const KGraph & g, const Colouring & c) -> json
        {
            auto result = json::array();
            for (EdgeIndex e = 0; e < g.edge_count(); ++e)
                result.push_back({{"edge", g.edge(e)}, {"colour", c[e]}});
            return result;
        }

        auto statistics_json(const SolverStatistics & s) -> json
        {
            return {{"nodes", s.nodes}, {"prunings", s.prunings}, {"propagations", s.propagations},
                {"copies", s.copies}, {"components", s.components}};
        }

        auto sigma_for(const std::string & text, const KGraph & pattern) -> Ordering
        {
            if (text.empty())
                return Ordering::natural(pattern.vertex_count());
            return parse_ordering(text, pattern.vertex_count());
        }

        void write_file(const std::string & path, const std::string & contents)
        {
            std::ofstream out{path};
            if (! out)
                throw DomainError("cannot write '" + path + "'");
            out << contents;
        }

        auto sets_json(const std::vector<PositionSet> & sets) -> json
        {
            auto result = json::array();
            for (auto s : sets)
                result.push_back(positions_of(s));
            return result;
        }

        auto sets_text(const std::vector<PositionSet> & sets) -> std::string
        {
            std::string text;
            for (auto s : sets) {
                text += text.empty() ? "{" : " {";
                auto positions = positions_of(s);
                for (std::size_t i = 0; i < positions.size(); ++i)
                    text += (i ? "," : "") + std::to_string(positions[i]);
                text += "}";
            }
            return text;
        }
    }

    auto run_command(const std::vector<std::string> & argv, std::ostream & out, std::ostream & err) -> int
    {
        CLI::App app{"Canonical Ramsey properties of graphs and hypergraphs", "canram"};
        app.require_subcommand(1);
        app.fallthrough();

        GlobalOptions global;
        app.add_flag("--json", global.json, "Print a JSON report instead of text");
        app.add_option("--guard-nodes", global.guard_nodes, "Search node limit")->capture_default_str();
        app.add_option("--guard-copies", global.guard_copies, "Embedding enumeration limit")->capture_default_str();
        app.add_option("--workers", global.workers, "Worker threads")->check(CLI::Range(1u, 1024u));
        app.add_option("--mode", global.mode, "Copy semantics")->check(CLI::IsMember({"any", "strict"}));
        app.add_option("--backend", global.backend, "Search backend")
            ->check(CLI::IsMember({"auto", "backtracking", "clause-learning"}));

        std::string pattern_path, host_path, lists_path, colouring_path, sigma_text, out_path, config_path;
        std::string rho_text, d_text;
        bool exact = false;
        std::uint64_t seed = 0, samples = 10'000;
        Vertex n_max = 0;
        double n_for_scale = 0.0, d0 = 1.0, q = 1.0;

        auto density = app.add_subcommand("density", "Maximal k-density of a pattern");
        density->add_option("pattern", pattern_path, "Pattern graph file or name")->required();
        density->add_option("--n", n_for_scale, "Also evaluate the threshold scale at this host size");

        auto classify = app.add_subcommand("classify", "Which position sets make a coloured pattern canonical");
        classify->add_option("pattern", pattern_path)->required();
        classify->add_option("colouring", colouring_path, "Colouring file")->required();
        classify->add_option("--sigma", sigma_text, "Ordering as comma-separated vertices, first to last");

        auto encode = app.add_subcommand("encode", "Build the canonical copy hypergraph");
        encode->add_option("pattern", pattern_path)->required();
        encode->add_option("base", host_path, "Base graph")->required();
        encode->add_option("lists", lists_path, "List assignment file")->required();
        encode->add_option("--sigma", sigma_text);
        encode->add_option("--out", out_path, "Write the hyperedges to this file");
        encode->add_option("--d0", d0, "Constant for the container degree check")->capture_default_str();
        encode->add_option("--q", q, "Scale for the container degree check")->capture_default_str();

        auto localdense = app.add_subcommand("localdense", "Check (rho, d)-denseness of a graph");
        localdense->add_option("graph", host_path)->required();
        localdense->add_option("--rho", rho_text, "Subset fraction, e.g. 1/2 or 0.5")->required();
        localdense->add_option("--d", d_text, "Edge density")->required();
        localdense->add_flag("--exact", exact, "Check every subset instead of sampling");
        localdense->add_option("--samples", samples)->capture_default_str();
        localdense->add_option("--seed", seed)->capture_default_str();

        auto avoid = app.add_subcommand("avoid", "Search for a list colouring without canonical copies");
        avoid->add_option("host", host_path)->required();
        avoid->add_option("pattern", pattern_path)->required();
        avoid->add_option("lists", lists_path)->required();
        avoid->add_option("--sigma", sigma_text);
        avoid->add_option("--certificate", out_path, "Write the colouring found to this file");

        auto canarrow = app.add_subcommand("canarrow", "Decide whether every colouring has a canonical copy");
        canarrow->add_option("host", host_path)->required();
        canarrow->add_option("pattern", pattern_path)->required();
        canarrow->add_option("--lists", lists_path, "Restrict colourings to these lists");

        auto crnumber = app.add_subcommand("crnumber", "Smallest complete host that arrows the pattern");
        crnumber->add_option("pattern", pattern_path)->required();
        crnumber->add_option("--max", n_max, "Largest host size to try")->required();

        auto threshold = app.add_subcommand("threshold", "Monte Carlo sweep over edge probabilities");
        threshold->add_option("--config", config_path, "Experiment config (JSON)")->required();
        threshold->add_option("--out", out_path, "CSV output")->required();
        threshold->add_option("--seed", seed, "Base seed")->required();

        std::vector<const char *> args;
        for (auto & a : argv)
            args.push_back(a.c_str());
        try {
            app.parse(int(args.size()), args.data());
        }
        catch (const CLI::ParseError & e) {
            auto code = app.exit(e, out, err);
            return code == 0 ? exit_success : exit_usage;
        }

        try {
            auto options = global.solver();

            if (*density) {
                auto pattern = load_graph(pattern_path);
                auto result = max_k_density(pattern);
                auto scale = threshold_scale(result, n_for_scale > 0 ? n_for_scale : 1.0);
                if (global.json) {
                    json report{{"command", "density"}, {"uniformity", pattern.uniformity()},
                        {"density", rational_json(result.value)}, {"witness", result.witness},
                        {"threshold_exponent", rational_json(scale.exponent)}};
                    if (n_for_scale > 0) {
                        report["n"] = n_for_scale;
                        report["threshold_scale"] = scale.value;
                    }
                    out << report.dump(2) << "\n";
                }
                else {
                    out << to_string(result.value) << "\n";
                    out << "witness {" << edge_to_string(result.witness) << "}\n";
                    out << "threshold exponent " << to_string(scale.exponent) << "\n";
                    if (n_for_scale > 0)
                        out << "n^(" << to_string(scale.exponent) << ") = " << scale.value << "\n";
                }
                return exit_success;
            }

            if (*classify) {
                auto pattern = load_graph(pattern_path);
                auto colouring = parse_colouring_file(colouring_path, pattern);
                auto sigma = sigma_for(sigma_text, pattern);
                auto witness = classify_pattern(pattern, sigma, colouring);
                if (global.json)
                    out << json{{"command", "classify"}, {"sigma", sigma.order()}, {"canonical", witness.canonical()},
                               {"sets", sets_json(witness.sets())}}
                               .dump(2)
                        << "\n";
                else
                    out << (witness.canonical() ? "canonical " + sets_text(witness.sets()) : "not canonical") << "\n";
                return witness.canonical() ? exit_success : exit_negative;
            }

            if (*encode) {
                auto pattern = load_graph(pattern_path);
                auto base = load_graph(host_path);
                auto lists = parse_lists_file(lists_path, base);
                auto sigma = sigma_for(sigma_text, pattern);
                auto encoding = build_encoding(pattern, sigma, base, lists, options.max_embeddings);
                auto profile = degree_profile(encoding, pattern, options.max_embeddings);
                auto check = container_degree_check(encoding, profile, d0, q);

                if (! out_path.empty()) {
                    std::ostringstream file;
                    file << encoding.list_length() << " " << encoding.vertex_count() << " " << encoding.edge_count()
                         << "\n";
                    for (auto & h : encoding.hyperedges()) {
                        for (std::size_t i = 0; i < h.size(); ++i)
                            file << (i ? " " : "") << h[i];
                        file << "\n";
                    }
                    write_file(out_path, file.str());
                }

                if (global.json) {
                    auto levels = json::array();
                    for (std::size_t i = 0; i < profile.levels.size(); ++i) {
                        auto & level = profile.levels[i];
                        levels.push_back({{"j", level.j}, {"max_degree", level.max_degree}, {"bound", level.bound},
                            {"within_bound", level.within_bound}, {"container_bound", check.bounds[i]},
                            {"within_container_bound", bool(check.within[i])}});
                    }
                    out << json{{"command", "encode"}, {"list_length", encoding.list_length()},
                               {"vertices", encoding.vertex_count()}, {"edges", encoding.edge_count()},
                               {"uniformity", encoding.uniformity()}, {"levels", levels},
                               {"container_check", {{"d0", d0}, {"q", q}, {"holds", check.holds}}}}
                               .dump(2)
                        << "\n";
                }
                else {
                    out << "vertices " << encoding.vertex_count() << ", hyperedges " << encoding.edge_count() << "\n";
                    out << "j  max_degree  bound\n";
                    for (auto & level : profile.levels)
                        out << level.j << "  " << level.max_degree << "  " << level.bound
                            << (level.within_bound ? "" : "  exceeded") << "\n";
                }
                return exit_success;
            }

            if (*localdense) {
                auto g = load_graph(host_path);
                auto rho = parse_fraction(rho_text);
                auto d = parse_fraction(d_text);
                auto result = is_locally_dense(g, rho, d, exact ? DensenessMode::exact : DensenessMode::sampled,
                    default_denseness_guard, samples, seed);
                if (global.json) {
                    json report{{"command", "localdense"}, {"rho", rational_json(rho)}, {"d", rational_json(d)},
                        {"dense", result.dense}, {"exhaustive", result.exhaustive},
                        {"subset_size", result.subset_size}, {"subsets_checked", result.subsets_checked},
                        {"witness", nullptr}};
                    if (result.witness)
                        report["witness"] = *result.witness;
                    out << report.dump(2) << "\n";
                }
                else if (result.dense)
                    out << (result.exhaustive ? "dense" : "no violation found") << " (" << result.subsets_checked
                        << " subsets of size " << result.subset_size << ")\n";
                else
                    out << "not dense: subset {" << edge_to_string(*result.witness) << "}\n";
                return result.dense ? exit_success : exit_negative;
            }

            if (*avoid) {
                auto host = load_graph(host_path);
                auto pattern = load_graph(pattern_path);
                auto lists = parse_lists_file(lists_path, host);
                auto sigma = sigma_for(sigma_text, pattern);
                auto result = find_avoiding_colouring({host, pattern, sigma, lists}, options);
                bool found = result.outcome == Outcome::avoiding_colouring_found;
                if (found && ! out_path.empty())
                    write_file(out_path, serialise_colouring(host, *result.certificate));
                if (global.json) {
                    json report{{"command", "avoid"}, {"outcome", to_string(result.outcome)}, {"sigma", sigma.order()},
                        {"statistics", statistics_json(result.statistics)}, {"certificate", nullptr}};
                    if (found)
                        report["certificate"] = colouring_json(host, *result.certificate);
                    out << report.dump(2) << "\n";
                }
                else {
                    out << to_string(result.outcome) << "\n";
                    if (found && out_path.empty())
                        out << serialise_colouring(host, *result.certificate);
                }
                return found ? exit_success : exit_negative;
            }

            if (*canarrow) {
                auto host = load_graph(host_path);
                auto pattern = load_graph(pattern_path);
                auto report = lists_path.empty()
                    ? decide_canarrow_unrestricted(host, pattern, options)
                    : decide_canarrow_lists(host, pattern, parse_lists_file(lists_path, host), options);
                if (global.json) {
                    json j{{"command", "canarrow"}, {"holds", report.holds}, {"lists", ! lists_path.empty()},
                        {"orderings_checked", report.orderings_checked},
                        {"statistics", statistics_json(report.statistics)}, {"avoided_ordering", nullptr},
                        {"certificate", nullptr}};
                    if (report.avoided_ordering)
                        j["avoided_ordering"] = report.avoided_ordering->order();
                    if (report.certificate)
                        j["certificate"] = colouring_json(host, *report.certificate);
                    out << j.dump(2) << "\n";
                }
                else {
                    out << (report.holds ? "true" : "false") << "\n";
                    if (report.avoided_ordering)
                        out << "ordering " << ordering_to_string(*report.avoided_ordering) << " avoided by\n"
                            << serialise_colouring(host, *report.certificate);
                }
                return report.holds ? exit_success : exit_negative;
            }

            if (*crnumber) {
                auto pattern = load_graph(pattern_path);
                auto result = canonical_ramsey_number(pattern, n_max, options);
                if (global.json) {
                    json j{{"command", "crnumber"}, {"n_max", n_max}, {"value", nullptr},
                        {"lower_bound", result.lower_bound}, {"guard_exceeded", result.guard_exceeded}};
                    if (result.value)
                        j["value"] = *result.value;
                    out << j.dump(2) << "\n";
                }
                else if (result.value)
                    out << *result.value << "\n";
                else
                    out << "unknown, at least " << result.lower_bound
                        << (result.guard_exceeded ? " (guard exceeded)" : "") << "\n";
                if (result.guard_exceeded)
                    return exit_guard;
                return result.value ? exit_success : exit_negative;
            }

            if (*threshold) {
                std::ifstream in{config_path};
                if (! in)
                    throw DomainError("cannot open '" + config_path + "'");
                std::stringstream text;
                text << in.rdbuf();
                auto config = parse_experiment_config(text.str(),
                    std::filesystem::path(config_path).parent_path().string());
                config.seed = seed;
                if (app.get_option("--workers")->count())
                    config.workers = global.workers;
                if (app.get_option("--guard-nodes")->count())
                    config.solver.max_nodes = global.guard_nodes;
                if (app.get_option("--guard-copies")->count())
                    config.solver.max_embeddings = global.guard_copies;

                auto curve = threshold_sweep(config);
                std::ofstream csv{out_path};
                if (! csv)
                    throw DomainError("cannot write '" + out_path + "'");
                write_curve_csv(csv, curve);

                if (global.json) {
                    auto points = json::array();
                    for (auto & p : curve.points)
                        points.push_back({{"p", p.p}, {"ratio_to_scale", p.ratio_to_scale}, {"estimate", p.estimate},
                            {"ci_lo", p.ci_lo}, {"ci_hi", p.ci_hi}, {"trials", p.trials},
                            {"successes", p.successes}, {"failures", p.failures},
                            {"guard_exceeded", p.guard_exceeded}, {"seconds", p.seconds}});
                    out << json{{"command", "threshold"}, {"scale", curve.scale},
                               {"exponent", rational_json(curve.exponent)}, {"unreliable", curve.unreliable},
                               {"points", points}}
                               .dump(2)
                        << "\n";
                }
                else {
                    out << "p             ratio   estimate  ci_lo     ci_hi     guarded\n";
                    char line[128];
                    for (auto & p : curve.points) {
                        std::snprintf(line, sizeof(line), "%-12.6g  %6.3f  %8.4f  %8.4f  %8.4f  %llu\n", p.p,
                            p.ratio_to_scale, p.estimate, p.ci_lo, p.ci_hi,
                            static_cast<unsigned long long>(p.guard_exceeded));
                        out << line;
                    }
                    if (curve.unreliable)
                        out << "warning: more than 5% of trials hit a guard\n";
                }
                return exit_success;
            }
        }
        catch (const GuardExceeded & e) {
            err << "canram: " << e.what() << "\n";
            return exit_guard;
        }
        catch (const std::exception & e) {
            err << "canram: " << e.what() << "\n";
            return exit_usage;
        }
        return exit_usage;
    }
}
