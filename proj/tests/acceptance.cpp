// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails.

#include "oracles.hpp"

#include <canram/cli.hpp>
#include <canram/density.hpp>
#include <canram/encoding.hpp>
#include <canram/graphs.hpp>
#include <canram/locally_dense.hpp>
#include <canram/patterns.hpp>
#include <canram/solver.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>

#include <unistd.h>

using namespace canram;
namespace fs = std::filesystem;

namespace
{
    struct Verdict
    {
        bool pass;
        std::string detail;
    };

    using Clock = std::chrono::steady_clock;

    auto seconds_since(Clock::time_point start) -> double
    {
        return std::chrono::duration<double>(Clock::now() - start).count();
    }

    auto format(const char * fmt, auto... args) -> std::string
    {
        char buffer[512];
        std::snprintf(buffer, sizeof(buffer), fmt, args...);
        return buffer;
    }

    auto density_exactness() -> Verdict
    {
        auto start = Clock::now();
        int wrong = 0;
        for (Vertex m = 3; m <= 7; ++m)
            if (max_k_density(complete_graph(m, 2)).value != Rational(m + 1, 2))
                ++wrong;
        for (Vertex k = 2; k <= 5; ++k)
            if (max_k_density(cycle_graph(2 * k)).value != Rational(2 * k - 1, 2 * k - 2))
                ++wrong;
        auto t = seconds_since(start);
        return {wrong == 0 && t < 1.0, format("%d mismatches over 9 graphs, %.3f s", wrong, t)};
    }

    auto projection_identities() -> Verdict
    {
        std::mt19937_64 rng{2};
        int wrong = 0;
        for (int i = 0; i < 1000; ++i) {
            unsigned k = 2 + i % 3;
            Vertex n = k + rng() % 8;
            Ordering sigma{oracle::random_order(rng, n)};
            auto shuffled = oracle::random_order(rng, n);
            std::vector<Vertex> t(shuffled.begin(), shuffled.begin() + k);
            std::sort(t.begin(), t.end());
            if (! project(t, 0, sigma).empty())
                ++wrong;
            if (project(t, (PositionSet{1} << k) - 1, sigma) != t)
                ++wrong;
        }
        return {wrong == 0, format("%d mismatches over 1000 (T, sigma) pairs", wrong)};
    }

    // Labelled graphs on 0..v-1 without isolated vertices under the natural
    // order cover every ordered graph up to relabelling.
    auto classifier_equivalence() -> Verdict
    {
        auto start = Clock::now();
        std::uint64_t graphs = 0, colourings = 0, wrong = 0;
        for (Vertex v = 2; v <= 10; ++v) {
            auto pairs = complete_graph(v, 2).edges();
            auto order = Ordering::natural(v);
            std::vector<Vertex> natural(v);
            std::iota(natural.begin(), natural.end(), Vertex{0});
            for (std::size_t e = 1; e <= 5 && e <= pairs.size(); ++e) {
                std::vector<std::size_t> pick(e);
                std::iota(pick.begin(), pick.end(), std::size_t{0});
                while (true) {
                    std::uint32_t covered = 0;
                    for (auto i : pick)
                        covered |= (1u << pairs[i][0]) | (1u << pairs[i][1]);
                    if (covered == (1u << v) - 1) {
                        std::vector<Edge> edges;
                        for (auto i : pick)
                            edges.push_back(pairs[i]);
                        KGraph h{2, v, edges};
                        ++graphs;
                        for (auto & rgs : oracle::set_partitions(e)) {
                            if (*std::max_element(rgs.begin(), rgs.end()) >= 3)
                                continue;
                            ++colourings;
                            bool got = classify_pattern(h, order, Colouring{rgs}).contains(position_set({1}));
                            if (got != oracle::lexicographic(h, natural, rgs))
                                ++wrong;
                        }
                    }
                    std::size_t i = e;
                    while (i > 0 && pick[i - 1] == pairs.size() - e + i - 1)
                        --i;
                    if (i == 0)
                        break;
                    ++pick[i - 1];
                    for (auto j = i; j < e; ++j)
                        pick[j] = pick[j - 1] + 1;
                }
            }
        }
        return {wrong == 0,
            format("%llu ordered graphs, %llu colourings up to relabelling, %llu disagreements, %.1f s",
                (unsigned long long)graphs, (unsigned long long)colourings, (unsigned long long)wrong,
                seconds_since(start))};
    }

    struct EncodingOutcome
    {
        Verdict degree;
        Verdict vertex_count;
    };

    auto encoding_on_complete_hosts() -> EncodingOutcome
    {
        auto start = Clock::now();
        std::mt19937_64 rng{4};
        std::vector<std::pair<std::string, KGraph>> patterns{
            {"K3", complete_graph(3, 2)}, {"C4", cycle_graph(4)}, {"P4", path_graph(4)}};
        int instances = 0, levels = 0, violations = 0, count_mismatches = 0;
        double worst_ratio = 0;
        std::string worst;
        for (Vertex n = 6; n <= 10; ++n)
            for (auto & [name, h] : patterns) {
                double m2 = max_k_density(h).value.convert_to<double>();
                for (unsigned r = 1; r <= 3; ++r) {
                    auto base = complete_graph(n, 2);
                    ListAssignment lists{r, oracle::random_lists(rng, base.edge_count(), r, 3)};
                    Ordering sigma{oracle::random_order(rng, h.vertex_count())};
                    auto enc = build_encoding(h, sigma, base, lists);
                    ++instances;
                    if (enc.vertex_count() != std::size_t(r) * n * (n - 1) / 2)
                        ++count_mismatches;
                    for (auto & level : degree_profile(enc, h).levels) {
                        double bound = std::pow(double(r), double(h.edge_count())) *
                            std::pow(std::pow(double(n), -1.0 / m2), double(level.j - 1)) *
                            std::pow(double(n), double(h.vertex_count()) - 2.0);
                        ++levels;
                        if (double(level.max_degree) > bound * (1.0 + 1e-9) || ! level.within_bound)
                            ++violations;
                        if (double(level.max_degree) / bound > worst_ratio) {
                            worst_ratio = double(level.max_degree) / bound;
                            worst = format("%s n=%u r=%u j=%u: %llu > %.2f", name.c_str(), unsigned(n), r, level.j,
                                (unsigned long long)level.max_degree, bound);
                        }
                    }
                }
            }
        auto t = seconds_since(start);
        return {{violations == 0 && t < 60.0,
                    format("%d instances, %d degree levels, %d violations, worst ratio %.3f (%s), %.1f s", instances,
                        levels, violations, worst_ratio, worst.c_str(), t)},
            {count_mismatches == 0, format("%d instances, %d vertex count mismatches", instances, count_mismatches)}};
    }

    auto independence_transfer() -> Verdict
    {
        std::mt19937_64 rng{6};
        std::vector<KGraph> patterns{complete_graph(3, 2), path_graph(3), cycle_graph(4), path_graph(4)};
        int wrong = 0, independent = 0;
        for (int i = 0; i < 200; ++i) {
            auto & h = patterns[i % patterns.size()];
            auto base = oracle::random_graph(rng, 2, 5 + rng() % 2, 0.7);
            unsigned r = 1 + rng() % 2;
            ListAssignment lists{r, oracle::random_lists(rng, base.edge_count(), r, 3)};
            std::vector<Vertex> order = oracle::random_order(rng, h.vertex_count());
            auto enc = build_encoding(h, Ordering{order}, base, lists);

            std::vector<EdgeIndex> all(base.edge_count());
            std::iota(all.begin(), all.end(), EdgeIndex{0});
            std::shuffle(all.begin(), all.end(), rng);
            all.resize(std::min<std::size_t>(all.size(), rng() % 8));
            std::sort(all.begin(), all.end());
            auto g = base.edge_subgraph(all);
            std::vector<Colour> chi;
            for (auto e : all)
                chi.push_back(lists.list(e)[rng() % r]);

            bool is_free = ! oracle::CopyChecker(h, order, g).has_canonical_copy(chi);
            bool got = is_independent(enc, colouring_to_vertexset(enc, g, Colouring{chi}));
            independent += got;
            if (got != is_free)
                ++wrong;
        }
        return {wrong == 0, format("200 instances (%d independent), %d disagreements", independent, wrong)};
    }

    auto solver_against_oracle() -> Verdict
    {
        auto start = Clock::now();
        std::mt19937_64 rng{7};
        std::vector<KGraph> patterns{complete_graph(3, 2), path_graph(3), cycle_graph(4)};
        int wrong = 0, found = 0, bad_certificates = 0;
        for (int i = 0; i < 200; ++i) {
            auto & h = patterns[i % patterns.size()];
            auto host = oracle::random_graph(rng, 2, 3 + rng() % 3, 0.4 + 0.6 * double(rng() % 100) / 100.0);
            unsigned r = 1 + rng() % 3;
            auto lists = oracle::random_lists(rng, host.edge_count(), r, 2 + rng() % 3);
            auto order = oracle::random_order(rng, h.vertex_count());
            AvoidanceInstance instance{host, h, Ordering{order}, ListAssignment{r, lists}};
            auto result = find_avoiding_colouring(instance);
            bool expected = oracle::avoiding_colouring(h, order, host, lists).has_value();
            bool got = result.outcome == Outcome::avoiding_colouring_found;
            found += expected;
            if (got != expected)
                ++wrong;
            if (got && (! instance.lists.compatible(*result.certificate) ||
                           oracle::CopyChecker(h, order, host).has_canonical_copy(result.certificate->values())))
                ++bad_certificates;
        }
        auto t = seconds_since(start);
        return {wrong == 0 && bad_certificates == 0 && t < 120.0,
            format("200 instances (%d avoidable), %d disagreements, %d bad certificates, %.1f s", found, wrong,
                bad_certificates, t)};
    }

    auto canonical_ramsey_baseline() -> Verdict
    {
        auto start = Clock::now();
        auto k3 = complete_graph(3, 2);
        auto partitions = oracle::set_partitions(3);
        bool oracle_holds = partitions.size() == 5 && oracle::canarrow_unrestricted(k3, k3);
        bool holds = decide_canarrow_unrestricted(k3, k3).holds;
        auto number = canonical_ramsey_number(k3, 4);
        auto t = seconds_since(start);
        bool ok = oracle_holds && holds && number.value == Vertex{3} && t < 1.0;
        return {ok, format("%zu partitions, oracle %s, solver %s, number %s, %.3f s", partitions.size(),
                        oracle_holds ? "true" : "false", holds ? "true" : "false",
                        number.value ? std::to_string(*number.value).c_str() : "unknown", t)};
    }

    auto resilience_formula() -> Verdict
    {
        std::mt19937_64 rng{9};
        int wrong = 0, fired = 0;
        for (int i = 0; i < 100; ++i) {
            std::int64_t a = rng() % 1000, b = 1 + rng() % 1000, f = 1 + rng() % 1000, g = f + rng() % 1000;
            std::int64_t c, e;
            if (i % 3 == 0) {
                // gamma = rho^2 d / 4 exactly
                c = f * f * a;
                e = 4 * g * g * b;
            }
            else {
                c = rng() % 1000;
                e = 1 + rng() % 1000;
            }
            Rational d{a, b}, gamma{c, e}, rho{f, g};
            auto bound = resilience_bound(d, gamma, rho);
            using boost::multiprecision::cpp_int;
            cpp_int num = cpp_int(a) * e * f * f - cpp_int(2) * c * g * g * b;
            cpp_int den = cpp_int(b) * e * f * f;
            if (bound.d_prime != Rational(num, den))
                ++wrong;
            bool corollary = cpp_int(4) * c * g * g * b <= cpp_int(f) * f * a * e;
            fired += corollary;
            if (bound.corollary != corollary)
                ++wrong;
        }
        return {wrong == 0, format("100 triples (%d with the corollary), %d mismatches", fired, wrong)};
    }

    struct CurveRun
    {
        int exit_code;
        std::string csv;
        double seconds;
    };

    auto run_threshold(const std::string & config, const std::string & out) -> CurveRun
    {
        auto start = Clock::now();
        std::ostringstream sink, err;
        auto code = run_command({"canram", "threshold", "--config", config, "--out", out, "--seed", "2024"}, sink, err);
        std::ifstream in{out};
        std::stringstream text;
        text << in.rdbuf();
        return {code, text.str(), seconds_since(start)};
    }

    auto threshold_curve(const CurveRun & run) -> Verdict
    {
        if (run.exit_code != 0)
            return {false, format("threshold command exited with %d", run.exit_code)};
        std::istringstream in{run.csv};
        std::string line;
        std::getline(in, line);
        std::vector<double> estimate, half_width;
        std::uint64_t guarded = 0;
        while (std::getline(in, line)) {
            double p, ratio, est, lo, hi, seconds;
            unsigned long long trials, guard;
            if (std::sscanf(line.c_str(), "%lf,%lf,%lf,%lf,%lf,%llu,%llu,%lf", &p, &ratio, &est, &lo, &hi, &trials,
                    &guard, &seconds) != 8)
                return {false, "unreadable CSV line: " + line};
            estimate.push_back(est);
            half_width.push_back((hi - lo) / 2.0);
            guarded += guard;
        }
        if (estimate.size() != 8)
            return {false, format("expected 8 grid points, got %zu", estimate.size())};
        double rise = estimate.back() - estimate.front();
        int drops = 0;
        for (std::size_t i = 0; i + 1 < estimate.size(); ++i)
            if (estimate[i] - estimate[i + 1] > half_width[i] + half_width[i + 1])
                ++drops;
        std::string curve;
        for (auto e : estimate)
            curve += format("%s%.3f", curve.empty() ? "" : " ", e);
        return {rise >= 0.5 && drops == 0 && run.seconds < 1800.0,
            format("estimates %s, rise %.3f, %d excessive drops, %llu guard hits, %.1f s", curve.c_str(), rise, drops,
                (unsigned long long)guarded, run.seconds)};
    }
}

auto main() -> int
{
    int failures = 0;
    auto report = [&](int number, const char * name, const Verdict & v) {
        std::cout << (v.pass ? "PASS" : "FAIL") << " criterion " << number << " (" << name << "): " << v.detail
                  << std::endl;
        failures += ! v.pass;
    };

    report(1, "density exactness", density_exactness());
    report(2, "projection identities", projection_identities());
    report(3, "classifier vs lexicographic definition", classifier_equivalence());
    auto encoding = encoding_on_complete_hosts();
    report(4, "encoding degree bound", encoding.degree);
    report(5, "encoding vertex count", encoding.vertex_count);
    report(6, "independence transfer", independence_transfer());
    report(7, "solver vs naive enumeration", solver_against_oracle());
    report(8, "canonical Ramsey baseline", canonical_ramsey_baseline());
    report(9, "resilience formula", resilience_formula());

    auto dir = fs::temp_directory_path() / ("canram_acceptance_" + std::to_string(::getpid()));
    fs::create_directories(dir);
    auto config = std::string(CANRAM_SOURCE_DIR) + "/configs/c4_n32.json";
    auto first = run_threshold(config, (dir / "first.csv").string());
    report(10, "threshold curve", threshold_curve(first));
    auto second = run_threshold(config, (dir / "second.csv").string());
    bool identical = first.exit_code == 0 && second.exit_code == 0 && first.csv == second.csv;
    report(11, "determinism",
        {identical, format("second run %s the first CSV byte for byte (%zu bytes)", identical ? "matches" : "differs from",
                        second.csv.size())});
    fs::remove_all(dir);

    std::cout << (failures ? "FAILED " : "ALL PASSED ") << 11 - failures << "/11" << std::endl;
    return failures ? 1 : 0;
}
