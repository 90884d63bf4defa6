#include <canram/errors.hpp>
#include <canram/locally_dense.hpp>

#include <algorithm>
#include <bit>
#include <numeric>
#include <random>

namespace canram
{
    namespace
    {
        namespace mp = boost::multiprecision;

        using Row = std::vector<std::uint64_t>;

        auto adjacency(const KGraph & g) -> std::vector<Row>
        {
            if (g.uniformity() != 2)
                throw DomainError("local density is defined for graphs (k = 2)");
            auto n = g.vertex_count();
            std::vector<Row> rows(n, Row((n + 63) / 64, 0));
            for (auto & e : g.edges()) {
                rows[e[0]][e[1] / 64] |= std::uint64_t{1} << (e[1] % 64);
                rows[e[1]][e[0] / 64] |= std::uint64_t{1} << (e[0] % 64);
            }
            return rows;
        }

        auto ceil_of(const Rational & q) -> std::uint64_t
        {
            mp::cpp_int num = mp::numerator(q), den = mp::denominator(q);
            mp::cpp_int c = (num + den - 1) / den;
            return c < 0 ? 0 : c.convert_to<std::uint64_t>();
        }

        auto binomial(std::uint64_t n, std::uint64_t k) -> mp::cpp_int
        {
            if (k > n)
                return 0;
            mp::cpp_int result = 1;
            for (std::uint64_t i = 1; i <= k; ++i)
                result = result * (n - k + i) / i;
            return result;
        }

        auto adjacent(const std::vector<Row> & rows, Vertex u, Vertex v) -> bool
        {
            return (rows[u][v / 64] >> (v % 64)) & 1;
        }

        // Depth-first scan of all s-subsets in lexicographic order. A branch is
        // dropped as soon as it already spans enough edges, since adding
        // vertices never removes any.
        class SubsetScan
        {
        public:
            SubsetScan(const std::vector<Row> & rows, std::size_t s, std::uint64_t need) :
                _rows(rows), _s(s), _need(need)
            {
            }

            auto run(DensenessResult & result) -> void
            {
                _result = &result;
                descend(0, 0);
            }

        private:
            auto descend(Vertex from, std::uint64_t edges) -> bool
            {
                auto n = Vertex(_rows.size());
                if (edges >= _need) {
                    _result->subsets_checked += binomial(n - from, _s - _chosen.size()).convert_to<std::uint64_t>();
                    return false;
                }
                if (_chosen.size() == _s) {
                    ++_result->subsets_checked;
                    _result->dense = false;
                    _result->witness = _chosen;
                    return true;
                }
                for (Vertex v = from; v + (_s - _chosen.size()) <= n; ++v) {
                    std::uint64_t added = 0;
                    for (auto u : _chosen)
                        added += adjacent(_rows, u, v);
                    _chosen.push_back(v);
                    bool stop = descend(v + 1, edges + added);
                    _chosen.pop_back();
                    if (stop)
                        return true;
                }
                return false;
            }

            const std::vector<Row> & _rows;
            std::size_t _s;
            std::uint64_t _need;
            std::vector<Vertex> _chosen;
            DensenessResult * _result = nullptr;
        };
    }

    auto is_locally_dense(const KGraph & g, const Rational & rho, const Rational & d, DensenessMode mode,
        std::uint64_t max_subsets, std::uint64_t samples, std::uint64_t seed) -> DensenessResult
    {
        if (rho <= 0 || rho > 1 || d < 0 || d > 1)
            throw DomainError("denseness needs 0 < rho <= 1 and 0 <= d <= 1");
        auto rows = adjacency(g);
        auto n = g.vertex_count();

        DensenessResult result;
        result.subset_size = std::size_t(ceil_of(rho * n));
        auto s = result.subset_size;
        auto need = ceil_of(d * Rational(binomial(s, 2)));

        if (mode == DensenessMode::exact) {
            auto total = binomial(n, s);
            if (total > max_subsets)
                throw GuardExceeded("exact denseness check", max_subsets,
                    total > std::numeric_limits<std::uint64_t>::max() ? std::numeric_limits<std::uint64_t>::max()
                                                                       : total.convert_to<std::uint64_t>());
            result.exhaustive = true;
            SubsetScan{rows, s, need}.run(result);
            return result;
        }

        std::mt19937_64 rng{seed};
        std::vector<Vertex> vertices(n);
        std::iota(vertices.begin(), vertices.end(), Vertex{0});
        for (std::uint64_t t = 0; t < samples; ++t) {
            // Partial Fisher-Yates for the first s entries.
            for (std::size_t i = 0; i < s; ++i)
                std::swap(vertices[i], vertices[i + rng() % (n - i)]);
            std::uint64_t edges = 0;
            for (std::size_t i = 0; i < s; ++i)
                for (std::size_t j = i + 1; j < s; ++j)
                    edges += adjacent(rows, vertices[i], vertices[j]);
            ++result.subsets_checked;
            if (edges < need) {
                result.dense = false;
                std::vector<Vertex> witness(vertices.begin(), vertices.begin() + std::ptrdiff_t(s));
                std::sort(witness.begin(), witness.end());
                result.witness = std::move(witness);
                break;
            }
        }
        return result;
    }

    namespace
    {
        auto extend_cliques(const std::vector<Row> & rows, const Row & candidates, unsigned missing) -> std::uint64_t
        {
            if (missing == 1) {
                std::uint64_t count = 0;
                for (auto word : candidates)
                    count += std::popcount(word);
                return count;
            }
            std::uint64_t total = 0;
            Row next(candidates.size());
            for (std::size_t w = 0; w < candidates.size(); ++w)
                for (auto bits = candidates[w]; bits; bits &= bits - 1) {
                    auto v = Vertex(w * 64 + std::countr_zero(bits));
                    // Only extend with later vertices, so each clique is counted once.
                    bool any = false;
                    for (std::size_t x = 0; x < candidates.size(); ++x) {
                        auto mask = candidates[x] & rows[v][x];
                        if (x < v / 64)
                            mask = 0;
                        else if (x == v / 64)
                            mask &= (v % 64 == 63) ? 0 : (~std::uint64_t{0} << (v % 64 + 1));
                        next[x] = mask;
                        any = any || mask;
                    }
                    if (any)
                        total += extend_cliques(rows, next, missing - 1);
                }
            return total;
        }
    }

    auto count_cliques(const KGraph & g, unsigned order) -> std::uint64_t
    {
        if (order < 2)
            throw DomainError("clique order must be at least 2");
        auto rows = adjacency(g);
        if (order == 2)
            return g.edge_count();
        Row all(rows.empty() ? 0 : rows.front().size(), 0);
        for (Vertex v = 0; v < g.vertex_count(); ++v)
            all[v / 64] |= std::uint64_t{1} << (v % 64);
        return extend_cliques(rows, all, order);
    }

    auto resilience_bound(const Rational & d, const Rational & gamma, const Rational & rho)
        -> ResilienceBound<Rational>
    {
        if (rho <= 0 || gamma < 0)
            throw DomainError("resilience needs rho > 0 and gamma >= 0");
        ResilienceBound<Rational> result;
        result.d_prime = d - 2 * gamma / (rho * rho);
        result.corollary = gamma <= rho * rho * d / 4;
        result.negative = result.d_prime < 0;
        return result;
    }

    auto resilience_bound(double d, double gamma, double rho) -> ResilienceBound<double>
    {
        if (! (rho > 0.0) || ! (gamma >= 0.0))
            throw DomainError("resilience needs rho > 0 and gamma >= 0");
        ResilienceBound<double> result;
        result.d_prime = d - 2.0 * gamma / (rho * rho);
        result.corollary = gamma <= rho * rho * d / 4.0;
        result.negative = result.d_prime < 0.0;
        return result;
    }

    auto ResilienceReport::all_exact() const -> bool
    {
        return std::all_of(trials.begin(), trials.end(), [](auto & t) { return t.exact_holds; });
    }

    auto ResilienceReport::all_asymptotic() const -> bool
    {
        return std::all_of(trials.begin(), trials.end(), [](auto & t) { return t.asymptotic_holds; });
    }

    auto check_resilience(const KGraph & g, const Rational & rho, const Rational & d, const Rational & gamma,
        unsigned trials, std::uint64_t seed, std::uint64_t max_subsets) -> ResilienceReport
    {
        if (! is_locally_dense(g, rho, d, DensenessMode::exact, max_subsets).dense)
            throw DomainError("the graph is not dense for the given rho and d");

        auto clamp = [](Rational x) { return x < 0 ? Rational(0) : x; };
        auto s = ceil_of(rho * g.vertex_count());
        auto pairs = binomial(s, 2);

        ResilienceReport report;
        report.d_asymptotic = resilience_bound(d, gamma, rho).d_prime;
        report.d_exact = pairs == 0 ? d : d - gamma * Rational(g.edge_count()) / Rational(pairs);

        Rational budget = gamma * Rational(g.edge_count());
        auto removed = mp::cpp_int(mp::numerator(budget) / mp::denominator(budget)).convert_to<std::size_t>();
        std::mt19937_64 rng{seed};
        std::vector<EdgeIndex> order(g.edge_count());
        std::iota(order.begin(), order.end(), EdgeIndex{0});
        for (unsigned t = 0; t < trials; ++t) {
            std::shuffle(order.begin(), order.end(), rng);
            std::vector<EdgeIndex> keep(order.begin() + std::ptrdiff_t(std::min(removed, order.size())), order.end());
            std::sort(keep.begin(), keep.end());
            auto sub = g.edge_subgraph(keep);

            ResilienceTrial trial;
            trial.edges_removed = g.edge_count() - keep.size();
            trial.asymptotic_holds =
                is_locally_dense(sub, rho, clamp(report.d_asymptotic), DensenessMode::exact, max_subsets).dense;
            trial.exact_holds =
                is_locally_dense(sub, rho, clamp(report.d_exact), DensenessMode::exact, max_subsets).dense;
            report.trials.push_back(trial);
        }
        return report;
    }
}
