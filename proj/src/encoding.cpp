#include <canram/density.hpp>
#include <canram/encoding.hpp>
#include <canram/errors.hpp>

#include <boost/container_hash/hash.hpp>

#include <algorithm>
#include <cmath>
#include <random>
#include <unordered_map>

namespace canram
{
    EncodingHypergraph::EncodingHypergraph(KGraph base, ListAssignment lists, unsigned pattern_edges,
        std::vector<std::vector<EncodingVertex>> hyperedges) :
        _base(std::move(base)),
        _lists(std::move(lists)),
        _pattern_edges(pattern_edges),
        _hyperedges(std::move(hyperedges))
    {
        _lists.check_total(_base);
    }

    auto EncodingHypergraph::induced_edge_count(std::span<const EncodingVertex> w) const -> std::size_t
    {
        std::size_t count = 0;
        for (auto & h : _hyperedges)
            if (std::includes(w.begin(), w.end(), h.begin(), h.end()))
                ++count;
        return count;
    }

    auto build_encoding(const KGraph & pattern, const Ordering & sigma, const KGraph & base,
        const ListAssignment & lists, std::uint64_t max_work) -> EncodingHypergraph
    {
        if (pattern.uniformity() != base.uniformity())
            throw UniformityMismatch(pattern.uniformity(), base.uniformity());
        lists.check_total(base);

        auto m = pattern.edge_count();
        auto r = lists.list_length();
        if (r == 0)
            throw DomainError("lists must be non-empty");

        std::uint64_t assignments = 1;
        for (std::size_t i = 0; i < m; ++i) {
            assignments *= r;
            if (assignments > max_work)
                throw GuardExceeded("too many list index assignments per copy", max_work, assignments);
        }

        CanonicalPartitions partitions{pattern, sigma};
        CopyIndex index{pattern, base, max_work};
        if (index.copy_count() * assignments > max_work)
            throw GuardExceeded("encoding too large", max_work, index.copy_count() * assignments);
        auto constraints = index.constraints(partitions, CopyMode::any_embedding);

        std::vector<std::vector<EncodingVertex>> hyperedges;
        std::vector<unsigned> slots(m);
        std::vector<Colour> colours(m);
        for (auto & c : constraints) {
            std::fill(slots.begin(), slots.end(), 0);
            for (std::uint64_t a = 0; a < assignments; ++a) {
                for (std::size_t p = 0; p < m; ++p)
                    colours[p] = lists.list(c.edges[p])[slots[p]];
                if (c.canonical(colours)) {
                    std::vector<EncodingVertex> h(m);
                    for (std::size_t p = 0; p < m; ++p)
                        h[p] = c.edges[p] * r + slots[p];
                    hyperedges.push_back(std::move(h));
                }
                for (std::size_t p = m; p-- > 0;) {
                    if (++slots[p] < r)
                        break;
                    slots[p] = 0;
                }
            }
        }
        std::sort(hyperedges.begin(), hyperedges.end());
        return EncodingHypergraph{base, lists, unsigned(m), std::move(hyperedges)};
    }

    auto graph_shadow(const EncodingHypergraph & encoding, std::span<const EncodingVertex> w) -> KGraph
    {
        std::vector<EdgeIndex> edges;
        for (auto v : w) {
            if (v >= encoding.vertex_count())
                throw DomainError("vertex " + std::to_string(v) + " is not a vertex of the encoding");
            edges.push_back(encoding.edge_of(v));
        }
        std::sort(edges.begin(), edges.end());
        edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
        return encoding.base().edge_subgraph(edges);
    }

    auto colouring_to_vertexset(const EncodingHypergraph & encoding, const KGraph & g, const Colouring & chi)
        -> std::vector<EncodingVertex>
    {
        chi.check_total(g);
        std::vector<EncodingVertex> result;
        for (EdgeIndex i = 0; i < g.edge_count(); ++i) {
            auto e = encoding.base().find_edge(g.edge(i));
            if (! e)
                throw DomainError("edge {" + edge_to_string(g.edge(i)) + "} is not in the base graph");
            auto & list = encoding.lists().list(*e);
            bool matched = false;
            for (unsigned s = 0; s < list.size(); ++s)
                if (list[s] == chi[i]) {
                    result.push_back(encoding.vertex(*e, s));
                    matched = true;
                }
            if (! matched)
                throw IncompatibleColouring(edge_to_string(g.edge(i)), chi[i]);
        }
        std::sort(result.begin(), result.end());
        return result;
    }

    auto is_independent(const EncodingHypergraph & encoding, std::span<const EncodingVertex> w) -> bool
    {
        return encoding.induced_edge_count(w) == 0;
    }

    namespace
    {
        auto binomial(std::uint64_t n, std::uint64_t k) -> std::uint64_t
        {
            if (k > n)
                return 0;
            std::uint64_t result = 1;
            for (std::uint64_t i = 1; i <= k; ++i)
                result = result * (n - k + i) / i;
            return result;
        }
    }

    auto degree_profile(const EncodingHypergraph & encoding, const KGraph & pattern, std::uint64_t max_work)
        -> DegreeProfile
    {
        auto m = encoding.uniformity();
        if (pattern.edge_count() != m)
            throw DomainError("pattern does not match the encoding's uniformity");

        std::uint64_t work = 0;
        for (unsigned j = 1; j <= m; ++j)
            work += binomial(m, j) * encoding.edge_count();
        if (work > max_work)
            throw GuardExceeded("degree profile too large", max_work, work);

        auto density = max_k_density(pattern);
        auto m_k = density.value.convert_to<double>();
        double n = encoding.base().vertex_count();
        double scale = std::pow(double(encoding.list_length()), double(m)) *
            std::pow(n, double(pattern.vertex_count()) - double(pattern.uniformity()));

        // best <= r^m n^(a/b) with a/b = (v - k) - (j - 1) / m_k, compared in integers.
        auto within_exact = [&](std::uint64_t best, unsigned j) {
            namespace mp = boost::multiprecision;
            mp::cpp_int p = mp::numerator(density.value), q = mp::denominator(density.value);
            mp::cpp_int a = mp::cpp_int(pattern.vertex_count() - pattern.uniformity()) * p - mp::cpp_int(j - 1) * q;
            auto b = p.convert_to<unsigned>();
            mp::cpp_int lhs = mp::pow(mp::cpp_int(best), b);
            mp::cpp_int rhs = mp::pow(mp::cpp_int(encoding.list_length()), m * b);
            mp::cpp_int base(encoding.base().vertex_count());
            if (a >= 0)
                rhs *= mp::pow(base, a.convert_to<unsigned>());
            else
                lhs *= mp::pow(base, (-a).convert_to<unsigned>());
            return lhs <= rhs;
        };

        DegreeProfile profile;
        std::vector<unsigned> choose;
        std::vector<EncodingVertex> subset;
        for (unsigned j = 1; j <= m; ++j) {
            std::uint64_t best = 0;
            if (j == 1) {
                std::vector<std::uint64_t> degree(encoding.vertex_count(), 0);
                for (auto & h : encoding.hyperedges())
                    for (auto v : h)
                        best = std::max(best, ++degree[v]);
            }
            else if (j == m) {
                best = encoding.edge_count() ? 1 : 0;
            }
            else {
                std::unordered_map<std::vector<EncodingVertex>, std::uint64_t, boost::hash<std::vector<EncodingVertex>>>
                    counts;
                for (auto & h : encoding.hyperedges()) {
                    choose.resize(j);
                    for (unsigned i = 0; i < j; ++i)
                        choose[i] = i;
                    while (true) {
                        subset.resize(j);
                        for (unsigned i = 0; i < j; ++i)
                            subset[i] = h[choose[i]];
                        best = std::max(best, ++counts[subset]);
                        int i = int(j) - 1;
                        while (i >= 0 && choose[i] == m - j + unsigned(i))
                            --i;
                        if (i < 0)
                            break;
                        ++choose[i];
                        for (unsigned t = unsigned(i) + 1; t < j; ++t)
                            choose[t] = choose[t - 1] + 1;
                    }
                }
            }
            double bound = scale * std::pow(n, -double(j - 1) / m_k);
            profile.levels.push_back({j, best, bound, within_exact(best, j)});
        }
        return profile;
    }

    auto container_degree_check(const EncodingHypergraph & encoding, const DegreeProfile & profile, double d0,
        double q) -> ContainerDegreeCheck
    {
        ContainerDegreeCheck check;
        double average = encoding.vertex_count() ? double(encoding.edge_count()) / double(encoding.vertex_count()) : 0.0;
        for (auto & level : profile.levels) {
            double bound = d0 * std::pow(q, double(level.j - 1)) * average;
            bool ok = double(level.max_degree) <= bound;
            check.bounds.push_back(bound);
            check.within.push_back(ok);
            check.holds = check.holds && ok;
        }
        return check;
    }

    auto count_canonical_copies(const KGraph & host, const Colouring & chi, const KGraph & pattern,
        const Ordering & sigma, CopyMode mode) -> std::uint64_t
    {
        if (pattern.uniformity() != host.uniformity())
            throw UniformityMismatch(pattern.uniformity(), host.uniformity());
        return count_distinct_canonical_copies(pattern, sigma, host, chi, mode);
    }

    auto check_abundance(const EncodingHypergraph & encoding, double gamma, double epsilon, AbundanceMode mode,
        std::uint64_t samples, std::uint64_t seed) -> AbundanceReport
    {
        if (! (gamma >= 0.0 && gamma <= 1.0) || ! (epsilon > 0.0 && epsilon <= 1.0))
            throw DomainError("abundance needs 0 <= gamma <= 1 and 0 < epsilon <= 1");

        auto base_edges = encoding.base().edge_count();
        auto r = encoding.list_length();
        auto v = encoding.vertex_count();
        double size_needed = epsilon * double(v);
        double density_needed = epsilon * double(encoding.edge_count());
        auto shadow_needed = std::size_t(std::ceil((1.0 - gamma) * double(base_edges) - 1e-9));

        AbundanceReport report;
        report.exhaustive = mode == AbundanceMode::exhaustive;

        auto test = [&](const std::vector<EncodingVertex> & w) {
            ++report.sets_tested;
            if (report.dense && double(encoding.induced_edge_count(w)) < density_needed) {
                report.dense = false;
                report.density_witness = w;
            }
        };

        // The smallest member of the family settles the size condition.
        if (double(shadow_needed) < size_needed) {
            report.minimum_size = false;
            std::vector<EncodingVertex> w;
            for (EdgeIndex e = 0; e < shadow_needed; ++e)
                w.push_back(encoding.vertex(e, 0));
            report.size_witness = std::move(w);
        }

        if (mode == AbundanceMode::exhaustive) {
            if (v > max_exhaustive_abundance_vertices)
                throw GuardExceeded("exhaustive abundance check", max_exhaustive_abundance_vertices, v);
            std::vector<std::uint32_t> hyper_masks;
            for (auto & h : encoding.hyperedges()) {
                std::uint32_t mask = 0;
                for (auto x : h)
                    mask |= std::uint32_t{1} << x;
                hyper_masks.push_back(mask);
            }
            std::uint32_t slot_mask = (std::uint32_t{1} << r) - 1;
            for (std::uint64_t w = 0; w < (std::uint64_t{1} << v); ++w) {
                std::size_t shadow = 0;
                for (std::size_t e = 0; e < base_edges; ++e)
                    if ((w >> (e * r)) & slot_mask)
                        ++shadow;
                if (shadow < shadow_needed)
                    continue;
                ++report.sets_tested;
                std::size_t induced = 0;
                for (auto mask : hyper_masks)
                    if ((w & mask) == mask)
                        ++induced;
                if (report.dense && double(induced) < density_needed) {
                    report.dense = false;
                    std::vector<EncodingVertex> witness;
                    for (EncodingVertex x = 0; x < v; ++x)
                        if ((w >> x) & 1)
                            witness.push_back(x);
                    report.density_witness = std::move(witness);
                }
            }
            return report;
        }

        // Each single-slot family {(e, s) : e}.
        for (unsigned s = 0; s < r; ++s) {
            std::vector<EncodingVertex> w;
            for (EdgeIndex e = 0; e < base_edges; ++e)
                w.push_back(encoding.vertex(e, s));
            test(w);
        }

        std::mt19937_64 rng{seed};
        std::vector<EdgeIndex> order(base_edges);
        for (EdgeIndex e = 0; e < base_edges; ++e)
            order[e] = e;
        for (std::uint64_t t = 0; t < samples; ++t) {
            std::shuffle(order.begin(), order.end(), rng);
            std::vector<EncodingVertex> w;
            for (std::size_t i = 0; i < shadow_needed; ++i)
                w.push_back(encoding.vertex(order[i], unsigned(rng() % r)));
            std::sort(w.begin(), w.end());
            test(w);
        }
        return report;
    }
}
