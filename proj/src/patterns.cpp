#include <canram/errors.hpp>
#include <canram/patterns.hpp>

#include <boost/container_hash/hash.hpp>

#include <algorithm>
#include <map>
#include <unordered_map>
#include <unordered_set>

namespace canram
{
    auto position_set(std::initializer_list<unsigned> positions) -> PositionSet
    {
        PositionSet s = 0;
        for (auto p : positions) {
            if (p < 1 || p > 32)
                throw DomainError("position " + std::to_string(p) + " out of range");
            s |= PositionSet{1} << (p - 1);
        }
        return s;
    }

    auto positions_of(PositionSet s) -> std::vector<unsigned>
    {
        std::vector<unsigned> result;
        for (unsigned i = 0; s; ++i, s >>= 1)
            if (s & 1)
                result.push_back(i + 1);
        return result;
    }

    namespace
    {
        void check_positions(std::size_t k, PositionSet s)
        {
            if (k < 32 && (s >> k) != 0)
                throw DomainError("position set refers to a position beyond " + std::to_string(k));
        }

        // Writes the projection of `t` (sorted by label) into `out`.
        void project_into(std::span<const Vertex> t, PositionSet s, const Ordering & sigma, std::vector<Vertex> & out)
        {
            out.assign(t.begin(), t.end());
            std::sort(out.begin(), out.end(),
                [&](Vertex a, Vertex b) { return sigma.position_of(a) < sigma.position_of(b); });
            std::size_t kept = 0;
            for (std::size_t i = 0; i < out.size(); ++i)
                if (s & (PositionSet{1} << i))
                    out[kept++] = out[i];
            out.resize(kept);
            std::sort(out.begin(), out.end());
        }
    }

    auto project(std::span<const Vertex> t, PositionSet s, const Ordering & sigma) -> std::vector<Vertex>
    {
        check_positions(t.size(), s);
        for (std::size_t i = 0; i < t.size(); ++i) {
            if (t[i] >= sigma.size())
                throw DomainError("vertex " + std::to_string(t[i]) + " is not ordered by sigma");
            for (std::size_t j = 0; j < i; ++j)
                if (t[i] == t[j])
                    throw DomainError("projected set repeats vertex " + std::to_string(t[i]));
        }
        std::vector<Vertex> out;
        project_into(t, s, sigma, out);
        return out;
    }

    auto PatternWitness::contains(PositionSet s) const -> bool
    {
        return std::any_of(witnesses.begin(), witnesses.end(), [&](const Entry & e) { return e.positions == s; });
    }

    auto PatternWitness::sets() const -> std::vector<PositionSet>
    {
        std::vector<PositionSet> result;
        for (auto & e : witnesses)
            result.push_back(e.positions);
        return result;
    }

    namespace
    {
        void check_pattern(const KGraph & pattern, const Ordering & sigma)
        {
            if (pattern.uniformity() > max_pattern_uniformity)
                throw DomainError("pattern uniformity " + std::to_string(pattern.uniformity()) + " exceeds " +
                    std::to_string(max_pattern_uniformity));
            if (sigma.size() != pattern.vertex_count())
                throw DomainError("ordering has " + std::to_string(sigma.size()) + " vertices but the pattern has " +
                    std::to_string(pattern.vertex_count()));
        }
    }

    auto classify_pattern(const KGraph & pattern, const Ordering & sigma, const Colouring & colouring) -> PatternWitness
    {
        check_pattern(pattern, sigma);
        colouring.check_total(pattern);

        auto k = pattern.uniformity();
        PatternWitness result;
        std::vector<Vertex> projection;
        for (PositionSet s = 0; s < (PositionSet{1} << k); ++s) {
            std::map<std::vector<Vertex>, Colour> phi;
            std::map<Colour, std::vector<Vertex>> inverse;
            bool ok = true;
            for (EdgeIndex e = 0; e < pattern.edge_count() && ok; ++e) {
                project_into(pattern.edge(e), s, sigma, projection);
                auto c = colouring[e];
                auto [it, fresh] = phi.emplace(projection, c);
                if (! fresh && it->second != c)
                    ok = false; // equal projections, different colours
                auto [jt, fresh_colour] = inverse.emplace(c, projection);
                if (! fresh_colour && jt->second != projection)
                    ok = false; // one colour on two projections
            }
            if (ok)
                result.witnesses.push_back({s, {phi.begin(), phi.end()}});
        }
        return result;
    }

    auto partition_key_of_labels(std::span<const unsigned> labels) -> PartitionKey
    {
        if (labels.size() > max_partition_entries)
            throw DomainError("partition keys support at most " + std::to_string(max_partition_entries) + " entries");
        unsigned seen[max_partition_entries];
        unsigned distinct = 0;
        PartitionKey key = 0;
        for (std::size_t i = 0; i < labels.size(); ++i) {
            unsigned block = 0;
            while (block < distinct && seen[block] != labels[i])
                ++block;
            if (block == distinct)
                seen[distinct++] = labels[i];
            key |= PartitionKey(block) << (4 * i);
        }
        return key;
    }

    auto partition_key(std::span<const Colour> colours) -> PartitionKey
    {
        if (colours.size() > max_partition_entries)
            throw DomainError("partition keys support at most " + std::to_string(max_partition_entries) + " entries");
        Colour seen[max_partition_entries];
        unsigned distinct = 0;
        PartitionKey key = 0;
        for (std::size_t i = 0; i < colours.size(); ++i) {
            unsigned block = 0;
            while (block < distinct && seen[block] != colours[i])
                ++block;
            if (block == distinct)
                seen[distinct++] = colours[i];
            key |= PartitionKey(block) << (4 * i);
        }
        return key;
    }

    CanonicalPartitions::CanonicalPartitions(const KGraph & pattern, const Ordering & sigma)
    {
        check_pattern(pattern, sigma);
        if (pattern.edge_count() > max_partition_entries)
            throw DomainError("patterns with more than " + std::to_string(max_partition_entries) +
                " edges are not supported by the copy index");

        auto k = pattern.uniformity();
        std::vector<Vertex> projection;
        std::vector<unsigned> labels(pattern.edge_count());
        for (PositionSet s = 0; s < (PositionSet{1} << k); ++s) {
            std::map<std::vector<Vertex>, unsigned> ids;
            for (EdgeIndex e = 0; e < pattern.edge_count(); ++e) {
                project_into(pattern.edge(e), s, sigma, projection);
                labels[e] = ids.emplace(projection, unsigned(ids.size())).first->second;
            }
            auto key = partition_key_of_labels(labels);
            _by_set.emplace_back(key, s);
            _keys.push_back(key);
        }
        std::sort(_keys.begin(), _keys.end());
        _keys.erase(std::unique(_keys.begin(), _keys.end()), _keys.end());
    }

    auto CanonicalPartitions::canonical(std::span<const Colour> colours) const -> bool
    {
        return std::binary_search(_keys.begin(), _keys.end(), partition_key(colours));
    }

    auto CanonicalPartitions::sets_for(PartitionKey key) const -> std::vector<PositionSet>
    {
        std::vector<PositionSet> result;
        for (auto & [k, s] : _by_set)
            if (k == key)
                result.push_back(s);
        return result;
    }

    namespace
    {
        using ImageKey = std::vector<std::uint32_t>;
        using ImageSet = std::unordered_set<ImageKey, boost::hash<ImageKey>>;

        auto image_key(const Embedding & emb, std::span<const EdgeIndex> edge_images) -> ImageKey
        {
            ImageKey key(emb.vertex_map.begin(), emb.vertex_map.end());
            std::sort(key.begin(), key.end());
            auto mid = std::ptrdiff_t(key.size());
            key.insert(key.end(), edge_images.begin(), edge_images.end());
            std::sort(key.begin() + mid, key.end());
            return key;
        }
    }

    auto enumerate_canonical_copies(const KGraph & pattern, const Ordering & sigma, const KGraph & host,
        const Colouring & colouring, const CanonicalCopyVisitor & visit, CopyMode mode) -> bool
    {
        if (pattern.uniformity() != host.uniformity())
            throw UniformityMismatch(pattern.uniformity(), host.uniformity());
        check_pattern(pattern, sigma);
        colouring.check_total(host);

        ImageSet seen;
        Colouring inherited{std::vector<Colour>(pattern.edge_count())};
        return enumerate_copies(pattern, host, [&](const Embedding & emb, std::span<const EdgeIndex> edge_images) {
            if (mode == CopyMode::strict && ! seen.insert(image_key(emb, edge_images)).second)
                return true;
            for (EdgeIndex e = 0; e < pattern.edge_count(); ++e)
                inherited[e] = colouring[edge_images[e]];
            auto witness = classify_pattern(pattern, sigma, inherited);
            if (witness.canonical())
                return visit(emb, witness);
            return true;
        });
    }

    auto count_distinct_canonical_copies(const KGraph & pattern, const Ordering & sigma, const KGraph & host,
        const Colouring & colouring, CopyMode mode) -> std::uint64_t
    {
        if (pattern.uniformity() != host.uniformity())
            throw UniformityMismatch(pattern.uniformity(), host.uniformity());
        check_pattern(pattern, sigma);
        colouring.check_total(host);

        // Per-image decision; in strict mode only the first embedding of an
        // image gets a vote.
        std::unordered_map<ImageKey, bool, boost::hash<ImageKey>> verdict;
        Colouring inherited{std::vector<Colour>(pattern.edge_count())};
        enumerate_copies(pattern, host, [&](const Embedding & emb, std::span<const EdgeIndex> edge_images) {
            auto key = image_key(emb, edge_images);
            auto it = verdict.find(key);
            if (it != verdict.end() && (it->second || mode == CopyMode::strict))
                return true;
            for (EdgeIndex e = 0; e < pattern.edge_count(); ++e)
                inherited[e] = colouring[edge_images[e]];
            auto is_canonical = classify_pattern(pattern, sigma, inherited).canonical();
            if (it == verdict.end())
                verdict.emplace(std::move(key), is_canonical);
            else
                it->second = is_canonical;
            return true;
        });

        return std::uint64_t(std::count_if(verdict.begin(), verdict.end(), [](const auto & p) { return p.second; }));
    }

    auto CopyConstraint::canonical(std::span<const Colour> colours_by_position) const -> bool
    {
        return std::binary_search(canonical_keys.begin(), canonical_keys.end(), partition_key(colours_by_position));
    }

    CopyIndex::CopyIndex(const KGraph & pattern, const KGraph & host, std::uint64_t max_embeddings) :
        _pattern_edges(pattern.edge_count())
    {
        if (pattern.uniformity() != host.uniformity())
            throw UniformityMismatch(pattern.uniformity(), host.uniformity());
        if (_pattern_edges > max_partition_entries)
            throw DomainError("patterns with more than " + std::to_string(max_partition_entries) +
                " edges are not supported by the copy index");

        std::unordered_map<ImageKey, std::size_t, boost::hash<ImageKey>> index;
        std::vector<std::pair<EdgeIndex, std::uint8_t>> order(_pattern_edges);
        std::vector<std::uint8_t> row(_pattern_edges);

        enumerate_copies(pattern, host, [&](const Embedding &, std::span<const EdgeIndex> edge_images) {
            if (++_embeddings > max_embeddings)
                throw GuardExceeded("too many embeddings of the pattern", max_embeddings, _embeddings);

            for (std::size_t i = 0; i < _pattern_edges; ++i)
                order[i] = {edge_images[i], std::uint8_t(i)};
            std::sort(order.begin(), order.end());
            ImageKey key(_pattern_edges);
            for (std::size_t i = 0; i < _pattern_edges; ++i) {
                key[i] = order[i].first;
                row[i] = order[i].second;
            }

            auto [it, fresh] = index.emplace(key, _copies.size());
            if (fresh)
                _copies.push_back(Copy{std::move(key), {}});
            _copies[it->second].pattern_edge_at.push_back(row);
            return true;
        });
    }

    auto CopyIndex::constraints(const CanonicalPartitions & partitions, CopyMode mode) const -> std::vector<CopyConstraint>
    {
        // Unpack each canonical key of the pattern into block labels once.
        std::vector<std::vector<unsigned>> pattern_labels;
        for (auto key : partitions.keys()) {
            std::vector<unsigned> labels(_pattern_edges);
            for (std::size_t i = 0; i < _pattern_edges; ++i)
                labels[i] = unsigned((key >> (4 * i)) & 0xf);
            pattern_labels.push_back(std::move(labels));
        }

        std::vector<CopyConstraint> result;
        result.reserve(_copies.size());
        std::vector<unsigned> relabelled(_pattern_edges);
        for (auto & copy : _copies) {
            CopyConstraint constraint{copy.edges, {}};
            auto rows = (mode == CopyMode::strict) ? std::size_t{1} : copy.pattern_edge_at.size();
            for (std::size_t r = 0; r < rows; ++r)
                for (auto & labels : pattern_labels) {
                    for (std::size_t p = 0; p < _pattern_edges; ++p)
                        relabelled[p] = labels[copy.pattern_edge_at[r][p]];
                    constraint.canonical_keys.push_back(partition_key_of_labels(relabelled));
                }
            std::sort(constraint.canonical_keys.begin(), constraint.canonical_keys.end());
            constraint.canonical_keys.erase(
                std::unique(constraint.canonical_keys.begin(), constraint.canonical_keys.end()),
                constraint.canonical_keys.end());
            result.push_back(std::move(constraint));
        }
        return result;
    }

    auto canonical_copy_constraints(const KGraph & pattern, const Ordering & sigma, const KGraph & host,
        CopyMode mode, std::uint64_t max_embeddings) -> std::vector<CopyConstraint>
    {
        CanonicalPartitions partitions{pattern, sigma};
        return CopyIndex{pattern, host, max_embeddings}.constraints(partitions, mode);
    }
}
