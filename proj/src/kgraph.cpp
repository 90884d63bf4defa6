#include <canram/errors.hpp>
#include <canram/kgraph.hpp>

#include <boost/container_hash/hash.hpp>

#include <algorithm>
#include <limits>
#include <numeric>
#include <tuple>
#include <unordered_set>

namespace canram
{
    auto edge_to_string(std::span<const Vertex> edge) -> std::string
    {
        std::string result;
        for (auto v : edge) {
            if (! result.empty())
                result += ' ';
            result += std::to_string(v);
        }
        return result;
    }

    KGraph::KGraph(unsigned uniformity, Vertex vertex_count) :
        _uniformity(uniformity),
        _vertex_count(vertex_count)
    {
        if (uniformity < 2)
            throw DomainError("uniformity must be at least 2, got " + std::to_string(uniformity));
        build_indices();
    }

    KGraph::KGraph(unsigned uniformity, Vertex vertex_count, std::vector<Edge> edges) :
        _uniformity(uniformity),
        _vertex_count(vertex_count),
        _edges(std::move(edges))
    {
        if (uniformity < 2)
            throw DomainError("uniformity must be at least 2, got " + std::to_string(uniformity));

        for (auto & e : _edges) {
            std::sort(e.begin(), e.end());
            if (e.size() != uniformity)
                throw DomainError("edge {" + edge_to_string(e) + "} does not have " + std::to_string(uniformity) +
                    " vertices");
            if (std::adjacent_find(e.begin(), e.end()) != e.end())
                throw DomainError("edge {" + edge_to_string(e) + "} repeats a vertex");
            if (e.back() >= vertex_count)
                throw DomainError("edge {" + edge_to_string(e) + "} uses a vertex outside 0.." +
                    std::to_string(vertex_count) + "-1");
        }

        std::sort(_edges.begin(), _edges.end());
        auto dup = std::adjacent_find(_edges.begin(), _edges.end());
        if (dup != _edges.end())
            throw DomainError("duplicate edge {" + edge_to_string(*dup) + "}");

        build_indices();
    }

    auto KGraph::pack(std::span<const Vertex> vertices) const -> std::uint64_t
    {
        std::uint64_t key = 0;
        for (auto v : vertices)
            key = key * _vertex_count + v;
        return key;
    }

    void KGraph::build_indices()
    {
        _incident.assign(_vertex_count, {});
        for (EdgeIndex i = 0; i < _edges.size(); ++i)
            for (auto v : _edges[i])
                _incident[v].push_back(i);

        if (_uniformity == 2) {
            _pair_index.assign(std::size_t(_vertex_count) * _vertex_count, -1);
            _neighbours.assign(_vertex_count, {});
            for (EdgeIndex i = 0; i < _edges.size(); ++i) {
                auto u = _edges[i][0], v = _edges[i][1];
                _pair_index[std::size_t(u) * _vertex_count + v] = std::int32_t(i);
                _pair_index[std::size_t(v) * _vertex_count + u] = std::int32_t(i);
                _neighbours[u].push_back(v);
                _neighbours[v].push_back(u);
            }
            for (auto & n : _neighbours)
                std::sort(n.begin(), n.end());
        }
        else {
            // n^k must fit in 64 bits for the packed key to be unique.
            long double capacity = 1;
            for (unsigned i = 0; i < _uniformity; ++i)
                capacity *= _vertex_count;
            if (capacity > static_cast<long double>(std::numeric_limits<std::uint64_t>::max()))
                throw DomainError("hypergraph too large to index: " + std::to_string(_vertex_count) + " vertices at uniformity " +
                    std::to_string(_uniformity));
            _packed_index.reserve(_edges.size());
            for (EdgeIndex i = 0; i < _edges.size(); ++i)
                _packed_index.emplace(pack(_edges[i]), i);
        }
    }

    auto KGraph::find_edge(std::span<const Vertex> vertices) const -> std::optional<EdgeIndex>
    {
        if (vertices.size() != _uniformity)
            return std::nullopt;
        for (auto v : vertices)
            if (v >= _vertex_count)
                return std::nullopt;

        if (_uniformity == 2) {
            auto e = pair_edge(vertices[0], vertices[1]);
            if (e < 0)
                return std::nullopt;
            return EdgeIndex(e);
        }

        auto it = _packed_index.find(pack(vertices));
        if (it == _packed_index.end())
            return std::nullopt;
        return it->second;
    }

    auto KGraph::edge_subgraph(std::span<const EdgeIndex> keep) const -> KGraph
    {
        std::vector<Edge> kept;
        kept.reserve(keep.size());
        for (auto e : keep)
            kept.push_back(_edges.at(e));
        return KGraph{_uniformity, _vertex_count, std::move(kept)};
    }

    auto complete_graph(Vertex n, unsigned k) -> KGraph
    {
        std::vector<Edge> edges;
        if (n >= k) {
            // Walk k-subsets in lexicographic order.
            Edge current(k);
            std::iota(current.begin(), current.end(), Vertex{0});
            while (true) {
                edges.push_back(current);
                int i = int(k) - 1;
                while (i >= 0 && current[i] == n - k + Vertex(i))
                    --i;
                if (i < 0)
                    break;
                ++current[i];
                for (unsigned j = i + 1; j < k; ++j)
                    current[j] = current[j - 1] + 1;
            }
        }
        return KGraph{k, n, std::move(edges)};
    }

    Ordering::Ordering(std::vector<Vertex> vertex_at_position) :
        _order(std::move(vertex_at_position)),
        _position(_order.size(), std::numeric_limits<std::size_t>::max())
    {
        for (std::size_t i = 0; i < _order.size(); ++i) {
            auto v = _order[i];
            if (v >= _order.size() || _position[v] != std::numeric_limits<std::size_t>::max())
                throw DomainError("ordering is not a permutation of 0.." + std::to_string(_order.size()) + "-1");
            _position[v] = i;
        }
    }

    auto Ordering::natural(Vertex size) -> Ordering
    {
        std::vector<Vertex> order(size);
        std::iota(order.begin(), order.end(), Vertex{0});
        return Ordering{std::move(order)};
    }

    auto Ordering::reversed() const -> Ordering
    {
        return Ordering{std::vector<Vertex>(_order.rbegin(), _order.rend())};
    }

    auto Colouring::constant(const KGraph & carrier, Colour c) -> Colouring
    {
        return Colouring{std::vector<Colour>(carrier.edge_count(), c)};
    }

    void Colouring::check_total(const KGraph & carrier) const
    {
        if (_colours.size() != carrier.edge_count())
            throw DomainError("colouring covers " + std::to_string(_colours.size()) + " edges but the graph has " +
                std::to_string(carrier.edge_count()));
    }

    ListAssignment::ListAssignment(unsigned list_length, std::vector<std::vector<Colour>> lists) :
        _r(list_length),
        _lists(std::move(lists))
    {
        if (_r < 1)
            throw DomainError("list length must be at least 1");
        for (auto & l : _lists)
            if (l.size() != _r)
                throw DomainError("list of length " + std::to_string(l.size()) + " in an assignment of length " +
                    std::to_string(_r));
    }

    auto ListAssignment::constant(const KGraph & carrier, std::vector<Colour> list) -> ListAssignment
    {
        auto r = unsigned(list.size());
        return ListAssignment{r, std::vector<std::vector<Colour>>(carrier.edge_count(), list)};
    }

    auto ListAssignment::uniform() const -> bool
    {
        if (_lists.empty())
            return true;
        auto distinct = [](std::vector<Colour> l) {
            std::sort(l.begin(), l.end());
            l.erase(std::unique(l.begin(), l.end()), l.end());
            return l;
        };
        auto first = distinct(_lists.front());
        return std::all_of(_lists.begin(), _lists.end(), [&](const auto & l) { return distinct(l) == first; });
    }

    void ListAssignment::check_total(const KGraph & carrier) const
    {
        if (_lists.size() != carrier.edge_count())
            throw DomainError("list assignment covers " + std::to_string(_lists.size()) + " edges but the graph has " +
                std::to_string(carrier.edge_count()));
    }

    auto ListAssignment::restricted_to(const KGraph & carrier, const KGraph & sub) const -> ListAssignment
    {
        check_total(carrier);
        std::vector<std::vector<Colour>> lists;
        lists.reserve(sub.edge_count());
        for (auto & e : sub.edges()) {
            auto idx = carrier.find_edge(e);
            if (! idx)
                throw DomainError("edge {" + edge_to_string(e) + "} has no list");
            lists.push_back(_lists[*idx]);
        }
        return ListAssignment{_r, std::move(lists)};
    }

    auto ListAssignment::compatible(const Colouring & colouring) const -> bool
    {
        if (colouring.size() != _lists.size())
            return false;
        for (EdgeIndex e = 0; e < _lists.size(); ++e)
            if (std::find(_lists[e].begin(), _lists[e].end(), colouring[e]) == _lists[e].end())
                return false;
        return true;
    }

    namespace
    {
        // Backtracking state for pattern -> host embeddings. Pattern vertices are
        // placed in a fixed order chosen so that edges close as early as
        // possible; every pattern edge is checked at the step where its last
        // vertex is placed.
        class EmbeddingSearch
        {
        public:
            EmbeddingSearch(const KGraph & pattern, const KGraph & host, const EmbeddingVisitor & visit) :
                _pattern(pattern),
                _host(host),
                _visit(visit),
                _graph_mode(pattern.uniformity() == 2),
                _embedding{std::vector<Vertex>(pattern.vertex_count(), 0)},
                _used(host.vertex_count(), false),
                _edge_images(pattern.edge_count(), 0)
            {
                choose_order();
            }

            auto run() -> bool
            {
                if (_pattern.vertex_count() > _host.vertex_count())
                    return true;
                return extend(0);
            }

        private:
            void choose_order()
            {
                auto v = _pattern.vertex_count();
                std::vector<bool> placed(v, false);
                std::vector<unsigned> placed_in_edge(_pattern.edge_count(), 0);
                _closing.assign(v, {});
                _anchor.assign(v, std::nullopt);

                for (Vertex step = 0; step < v; ++step) {
                    // Prefer the vertex closing the most edges, then the one
                    // touching the most partially placed edges, then high degree.
                    std::optional<Vertex> best;
                    std::tuple<unsigned, unsigned, std::size_t> best_score{};
                    for (Vertex u = 0; u < v; ++u) {
                        if (placed[u])
                            continue;
                        unsigned closes = 0, touches = 0;
                        for (auto e : _pattern.incident_edges(u)) {
                            if (placed_in_edge[e] + 1 == _pattern.uniformity())
                                ++closes;
                            if (placed_in_edge[e] > 0)
                                ++touches;
                        }
                        std::tuple score{closes, touches, _pattern.degree(u)};
                        if (! best || score > best_score) {
                            best = u;
                            best_score = score;
                        }
                    }

                    auto u = *best;
                    placed[u] = true;
                    _order.push_back(u);
                    for (auto e : _pattern.incident_edges(u)) {
                        if (++placed_in_edge[e] == _pattern.uniformity())
                            _closing[step].push_back(e);
                    }

                    if (_graph_mode)
                        for (auto w : _pattern.neighbours(u))
                            if (placed[w] && w != u) {
                                _anchor[step] = w;
                                break;
                            }
                }
            }

            auto try_vertex(Vertex step, Vertex u, Vertex target) -> bool
            {
                if (_used[target] || _host.degree(target) < _pattern.degree(u))
                    return true;

                _embedding.vertex_map[u] = target;
                for (auto e : _closing[step]) {
                    auto & pe = _pattern.edge(e);
                    std::optional<EdgeIndex> image;
                    if (_graph_mode) {
                        auto he = _host.pair_edge(_embedding.vertex_map[pe[0]], _embedding.vertex_map[pe[1]]);
                        if (he >= 0)
                            image = EdgeIndex(he);
                    }
                    else {
                        _scratch.clear();
                        for (auto w : pe)
                            _scratch.push_back(_embedding.vertex_map[w]);
                        std::sort(_scratch.begin(), _scratch.end());
                        image = _host.find_edge(_scratch);
                    }
                    if (! image)
                        return true;
                    _edge_images[e] = *image;
                }

                _used[target] = true;
                auto keep_going = extend(step + 1);
                _used[target] = false;
                return keep_going;
            }

            auto extend(Vertex step) -> bool
            {
                if (step == _order.size())
                    return _visit(_embedding, _edge_images);

                auto u = _order[step];
                if (_anchor[step]) {
                    for (auto target : _host.neighbours(_embedding.vertex_map[*_anchor[step]]))
                        if (! try_vertex(step, u, target))
                            return false;
                }
                else {
                    for (Vertex target = 0; target < _host.vertex_count(); ++target)
                        if (! try_vertex(step, u, target))
                            return false;
                }
                return true;
            }

            const KGraph & _pattern;
            const KGraph & _host;
            const EmbeddingVisitor & _visit;
            bool _graph_mode;

            std::vector<Vertex> _order;
            std::vector<std::vector<EdgeIndex>> _closing;
            std::vector<std::optional<Vertex>> _anchor;

            Embedding _embedding;
            std::vector<bool> _used;
            std::vector<EdgeIndex> _edge_images;
            std::vector<Vertex> _scratch;
        };
    }

    auto enumerate_copies(const KGraph & pattern, const KGraph & host, const EmbeddingVisitor & visit) -> bool
    {
        if (pattern.uniformity() != host.uniformity())
            throw UniformityMismatch(pattern.uniformity(), host.uniformity());
        EmbeddingSearch search{pattern, host, visit};
        return search.run();
    }

    auto count_embeddings(const KGraph & pattern, const KGraph & host) -> std::uint64_t
    {
        std::uint64_t count = 0;
        enumerate_copies(pattern, host, [&](const Embedding &, std::span<const EdgeIndex>) {
            ++count;
            return true;
        });
        return count;
    }

    auto distinct_subgraph_copies(const KGraph & pattern, const KGraph & host) -> std::uint64_t
    {
        // Image key: sorted vertex image, then sorted edge image.
        std::unordered_set<std::vector<std::uint32_t>, boost::hash<std::vector<std::uint32_t>>> images;
        std::vector<std::uint32_t> key;
        enumerate_copies(pattern, host, [&](const Embedding & emb, std::span<const EdgeIndex> edge_images) {
            key.assign(emb.vertex_map.begin(), emb.vertex_map.end());
            std::sort(key.begin(), key.end());
            auto mid = key.size();
            key.insert(key.end(), edge_images.begin(), edge_images.end());
            std::sort(key.begin() + std::ptrdiff_t(mid), key.end());
            images.insert(key);
            return true;
        });
        return images.size();
    }
}
