#include <canram/errors.hpp>
#include <canram/sat.hpp>
#include <canram/solver.hpp>

#include <algorithm>
#include <atomic>
#include <bit>
#include <exception>
#include <mutex>
#include <numeric>
#include <thread>

namespace canram
{
    auto SolverStatistics::operator+=(const SolverStatistics & other) -> SolverStatistics &
    {
        nodes += other.nodes;
        prunings += other.prunings;
        propagations += other.propagations;
        copies += other.copies;
        components += other.components;
        return *this;
    }

    auto to_string(Outcome outcome) -> const char *
    {
        switch (outcome) {
            case Outcome::avoiding_colouring_found: return "avoiding-colouring-found";
            case Outcome::none_exists: return "none-exists";
        }
        return "?";
    }

    namespace
    {
        constexpr unsigned max_labels = 64;

        // How colour choices are represented for a component. With lists, bit i
        // of an edge's domain is the i-th distinct colour on its list. With
        // symmetric labels every edge may take labels 0..label_cap-1, all
        // labels are interchangeable, and a branch only ever opens the next
        // unused label.
        struct DomainSpec
        {
            bool symmetric = false;
            // Colours are arbitrary, so labels only name blocks of a partition.
            bool unrestricted = false;
            unsigned label_cap = 0;
            std::vector<Colour> label_colours;           // symmetric: colour of each label
            const std::vector<std::vector<Colour>> * lists = nullptr; // lists mode: distinct values per host edge
        };

        struct LocalConstraint
        {
            std::vector<std::uint32_t> edges;
            const std::vector<PartitionKey> * keys;
        };

        struct Shared
        {
            std::atomic<std::uint64_t> nodes{0};
            std::uint64_t max_nodes;
            std::atomic<bool> stop{false};
        };

        class ComponentSearch
        {
        public:
            ComponentSearch(std::vector<EdgeIndex> host_edges, const std::vector<CopyConstraint> & constraints,
                const std::vector<std::size_t> & constraint_ids, const DomainSpec & spec, bool propagate,
                Shared & shared) :
                _host_edges(std::move(host_edges)),
                _spec(spec),
                _propagate(propagate),
                _shared(shared)
            {
                auto m = _host_edges.size();
                std::vector<std::uint32_t> local(0);
                // host edge -> local id via binary search on the sorted edge list
                auto local_of = [&](EdgeIndex e) {
                    return std::uint32_t(std::lower_bound(_host_edges.begin(), _host_edges.end(), e) - _host_edges.begin());
                };

                _occurrences.assign(m, {});
                for (auto id : constraint_ids) {
                    auto & c = constraints[id];
                    LocalConstraint lc{{}, &c.canonical_keys};
                    for (std::uint32_t p = 0; p < c.edges.size(); ++p) {
                        auto e = local_of(c.edges[p]);
                        lc.edges.push_back(e);
                        _occurrences[e].push_back({std::uint32_t(_constraints.size()), p});
                    }
                    _remaining.push_back(std::uint32_t(lc.edges.size()));
                    _constraints.push_back(std::move(lc));
                }

                _assigned.assign(m, -1);
                _domain.assign(m, 0);
                for (std::size_t e = 0; e < m; ++e) {
                    auto count = _spec.symmetric ? _spec.label_cap : unsigned((*_spec.lists)[_host_edges[e]].size());
                    _domain[e] = (count >= 64) ? ~std::uint64_t{0} : ((std::uint64_t{1} << count) - 1);
                }
            }

            auto statistics() const -> const SolverStatistics & { return _stats; }
            auto solution() const -> const std::vector<int> & { return _assigned; }
            auto host_edges() const -> const std::vector<EdgeIndex> & { return _host_edges; }

            auto colour_of(std::uint32_t e, int label) const -> Colour
            {
                if (_spec.symmetric)
                    return _spec.label_colours[label];
                return (*_spec.lists)[_host_edges[e]][label];
            }

            auto search() -> bool
            {
                if (_shared.stop.load(std::memory_order_relaxed))
                    return false;
                if (_assigned_count == _assigned.size())
                    return true;

                auto e = select();
                auto branch = _domain[e] & branch_mask();
                while (branch) {
                    int label = std::countr_zero(branch);
                    branch &= branch - 1;
                    count_node();
                    auto mark = _trail.size();
                    auto used = _used_labels;
                    if (assign(e, label)) {
                        if (search())
                            return true;
                    }
                    else
                        ++_stats.prunings;
                    unassign(e, mark, used);
                    if (_shared.stop.load(std::memory_order_relaxed))
                        return false;
                }
                return false;
            }

            // Enumerates partial assignments `depth` decisions deep. Returns true
            // if a full solution turned up on the way (left in place).
            auto collect_prefixes(unsigned depth, std::vector<std::vector<std::pair<std::uint32_t, int>>> & out,
                std::vector<std::pair<std::uint32_t, int>> & prefix) -> bool
            {
                if (_assigned_count == _assigned.size())
                    return true;
                if (depth == 0) {
                    out.push_back(prefix);
                    return false;
                }
                auto e = select();
                auto branch = _domain[e] & branch_mask();
                while (branch) {
                    int label = std::countr_zero(branch);
                    branch &= branch - 1;
                    count_node();
                    auto mark = _trail.size();
                    auto used = _used_labels;
                    if (assign(e, label)) {
                        prefix.emplace_back(e, label);
                        if (collect_prefixes(depth - 1, out, prefix))
                            return true;
                        prefix.pop_back();
                    }
                    else
                        ++_stats.prunings;
                    unassign(e, mark, used);
                }
                return false;
            }

            auto replay(const std::vector<std::pair<std::uint32_t, int>> & prefix) -> bool
            {
                for (auto [e, label] : prefix)
                    if (! assign(e, label))
                        return false;
                return true;
            }

            auto edge_count() const -> std::size_t { return _assigned.size(); }

        private:
            struct Occurrence
            {
                std::uint32_t constraint;
                std::uint32_t position;
            };

            void count_node()
            {
                ++_stats.nodes;
                auto total = _shared.nodes.fetch_add(1, std::memory_order_relaxed) + 1;
                if (total > _shared.max_nodes)
                    throw GuardExceeded("search node limit reached", _shared.max_nodes, total);
            }

            auto branch_mask() const -> std::uint64_t
            {
                if (! _spec.symmetric)
                    return ~std::uint64_t{0};
                auto open = std::min(_used_labels + 1, _spec.label_cap);
                return (open >= 64) ? ~std::uint64_t{0} : ((std::uint64_t{1} << open) - 1);
            }

            // Fail-first: fewest live choices, then most copies through the edge.
            auto select() const -> std::uint32_t
            {
                auto mask = branch_mask();
                std::uint32_t best = 0;
                int best_choices = 65;
                std::uint64_t best_score = 0;
                for (std::uint32_t e = 0; e < _assigned.size(); ++e) {
                    if (_assigned[e] >= 0)
                        continue;
                    int choices = std::popcount(_domain[e] & mask);
                    if (choices > best_choices)
                        continue;
                    std::uint64_t score = 0;
                    for (auto & o : _occurrences[e]) {
                        auto done = _constraints[o.constraint].edges.size() - _remaining[o.constraint];
                        score += std::uint64_t{1} << (2 * done);
                    }
                    if (choices < best_choices || score > best_score) {
                        best = e;
                        best_choices = choices;
                        best_score = score;
                    }
                }
                return best;
            }

            auto constraint_canonical(const LocalConstraint & c) -> bool
            {
                _colours.resize(c.edges.size());
                for (std::size_t p = 0; p < c.edges.size(); ++p)
                    _colours[p] = colour_of(c.edges[p], _assigned[c.edges[p]]);
                return std::binary_search(c.keys->begin(), c.keys->end(), partition_key(_colours));
            }

            // Removes the values of the single open edge of `c` that would make
            // the copy canonical. False if its domain empties.
            auto filter(const LocalConstraint & c) -> bool
            {
                std::size_t open_position = 0;
                for (std::size_t p = 0; p < c.edges.size(); ++p)
                    if (_assigned[c.edges[p]] < 0)
                        open_position = p;
                auto y = c.edges[open_position];

                _colours.resize(c.edges.size());
                std::uint64_t present = 0;
                for (std::size_t p = 0; p < c.edges.size(); ++p)
                    if (p != open_position) {
                        _colours[p] = colour_of(c.edges[p], _assigned[c.edges[p]]);
                        if (_spec.symmetric)
                            present |= std::uint64_t{1} << _assigned[c.edges[p]];
                    }

                auto test = [&](int label) {
                    _colours[open_position] = colour_of(y, label);
                    return std::binary_search(c.keys->begin(), c.keys->end(), partition_key(_colours));
                };

                std::uint64_t remove = 0;
                auto domain = _domain[y];
                if (_spec.symmetric) {
                    // Labels absent from the copy are interchangeable here.
                    auto absent = domain & ~present;
                    if (absent && test(std::countr_zero(absent)))
                        remove |= absent;
                    for (auto bits = domain & present; bits; bits &= bits - 1) {
                        int label = std::countr_zero(bits);
                        if (test(label))
                            remove |= std::uint64_t{1} << label;
                    }
                }
                else {
                    for (auto bits = domain; bits; bits &= bits - 1) {
                        int label = std::countr_zero(bits);
                        if (test(label))
                            remove |= std::uint64_t{1} << label;
                    }
                }

                if (remove) {
                    _trail.emplace_back(y, domain);
                    _domain[y] = domain & ~remove;
                    ++_stats.propagations;
                }
                return _domain[y] != 0;
            }

            auto assign(std::uint32_t e, int label) -> bool
            {
                _assigned[e] = label;
                ++_assigned_count;
                if (_spec.symmetric && unsigned(label) == _used_labels)
                    ++_used_labels;

                for (auto & o : _occurrences[e])
                    --_remaining[o.constraint];

                for (auto & o : _occurrences[e]) {
                    auto & c = _constraints[o.constraint];
                    auto left = _remaining[o.constraint];
                    if (left == 0) {
                        if (constraint_canonical(c))
                            return false;
                    }
                    else if (left == 1 && _propagate) {
                        if (! filter(c))
                            return false;
                    }
                }
                return true;
            }

            void unassign(std::uint32_t e, std::size_t trail_mark, unsigned used_labels)
            {
                for (auto & o : _occurrences[e])
                    ++_remaining[o.constraint];
                while (_trail.size() > trail_mark) {
                    auto [edge, domain] = _trail.back();
                    _domain[edge] = domain;
                    _trail.pop_back();
                }
                _assigned[e] = -1;
                --_assigned_count;
                _used_labels = used_labels;
            }

            std::vector<EdgeIndex> _host_edges;
            const DomainSpec & _spec;
            bool _propagate;
            Shared & _shared;

            std::vector<LocalConstraint> _constraints;
            std::vector<std::vector<Occurrence>> _occurrences;
            std::vector<std::uint32_t> _remaining;
            std::vector<int> _assigned;
            std::size_t _assigned_count = 0;
            std::vector<std::uint64_t> _domain;
            std::vector<std::pair<std::uint32_t, std::uint64_t>> _trail;
            unsigned _used_labels = 0;
            std::vector<Colour> _colours;
            SolverStatistics _stats;
        };

        struct ComponentPlan
        {
            std::vector<EdgeIndex> edges;
            std::vector<std::size_t> constraints;
        };

        auto split_components(std::size_t host_edges, const std::vector<CopyConstraint> & constraints)
            -> std::vector<ComponentPlan>
        {
            std::vector<std::size_t> parent(host_edges);
            std::iota(parent.begin(), parent.end(), std::size_t{0});
            auto find = [&](std::size_t x) {
                while (parent[x] != x)
                    x = parent[x] = parent[parent[x]];
                return x;
            };
            std::vector<bool> touched(host_edges, false);
            for (auto & c : constraints)
                for (auto e : c.edges) {
                    touched[e] = true;
                    auto a = find(c.edges.front()), b = find(e);
                    if (a != b)
                        parent[std::max(a, b)] = std::min(a, b);
                }

            std::vector<std::ptrdiff_t> slot(host_edges, -1);
            std::vector<ComponentPlan> plans;
            for (std::size_t e = 0; e < host_edges; ++e) {
                if (! touched[e])
                    continue;
                auto root = find(e);
                if (slot[root] < 0) {
                    slot[root] = std::ptrdiff_t(plans.size());
                    plans.emplace_back();
                }
                plans[slot[root]].edges.push_back(EdgeIndex(e));
            }
            for (std::size_t i = 0; i < constraints.size(); ++i)
                plans[slot[find(constraints[i].edges.front())]].constraints.push_back(i);

            std::stable_sort(plans.begin(), plans.end(),
                [](const ComponentPlan & a, const ComponentPlan & b) { return a.edges.size() < b.edges.size(); });
            return plans;
        }

        auto domain_values(const DomainSpec & spec, EdgeIndex e) -> const std::vector<Colour> &
        {
            return spec.symmetric ? spec.label_colours : (*spec.lists)[e];
        }

        // Compiles a component to CNF and hands it to the clause learning
        // solver. Each edge gets one variable when it has two admissible
        // values and a one-hot block otherwise; each copy forbids every value
        // tuple whose colour partition is canonical. Returns nullopt when the
        // formula would exceed the clause cap.
        auto solve_component_with_clauses(const ComponentPlan & plan,
            const std::vector<CopyConstraint> & constraints, const DomainSpec & spec, const SolverOptions & options,
            Shared & shared, SolverStatistics & stats, std::vector<int> & labels) -> std::optional<bool>
        {
            auto m = plan.edges.size();
            auto local_of = [&](EdgeIndex e) {
                return std::size_t(std::lower_bound(plan.edges.begin(), plan.edges.end(), e) - plan.edges.begin());
            };

            ClauseSolver solver;
            std::vector<std::uint32_t> base(m);
            std::vector<std::size_t> size(m);
            std::vector<std::vector<Literal>> clauses;
            for (std::size_t i = 0; i < m; ++i) {
                size[i] = domain_values(spec, plan.edges[i]).size();
                base[i] = solver.new_variable();
                if (size[i] == 1)
                    clauses.push_back({positive(base[i])});
                for (std::size_t v = 1; size[i] >= 3 && v < size[i]; ++v)
                    solver.new_variable();
                if (size[i] >= 3) {
                    std::vector<Literal> at_least_one;
                    for (std::uint32_t v = 0; v < size[i]; ++v) {
                        at_least_one.push_back(positive(base[i] + v));
                        for (std::uint32_t w = v + 1; w < size[i]; ++w)
                            clauses.push_back({negative(base[i] + v), negative(base[i] + w)});
                    }
                    clauses.push_back(std::move(at_least_one));
                }
            }
            auto literal = [&](std::size_t i, std::size_t v) -> Literal {
                if (size[i] == 2)
                    return v == 0 ? positive(base[i]) : negative(base[i]);
                return positive(base[i] + std::uint32_t(v));
            };

            // Forbid every injective assignment of values to the blocks of each
            // canonical partition, restricted to values every edge of the block
            // admits.
            std::vector<std::size_t> local;
            std::vector<std::vector<std::size_t>> blocks;
            std::vector<Colour> chosen;
            std::vector<Literal> clause;
            for (auto id : plan.constraints) {
                auto & c = constraints[id];
                local.clear();
                for (auto e : c.edges)
                    local.push_back(local_of(e));
                for (auto key : c.canonical_keys) {
                    blocks.clear();
                    for (std::size_t p = 0; p < c.edges.size(); ++p) {
                        auto b = std::size_t((key >> (4 * p)) & 0xf);
                        if (b >= blocks.size())
                            blocks.resize(b + 1);
                        blocks[b].push_back(p);
                    }
                    std::vector<std::vector<Colour>> candidates(blocks.size());
                    for (std::size_t b = 0; b < blocks.size(); ++b)
                        for (auto colour : domain_values(spec, c.edges[blocks[b].front()])) {
                            bool everywhere = std::all_of(blocks[b].begin(), blocks[b].end(), [&](std::size_t p) {
                                auto & values = domain_values(spec, c.edges[p]);
                                return std::find(values.begin(), values.end(), colour) != values.end();
                            });
                            if (everywhere)
                                candidates[b].push_back(colour);
                        }

                    chosen.assign(blocks.size(), 0);
                    auto assign = [&](auto & self, std::size_t b) -> bool {
                        if (b == blocks.size()) {
                            clause.clear();
                            for (std::size_t bb = 0; bb < blocks.size(); ++bb)
                                for (auto p : blocks[bb]) {
                                    auto & values = domain_values(spec, c.edges[p]);
                                    auto v = std::size_t(std::find(values.begin(), values.end(), chosen[bb]) - values.begin());
                                    clause.push_back(negate(literal(local[p], v)));
                                }
                            clauses.push_back(clause);
                            return clauses.size() <= options.max_clauses;
                        }
                        for (auto colour : candidates[b]) {
                            if (std::find(chosen.begin(), chosen.begin() + std::ptrdiff_t(b), colour) !=
                                chosen.begin() + std::ptrdiff_t(b))
                                continue;
                            chosen[b] = colour;
                            if (! self(self, b + 1))
                                return false;
                        }
                        return true;
                    };
                    if (! assign(assign, 0))
                        return std::nullopt;
                }
            }

            // With a uniform palette any permutation of the colours maps
            // solutions to solutions, so the busiest edge may take the first.
            if (spec.symmetric && m > 0) {
                std::vector<std::size_t> load(m, 0);
                for (auto id : plan.constraints)
                    for (auto e : constraints[id].edges)
                        ++load[local_of(e)];
                auto busiest = std::size_t(std::max_element(load.begin(), load.end()) - load.begin());
                clauses.push_back({literal(busiest, 0)});
            }

            bool consistent = true;
            for (auto & cl : clauses)
                if (! solver.add_clause(cl)) {
                    consistent = false;
                    break;
                }

            bool found = false;
            try {
                found = consistent &&
                    solver.solve(shared.nodes, shared.max_nodes) == ClauseSolver::Result::satisfiable;
            }
            catch (const GuardExceeded &) {
                stats.nodes += solver.decisions();
                stats.prunings += solver.conflicts();
                stats.propagations += solver.propagations();
                throw;
            }
            stats.nodes += solver.decisions();
            stats.prunings += solver.conflicts();
            stats.propagations += solver.propagations();
            if (! found)
                return false;

            for (std::size_t i = 0; i < m; ++i) {
                int label = 0;
                if (size[i] == 2)
                    label = solver.model_value(base[i]) ? 0 : 1;
                else
                    for (std::uint32_t v = 0; v < size[i]; ++v)
                        if (solver.model_value(base[i] + v)) {
                            label = int(v);
                            break;
                        }
                labels[plan.edges[i]] = label;
            }
            return true;
        }

        // Solves one component, possibly across several threads. On success the
        // labels are written into `labels` (indexed by host edge).
        auto solve_component(const ComponentPlan & plan, const std::vector<CopyConstraint> & constraints,
            const DomainSpec & spec, const SolverOptions & options, Shared & shared, SolverStatistics & stats,
            std::vector<int> & labels) -> bool
        {
            if (! spec.unrestricted && options.backend != SolverBackend::backtracking)
                if (auto answer =
                        solve_component_with_clauses(plan, constraints, spec, options, shared, stats, labels))
                    return *answer;

            ComponentSearch root{plan.edges, constraints, plan.constraints, spec, options.propagate, shared};

            auto record = [&](const ComponentSearch & s) {
                auto & sol = s.solution();
                for (std::size_t i = 0; i < sol.size(); ++i)
                    labels[s.host_edges()[i]] = sol[i];
            };

            if (options.workers <= 1 || root.edge_count() < 24) {
                bool found = root.search();
                stats += root.statistics();
                if (found)
                    record(root);
                return found;
            }

            std::vector<std::vector<std::pair<std::uint32_t, int>>> prefixes;
            std::vector<std::pair<std::uint32_t, int>> prefix;
            unsigned depth = 1;
            for (; depth <= 16; ++depth) {
                prefixes.clear();
                ComponentSearch probe = root;
                if (probe.collect_prefixes(depth, prefixes, prefix)) {
                    stats += probe.statistics();
                    record(probe);
                    return true;
                }
                if (prefixes.size() >= 4 * options.workers) {
                    stats += probe.statistics();
                    break;
                }
                if (depth == 16)
                    stats += probe.statistics();
            }
            if (prefixes.empty())
                return false;

            std::atomic<std::size_t> next{0};
            std::mutex lock;
            bool found = false;
            std::exception_ptr failure;

            auto work = [&]() {
                try {
                    while (! shared.stop.load()) {
                        auto i = next.fetch_add(1);
                        if (i >= prefixes.size())
                            break;
                        ComponentSearch worker = root;
                        bool ok = worker.replay(prefixes[i]) && worker.search();
                        std::lock_guard guard{lock};
                        stats += worker.statistics();
                        if (ok && ! found) {
                            found = true;
                            record(worker);
                            shared.stop.store(true);
                        }
                    }
                }
                catch (...) {
                    std::lock_guard guard{lock};
                    if (! failure)
                        failure = std::current_exception();
                    shared.stop.store(true);
                }
            };

            std::vector<std::jthread> threads;
            for (unsigned t = 0; t < options.workers; ++t)
                threads.emplace_back(work);
            threads.clear();

            if (found) {
                shared.stop.store(false);
                return true;
            }
            if (failure)
                std::rethrow_exception(failure);
            return false;
        }

        auto solve(std::size_t host_edges, const std::vector<CopyConstraint> & constraints,
            const std::function<DomainSpec(const ComponentPlan &)> & make_spec,
            const std::function<Colour(EdgeIndex, int)> & colour_of_label, const SolverOptions & options)
            -> SolverResult
        {
            SolverResult result;
            result.statistics.copies = constraints.size();

            // A pattern without edges is canonical in every copy.
            for (auto & c : constraints)
                if (c.edges.empty()) {
                    result.outcome = Outcome::none_exists;
                    return result;
                }

            auto plans = split_components(host_edges, constraints);
            result.statistics.components = plans.size();

            Shared shared;
            shared.max_nodes = options.max_nodes;
            std::vector<int> labels(host_edges, 0);
            for (auto & plan : plans) {
                auto spec = make_spec(plan);
                if (! solve_component(plan, constraints, spec, options, shared, result.statistics, labels)) {
                    result.outcome = Outcome::none_exists;
                    return result;
                }
            }

            std::vector<Colour> colours(host_edges);
            for (EdgeIndex e = 0; e < host_edges; ++e)
                colours[e] = colour_of_label(e, labels[e]);
            result.outcome = Outcome::avoiding_colouring_found;
            result.certificate = Colouring{std::move(colours)};
            return result;
        }

        auto distinct_lists(const ListAssignment & lists) -> std::vector<std::vector<Colour>>
        {
            std::vector<std::vector<Colour>> result;
            result.reserve(lists.size());
            for (auto & l : lists.lists()) {
                std::vector<Colour> d;
                for (auto c : l)
                    if (std::find(d.begin(), d.end(), c) == d.end())
                        d.push_back(c);
                if (d.size() > max_labels)
                    throw DomainError("lists with more than 64 distinct colours are not supported");
                result.push_back(std::move(d));
            }
            return result;
        }

        // Solves the list problem for fixed constraints.
        auto solve_with_lists(std::size_t host_edges, const std::vector<CopyConstraint> & constraints,
            const ListAssignment & lists, const SolverOptions & options) -> SolverResult
        {
            auto values = distinct_lists(lists);
            if (lists.uniform() && ! values.empty()) {
                auto palette = values.front();
                std::sort(palette.begin(), palette.end());
                DomainSpec spec;
                spec.symmetric = true;
                spec.label_cap = unsigned(palette.size());
                spec.label_colours = palette;
                return solve(
                    host_edges, constraints, [&](const ComponentPlan &) { return spec; },
                    [&](EdgeIndex, int label) { return palette[label]; }, options);
            }

            DomainSpec spec;
            spec.lists = &values;
            return solve(
                host_edges, constraints, [&](const ComponentPlan &) { return spec; },
                [&](EdgeIndex e, int label) { return values[e][label]; }, options);
        }

        auto solve_unrestricted(std::size_t host_edges, const std::vector<CopyConstraint> & constraints,
            const SolverOptions & options) -> SolverResult
        {
            return solve(
                host_edges, constraints,
                [&](const ComponentPlan & plan) {
                    if (plan.edges.size() > max_labels)
                        throw GuardExceeded("unrestricted search limited to components of 64 edges", max_labels,
                            plan.edges.size());
                    DomainSpec spec;
                    spec.symmetric = true;
                    spec.unrestricted = true;
                    spec.label_cap = unsigned(plan.edges.size());
                    spec.label_colours.resize(spec.label_cap);
                    std::iota(spec.label_colours.begin(), spec.label_colours.end(), Colour{0});
                    return spec;
                },
                [](EdgeIndex, int label) { return Colour(label); }, options);
        }

        void check_instance(const KGraph & host, const KGraph & pattern)
        {
            if (pattern.uniformity() != host.uniformity())
                throw UniformityMismatch(pattern.uniformity(), host.uniformity());
        }
    }

    auto find_avoiding_colouring(const AvoidanceInstance & instance, const SolverOptions & options) -> SolverResult
    {
        check_instance(instance.host, instance.pattern);
        instance.lists.check_total(instance.host);
        CanonicalPartitions partitions{instance.pattern, instance.sigma};
        CopyIndex index{instance.pattern, instance.host, options.max_embeddings};
        auto constraints = index.constraints(partitions, options.mode);
        return solve_with_lists(instance.host.edge_count(), constraints, instance.lists, options);
    }

    auto ordering_representatives(const KGraph & pattern, CopyMode mode, std::uint64_t max_orderings)
        -> std::vector<Ordering>
    {
        auto v = pattern.vertex_count();
        std::uint64_t total = 1;
        for (Vertex i = 2; i <= v; ++i) {
            total *= i;
            if (total > max_orderings)
                throw GuardExceeded("too many orderings of the pattern", max_orderings, total);
        }

        std::vector<std::vector<Vertex>> automorphisms;
        if (mode == CopyMode::any_embedding && v <= 8) {
            enumerate_copies(pattern, pattern, [&](const Embedding & emb, std::span<const EdgeIndex>) {
                automorphisms.push_back(emb.vertex_map);
                return true;
            });
        }
        else {
            std::vector<Vertex> identity(v);
            std::iota(identity.begin(), identity.end(), Vertex{0});
            automorphisms.push_back(std::move(identity));
        }

        std::vector<Ordering> result;
        std::vector<Vertex> order(v), image(v);
        std::iota(order.begin(), order.end(), Vertex{0});
        do {
            bool representative = true;
            for (auto & alpha : automorphisms) {
                for (Vertex i = 0; i < v; ++i)
                    image[i] = alpha[order[i]];
                if (image < order || std::lexicographical_compare(image.rbegin(), image.rend(), order.begin(), order.end())) {
                    representative = false;
                    break;
                }
            }
            if (representative)
                result.emplace_back(order);
        } while (std::next_permutation(order.begin(), order.end()));
        return result;
    }

    namespace
    {
        template <typename Solve>
        auto decide_over_orderings(const KGraph & host, const KGraph & pattern, const SolverOptions & options,
            const Solve & solve_for, const std::function<Colouring()> & trivial_colouring) -> CanarrowReport
        {
            check_instance(host, pattern);
            CanarrowReport report;
            auto orderings = ordering_representatives(pattern, options.mode);

            CopyIndex index{pattern, host, options.max_embeddings};
            if (index.copy_count() == 0) {
                report.holds = false;
                report.avoided_ordering = orderings.front();
                report.certificate = trivial_colouring();
                return report;
            }

            // Orderings whose canonical partitions agree up to automorphisms of
            // the pattern give identical constraints on every host; solve one
            // per class. Fewer partitions constrain less, so those go first as
            // the likeliest to admit an avoiding colouring.
            std::vector<std::pair<std::vector<PartitionKey>, std::size_t>> plan;
            std::vector<CanonicalPartitions> partitions;
            CopyIndex self{pattern, pattern, options.max_embeddings};
            for (std::size_t i = 0; i < orderings.size(); ++i) {
                partitions.emplace_back(pattern, orderings[i]);
                auto signature = options.mode == CopyMode::any_embedding
                    ? self.constraints(partitions.back(), options.mode).front().canonical_keys
                    : partitions.back().keys();
                plan.emplace_back(std::move(signature), i);
            }
            std::stable_sort(plan.begin(), plan.end(), [](auto & a, auto & b) {
                return a.first.size() != b.first.size() ? a.first.size() < b.first.size() : a.first < b.first;
            });
            plan.erase(std::unique(plan.begin(), plan.end(), [](auto & a, auto & b) { return a.first == b.first; }),
                plan.end());

            for (auto & [signature, i] : plan) {
                auto result = solve_for(index.constraints(partitions[i], options.mode));
                ++report.orderings_checked;
                report.statistics += result.statistics;
                if (result.outcome == Outcome::avoiding_colouring_found) {
                    report.holds = false;
                    report.avoided_ordering = orderings[i];
                    report.certificate = std::move(result.certificate);
                    return report;
                }
            }
            report.holds = true;
            return report;
        }
    }

    auto decide_canarrow_lists(const KGraph & host, const KGraph & pattern, const ListAssignment & lists,
        const SolverOptions & options) -> CanarrowReport
    {
        lists.check_total(host);
        return decide_over_orderings(
            host, pattern, options,
            [&](const std::vector<CopyConstraint> & constraints) {
                return solve_with_lists(host.edge_count(), constraints, lists, options);
            },
            [&]() {
                std::vector<Colour> colours;
                for (auto & l : lists.lists())
                    colours.push_back(l.front());
                return Colouring{std::move(colours)};
            });
    }

    auto decide_canarrow_unrestricted(const KGraph & host, const KGraph & pattern, const SolverOptions & options)
        -> CanarrowReport
    {
        return decide_over_orderings(
            host, pattern, options,
            [&](const std::vector<CopyConstraint> & constraints) {
                return solve_unrestricted(host.edge_count(), constraints, options);
            },
            [&]() { return Colouring::constant(host, 0); });
    }

    auto canonical_ramsey_number(const KGraph & pattern, Vertex n_max, const SolverOptions & options)
        -> RamseyNumberResult
    {
        RamseyNumberResult result;
        result.lower_bound = pattern.vertex_count();
        for (Vertex n = pattern.vertex_count(); n <= n_max; ++n) {
            try {
                if (decide_canarrow_unrestricted(complete_graph(n, pattern.uniformity()), pattern, options).holds) {
                    result.value = n;
                    result.lower_bound = n;
                    return result;
                }
            }
            catch (const GuardExceeded &) {
                result.lower_bound = n;
                result.guard_exceeded = true;
                return result;
            }
            result.lower_bound = n + 1;
        }
        return result;
    }
}
