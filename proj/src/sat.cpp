#include <canram/errors.hpp>
#include <canram/sat.hpp>

#include <algorithm>

namespace canram
{
    namespace
    {
        auto luby(std::uint64_t i) -> std::uint64_t
        {
            // Finds the finite subsequence containing index i, then its position.
            std::uint64_t size = 1, seq = 0;
            while (size < i + 1) {
                ++seq;
                size = 2 * size + 1;
            }
            while (size - 1 != i) {
                size = (size - 1) >> 1;
                --seq;
                i = i % size;
            }
            return std::uint64_t{1} << seq;
        }
    }

    ClauseSolver::ClauseSolver(std::uint32_t variables)
    {
        for (std::uint32_t v = 0; v < variables; ++v)
            new_variable();
    }

    auto ClauseSolver::new_variable() -> std::uint32_t
    {
        auto v = std::uint32_t(_value.size());
        _value.push_back(2);
        _phase.push_back(0);
        _level.push_back(0);
        _reason.push_back(no_reason);
        _activity.push_back(0.0);
        _seen.push_back(0);
        _heap_index.push_back(-1);
        _watches.emplace_back();
        _watches.emplace_back();
        heap_insert(v);
        return v;
    }

    auto ClauseSolver::add_clause(std::span<const Literal> clause) -> bool
    {
        if (_inconsistent)
            return false;
        std::vector<Literal> literals(clause.begin(), clause.end());
        for (auto l : literals)
            if (variable_of(l) >= variable_count())
                throw DomainError("literal refers to unknown variable " + std::to_string(variable_of(l)));
        std::sort(literals.begin(), literals.end());
        literals.erase(std::unique(literals.begin(), literals.end()), literals.end());

        std::size_t kept = 0;
        for (std::size_t i = 0; i < literals.size(); ++i) {
            auto l = literals[i];
            if (i + 1 < literals.size() && literals[i + 1] == negate(l))
                return true;
            auto v = value(l);
            if (v == 1)
                return true;
            if (v == 2)
                literals[kept++] = l;
        }
        literals.resize(kept);

        if (literals.empty()) {
            _inconsistent = true;
            return false;
        }
        if (literals.size() == 1) {
            enqueue(literals.front(), no_reason);
            if (propagate() != no_reason)
                _inconsistent = true;
            return ! _inconsistent;
        }
        attach(std::move(literals), false);
        return true;
    }

    auto ClauseSolver::attach(std::vector<Literal> literals, bool learnt) -> std::uint32_t
    {
        auto index = std::uint32_t(_clauses.size());
        _watches[literals[0]].push_back({index, literals[1]});
        _watches[literals[1]].push_back({index, literals[0]});
        Clause c;
        c.literals = std::move(literals);
        c.learnt = learnt;
        _clauses.push_back(std::move(c));
        if (learnt)
            ++_learnt_count;
        return index;
    }

    void ClauseSolver::enqueue(Literal l, std::uint32_t reason)
    {
        auto v = variable_of(l);
        _value[v] = (l & 1) ? 0 : 1;
        _level[v] = level();
        _reason[v] = reason;
        _trail.push_back(l);
    }

    auto ClauseSolver::propagate() -> std::uint32_t
    {
        while (_queue_head < _trail.size()) {
            auto false_literal = negate(_trail[_queue_head++]);
            ++_propagations;
            auto & watches = _watches[false_literal];
            std::size_t i = 0, j = 0;
            while (i < watches.size()) {
                auto w = watches[i++];
                auto & clause = _clauses[w.clause];
                if (clause.deleted)
                    continue;
                if (value(w.blocker) == 1) {
                    watches[j++] = w;
                    continue;
                }
                auto & c = clause.literals;
                if (c[0] == false_literal)
                    std::swap(c[0], c[1]);
                auto first = c[0];
                if (first != w.blocker && value(first) == 1) {
                    watches[j++] = {w.clause, first};
                    continue;
                }

                bool moved = false;
                for (std::size_t k = 2; k < c.size(); ++k)
                    if (value(c[k]) != 0) {
                        std::swap(c[1], c[k]);
                        _watches[c[1]].push_back({w.clause, first});
                        moved = true;
                        break;
                    }
                if (moved)
                    continue;

                watches[j++] = w;
                if (value(first) == 0) {
                    while (i < watches.size())
                        watches[j++] = watches[i++];
                    watches.resize(j);
                    _queue_head = _trail.size();
                    return w.clause;
                }
                enqueue(first, w.clause);
            }
            watches.resize(j);
        }
        return no_reason;
    }

    auto ClauseSolver::redundant(Literal p, std::uint32_t abstract_levels) -> bool
    {
        _analyse_stack.clear();
        _analyse_stack.push_back(p);
        auto top = _analyse_clear.size();
        while (! _analyse_stack.empty()) {
            auto q = _analyse_stack.back();
            _analyse_stack.pop_back();
            auto & c = _clauses[_reason[variable_of(q)]].literals;
            for (std::size_t i = 1; i < c.size(); ++i) {
                auto v = variable_of(c[i]);
                if (_seen[v] || _level[v] == 0)
                    continue;
                if (_reason[v] != no_reason && ((std::uint32_t{1} << (_level[v] & 31)) & abstract_levels)) {
                    _seen[v] = 1;
                    _analyse_stack.push_back(c[i]);
                    _analyse_clear.push_back(c[i]);
                }
                else {
                    for (auto k = top; k < _analyse_clear.size(); ++k)
                        _seen[variable_of(_analyse_clear[k])] = 0;
                    _analyse_clear.resize(top);
                    return false;
                }
            }
        }
        return true;
    }

    void ClauseSolver::analyse(std::uint32_t conflict, std::vector<Literal> & learnt, std::uint32_t & backjump)
    {
        learnt.clear();
        learnt.push_back(0);
        std::uint32_t open = 0;
        Literal p = 0;
        bool have_p = false;
        auto index = _trail.size();
        auto reason = conflict;

        do {
            auto & clause = _clauses[reason];
            if (clause.learnt) {
                clause.activity += _clause_increment;
                if (clause.activity > 1e20) {
                    for (auto & c : _clauses)
                        c.activity *= 1e-20;
                    _clause_increment *= 1e-20;
                }
            }
            for (std::size_t i = have_p ? 1 : 0; i < clause.literals.size(); ++i) {
                auto q = clause.literals[i];
                auto v = variable_of(q);
                if (_seen[v] || _level[v] == 0)
                    continue;
                bump(v);
                _seen[v] = 1;
                if (_level[v] >= level())
                    ++open;
                else
                    learnt.push_back(q);
            }
            while (! _seen[variable_of(_trail[--index])])
                ;
            p = _trail[index];
            have_p = true;
            reason = _reason[variable_of(p)];
            _seen[variable_of(p)] = 0;
            --open;
        } while (open > 0);
        learnt[0] = negate(p);

        std::uint32_t abstract_levels = 0;
        for (std::size_t i = 1; i < learnt.size(); ++i)
            abstract_levels |= std::uint32_t{1} << (_level[variable_of(learnt[i])] & 31);
        _analyse_clear.assign(learnt.begin(), learnt.end());
        std::size_t kept = 1;
        for (std::size_t i = 1; i < learnt.size(); ++i)
            if (_reason[variable_of(learnt[i])] == no_reason || ! redundant(learnt[i], abstract_levels))
                learnt[kept++] = learnt[i];
        learnt.resize(kept);

        backjump = 0;
        if (learnt.size() > 1) {
            std::size_t best = 1;
            for (std::size_t i = 2; i < learnt.size(); ++i)
                if (_level[variable_of(learnt[i])] > _level[variable_of(learnt[best])])
                    best = i;
            std::swap(learnt[1], learnt[best]);
            backjump = _level[variable_of(learnt[1])];
        }

        for (auto l : _analyse_clear)
            _seen[variable_of(l)] = 0;
        _analyse_clear.clear();
    }

    void ClauseSolver::backtrack(std::uint32_t to_level)
    {
        if (level() <= to_level)
            return;
        for (auto i = _trail.size(); i-- > _trail_limits[to_level];) {
            auto v = variable_of(_trail[i]);
            _phase[v] = _value[v];
            _value[v] = 2;
            _reason[v] = no_reason;
            if (_heap_index[v] < 0)
                heap_insert(v);
        }
        _trail.resize(_trail_limits[to_level]);
        _trail_limits.resize(to_level);
        _queue_head = _trail.size();
    }

    auto ClauseSolver::compute_lbd(std::span<const Literal> literals) -> std::uint32_t
    {
        if (_level_stamp.size() <= level())
            _level_stamp.resize(level() + 1, 0);
        ++_stamp;
        std::uint32_t count = 0;
        for (auto l : literals) {
            auto lv = _level[variable_of(l)];
            if (_level_stamp[lv] != _stamp) {
                _level_stamp[lv] = _stamp;
                ++count;
            }
        }
        return count;
    }

    void ClauseSolver::reduce_learnts()
    {
        std::vector<std::uint32_t> candidates;
        for (std::uint32_t i = 0; i < _clauses.size(); ++i) {
            auto & c = _clauses[i];
            if (! c.learnt || c.deleted || c.lbd <= 2)
                continue;
            auto v = variable_of(c.literals[0]);
            bool locked = _reason[v] == i && value(c.literals[0]) == 1;
            if (! locked)
                candidates.push_back(i);
        }
        std::sort(candidates.begin(), candidates.end(), [&](auto a, auto b) {
            if (_clauses[a].lbd != _clauses[b].lbd)
                return _clauses[a].lbd > _clauses[b].lbd;
            return _clauses[a].activity < _clauses[b].activity;
        });
        for (std::size_t i = 0; i < candidates.size() / 2; ++i) {
            auto & c = _clauses[candidates[i]];
            c.deleted = true;
            c.literals.clear();
            c.literals.shrink_to_fit();
            --_learnt_count;
        }
    }

    void ClauseSolver::bump(std::uint32_t var)
    {
        _activity[var] += _var_increment;
        if (_activity[var] > 1e100) {
            for (auto & a : _activity)
                a *= 1e-100;
            _var_increment *= 1e-100;
        }
        if (_heap_index[var] >= 0)
            heap_up(std::size_t(_heap_index[var]));
    }

    auto ClauseSolver::pick_branch() -> Literal
    {
        while (! _heap.empty()) {
            auto v = heap_pop();
            if (_value[v] == 2)
                return _phase[v] == 1 ? positive(v) : negative(v);
        }
        return ~Literal{0};
    }

    void ClauseSolver::heap_insert(std::uint32_t var)
    {
        _heap_index[var] = std::int64_t(_heap.size());
        _heap.push_back(var);
        heap_up(_heap.size() - 1);
    }

    auto ClauseSolver::heap_pop() -> std::uint32_t
    {
        auto top = _heap.front();
        _heap_index[top] = -1;
        auto last = _heap.back();
        _heap.pop_back();
        if (! _heap.empty()) {
            _heap[0] = last;
            _heap_index[last] = 0;
            heap_down(0);
        }
        return top;
    }

    void ClauseSolver::heap_up(std::size_t i)
    {
        auto v = _heap[i];
        while (i > 0) {
            auto parent = (i - 1) / 2;
            if (_activity[_heap[parent]] >= _activity[v])
                break;
            _heap[i] = _heap[parent];
            _heap_index[_heap[i]] = std::int64_t(i);
            i = parent;
        }
        _heap[i] = v;
        _heap_index[v] = std::int64_t(i);
    }

    void ClauseSolver::heap_down(std::size_t i)
    {
        auto v = _heap[i];
        while (true) {
            auto child = 2 * i + 1;
            if (child >= _heap.size())
                break;
            if (child + 1 < _heap.size() && _activity[_heap[child + 1]] > _activity[_heap[child]])
                ++child;
            if (_activity[_heap[child]] <= _activity[v])
                break;
            _heap[i] = _heap[child];
            _heap_index[_heap[i]] = std::int64_t(i);
            i = child;
        }
        _heap[i] = v;
        _heap_index[v] = std::int64_t(i);
    }

    auto ClauseSolver::solve(std::atomic<std::uint64_t> & work, std::uint64_t limit) -> Result
    {
        auto charge = [&]() {
            auto total = work.fetch_add(1, std::memory_order_relaxed) + 1;
            if (total > limit)
                throw GuardExceeded("search node limit reached", limit, total);
        };

        if (_inconsistent || propagate() != no_reason) {
            _inconsistent = true;
            return Result::unsatisfiable;
        }
        _max_learnts = _clauses.size() / 3 + 2000;

        std::vector<Literal> learnt;
        for (std::uint64_t restart = 0;; ++restart) {
            auto budget = luby(restart) * 100;
            std::uint64_t local_conflicts = 0;
            while (true) {
                auto conflict = propagate();
                if (conflict != no_reason) {
                    ++_conflicts;
                    ++local_conflicts;
                    charge();
                    if (level() == 0) {
                        _inconsistent = true;
                        return Result::unsatisfiable;
                    }
                    std::uint32_t backjump;
                    analyse(conflict, learnt, backjump);
                    auto lbd = compute_lbd(learnt);
                    backtrack(backjump);
                    if (learnt.size() == 1)
                        enqueue(learnt[0], no_reason);
                    else {
                        auto index = attach(learnt, true);
                        _clauses[index].lbd = lbd;
                        _clauses[index].activity = _clause_increment;
                        enqueue(learnt[0], index);
                    }
                    _var_increment /= 0.95;
                    _clause_increment /= 0.999;
                    continue;
                }

                if (local_conflicts >= budget) {
                    backtrack(0);
                    break;
                }
                if (_learnt_count >= _max_learnts + _trail.size()) {
                    reduce_learnts();
                    _max_learnts += _max_learnts / 10;
                }
                auto next = pick_branch();
                if (next == ~Literal{0}) {
                    _model.assign(_value.size(), false);
                    for (std::size_t v = 0; v < _value.size(); ++v)
                        _model[v] = _value[v] == 1;
                    backtrack(0);
                    return Result::satisfiable;
                }
                ++_decisions;
                charge();
                _trail_limits.push_back(_trail.size());
                enqueue(next, no_reason);
            }
        }
    }
}
