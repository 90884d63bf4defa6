#pragma once

#include <atomic>
#include <cstdint>
#include <span>
#include <vector>

namespace canram
{
    // Literal 2v is variable v, 2v + 1 its negation.
    using Literal = std::uint32_t;

    inline auto positive(std::uint32_t var) -> Literal { return 2 * var; }
    inline auto negative(std::uint32_t var) -> Literal { return 2 * var + 1; }
    inline auto negate(Literal l) -> Literal { return l ^ 1; }
    inline auto variable_of(Literal l) -> std::uint32_t { return l >> 1; }

    // A conflict-driven clause learning SAT solver: two watched literals,
    // first-UIP learning with clause minimisation, VSIDS branching with phase
    // saving, Luby restarts, and LBD-based deletion of learnt clauses.
    class ClauseSolver
    {
    public:
        explicit ClauseSolver(std::uint32_t variables = 0);

        auto new_variable() -> std::uint32_t;
        auto variable_count() const -> std::uint32_t { return std::uint32_t(_value.size()); }

        // False once the formula is known to be unsatisfiable.
        auto add_clause(std::span<const Literal> clause) -> bool;

        enum class Result
        {
            satisfiable,
            unsatisfiable
        };

        // Each decision and each conflict is charged to `work`; GuardExceeded
        // is thrown once it passes `limit`.
        auto solve(std::atomic<std::uint64_t> & work, std::uint64_t limit) -> Result;

        // After a satisfiable result.
        auto model_value(std::uint32_t var) const -> bool { return _model[var]; }

        auto conflicts() const -> std::uint64_t { return _conflicts; }
        auto decisions() const -> std::uint64_t { return _decisions; }
        auto propagations() const -> std::uint64_t { return _propagations; }

    private:
        static constexpr std::uint32_t no_reason = ~std::uint32_t{0};

        struct Clause
        {
            std::vector<Literal> literals;
            bool learnt = false;
            bool deleted = false;
            std::uint32_t lbd = 0;
            double activity = 0.0;
        };

        struct Watch
        {
            std::uint32_t clause;
            Literal blocker;
        };

        // 0 false, 1 true, 2 unassigned
        auto value(Literal l) const -> std::uint8_t
        {
            auto v = _value[variable_of(l)];
            return v == 2 ? 2 : std::uint8_t(v ^ (l & 1));
        }

        auto level() const -> std::uint32_t { return std::uint32_t(_trail_limits.size()); }

        void enqueue(Literal l, std::uint32_t reason);
        auto propagate() -> std::uint32_t;
        void analyse(std::uint32_t conflict, std::vector<Literal> & learnt, std::uint32_t & backjump);
        auto redundant(Literal l, std::uint32_t abstract_levels) -> bool;
        void backtrack(std::uint32_t to_level);
        auto attach(std::vector<Literal> literals, bool learnt) -> std::uint32_t;
        void reduce_learnts();
        auto pick_branch() -> Literal;
        void bump(std::uint32_t var);
        auto compute_lbd(std::span<const Literal> literals) -> std::uint32_t;

        void heap_insert(std::uint32_t var);
        auto heap_pop() -> std::uint32_t;
        void heap_up(std::size_t i);
        void heap_down(std::size_t i);

        std::vector<Clause> _clauses;
        std::vector<std::vector<Watch>> _watches;
        std::vector<std::uint8_t> _value;
        std::vector<std::uint8_t> _phase;
        std::vector<std::uint32_t> _level;
        std::vector<std::uint32_t> _reason;
        std::vector<Literal> _trail;
        std::vector<std::size_t> _trail_limits;
        std::size_t _queue_head = 0;

        std::vector<double> _activity;
        double _var_increment = 1.0;
        double _clause_increment = 1.0;
        std::vector<std::uint32_t> _heap;
        std::vector<std::int64_t> _heap_index;

        std::vector<std::uint8_t> _seen;
        std::vector<std::uint32_t> _level_stamp;
        std::uint32_t _stamp = 0;
        std::vector<Literal> _analyse_stack;
        std::vector<Literal> _analyse_clear;

        std::size_t _learnt_count = 0;
        std::size_t _max_learnts = 0;
        bool _inconsistent = false;
        std::vector<bool> _model;
        std::uint64_t _conflicts = 0;
        std::uint64_t _decisions = 0;
        std::uint64_t _propagations = 0;
    };
}
