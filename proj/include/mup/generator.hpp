#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "goal.hpp"
#include "parser.hpp"
#include "printer.hpp"
#include "term.hpp"

namespace mup {

struct GeneratorConfig {
    int max_clauses = 6;
    int max_body_depth = 3;
    int max_term_depth = 2;
    double choice_body_probability = 0.5;
    double classical_or_probability = 0.1;
    double unit_clause_probability = 0.3;
};

// A generated program with one query, kept as text so that a failing case
// can be reported verbatim.
struct RandomCase {
    std::string program_text;
    std::string query_text;
    Program program;
    Query query;
};

// A generated program with two goals over the same variables X and Y.
struct RandomTriple {
    std::string program_text;
    std::string left_text;
    std::string right_text;
    Program program;
    GoalPtr left;
    GoalPtr right;
    GoalPtr choice;
    std::vector<Term> answer_vars;
};

//
// Seeded generator of small programs over predicates p/0, p/1, p/2 and q/1,
// constants a, b, c and the function symbol f/1. Small enough for exhaustive
// oracle search, varied enough to reach every goal connective.
//
class ProgramGenerator {
public:
    explicit ProgramGenerator(std::uint64_t seed, GeneratorConfig cfg = {}) : rng_(seed), cfg_(cfg) {}

    std::string program_text() {
        std::string text;
        int n = uniform(1, cfg_.max_clauses);
        for (int i = 0; i < n; ++i) {
            VarSource vars;
            std::vector<Term> pool{vars.fresh("X"), vars.fresh("Y"), vars.fresh("Z")};
            Clause c;
            c.head = atom(pool);
            if (!chance(cfg_.unit_clause_probability)) {
                if (chance(cfg_.choice_body_probability))
                    c.body = goals::choice(goal(cfg_.max_body_depth - 1, pool, true),
                                           goal(cfg_.max_body_depth - 1, pool, true));
                else
                    c.body = goal(cfg_.max_body_depth, pool, false);
            }
            text += to_string(c) + "\n";
        }
        return text;
    }

    RandomCase next_case() {
        RandomCase rc;
        rc.program_text = program_text();
        rc.program = parse_program(rc.program_text);
        VarSource vars{rc.program.var_ceiling()};
        std::vector<Term> pool{vars.fresh("X"), vars.fresh("Y")};
        GoalPtr q = goals::call(atom(pool));
        if (chance(0.2))
            q = goals::conj(q, goals::call(atom(pool)));
        rc.query_text = to_string(*q) + ".";
        rc.query = parse_query(rc.query_text, {}, rc.program.var_ceiling());
        return rc;
    }

    RandomTriple next_triple() {
        RandomTriple rt;
        rt.program_text = program_text();
        rt.program = parse_program(rt.program_text);
        VarSource vars;
        std::vector<Term> pool{vars.fresh("X"), vars.fresh("Y")};
        rt.left_text = to_string(*goal(2, pool, true));
        rt.right_text = to_string(*goal(2, pool, true));
        // Parsing both as one query gives the two goals shared variables.
        Query q = parse_query("(" + rt.left_text + ") # (" + rt.right_text + ").", {}, rt.program.var_ceiling());
        rt.choice = q.goal;
        rt.left = q.goal->first;
        rt.right = q.goal->second;
        rt.answer_vars = q.answer_vars;
        return rt;
    }

private:
    bool chance(double p) { return std::bernoulli_distribution(p)(rng_); }
    int uniform(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }

    template <typename T>
    const T &pick(const std::vector<T> &v) {
        return v[static_cast<std::size_t>(uniform(0, static_cast<int>(v.size()) - 1))];
    }

    Term term(int depth, const std::vector<Term> &pool) {
        double r = std::uniform_real_distribution<double>(0.0, 1.0)(rng_);
        if (depth > 0 && r < 0.15)
            return Term::compound("f", {term(depth - 1, pool)});
        if (r < 0.6)
            return pick(pool);
        static const std::vector<std::string> constants{"a", "b", "c"};
        return Term::atom(pick(constants));
    }

    Term atom(const std::vector<Term> &pool) {
        static const std::vector<std::pair<std::string, int>> preds{{"p", 0}, {"p", 1}, {"p", 2}, {"q", 1}};
        const auto &[name, arity] = pick(preds);
        std::vector<Term> args;
        for (int i = 0; i < arity; ++i)
            args.push_back(term(cfg_.max_term_depth, pool));
        return Term::compound(name, std::move(args));
    }

    GoalPtr goal(int depth, const std::vector<Term> &pool, bool allow_choice) {
        if (depth <= 0 || chance(0.45)) {
            if (chance(0.8))
                return goals::call(atom(pool));
            return goals::eq(term(1, pool), term(1, pool));
        }
        double r = std::uniform_real_distribution<double>(0.0, 1.0)(rng_);
        GoalPtr l = goal(depth - 1, pool, allow_choice);
        GoalPtr rr = goal(depth - 1, pool, allow_choice);
        if (r < cfg_.classical_or_probability)
            return goals::classical_or(l, rr);
        if (allow_choice && r < 0.55)
            return goals::choice(l, rr);
        return goals::conj(l, rr);
    }

    std::mt19937_64 rng_;
    GeneratorConfig cfg_;
};

} // namespace mup
