#pragma once

#include <random>
#include <string>
#include <vector>

#include "plp/grounder.hpp"
#include "plp/inference.hpp"
#include "plp/parser.hpp"
#include "plp/semantics.hpp"

namespace testing {

inline plp::Atom atom(const std::string &text) { return plp::parse_query(text).positives.at(0); }

inline plp::Term term(const std::string &text) { return atom("t(" + text + ")").args.at(0); }

inline plp::Rule rule(const std::string &text) { return plp::parse_program(text).rules.at(0); }

/// Ground literals of a query body: positive atoms and single-atom negations.
inline std::vector<plp::GroundLiteral> literals(const std::string &text) {
    const auto q = plp::parse_query(text);
    std::vector<plp::GroundLiteral> out;
    for (const auto &a : q.positives)
        out.push_back({false, plp::normalize_ground_atom(a)});
    for (const auto &el : q.neg_elements)
        out.push_back({true, plp::normalize_ground_atom(el.at(0))});
    return out;
}

inline plp::GroundProgram ground_text(const std::string &program, const std::string &query, std::int64_t eot,
                                      bool guided) {
    const auto p = plp::parse_program(program);
    return plp::ground(p.rules, query.empty() ? std::vector<plp::GroundLiteral>{} : literals(query),
                       {eot, guided});
}

inline std::vector<plp::Lit> resolve(const plp::GroundProgram &g, const std::string &query) {
    auto lits = plp::resolve_literals(g, literals(query));
    return lits ? *lits : std::vector<plp::Lit>{};
}

/// Success probability by exhaustive enumeration; atoms missing from the
/// grounding make positive queries fail.
inline double oracle(const std::string &program, const std::string &query, std::int64_t eot, bool guided) {
    const auto g = ground_text(program, query, eot, guided);
    auto lits = plp::resolve_literals(g, literals(query));
    if (!lits)
        return 0.0;
    return plp::success_probability(g, *lits);
}

inline double ve_prob(const std::string &program, const std::string &query, std::int64_t eot, bool guided,
                      plp::VeOptions options = {}) {
    const auto g = ground_text(program, query, eot, guided);
    auto lits = plp::resolve_literals(g, literals(query));
    if (!lits)
        return 0.0;
    return plp::ve(plp::disjoint_transform(g), *lits, options);
}

inline plp::QueryResult answer(const std::string &program, std::size_t index = 0, bool guided = true) {
    const auto p = plp::parse_program(program);
    plp::QueryOptions opt;
    opt.eot = plp::default_eot(p, p.queries.at(index));
    opt.guided = guided;
    return plp::answer_conditional(p.rules, p.queries.at(index), opt);
}

inline plp::QueryResult answer_query(const std::string &program, const std::string &query, bool guided = true,
                                     bool oracle = false) {
    auto p = plp::parse_program(program);
    p.queries.push_back(plp::parse_query(query));
    plp::QueryOptions opt;
    opt.eot = plp::default_eot(p, p.queries.back());
    opt.guided = guided;
    opt.oracle = oracle;
    return plp::answer_conditional(p.rules, p.queries.back(), opt);
}

std::string read_file(const std::string &path);

/// Seeded generator for property tests.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}
    int below(int n) { return std::uniform_int_distribution<int>(0, n - 1)(engine_); }
    bool chance(int percent) { return below(100) < percent; }

private:
    std::mt19937_64 engine_;
};

} // namespace testing
