#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "plp/ground.hpp"
#include "plp/grounder.hpp"
#include "plp/parser.hpp"

namespace plp {

/// Replaces every head with several rules by indicator atoms so that the
/// bodies defining one atom become pairwise inconsistent. With `cautious`,
/// heads whose bodies are already pairwise inconsistent are left alone.
GroundProgram disjoint_transform(const GroundProgram &g, bool cautious = false);

struct VeOptions {
    bool pruning = true;
    bool caching = true;
    bool instrument = false;
};

struct VeStats {
    std::size_t inner_calls = 0;
    std::size_t cache_hits = 0;
    std::size_t pruned = 0;
    /// Largest number of times one probabilistic fact was multiplied in along
    /// a single recursion branch (only with VeOptions::instrument).
    std::size_t max_fact_multiplicity = 0;
};

/// Probability of the conjunction `query` in a disjoint ground program.
/// Atoms outside the program are false.
double ve(const GroundProgram &g, std::span<const Lit> query, const VeOptions &options = {},
          VeStats *stats = nullptr);

/// Maps ground literals to literals of `g`. Returns nullopt if a positive
/// literal names an atom that does not occur in `g`; negative literals over
/// such atoms are dropped.
std::optional<std::vector<Lit>> resolve_literals(const GroundProgram &g, std::span<const GroundLiteral> lits);

struct QueryOptions {
    std::optional<std::int64_t> eot;
    bool guided = true;
    bool oracle = false;
    bool cautious_disjointing = false;
    VeOptions ve;
};

struct StageStats {
    std::string stage;
    std::size_t rules = 0;
    std::size_t prob_facts = 0;
    std::size_t domain = 0;
    double seconds = 0.0;
};

struct Answer {
    Substitution subst;
    double prob = 0.0;
};

struct QueryResult {
    std::vector<Answer> answers;
    /// Answer variables in first-occurrence order; empty for ground queries.
    std::vector<std::string> variables;
    double evidence_prob = 1.0;
    std::int64_t eot = 0;
    std::vector<StageStats> stages;
    VeStats ve;
};

/// Default end of time: the `eot` config entry, else the largest time point
/// mentioned by the query or its evidence.
std::int64_t default_eot(const SourceProgram &program, const InputQuery &query);

/// Answers `B | E` by staged grounding: the evidence alone, the query with
/// the evidence, and one grounding per answer candidate. Answers with
/// probability 0 are dropped unless the query is ground.
/// Throws Error(ZeroEvidence) if P(E) = 0.
QueryResult answer_conditional(const std::vector<Rule> &rules, const InputQuery &query,
                               const QueryOptions &options);

/// `P :: [X = v, ...]`, or `P` alone when there are no variables.
std::string format_answer(const Answer &answer, const std::vector<std::string> &variables, int precision = 6);

/// Fixed-point decimal with trailing zeros removed (at least one decimal).
std::string format_probability(double p, int precision = 6);

} // namespace plp
