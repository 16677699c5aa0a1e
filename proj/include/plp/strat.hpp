#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "plp/term.hpp"

namespace plp {

/// Result of the time-constraint analysis of one rule.
struct PivotInfo {
    /// Indices into Rule::positives of the pivot atoms. Empty when the head
    /// acts as pivot (variable-free rules and facts).
    std::vector<std::size_t> pivots;
    bool head_pivot = false;
    /// Head time strictly after the pivot time; such rules define future atoms
    /// and are left out of the call graph.
    bool future_head = false;
    /// Per negative element and atom: true if the atom lies strictly before
    /// the pivot time.
    std::vector<std::vector<bool>> neg_earlier;

    /// True if some negated atom may share the pivot's time point.
    bool has_current_negation() const;
};

/// Determines the pivots of a rule. Time terms are compared syntactically
/// against the pivot time `n`: `n`, `n-k`, integer constants and variables
/// guarded by an explicit comparison with `n` are recognised.
/// Throws Error(NotTimeConstrained) if the rule has no pivot.
PivotInfo check_time_constrained(const Rule &rule);

struct CallEdge {
    std::string from;
    std::string to;
    bool negative;
};

struct Stratification {
    std::vector<std::vector<std::string>> strata;
    std::map<std::string, int> index;
    std::vector<CallEdge> edges;

    /// Stratum position of a predicate, or -1 if unknown.
    int of(const std::string &pred) const;
    int size() const { return static_cast<int>(strata.size()); }
    std::string to_string() const;
};

Stratification build_stratification(const std::vector<Rule> &rules);

struct TimedStratum {
    std::int64_t time = 0;
    int stratum = 0;

    auto operator<=>(const TimedStratum &) const = default;
    std::string to_string() const;
};

/// Timed stratum of a ground ordinary or equation atom.
TimedStratum strat_of(const Atom &atom, const Stratification &s);

} // namespace plp
