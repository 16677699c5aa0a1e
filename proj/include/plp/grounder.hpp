#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <string>
#include <unordered_set>
#include <vector>

#include "plp/ground.hpp"
#include "plp/parser.hpp"
#include "plp/strat.hpp"

namespace plp {

/// All subset-minimal sets that contain at least one element of every
/// sequence in `family`. An empty family yields the single empty set; a
/// family containing an empty sequence yields no set. Results are sorted.
template <typename T>
std::vector<std::vector<T>> hitting_sets(const std::vector<std::vector<T>> &family) {
    std::vector<std::vector<T>> current{{}};
    auto minimize = [](std::vector<std::vector<T>> &sets) {
        for (auto &s : sets) {
            std::sort(s.begin(), s.end());
            s.erase(std::unique(s.begin(), s.end()), s.end());
        }
        std::sort(sets.begin(), sets.end(), [](const auto &a, const auto &b) {
            return a.size() != b.size() ? a.size() < b.size() : a < b;
        });
        sets.erase(std::unique(sets.begin(), sets.end()), sets.end());
        std::vector<std::vector<T>> kept;
        for (auto &s : sets) {
            const bool dominated = std::any_of(kept.begin(), kept.end(), [&](const auto &k) {
                return std::includes(s.begin(), s.end(), k.begin(), k.end());
            });
            if (!dominated)
                kept.push_back(std::move(s));
        }
        sets = std::move(kept);
    };
    for (const auto &seq : family) {
        std::vector<std::vector<T>> next;
        for (const auto &h : current) {
            const bool hit = std::any_of(seq.begin(), seq.end(), [&](const T &x) {
                return std::find(h.begin(), h.end(), x) != h.end();
            });
            if (hit) {
                next.push_back(h);
                continue;
            }
            for (const T &x : seq) {
                auto extended = h;
                extended.push_back(x);
                next.push_back(std::move(extended));
            }
        }
        minimize(next);
        current = std::move(next);
    }
    std::sort(current.begin(), current.end());
    return current;
}

struct GroundLiteral {
    bool negative = false;
    Atom atom;

    bool operator==(const GroundLiteral &) const = default;
    std::string to_string() const { return (negative ? "-" : "") + atom.to_string(); }
};

/// Grounds the negative body elements of a variable-free body over `domain`
/// by hitting sets and returns the resulting normal bodies (each sorted by
/// printed form). Positive atoms must be ground; false built-ins yield no body.
std::vector<std::vector<GroundLiteral>> gnd_body(const std::vector<Atom> &positives,
                                                 const std::vector<std::vector<Atom>> &neg_elements,
                                                 const std::vector<Atom> &domain);

/// All substitutions that make every atom of `body` (ordinary, equation and
/// built-in) hold in `domain`.
std::vector<Substitution> match_body(const std::vector<Atom> &body, const std::vector<Atom> &domain);

/// Output of normalize: rules (facts have empty bodies) and probabilistic
/// facts over atoms interned into the given table.
struct NormalizedRule {
    std::vector<NormalRule> rules;
    std::vector<ProbFact> prob_facts;
    /// Fresh auxiliary atoms (head and case atoms).
    std::vector<AtomId> aux_atoms;
};

/// Expands a ground rule `head :- body` into normal rules and probabilistic
/// facts. Distribution heads become sum heads first; case probabilities are
/// renormalized against the mass left by earlier cases. `aux_prefix` names the
/// fresh atoms. Throws Error(BadProbability).
NormalizedRule normalize(const Head &ground_head, const std::vector<Lit> &body, const std::string &aux_prefix,
                         AtomTable &table);

/// Least fixpoint of one-step goal regression of `query` over `rules`
/// (non-fact rules). Atoms in `fact_atoms` are never expanded.
std::vector<Lit> regress(const std::vector<Lit> &query, std::span<const NormalRule> rules,
                         const std::unordered_set<AtomId> &fact_atoms = {});

struct GroundOptions {
    std::int64_t eot = 0;
    bool guided = true;
};

/// Bottom-up grounding along timed strata, optionally pruned by the query.
GroundProgram ground(const std::vector<Rule> &rules, const Stratification &strat,
                     const std::vector<GroundLiteral> &query, const GroundOptions &options);

/// Convenience overload that computes the stratification.
GroundProgram ground(const std::vector<Rule> &rules, const std::vector<GroundLiteral> &query,
                     const GroundOptions &options);

} // namespace plp
