#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "plp/strat.hpp"
#include "plp/term.hpp"

namespace plp {

using AtomId = std::int32_t;

/// Ground literal encoded as `atom * 2 + negated`.
using Lit = std::int32_t;

constexpr Lit pos_lit(AtomId a) { return a * 2; }
constexpr Lit neg_lit(AtomId a) { return a * 2 + 1; }
constexpr AtomId atom_of(Lit l) { return l >> 1; }
constexpr bool is_neg(Lit l) { return (l & 1) != 0; }
constexpr Lit complement(Lit l) { return l ^ 1; }

struct AtomHash {
    std::size_t operator()(const Atom &a) const;
};

/// Interns ground ordinary and equation atoms. Atoms are stored with
/// evaluated (irreducible) arguments and an integer time term.
class AtomTable {
public:
    AtomId intern(const Atom &ground_atom);
    std::optional<AtomId> find(const Atom &ground_atom) const;

    const Atom &operator[](AtomId id) const { return atoms_[static_cast<std::size_t>(id)]; }
    std::int64_t time(AtomId id) const { return times_[static_cast<std::size_t>(id)]; }
    /// Identifies the left-hand side and time of an equation atom; -1 for
    /// ordinary atoms.
    int eq_key(AtomId id) const { return eq_keys_[static_cast<std::size_t>(id)]; }
    std::size_t size() const { return atoms_.size(); }

    std::string to_string(AtomId id) const { return atoms_[static_cast<std::size_t>(id)].to_string(); }
    std::string lit_to_string(Lit l) const;

private:
    std::vector<Atom> atoms_;
    std::vector<std::int64_t> times_;
    std::vector<int> eq_keys_;
    std::unordered_map<Atom, AtomId, AtomHash> ids_;
    std::unordered_map<Atom, int, AtomHash> lhs_keys_;
};

/// Normalizes a ground atom pattern: evaluates arguments, right-hand side
/// and time.
Atom normalize_ground_atom(const Atom &a);

struct NormalRule {
    AtomId head;
    /// Sorted, duplicate free.
    std::vector<Lit> body;

    bool operator==(const NormalRule &) const = default;
};

struct ProbFact {
    AtomId atom;
    double prob;
};

struct StratumStats {
    TimedStratum stratum;
    std::size_t rules = 0;
    std::size_t prob_facts = 0;
    std::size_t domain = 0;
};

/// Ground normal program: rules (facts are rules with empty body) plus
/// probabilistic facts over a shared atom table.
struct GroundProgram {
    std::shared_ptr<AtomTable> atoms = std::make_shared<AtomTable>();
    std::vector<NormalRule> rules;
    std::vector<ProbFact> prob_facts;
    std::vector<AtomId> domain;
    /// Topological rank per atom id (body atoms before heads); -1 if the atom
    /// does not occur in the program.
    std::vector<int> rank;
    /// Atoms in increasing rank.
    std::vector<AtomId> order;
    std::vector<StratumStats> stats;

    /// Computes rank/order; throws Error(PositiveCycle) on a cyclic ground
    /// dependency graph.
    void compute_order();
    std::optional<AtomId> lookup(const Atom &atom) const;
    /// Every atom mentioned in rules or probabilistic facts.
    std::vector<AtomId> mentioned_atoms() const;
    std::string to_string() const;
};

/// Consistency of the union of two ground literal sets: no complementary
/// pair, and no two positive equations with equal left-hand side and time
/// but different right-hand sides.
bool consistent(std::span<const Lit> a, std::span<const Lit> b, const AtomTable &table);

} // namespace plp
