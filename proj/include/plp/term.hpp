#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "plp/error.hpp"

namespace plp {

enum class TermKind : std::uint8_t { Variable, Integer, Real, Compound, List, Range };

/// Immutable first-order term with shared structure. Copies are cheap.
///
/// Compound terms whose functor is one of `+ - * / ++ --` (binary) or `-`
/// (unary) are interpreted and reduced by eval_term. A symbol constant is a
/// compound with no arguments.
class Term {
public:
    Term();

    static Term variable(std::string name);
    static Term integer(std::int64_t value);
    static Term real(double value);
    static Term compound(std::string functor, std::vector<Term> args);
    static Term symbol(std::string name) { return compound(std::move(name), {}); }
    static Term list(std::vector<Term> elements);
    static Term range(Term lo, Term hi);

    TermKind kind() const;
    bool is_var() const { return kind() == TermKind::Variable; }
    bool is_number() const { return kind() == TermKind::Integer || kind() == TermKind::Real; }
    bool is_ground() const;
    /// True for compounds with an arithmetic or list-operator functor.
    bool is_interpreted() const;
    /// True if the term or any subterm is interpreted or a range.
    bool has_interpreted() const;

    /// Variable name, or functor for compounds.
    const std::string &name() const;
    std::int64_t int_value() const;
    double real_value() const;
    double number_value() const;
    /// Arguments of a compound, elements of a list, {lo, hi} of a range.
    std::span<const Term> args() const;

    std::size_t hash() const;
    bool operator==(const Term &other) const;
    std::strong_ordering operator<=>(const Term &other) const;

    std::string to_string() const;

private:
    struct Node;
    explicit Term(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
    std::shared_ptr<const Node> node_;
};

struct TermHash {
    std::size_t operator()(const Term &t) const { return t.hash(); }
};

bool is_interpreted_functor(const std::string &functor, std::size_t arity);

enum class AtomKind : std::uint8_t { Ordinary, Equation, Builtin };

/// Ordinary `p(args) @ time`, equation `f(args) = rhs @ time`, or built-in
/// comparison `args[0] op args[1]` (name holds the operator).
struct Atom {
    AtomKind kind = AtomKind::Ordinary;
    std::string name;
    std::vector<Term> args;
    Term rhs;
    Term time;

    static Atom ordinary(std::string pred, std::vector<Term> args, Term time);
    static Atom equation(std::string functor, std::vector<Term> args, Term rhs, Term time);
    static Atom builtin(std::string op, Term lhs, Term rhs);

    bool is_builtin() const { return kind == AtomKind::Builtin; }
    bool is_ground() const;
    std::string to_string() const;

    bool operator==(const Atom &) const = default;
};

bool is_builtin_operator(const std::string &op);

struct HeadAlternative {
    Term prob;
    Atom atom;
    bool operator==(const HeadAlternative &) const = default;
};

enum class HeadKind : std::uint8_t { Ordinary, Distribution, Sum };

/// Rule head. Ordinary heads hold one alternative; sum heads hold two or more
/// alternatives sharing one time term; distribution heads `f(args) ~ support @ time`
/// use functor/args/support/time.
struct Head {
    HeadKind kind = HeadKind::Ordinary;
    std::vector<HeadAlternative> alternatives;
    std::string functor;
    std::vector<Term> args;
    Term support;
    Term time;

    bool operator==(const Head &) const = default;
    /// Predicate (or functor) symbols defined by this head.
    std::vector<std::string> predicates() const;
    const Term &time_term() const;
    std::string to_string() const;
};

struct Rule {
    Head head;
    std::vector<Atom> positives;
    std::vector<std::vector<Atom>> neg_elements;

    bool operator==(const Rule &) const = default;
    bool is_fact() const { return positives.empty() && neg_elements.empty(); }
    std::string to_string() const;
};

using Substitution = std::map<std::string, Term>;

std::string to_string(const Substitution &subst);

Term apply(const Substitution &subst, const Term &t);
Atom apply(const Substitution &subst, const Atom &a);
Rule apply(const Substitution &subst, const Rule &r);

void collect_vars(const Term &t, std::set<std::string> &out);
void collect_vars(const Atom &a, std::set<std::string> &out);

/// Reduces interpreted subterms of a ground term. Throws Error(Eval) on
/// ill-sorted input.
Term eval_term(const Term &t);
/// Evaluates a ground built-in atom to a Boolean.
bool eval_builtin(const Atom &a);
/// Evaluates the time term of an atom to an integer.
std::int64_t eval_time(const Term &t);

/// Matches a pattern against a ground ordinary or equation atom. Interpreted
/// subterms of the pattern must become ground under the bindings collected so
/// far; they are evaluated and compared. `base` supplies pre-existing bindings.
std::optional<Substitution> match(const Atom &pattern, const Atom &fact, const Substitution &base = {});
bool match_term(const Term &pattern, const Term &value, Substitution &subst);

} // namespace plp
