#include "plp/term.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

namespace plp {

const char *error_code_name(ErrorCode code) {
    switch (code) {
    case ErrorCode::Parse: return "ParseError";
    case ErrorCode::RangeRestriction: return "RangeRestrictionError";
    case ErrorCode::Eval: return "EvalError";
    case ErrorCode::NotTimeConstrained: return "NotTimeConstrained";
    case ErrorCode::NotStratified: return "NotStratified";
    case ErrorCode::NegativeTime: return "NegativeTime";
    case ErrorCode::PositiveCycle: return "PositiveCycle";
    case ErrorCode::BadProbability: return "BadProbability";
    case ErrorCode::Unsupported: return "Unsupported";
    case ErrorCode::ZeroEvidence: return "ZeroEvidence";
    case ErrorCode::UnknownAtom: return "UnknownAtom";
    case ErrorCode::Io: return "IoError";
    }
    return "Error";
}

struct Term::Node {
    TermKind kind;
    std::string name;
    std::int64_t ival = 0;
    double rval = 0.0;
    std::vector<Term> args;
    std::size_t hash = 0;
    bool ground = true;
    bool interpreted = false;
};

namespace {

std::size_t mix(std::size_t seed, std::size_t v) {
    return seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

} // namespace

bool is_interpreted_functor(const std::string &f, std::size_t arity) {
    if (arity == 2)
        return f == "+" || f == "-" || f == "*" || f == "/" || f == "++" || f == "--";
    return arity == 1 && f == "-";
}

Term::Term() {
    static const Term empty = symbol("");
    node_ = empty.node_;
}

Term Term::variable(std::string name) {
    auto n = std::make_shared<Node>();
    n->kind = TermKind::Variable;
    n->hash = mix(1, std::hash<std::string>{}(name));
    n->name = std::move(name);
    n->ground = false;
    return Term(std::move(n));
}

Term Term::integer(std::int64_t value) {
    auto n = std::make_shared<Node>();
    n->kind = TermKind::Integer;
    n->ival = value;
    n->hash = mix(2, std::hash<std::int64_t>{}(value));
    return Term(std::move(n));
}

Term Term::real(double value) {
    auto n = std::make_shared<Node>();
    n->kind = TermKind::Real;
    n->rval = value;
    n->hash = mix(3, std::hash<double>{}(value));
    return Term(std::move(n));
}

Term Term::compound(std::string functor, std::vector<Term> args) {
    auto n = std::make_shared<Node>();
    n->kind = TermKind::Compound;
    std::size_t h = mix(4, std::hash<std::string>{}(functor));
    n->interpreted = is_interpreted_functor(functor, args.size());
    for (const auto &a : args) {
        h = mix(h, a.hash());
        n->ground = n->ground && a.is_ground();
        n->interpreted = n->interpreted || a.has_interpreted();
    }
    n->hash = h;
    n->name = std::move(functor);
    n->args = std::move(args);
    return Term(std::move(n));
}

Term Term::list(std::vector<Term> elements) {
    auto n = std::make_shared<Node>();
    n->kind = TermKind::List;
    std::size_t h = 5;
    for (const auto &a : elements) {
        h = mix(h, a.hash());
        n->ground = n->ground && a.is_ground();
        n->interpreted = n->interpreted || a.has_interpreted();
    }
    n->hash = h;
    n->args = std::move(elements);
    return Term(std::move(n));
}

Term Term::range(Term lo, Term hi) {
    auto n = std::make_shared<Node>();
    n->kind = TermKind::Range;
    n->hash = mix(mix(6, lo.hash()), hi.hash());
    n->ground = lo.is_ground() && hi.is_ground();
    n->interpreted = true;
    n->args = {std::move(lo), std::move(hi)};
    return Term(std::move(n));
}

TermKind Term::kind() const { return node_->kind; }
bool Term::is_ground() const { return node_->ground; }
bool Term::is_interpreted() const {
    return node_->kind == TermKind::Range ||
           (node_->kind == TermKind::Compound && is_interpreted_functor(node_->name, node_->args.size()));
}
bool Term::has_interpreted() const { return node_->interpreted; }
const std::string &Term::name() const { return node_->name; }
std::int64_t Term::int_value() const { return node_->ival; }
double Term::real_value() const { return node_->rval; }
double Term::number_value() const {
    return node_->kind == TermKind::Integer ? static_cast<double>(node_->ival) : node_->rval;
}
std::span<const Term> Term::args() const { return node_->args; }
std::size_t Term::hash() const { return node_->hash; }

bool Term::operator==(const Term &o) const {
    if (node_ == o.node_)
        return true;
    if (node_->hash != o.node_->hash || node_->kind != o.node_->kind)
        return false;
    switch (node_->kind) {
    case TermKind::Variable: return node_->name == o.node_->name;
    case TermKind::Integer: return node_->ival == o.node_->ival;
    case TermKind::Real: return node_->rval == o.node_->rval;
    default: return node_->name == o.node_->name && node_->args == o.node_->args;
    }
}

std::strong_ordering Term::operator<=>(const Term &o) const {
    if (node_ == o.node_)
        return std::strong_ordering::equal;
    if (auto c = node_->kind <=> o.node_->kind; c != 0)
        return c;
    switch (node_->kind) {
    case TermKind::Variable: return node_->name <=> o.node_->name;
    case TermKind::Integer: return node_->ival <=> o.node_->ival;
    case TermKind::Real:
        if (node_->rval < o.node_->rval) return std::strong_ordering::less;
        if (node_->rval > o.node_->rval) return std::strong_ordering::greater;
        return std::strong_ordering::equal;
    default:
        if (auto c = node_->name <=> o.node_->name; c != 0)
            return c;
        if (auto c = node_->args.size() <=> o.node_->args.size(); c != 0)
            return c;
        for (std::size_t i = 0; i < node_->args.size(); ++i)
            if (auto c = node_->args[i] <=> o.node_->args[i]; c != 0)
                return c;
        return std::strong_ordering::equal;
    }
}

namespace {

int op_precedence(const std::string &f, std::size_t arity) {
    if (arity == 1)
        return 1;
    if (f == "*" || f == "/")
        return 2;
    return 3;
}

void print(std::ostream &os, const Term &t, int context) {
    switch (t.kind()) {
    case TermKind::Variable: os << t.name(); return;
    case TermKind::Integer: os << t.int_value(); return;
    case TermKind::Real: {
        std::string s;
        for (int prec = 6; prec <= 17; ++prec) {
            std::ostringstream tmp;
            tmp.precision(prec);
            tmp << t.real_value();
            s = tmp.str();
            if (std::stod(s) == t.real_value())
                break;
        }
        if (s.find_first_of(".e") == std::string::npos)
            s += ".0";
        os << s;
        return;
    }
    case TermKind::List: {
        os << '[';
        bool first = true;
        for (const auto &e : t.args()) {
            if (!first) os << ", ";
            first = false;
            print(os, e, 10);
        }
        os << ']';
        return;
    }
    case TermKind::Range:
        os << '[';
        print(os, t.args()[0], 10);
        os << "..";
        print(os, t.args()[1], 10);
        os << ']';
        return;
    case TermKind::Compound:
        break;
    }
    const auto args = t.args();
    if (t.is_interpreted()) {
        int prec = op_precedence(t.name(), args.size());
        bool parens = prec > context;
        if (parens) os << '(';
        if (args.size() == 1) {
            os << '-';
            print(os, args[0], 1);
        } else {
            print(os, args[0], prec);
            os << ' ' << t.name() << ' ';
            // Operators are left associative.
            print(os, args[1], prec - 1);
        }
        if (parens) os << ')';
        return;
    }
    os << t.name();
    if (!args.empty()) {
        os << '(';
        for (std::size_t i = 0; i < args.size(); ++i) {
            if (i) os << ", ";
            print(os, args[i], 10);
        }
        os << ')';
    }
}

} // namespace

std::string Term::to_string() const {
    std::ostringstream os;
    print(os, *this, 10);
    return os.str();
}

bool is_builtin_operator(const std::string &op) {
    return op == "<" || op == "<=" || op == ">" || op == ">=" || op == "\\=" || op == "=" || op == "=<";
}

Atom Atom::ordinary(std::string pred, std::vector<Term> args, Term time) {
    Atom a;
    a.kind = AtomKind::Ordinary;
    a.name = std::move(pred);
    a.args = std::move(args);
    a.time = std::move(time);
    return a;
}

Atom Atom::equation(std::string functor, std::vector<Term> args, Term rhs, Term time) {
    Atom a;
    a.kind = AtomKind::Equation;
    a.name = std::move(functor);
    a.args = std::move(args);
    a.rhs = std::move(rhs);
    a.time = std::move(time);
    return a;
}

Atom Atom::builtin(std::string op, Term lhs, Term rhs) {
    if (!is_builtin_operator(op))
        throw Error(ErrorCode::Eval, "unknown built-in operator '" + op + "'");
    Atom a;
    a.kind = AtomKind::Builtin;
    a.name = std::move(op);
    a.args = {std::move(lhs), std::move(rhs)};
    return a;
}

bool Atom::is_ground() const {
    for (const auto &t : args)
        if (!t.is_ground())
            return false;
    if (kind == AtomKind::Builtin)
        return true;
    return time.is_ground() && (kind != AtomKind::Equation || rhs.is_ground());
}

std::string Atom::to_string() const {
    std::ostringstream os;
    if (kind == AtomKind::Builtin) {
        os << args[0].to_string() << ' ' << name << ' ' << args[1].to_string();
        return os.str();
    }
    os << Term::compound(name, args).to_string();
    if (kind == AtomKind::Equation)
        os << " = " << rhs.to_string();
    os << " @ " << time.to_string();
    return os.str();
}

std::vector<std::string> Head::predicates() const {
    if (kind == HeadKind::Distribution)
        return {functor};
    std::vector<std::string> out;
    for (const auto &alt : alternatives)
        out.push_back(alt.atom.name);
    return out;
}

const Term &Head::time_term() const {
    if (kind == HeadKind::Distribution)
        return time;
    return alternatives.front().atom.time;
}

namespace {

bool is_one(const Term &p) {
    return (p.kind() == TermKind::Integer && p.int_value() == 1) ||
           (p.kind() == TermKind::Real && p.real_value() == 1.0);
}

} // namespace

std::string Head::to_string() const {
    if (kind == HeadKind::Distribution)
        return Term::compound(functor, args).to_string() + " ~ " + support.to_string() + " @ " + time.to_string();
    std::string out;
    for (std::size_t i = 0; i < alternatives.size(); ++i) {
        if (i) out += " + ";
        const auto &alt = alternatives[i];
        if (kind == HeadKind::Sum || !is_one(alt.prob))
            out += alt.prob.to_string() + " :: ";
        out += alt.atom.to_string();
    }
    return out;
}

std::string Rule::to_string() const {
    std::string out = head.to_string();
    if (!is_fact()) {
        out += " :- ";
        bool first = true;
        for (const auto &a : positives) {
            if (!first) out += ", ";
            first = false;
            out += a.to_string();
        }
        for (const auto &el : neg_elements) {
            if (!first) out += ", ";
            first = false;
            out += "\\+ (";
            for (std::size_t i = 0; i < el.size(); ++i) {
                if (i) out += ", ";
                out += el[i].to_string();
            }
            out += ")";
        }
    }
    return out + ".";
}

std::string to_string(const Substitution &subst) {
    std::string out = "{";
    bool first = true;
    for (const auto &[k, v] : subst) {
        if (!first) out += ", ";
        first = false;
        out += k + " = " + v.to_string();
    }
    return out + "}";
}

Term apply(const Substitution &subst, const Term &t) {
    if (t.is_ground() || subst.empty())
        return t;
    switch (t.kind()) {
    case TermKind::Variable: {
        auto it = subst.find(t.name());
        return it == subst.end() ? t : it->second;
    }
    case TermKind::Compound:
    case TermKind::List:
    case TermKind::Range: {
        std::vector<Term> args;
        args.reserve(t.args().size());
        for (const auto &a : t.args())
            args.push_back(plp::apply(subst, a));
        if (t.kind() == TermKind::Compound)
            return Term::compound(t.name(), std::move(args));
        if (t.kind() == TermKind::List)
            return Term::list(std::move(args));
        return Term::range(args[0], args[1]);
    }
    default:
        return t;
    }
}

Atom apply(const Substitution &subst, const Atom &a) {
    Atom out = a;
    for (auto &t : out.args)
        t = plp::apply(subst, t);
    if (a.kind != AtomKind::Builtin) {
        out.time = plp::apply(subst, a.time);
        if (a.kind == AtomKind::Equation)
            out.rhs = plp::apply(subst, a.rhs);
    }
    return out;
}

Rule apply(const Substitution &subst, const Rule &r) {
    Rule out = r;
    Head &h = out.head;
    for (auto &alt : h.alternatives) {
        alt.prob = plp::apply(subst, alt.prob);
        alt.atom = plp::apply(subst, alt.atom);
    }
    for (auto &t : h.args)
        t = plp::apply(subst, t);
    h.support = plp::apply(subst, h.support);
    h.time = plp::apply(subst, h.time);
    for (auto &a : out.positives)
        a = plp::apply(subst, a);
    for (auto &el : out.neg_elements)
        for (auto &a : el)
            a = plp::apply(subst, a);
    return out;
}

void collect_vars(const Term &t, std::set<std::string> &out) {
    if (t.is_ground())
        return;
    if (t.is_var()) {
        out.insert(t.name());
        return;
    }
    for (const auto &a : t.args())
        collect_vars(a, out);
}

void collect_vars(const Atom &a, std::set<std::string> &out) {
    for (const auto &t : a.args)
        collect_vars(t, out);
    if (a.kind != AtomKind::Builtin) {
        collect_vars(a.time, out);
        if (a.kind == AtomKind::Equation)
            collect_vars(a.rhs, out);
    }
}

namespace {

[[noreturn]] void eval_error(const std::string &msg, const Term &t) {
    throw Error(ErrorCode::Eval, msg + ": " + t.to_string());
}

Term arith(const std::string &op, const Term &a, const Term &b, const Term &whole) {
    if (!a.is_number() || !b.is_number())
        eval_error("arithmetic on non-numbers", whole);
    if (a.kind() == TermKind::Integer && b.kind() == TermKind::Integer) {
        const std::int64_t x = a.int_value(), y = b.int_value();
        if (op == "+") return Term::integer(x + y);
        if (op == "-") return Term::integer(x - y);
        if (op == "*") return Term::integer(x * y);
        if (y == 0)
            eval_error("division by zero", whole);
        if (x % y == 0)
            return Term::integer(x / y);
        return Term::real(static_cast<double>(x) / static_cast<double>(y));
    }
    const double x = a.number_value(), y = b.number_value();
    if (op == "+") return Term::real(x + y);
    if (op == "-") return Term::real(x - y);
    if (op == "*") return Term::real(x * y);
    if (y == 0.0)
        eval_error("division by zero", whole);
    return Term::real(x / y);
}

} // namespace

Term eval_term(const Term &t) {
    if (!t.is_ground())
        eval_error("cannot evaluate non-ground term", t);
    if (!t.has_interpreted())
        return t;
    switch (t.kind()) {
    case TermKind::List: {
        std::vector<Term> els;
        for (const auto &e : t.args())
            els.push_back(eval_term(e));
        return Term::list(std::move(els));
    }
    case TermKind::Range: {
        Term lo = eval_term(t.args()[0]), hi = eval_term(t.args()[1]);
        if (lo.kind() != TermKind::Integer || hi.kind() != TermKind::Integer)
            eval_error("range bounds must be integers", t);
        std::vector<Term> els;
        for (std::int64_t i = lo.int_value(); i <= hi.int_value(); ++i)
            els.push_back(Term::integer(i));
        return Term::list(std::move(els));
    }
    case TermKind::Compound: {
        std::vector<Term> args;
        for (const auto &a : t.args())
            args.push_back(eval_term(a));
        if (!t.is_interpreted())
            return Term::compound(t.name(), std::move(args));
        const std::string &op = t.name();
        if (args.size() == 1) {
            if (!args[0].is_number())
                eval_error("negation of non-number", t);
            if (args[0].kind() == TermKind::Integer)
                return Term::integer(-args[0].int_value());
            return Term::real(-args[0].real_value());
        }
        if (op == "++") {
            if (args[0].kind() != TermKind::List || args[1].kind() != TermKind::List)
                eval_error("'++' expects lists", t);
            std::vector<Term> els(args[0].args().begin(), args[0].args().end());
            els.insert(els.end(), args[1].args().begin(), args[1].args().end());
            return Term::list(std::move(els));
        }
        if (op == "--") {
            if (args[0].kind() != TermKind::List || args[1].kind() != TermKind::List)
                eval_error("'--' expects lists", t);
            std::vector<Term> els(args[0].args().begin(), args[0].args().end());
            for (const auto &rem : args[1].args()) {
                auto it = std::find(els.begin(), els.end(), rem);
                if (it != els.end())
                    els.erase(it);
            }
            return Term::list(std::move(els));
        }
        return arith(op, args[0], args[1], t);
    }
    default:
        return t;
    }
}

bool eval_builtin(const Atom &a) {
    if (a.kind != AtomKind::Builtin)
        throw Error(ErrorCode::Eval, "not a built-in atom: " + a.to_string());
    Term l = eval_term(a.args[0]), r = eval_term(a.args[1]);
    const std::string &op = a.name;
    if (op == "=")
        return l == r;
    if (op == "\\=")
        return !(l == r);
    if (!l.is_number() || !r.is_number())
        throw Error(ErrorCode::Eval, "comparison of non-numbers: " + a.to_string());
    const double x = l.number_value(), y = r.number_value();
    if (op == "<") return x < y;
    if (op == "<=" || op == "=<") return x <= y;
    if (op == ">") return x > y;
    if (op == ">=") return x >= y;
    throw Error(ErrorCode::Eval, "unknown built-in operator '" + op + "'");
}

std::int64_t eval_time(const Term &t) {
    Term v = eval_term(t);
    if (v.kind() != TermKind::Integer)
        throw Error(ErrorCode::Eval, "time term is not an integer: " + t.to_string());
    return v.int_value();
}

namespace {

struct Deferred {
    Term pattern;
    Term value;
};

bool match_rec(const Term &p, const Term &v, Substitution &s, std::vector<Deferred> &deferred) {
    if (p.is_ground() && !p.has_interpreted())
        return p == v;
    if (p.is_var()) {
        auto [it, inserted] = s.emplace(p.name(), v);
        return inserted || it->second == v;
    }
    if (p.is_interpreted()) {
        deferred.push_back({p, v});
        return true;
    }
    if (p.kind() != v.kind())
        return false;
    if (p.kind() == TermKind::Compound && p.name() != v.name())
        return false;
    if (p.args().size() != v.args().size())
        return false;
    for (std::size_t i = 0; i < p.args().size(); ++i)
        if (!match_rec(p.args()[i], v.args()[i], s, deferred))
            return false;
    return true;
}

bool resolve_deferred(std::vector<Deferred> &deferred, Substitution &s) {
    // Interpreted subterms are compared by value once their variables are bound.
    while (!deferred.empty()) {
        bool progress = false;
        for (auto it = deferred.begin(); it != deferred.end();) {
            Term inst = plp::apply(s, it->pattern);
            if (inst.is_ground()) {
                if (!(eval_term(inst) == it->value))
                    return false;
                it = deferred.erase(it);
                progress = true;
            } else {
                ++it;
            }
        }
        if (!progress)
            throw Error(ErrorCode::Eval, "cannot match unbound interpreted term " + deferred.front().pattern.to_string());
    }
    return true;
}

} // namespace

bool match_term(const Term &pattern, const Term &value, Substitution &subst) {
    std::vector<Deferred> deferred;
    if (!match_rec(pattern, value, subst, deferred))
        return false;
    return resolve_deferred(deferred, subst);
}

std::optional<Substitution> match(const Atom &pattern, const Atom &fact, const Substitution &base) {
    if (pattern.kind != fact.kind || pattern.name != fact.name || pattern.args.size() != fact.args.size())
        return std::nullopt;
    Substitution s = base;
    std::vector<Deferred> deferred;
    if (!match_rec(pattern.time, fact.time, s, deferred))
        return std::nullopt;
    for (std::size_t i = 0; i < pattern.args.size(); ++i)
        if (!match_rec(pattern.args[i], fact.args[i], s, deferred))
            return std::nullopt;
    if (pattern.kind == AtomKind::Equation && !match_rec(pattern.rhs, fact.rhs, s, deferred))
        return std::nullopt;
    if (!resolve_deferred(deferred, s))
        return std::nullopt;
    return s;
}

} // namespace plp
