#include "plp/parser.hpp"

#include <cctype>
#include <cmath>
#include <set>

namespace plp {

namespace {

enum class Tok { Ident, Var, Int, Float, Op, End, Eof };

struct Token {
    Tok kind;
    std::string text;
    int line;
    int col;
};

const char *const kOperators[] = {":-", "?-", "::", "\\+", "\\=", "<=", "=<", ">=", "++", "--", "..",
                                  "~",  "@",  "|",  ",",   "(",   ")",  "[",  "]",  "=",  "<",  ">",
                                  "+",  "-",  "*",  "/"};

std::vector<Token> tokenize(std::string_view src) {
    std::vector<Token> out;
    int line = 1, col = 1;
    std::size_t i = 0;
    auto advance = [&](std::size_t n) {
        for (std::size_t k = 0; k < n && i < src.size(); ++k, ++i) {
            if (src[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
    };
    while (i < src.size()) {
        const char c = src[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            advance(1);
            continue;
        }
        if (c == '%') {
            while (i < src.size() && src[i] != '\n')
                advance(1);
            continue;
        }
        const int tl = line, tc = col;
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t j = i;
            while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j])))
                ++j;
            bool is_float = false;
            if (j + 1 < src.size() && src[j] == '.' && std::isdigit(static_cast<unsigned char>(src[j + 1]))) {
                is_float = true;
                ++j;
                while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j])))
                    ++j;
            }
            if (j < src.size() && (src[j] == 'e' || src[j] == 'E') && is_float) {
                std::size_t k = j + 1;
                if (k < src.size() && (src[k] == '+' || src[k] == '-'))
                    ++k;
                if (k < src.size() && std::isdigit(static_cast<unsigned char>(src[k]))) {
                    j = k;
                    while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j])))
                        ++j;
                }
            }
            out.push_back({is_float ? Tok::Float : Tok::Int, std::string(src.substr(i, j - i)), tl, tc});
            advance(j - i);
            continue;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t j = i;
            while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_'))
                ++j;
            const bool var = std::isupper(static_cast<unsigned char>(c)) || c == '_';
            out.push_back({var ? Tok::Var : Tok::Ident, std::string(src.substr(i, j - i)), tl, tc});
            advance(j - i);
            continue;
        }
        if (c == '.' && (i + 1 >= src.size() || src[i + 1] != '.')) {
            out.push_back({Tok::End, ".", tl, tc});
            advance(1);
            continue;
        }
        bool matched = false;
        for (const char *op : kOperators) {
            std::string_view o(op);
            if (src.substr(i, o.size()) == o) {
                out.push_back({Tok::Op, std::string(o), tl, tc});
                advance(o.size());
                matched = true;
                break;
            }
        }
        if (!matched)
            throw ParseError(std::string("unexpected character '") + c + "'", tl, tc);
    }
    out.push_back({Tok::Eof, "", line, col});
    return out;
}

bool is_comparison(const std::string &op) {
    return op == "=" || op == "\\=" || op == "<" || op == "<=" || op == "=<" || op == ">" || op == ">=";
}

bool is_plain_functional(const Term &t) {
    return t.kind() == TermKind::Compound && !t.is_interpreted();
}

class Parser {
public:
    explicit Parser(std::string_view src) : toks_(tokenize(src)) {}

    SourceProgram program() {
        SourceProgram prog;
        while (!at(Tok::Eof)) {
            if (at_op("?-")) {
                next();
                prog.queries.push_back(query_rest(true));
                continue;
            }
            const Token &start = peek();
            Rule r = rule();
            if (r.is_fact() && r.head.kind == HeadKind::Ordinary && r.head.alternatives.size() == 1 &&
                r.head.alternatives[0].atom.name == "config" && r.head.alternatives[0].atom.args.size() == 2 &&
                !explicit_time_) {
                const Atom &a = r.head.alternatives[0].atom;
                if (a.args[0].kind() != TermKind::Compound || !a.args[0].args().empty())
                    throw ParseError("config key must be a symbol", start.line, start.col);
                const std::string key = a.args[0].name();
                static const std::set<std::string> known = {
                    "eot", "query_optimization_grounding", "cautious_disjointing", "inst_sol", "show_info",
                    "ve_pruning", "precision"};
                if (!known.contains(key))
                    prog.warnings.push_back("unknown config key '" + key + "'");
                prog.configs[key] = a.args[1];
                continue;
            }
            prog.rules.push_back(std::move(r));
        }
        return prog;
    }

    InputQuery standalone_query() {
        if (at_op("?-"))
            next();
        InputQuery q = query_rest(false);
        if (!at(Tok::Eof))
            fail("unexpected input after query");
        return q;
    }

private:
    std::vector<Token> toks_;
    std::size_t pos_ = 0;
    int anon_ = 0;
    bool head_mode_ = false;
    bool explicit_time_ = false;

    const Token &peek(std::size_t k = 0) const { return toks_[std::min(pos_ + k, toks_.size() - 1)]; }
    const Token &next() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }
    bool at(Tok k) const { return peek().kind == k; }
    bool at_op(std::string_view op) const { return peek().kind == Tok::Op && peek().text == op; }

    [[noreturn]] void fail(const std::string &msg) const {
        const Token &t = peek();
        std::string got = t.kind == Tok::Eof ? "end of input" : "'" + t.text + "'";
        throw ParseError(msg + " (at " + got + ")", t.line, t.col);
    }

    void expect_op(std::string_view op) {
        if (!at_op(op))
            fail("expected '" + std::string(op) + "'");
        next();
    }

    // In a sum head, a top-level '+' starts a new alternative when a '::'
    // follows before the next separator.
    bool plus_starts_alternative() const {
        int depth = 0;
        for (std::size_t k = pos_ + 1; k < toks_.size(); ++k) {
            const Token &t = toks_[k];
            if (t.kind == Tok::End || t.kind == Tok::Eof)
                return false;
            if (t.kind != Tok::Op)
                continue;
            if (t.text == "(" || t.text == "[")
                ++depth;
            else if (t.text == ")" || t.text == "]")
                --depth;
            else if (depth == 0 && (t.text == "," || t.text == ":-" || t.text == "+"))
                return false;
            else if (depth == 0 && t.text == "::")
                return true;
        }
        return false;
    }

    Term expr() {
        Term lhs = term_mul();
        while (peek().kind == Tok::Op &&
               (peek().text == "+" || peek().text == "-" || peek().text == "++" || peek().text == "--")) {
            if (head_mode_ && peek().text == "+" && plus_starts_alternative())
                break;
            std::string op = next().text;
            Term rhs = term_mul();
            lhs = Term::compound(op, {lhs, rhs});
        }
        return lhs;
    }

    Term term_mul() {
        Term lhs = unary();
        while (at_op("*") || at_op("/")) {
            std::string op = next().text;
            Term rhs = unary();
            lhs = Term::compound(op, {lhs, rhs});
        }
        return lhs;
    }

    Term unary() {
        if (at_op("-")) {
            next();
            if (at(Tok::Int))
                return Term::integer(-std::stoll(next().text));
            if (at(Tok::Float))
                return Term::real(-std::stod(next().text));
            return Term::compound("-", {unary()});
        }
        return primary();
    }

    Term primary() {
        const Token &t = peek();
        switch (t.kind) {
        case Tok::Int: next(); return Term::integer(std::stoll(t.text));
        case Tok::Float: next(); return Term::real(std::stod(t.text));
        case Tok::Var: {
            next();
            if (t.text == "_")
                return Term::variable("_" + std::to_string(++anon_));
            return Term::variable(t.text);
        }
        case Tok::Ident: {
            std::string name = next().text;
            std::vector<Term> args;
            if (at_op("(") ) {
                next();
                const bool saved = head_mode_;
                head_mode_ = false;
                args.push_back(expr());
                while (at_op(",")) {
                    next();
                    args.push_back(expr());
                }
                head_mode_ = saved;
                expect_op(")");
            }
            return Term::compound(std::move(name), std::move(args));
        }
        case Tok::Op:
            if (t.text == "(") {
                next();
                const bool saved = head_mode_;
                head_mode_ = false;
                Term inner = expr();
                head_mode_ = saved;
                expect_op(")");
                return inner;
            }
            if (t.text == "[")
                return list();
            break;
        default:
            break;
        }
        fail("expected a term");
    }

    Term list() {
        expect_op("[");
        if (at_op("]")) {
            next();
            return Term::list({});
        }
        const bool saved = head_mode_;
        head_mode_ = false;
        Term first = expr();
        if (at_op("..")) {
            next();
            Term hi = expr();
            expect_op("]");
            head_mode_ = saved;
            return Term::range(first, hi);
        }
        std::vector<Term> els{first};
        while (at_op(",")) {
            next();
            els.push_back(expr());
        }
        expect_op("]");
        head_mode_ = saved;
        return Term::list(std::move(els));
    }

    Term time_suffix() {
        if (at_op("@")) {
            next();
            explicit_time_ = true;
            return expr();
        }
        return Term::integer(0);
    }

    Atom literal() {
        const Token &start = peek();
        Term lhs = expr();
        if (peek().kind == Tok::Op && is_comparison(peek().text)) {
            std::string op = next().text;
            Term rhs = expr();
            if (op == "=" && is_plain_functional(lhs)) {
                Term time = time_suffix();
                return Atom::equation(lhs.name(), std::vector<Term>(lhs.args().begin(), lhs.args().end()), rhs, time);
            }
            if (at_op("@"))
                fail("built-in atoms carry no time term");
            return Atom::builtin(op == "=<" ? "<=" : op, lhs, rhs);
        }
        if (!is_plain_functional(lhs))
            throw ParseError("expected an atom, got '" + lhs.to_string() + "'", start.line, start.col);
        Term time = time_suffix();
        return Atom::ordinary(lhs.name(), std::vector<Term>(lhs.args().begin(), lhs.args().end()), time);
    }

    std::vector<Atom> neg_element() {
        std::vector<Atom> atoms;
        // `\+ (a, b)` or `\+ a`; a parenthesised prefix may also be a term like `(X+1) < 3`.
        if (at_op("(")) {
            std::size_t save = pos_;
            next();
            try {
                atoms.push_back(literal());
                while (at_op(",")) {
                    next();
                    atoms.push_back(literal());
                }
                expect_op(")");
                if (at_op("@") || (peek().kind == Tok::Op && is_comparison(peek().text)))
                    throw ParseError("", 0, 0);
                return atoms;
            } catch (const ParseError &) {
                pos_ = save;
                atoms.clear();
            }
        }
        atoms.push_back(literal());
        return atoms;
    }

    void body(std::vector<Atom> &positives, std::vector<std::vector<Atom>> &negs) {
        do {
            if (!positives.empty() || !negs.empty())
                next(); // ','
            if (at_op("\\+")) {
                next();
                negs.push_back(neg_element());
            } else if (at_op("-") && peek(1).kind == Tok::Ident) {
                next();
                negs.push_back({literal()});
            } else {
                positives.push_back(literal());
            }
        } while (at_op(","));
    }

    HeadAlternative head_alternative(bool &has_prob) {
        Term first = expr();
        Term prob = Term::integer(1);
        has_prob = false;
        if (at_op("::")) {
            next();
            prob = first;
            has_prob = true;
            first = expr();
        }
        if (at_op("=")) {
            next();
            if (!is_plain_functional(first))
                fail("left-hand side of an equation must be a functional term");
            Term rhs = expr();
            Term time = time_suffix();
            return {prob, Atom::equation(first.name(), std::vector<Term>(first.args().begin(), first.args().end()),
                                         rhs, time)};
        }
        if (!is_plain_functional(first))
            fail("expected a head atom");
        Term time = time_suffix();
        return {prob, Atom::ordinary(first.name(), std::vector<Term>(first.args().begin(), first.args().end()), time)};
    }

    Head head() {
        Head h;
        head_mode_ = true;
        const std::size_t save = pos_;
        // Distribution head: lhs '~' support.
        Term lhs = expr();
        if (at_op("~")) {
            next();
            if (!is_plain_functional(lhs))
                fail("distribution head needs a functional term");
            h.kind = HeadKind::Distribution;
            h.functor = lhs.name();
            h.args.assign(lhs.args().begin(), lhs.args().end());
            h.support = expr();
            h.time = time_suffix();
            head_mode_ = false;
            check_support(h.support);
            return h;
        }
        pos_ = save;
        bool has_prob = false;
        h.alternatives.push_back(head_alternative(has_prob));
        bool all_prob = has_prob;
        while (at_op("+")) {
            next();
            h.alternatives.push_back(head_alternative(has_prob));
            all_prob = all_prob && has_prob;
        }
        head_mode_ = false;
        if (h.alternatives.size() > 1) {
            if (!all_prob)
                fail("every alternative of a sum head needs a probability");
            h.kind = HeadKind::Sum;
            for (const auto &alt : h.alternatives)
                if (!(alt.atom.time == h.alternatives.front().atom.time))
                    fail("alternatives of a sum head must share one time term");
        }
        return h;
    }

    void check_support(const Term &support) {
        if (support.kind() != TermKind::List || support.args().empty())
            return;
        double total = 0.0;
        for (const auto &el : support.args()) {
            if (el.kind() != TermKind::List || el.args().size() != 2 || !el.args()[1].is_number())
                return;
            total += el.args()[1].number_value();
        }
        if (std::fabs(total - 1.0) > 1e-6)
            throw Error(ErrorCode::BadProbability,
                        "weights of distribution " + support.to_string() + " sum to " + std::to_string(total));
    }

    Rule rule() {
        explicit_time_ = false;
        Rule r;
        r.head = head();
        const bool head_explicit = explicit_time_;
        if (at_op(":-")) {
            next();
            body(r.positives, r.neg_elements);
        }
        if (!at(Tok::End))
            fail("expected '.' at end of clause");
        next();
        explicit_time_ = head_explicit;
        check_range_restricted(r);
        return r;
    }

    InputQuery query_rest(bool require_end) {
        InputQuery q;
        if (at(Tok::End) || at(Tok::Eof) || at_op("|"))
            fail("empty query body");
        body(q.positives, q.neg_elements);
        if (at_op("|")) {
            next();
            do {
                if (!q.evidence.empty())
                    next();
                const Token &t = peek();
                Atom a = literal();
                if (a.is_builtin() || !a.is_ground())
                    throw ParseError("evidence must be a ground atom: " + a.to_string(), t.line, t.col);
                q.evidence.push_back(std::move(a));
            } while (at_op(","));
        }
        if (at(Tok::End))
            next();
        else if (require_end)
            fail("expected '.' at end of query");
        return q;
    }
};

} // namespace

void check_range_restricted(const Rule &rule) {
    std::set<std::string> bound;
    for (const auto &a : rule.positives)
        if (!a.is_builtin())
            collect_vars(a, bound);
    std::set<std::string> needed;
    const Head &h = rule.head;
    if (h.kind == HeadKind::Distribution) {
        for (const auto &t : h.args)
            collect_vars(t, needed);
        collect_vars(h.support, needed);
        collect_vars(h.time, needed);
    } else {
        for (const auto &alt : h.alternatives) {
            collect_vars(alt.prob, needed);
            collect_vars(alt.atom, needed);
        }
    }
    for (const auto &a : rule.positives)
        if (a.is_builtin())
            collect_vars(a, needed);
    for (const auto &v : needed)
        if (!bound.contains(v))
            throw Error(ErrorCode::RangeRestriction,
                        "rule '" + rule.to_string() + "' is not range-restricted: variable " + v +
                            " does not occur in a positive body atom");
}

SourceProgram parse_program(std::string_view text) { return Parser(text).program(); }

InputQuery parse_query(std::string_view text) { return Parser(text).standalone_query(); }

std::vector<std::string> InputQuery::answer_variables() const {
    std::vector<std::string> out;
    std::set<std::string> seen;
    for (const auto &a : positives) {
        std::set<std::string> vs;
        collect_vars(a, vs);
        // Keep textual order: walk args in order.
        std::vector<Term> terms;
        if (!a.is_builtin())
            terms.push_back(a.time);
        terms.insert(terms.end(), a.args.begin(), a.args.end());
        if (a.kind == AtomKind::Equation)
            terms.push_back(a.rhs);
        std::vector<Term> stack(terms.rbegin(), terms.rend());
        while (!stack.empty()) {
            Term t = stack.back();
            stack.pop_back();
            if (t.is_var()) {
                if (!t.name().starts_with("_") && seen.insert(t.name()).second)
                    out.push_back(t.name());
            } else {
                for (auto it = t.args().rbegin(); it != t.args().rend(); ++it)
                    stack.push_back(*it);
            }
        }
    }
    return out;
}

std::string InputQuery::to_string() const {
    std::string out = "?- ";
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
    if (!evidence.empty()) {
        out += " | ";
        for (std::size_t i = 0; i < evidence.size(); ++i) {
            if (i) out += ", ";
            out += evidence[i].to_string();
        }
    }
    return out + ".";
}

std::string SourceProgram::to_string() const {
    std::string out;
    for (const auto &[k, v] : configs)
        out += "config(" + k + ", " + v.to_string() + ").\n";
    for (const auto &r : rules)
        out += r.to_string() + "\n";
    for (const auto &q : queries)
        out += q.to_string() + "\n";
    return out;
}

} // namespace plp
