#include "plp/strat.hpp"

#include <algorithm>
#include <functional>
#include <optional>
#include <queue>
#include <set>
#include <sstream>

namespace plp {

namespace {

enum class Rel { Equal, Less, LessEq, Greater, GreaterEq, Unknown };

// `t` decomposed as base + offset, base either a variable name or empty for
// integer constants.
struct Linear {
    std::string var;
    std::int64_t offset = 0;
    bool ok = false;
};

Linear linear(const Term &t) {
    if (t.is_var())
        return {t.name(), 0, true};
    if (t.kind() == TermKind::Integer)
        return {"", t.int_value(), true};
    if (t.kind() == TermKind::Compound && t.args().size() == 2 && (t.name() == "+" || t.name() == "-")) {
        Linear l = linear(t.args()[0]);
        const Term &k = t.args()[1];
        if (!l.ok || k.kind() != TermKind::Integer)
            return {};
        l.offset += t.name() == "+" ? k.int_value() : -k.int_value();
        return l;
    }
    return {};
}

Rel from_difference(std::int64_t d) {
    if (d == 0) return Rel::Equal;
    return d < 0 ? Rel::Less : Rel::Greater;
}

// Relation of `t` to pivot time `n` using constraints among `guards`.
Rel relate(const Term &t, const Term &n, const std::vector<const Atom *> &guards) {
    const Linear lt = linear(t), ln = linear(n);
    if (lt.ok && ln.ok) {
        if (lt.var == ln.var)
            return from_difference(lt.offset - ln.offset);
        // Time points are non-negative, so a constant 0 precedes any variable.
        if (lt.var.empty() && !ln.var.empty() && ln.offset >= 0 && lt.offset <= 0)
            return lt.offset < 0 ? Rel::Less : Rel::LessEq;
    }
    for (const Atom *g : guards) {
        const Term &l = g->args[0], &r = g->args[1];
        const std::string &op = g->name;
        auto is = [](const Term &a, const Term &b) { return a == b; };
        if (is(l, t) && is(r, n)) {
            if (op == "<") return Rel::Less;
            if (op == "<=") return Rel::LessEq;
            if (op == ">") return Rel::Greater;
            if (op == ">=") return Rel::GreaterEq;
            if (op == "=") return Rel::Equal;
        }
        if (is(l, n) && is(r, t)) {
            if (op == ">") return Rel::Less;
            if (op == ">=") return Rel::LessEq;
            if (op == "<") return Rel::Greater;
            if (op == "<=") return Rel::GreaterEq;
            if (op == "=") return Rel::Equal;
        }
    }
    return Rel::Unknown;
}

bool at_most(Rel r) { return r == Rel::Equal || r == Rel::Less || r == Rel::LessEq; }

std::vector<const Atom *> builtins_of(const std::vector<Atom> &atoms) {
    std::vector<const Atom *> out;
    for (const auto &a : atoms)
        if (a.is_builtin())
            out.push_back(&a);
    return out;
}

// Classifies the rule against pivot time `n`; returns false if a condition fails.
bool classify(const Rule &rule, const Term &n, std::size_t pivot_index, PivotInfo &info) {
    const auto guards = builtins_of(rule.positives);
    for (std::size_t j = 0; j < rule.positives.size(); ++j) {
        const Atom &b = rule.positives[j];
        if (b.is_builtin() || j == pivot_index)
            continue;
        if (!at_most(relate(b.time, n, guards)))
            return false;
    }
    const Rel head = relate(rule.head.time_term(), n, guards);
    if (head == Rel::Equal)
        info.future_head = false;
    else if (head == Rel::Greater)
        info.future_head = true;
    else
        return false;
    info.neg_earlier.clear();
    for (const auto &el : rule.neg_elements) {
        auto local = guards;
        for (const auto *g : builtins_of(el))
            local.push_back(g);
        std::vector<bool> flags;
        for (const auto &c : el) {
            if (c.is_builtin()) {
                flags.push_back(true);
                continue;
            }
            const Rel r = relate(c.time, n, local);
            if (!at_most(r))
                return false;
            flags.push_back(r == Rel::Less);
        }
        info.neg_earlier.push_back(std::move(flags));
    }
    return true;
}

} // namespace

bool PivotInfo::has_current_negation() const {
    for (const auto &el : neg_earlier)
        for (bool earlier : el)
            if (!earlier)
                return true;
    return false;
}

PivotInfo check_time_constrained(const Rule &rule) {
    PivotInfo info;
    std::set<std::string> body_vars;
    for (const auto &a : rule.positives)
        if (!a.is_builtin())
            collect_vars(a, body_vars);
    if (body_vars.empty()) {
        // Variable-free rule: the head is the pivot.
        info.head_pivot = true;
        if (!classify(rule, rule.head.time_term(), rule.positives.size(), info)) {
            // A ground head time after all body times still qualifies.
            info.future_head = false;
            info.neg_earlier.assign(rule.neg_elements.size(), {});
            for (std::size_t i = 0; i < rule.neg_elements.size(); ++i)
                info.neg_earlier[i].assign(rule.neg_elements[i].size(), false);
        }
        return info;
    }
    std::optional<PivotInfo> first;
    for (std::size_t i = 0; i < rule.positives.size(); ++i) {
        const Atom &b = rule.positives[i];
        if (b.is_builtin() || !(b.time.is_var() || b.time.kind() == TermKind::Integer))
            continue;
        PivotInfo candidate;
        if (classify(rule, b.time, i, candidate)) {
            if (!first)
                first = candidate;
            info.pivots.push_back(i);
        }
    }
    if (info.pivots.empty())
        throw Error(ErrorCode::NotTimeConstrained, "rule is not time constrained: " + rule.to_string());
    info.future_head = first->future_head;
    info.neg_earlier = first->neg_earlier;
    return info;
}

int Stratification::of(const std::string &pred) const {
    auto it = index.find(pred);
    return it == index.end() ? -1 : it->second;
}

std::string Stratification::to_string() const {
    std::ostringstream os;
    for (std::size_t i = 0; i < strata.size(); ++i) {
        os << i << ':';
        for (const auto &p : strata[i])
            os << ' ' << p;
        os << '\n';
    }
    return os.str();
}

std::string TimedStratum::to_string() const {
    return "(" + std::to_string(time) + ", " + std::to_string(stratum) + ")";
}

Stratification build_stratification(const std::vector<Rule> &rules) {
    Stratification out;
    std::set<std::string> nodes;
    for (const auto &rule : rules) {
        for (const auto &p : rule.head.predicates())
            nodes.insert(p);
        for (const auto &a : rule.positives)
            if (!a.is_builtin())
                nodes.insert(a.name);
        for (const auto &el : rule.neg_elements)
            for (const auto &a : el)
                if (!a.is_builtin())
                    nodes.insert(a.name);
        if (rule.is_fact())
            continue;
        const PivotInfo info = check_time_constrained(rule);
        if (info.future_head)
            continue;
        for (const auto &h : rule.head.predicates()) {
            for (const auto &a : rule.positives)
                if (!a.is_builtin())
                    out.edges.push_back({h, a.name, false});
            for (std::size_t e = 0; e < rule.neg_elements.size(); ++e)
                for (std::size_t k = 0; k < rule.neg_elements[e].size(); ++k) {
                    const Atom &a = rule.neg_elements[e][k];
                    if (!a.is_builtin() && !info.neg_earlier[e][k])
                        out.edges.push_back({h, a.name, true});
                }
        }
    }

    const std::vector<std::string> names(nodes.begin(), nodes.end());
    std::map<std::string, int> id;
    for (std::size_t i = 0; i < names.size(); ++i)
        id[names[i]] = static_cast<int>(i);
    const int n = static_cast<int>(names.size());
    std::vector<std::vector<int>> adj(n);
    for (const auto &e : out.edges)
        adj[id[e.from]].push_back(id[e.to]);

    // Tarjan's SCC algorithm.
    std::vector<int> idx(n, -1), low(n, 0), comp(n, -1);
    std::vector<bool> on_stack(n, false);
    std::vector<int> stack;
    int counter = 0, ncomp = 0;
    std::function<void(int)> visit = [&](int v) {
        idx[v] = low[v] = counter++;
        stack.push_back(v);
        on_stack[v] = true;
        for (int w : adj[v]) {
            if (idx[w] < 0) {
                visit(w);
                low[v] = std::min(low[v], low[w]);
            } else if (on_stack[w]) {
                low[v] = std::min(low[v], idx[w]);
            }
        }
        if (low[v] == idx[v]) {
            int w;
            do {
                w = stack.back();
                stack.pop_back();
                on_stack[w] = false;
                comp[w] = ncomp;
            } while (w != v);
            ++ncomp;
        }
    };
    for (int v = 0; v < n; ++v)
        if (idx[v] < 0)
            visit(v);

    std::vector<std::vector<std::string>> members(ncomp);
    for (int v = 0; v < n; ++v)
        members[comp[v]].push_back(names[v]);
    for (const auto &e : out.edges) {
        if (e.negative && comp[id[e.from]] == comp[id[e.to]]) {
            std::string cycle;
            for (const auto &p : members[comp[id[e.from]]])
                cycle += (cycle.empty() ? "" : ", ") + p;
            throw Error(ErrorCode::NotStratified, "cycle through negation among predicates {" + cycle + "}");
        }
    }

    // Linearize: a body component precedes its head component; ties go to the
    // component with the lexicographically smallest predicate.
    std::vector<std::set<int>> succ(ncomp);
    std::vector<int> indeg(ncomp, 0);
    for (const auto &e : out.edges) {
        int head = comp[id[e.from]], body = comp[id[e.to]];
        if (head != body && succ[body].insert(head).second)
            ++indeg[head];
    }
    using Entry = std::pair<std::string, int>;
    std::priority_queue<Entry, std::vector<Entry>, std::greater<>> ready;
    for (int c = 0; c < ncomp; ++c) {
        std::sort(members[c].begin(), members[c].end());
        if (indeg[c] == 0)
            ready.push({members[c].front(), c});
    }
    while (!ready.empty()) {
        auto [name, c] = ready.top();
        ready.pop();
        const int pos = static_cast<int>(out.strata.size());
        out.strata.push_back(members[c]);
        for (const auto &p : members[c])
            out.index[p] = pos;
        for (int h : succ[c])
            if (--indeg[h] == 0)
                ready.push({members[h].front(), h});
    }
    return out;
}

TimedStratum strat_of(const Atom &atom, const Stratification &s) {
    const std::int64_t t = eval_time(atom.time);
    if (t < 0)
        throw Error(ErrorCode::NegativeTime, "negative time point in " + atom.to_string());
    const int k = s.of(atom.name);
    if (k < 0)
        throw Error(ErrorCode::UnknownAtom, "predicate '" + atom.name + "' does not occur in the program");
    return {t, k};
}

} // namespace plp
