#include "plp/grounder.hpp"

#include <cmath>
#include <functional>
#include <map>
#include <set>
#include <unordered_map>

namespace plp {

namespace {

constexpr double kProbTolerance = 1e-6;

class DomainIndex {
public:
    void add(AtomId id, const Atom &a) {
        pred_[a.name].push_back(id);
        time_[a.name][a.time.int_value()].push_back(id);
    }

    const std::vector<AtomId> &by_pred(const std::string &name) const {
        auto it = pred_.find(name);
        return it == pred_.end() ? empty_ : it->second;
    }

    const std::vector<AtomId> &by_pred_time(const std::string &name, std::int64_t t) const {
        auto it = time_.find(name);
        if (it == time_.end())
            return empty_;
        auto jt = it->second.find(t);
        return jt == it->second.end() ? empty_ : jt->second;
    }

private:
    std::unordered_map<std::string, std::vector<AtomId>> pred_;
    std::unordered_map<std::string, std::unordered_map<std::int64_t, std::vector<AtomId>>> time_;
    std::vector<AtomId> empty_;
};

bool interpreted_parts_ground(const Term &t) {
    if (!t.has_interpreted())
        return true;
    if (t.is_interpreted())
        return t.is_ground();
    for (const auto &a : t.args())
        if (!interpreted_parts_ground(a))
            return false;
    return true;
}

bool interpreted_parts_ground(const Atom &a) {
    for (const auto &t : a.args)
        if (!interpreted_parts_ground(t))
            return false;
    return interpreted_parts_ground(a.time) && (a.kind != AtomKind::Equation || interpreted_parts_ground(a.rhs));
}

/// Enumerates matchers of a conjunction of atoms against an indexed domain.
class Joiner {
public:
    using Filter = std::function<bool(AtomId)>;
    using Callback = std::function<void(const Substitution &, const std::vector<AtomId> &)>;

    Joiner(const std::vector<Atom> &pats, const AtomTable &table, const DomainIndex &index, Filter filter)
        : pats_(pats), table_(table), index_(index), filter_(std::move(filter)), done_(pats.size(), 0),
          matched_(pats.size(), -1) {}

    /// `fixed` restricts one pattern position (the pivot) to `fixed_atom`.
    void run(const Substitution &base, const Callback &cb, std::size_t fixed = SIZE_MAX, AtomId fixed_atom = -1) {
        cb_ = &cb;
        forced_pos_ = fixed;
        forced_atom_ = fixed_atom;
        step(base);
    }

private:
    const std::vector<Atom> &pats_;
    const AtomTable &table_;
    const DomainIndex &index_;
    Filter filter_;
    std::vector<char> done_;
    std::vector<AtomId> matched_;
    const Callback *cb_ = nullptr;
    std::size_t forced_pos_ = SIZE_MAX;
    AtomId forced_atom_ = -1;

    void step(const Substitution &subst) {
        std::size_t choice = SIZE_MAX;
        for (std::size_t i = 0; i < pats_.size(); ++i) {
            if (done_[i] || !pats_[i].is_builtin())
                continue;
            Atom inst = plp::apply(subst, pats_[i]);
            if (!inst.is_ground())
                continue;
            if (!eval_builtin(inst))
                return;
            done_[i] = 1;
            step(subst);
            done_[i] = 0;
            return;
        }
        for (std::size_t i = 0; i < pats_.size(); ++i) {
            if (done_[i] || pats_[i].is_builtin())
                continue;
            if (choice == SIZE_MAX)
                choice = i;
            if (interpreted_parts_ground(plp::apply(subst, pats_[i]))) {
                choice = i;
                break;
            }
        }
        if (choice == SIZE_MAX) {
            for (std::size_t i = 0; i < pats_.size(); ++i)
                if (!done_[i])
                    throw Error(ErrorCode::Eval, "cannot instantiate " + pats_[i].to_string());
            (*cb_)(subst, matched_);
            return;
        }
        const Atom inst = plp::apply(subst, pats_[choice]);
        const std::vector<AtomId> forced{forced_atom_};
        const std::vector<AtomId> *candidates;
        if (choice == forced_pos_) {
            candidates = &forced;
        } else if (inst.time.is_ground()) {
            const Term t = eval_term(inst.time);
            if (t.kind() != TermKind::Integer)
                throw Error(ErrorCode::Eval, "time term is not an integer: " + inst.to_string());
            candidates = &index_.by_pred_time(inst.name, t.int_value());
        } else {
            candidates = &index_.by_pred(inst.name);
        }
        done_[choice] = 1;
        for (AtomId c : *candidates) {
            if (!filter_(c))
                continue;
            auto m = match(inst, table_[c]);
            if (!m)
                continue;
            Substitution next = subst;
            next.insert(m->begin(), m->end());
            matched_[choice] = c;
            step(next);
        }
        matched_[choice] = -1;
        done_[choice] = 0;
    }
};

std::vector<Lit> sorted_unique(std::vector<Lit> v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
}

bool self_complementary(const std::vector<Lit> &sorted) {
    for (std::size_t i = 1; i < sorted.size(); ++i)
        if (sorted[i] == (sorted[i - 1] | 1) && is_neg(sorted[i]) && !is_neg(sorted[i - 1]))
            return true;
    return false;
}

/// Grounds negative elements (already instantiated) over the filtered
/// domain; returns the negative literal sets of all resulting bodies.
std::vector<std::vector<Lit>> ground_negatives(const std::vector<std::vector<Atom>> &elements, const AtomTable &table,
                                               const DomainIndex &index, const Joiner::Filter &filter) {
    std::vector<std::vector<Lit>> bodies{{}};
    for (const auto &el : elements) {
        std::vector<std::vector<AtomId>> family;
        Joiner joiner(el, table, index, filter);
        Joiner::Callback cb = [&](const Substitution &, const std::vector<AtomId> &matched) {
            std::vector<AtomId> seq;
            for (AtomId a : matched)
                if (a >= 0)
                    seq.push_back(a);
            std::sort(seq.begin(), seq.end());
            seq.erase(std::unique(seq.begin(), seq.end()), seq.end());
            family.push_back(std::move(seq));
        };
        joiner.run({}, cb);
        std::sort(family.begin(), family.end());
        family.erase(std::unique(family.begin(), family.end()), family.end());
        const auto hs = hitting_sets(family);
        if (hs.empty())
            return {};
        std::vector<std::vector<Lit>> next;
        for (const auto &b : bodies) {
            for (const auto &h : hs) {
                auto extended = b;
                for (AtomId a : h)
                    extended.push_back(neg_lit(a));
                next.push_back(std::move(extended));
            }
        }
        bodies = std::move(next);
    }
    return bodies;
}

struct Alternative {
    double prob;
    Atom atom;
};

std::vector<Alternative> alternatives_of(const Head &head) {
    std::vector<Alternative> alts;
    if (head.kind == HeadKind::Distribution) {
        const Term support = eval_term(head.support);
        if (support.kind() != TermKind::List)
            throw Error(ErrorCode::Eval, "distribution support is not a list: " + support.to_string());
        std::vector<Term> args;
        for (const auto &t : head.args)
            args.push_back(eval_term(t));
        const auto els = support.args();
        bool weighted = !els.empty();
        for (const auto &el : els)
            weighted = weighted && el.kind() == TermKind::List && el.args().size() == 2 && el.args()[1].is_number();
        double total = 0.0;
        for (const auto &el : els) {
            const Term value = weighted ? el.args()[0] : el;
            const double p = weighted ? el.args()[1].number_value() : 1.0 / static_cast<double>(els.size());
            total += p;
            alts.push_back({p, Atom::equation(head.functor, args, value, head.time)});
        }
        if (weighted && std::fabs(total - 1.0) > kProbTolerance)
            throw Error(ErrorCode::BadProbability,
                        "weights of " + support.to_string() + " sum to " + std::to_string(total));
        return alts;
    }
    for (const auto &alt : head.alternatives) {
        const Term p = eval_term(alt.prob);
        if (!p.is_number())
            throw Error(ErrorCode::BadProbability, "head probability is not a number: " + p.to_string());
        alts.push_back({p.number_value(), alt.atom});
    }
    return alts;
}

} // namespace

NormalizedRule normalize(const Head &ground_head, const std::vector<Lit> &body, const std::string &aux_prefix,
                         AtomTable &table) {
    NormalizedRule out;
    std::vector<Alternative> alts = alternatives_of(ground_head);
    if (alts.empty())
        return out;
    const Term time = Term::integer(eval_time(ground_head.time_term()));
    double total = 0.0;
    for (const auto &a : alts) {
        if (!(a.prob > 0.0) || a.prob > 1.0 + 1e-12)
            throw Error(ErrorCode::BadProbability,
                        "probability " + std::to_string(a.prob) + " outside (0,1] in " + ground_head.to_string());
        total += a.prob;
    }
    if (total > 1.0 + kProbTolerance)
        throw Error(ErrorCode::BadProbability, "probabilities sum to " + std::to_string(total) + " in " +
                                                   ground_head.to_string());

    if (alts.size() == 1 && ground_head.kind == HeadKind::Ordinary) {
        const AtomId a = table.intern(normalize_ground_atom(alts[0].atom));
        if (alts[0].prob >= 1.0 - 1e-12) {
            out.rules.push_back({a, body});
            return out;
        }
        if (body.empty()) {
            out.prob_facts.push_back({a, alts[0].prob});
            return out;
        }
    }

    const AtomId head_b = table.intern(Atom::ordinary("h__" + aux_prefix, {}, time));
    out.aux_atoms.push_back(head_b);
    out.rules.push_back({head_b, body});
    std::vector<AtomId> cases;
    double used = 0.0;
    for (std::size_t i = 0; i < alts.size(); ++i) {
        const AtomId target = table.intern(normalize_ground_atom(alts[i].atom));
        const AtomId c =
            table.intern(Atom::ordinary("c__" + aux_prefix + "_" + std::to_string(i + 1), {}, time));
        out.aux_atoms.push_back(c);
        std::vector<Lit> sel{pos_lit(head_b)};
        for (AtomId prev : cases)
            sel.push_back(neg_lit(prev));
        sel.push_back(pos_lit(c));
        std::sort(sel.begin(), sel.end());
        out.rules.push_back({target, std::move(sel)});
        const double remaining = 1.0 - used;
        double f = remaining > 1e-12 ? alts[i].prob / remaining : 1.0;
        if (f >= 1.0 - 1e-9)
            out.rules.push_back({c, {}});
        else
            out.prob_facts.push_back({c, f});
        used += alts[i].prob;
        cases.push_back(c);
    }
    return out;
}

std::vector<Lit> regress(const std::vector<Lit> &query, std::span<const NormalRule> rules,
                         const std::unordered_set<AtomId> &fact_atoms) {
    std::unordered_map<AtomId, std::vector<const NormalRule *>> by_head;
    for (const auto &r : rules)
        if (!r.body.empty())
            by_head[r.head].push_back(&r);
    std::set<Lit> result(query.begin(), query.end());
    std::vector<Lit> work(query.begin(), query.end());
    std::unordered_set<AtomId> expanded;
    while (!work.empty()) {
        const Lit l = work.back();
        work.pop_back();
        if (is_neg(l) || !expanded.insert(atom_of(l)).second || fact_atoms.contains(atom_of(l)))
            continue;
        auto it = by_head.find(atom_of(l));
        if (it == by_head.end())
            continue;
        std::vector<Lit> common = it->second.front()->body;
        for (std::size_t k = 1; k < it->second.size() && !common.empty(); ++k) {
            std::vector<Lit> next;
            const auto &b = it->second[k]->body;
            std::set_intersection(common.begin(), common.end(), b.begin(), b.end(), std::back_inserter(next));
            common = std::move(next);
        }
        for (Lit c : common)
            if (result.insert(c).second)
                work.push_back(c);
    }
    return {result.begin(), result.end()};
}

namespace {

struct RuleKeyHash {
    std::size_t operator()(const std::pair<AtomId, std::vector<Lit>> &k) const {
        std::size_t h = static_cast<std::size_t>(k.first) * 2654435761u;
        for (Lit l : k.second)
            h = h * 1000003u ^ static_cast<std::size_t>(l);
        return h;
    }
};

struct MatchKeyHash {
    std::size_t operator()(const std::vector<AtomId> &k) const {
        std::size_t h = 0;
        for (AtomId a : k)
            h = h * 1000003u ^ static_cast<std::size_t>(a);
        return h;
    }
};

class Grounder {
public:
    Grounder(const std::vector<Rule> &rules, const Stratification &strat, const std::vector<GroundLiteral> &query,
             const GroundOptions &options)
        : rules_(rules), strat_(strat), opt_(options), seen_(rules.size()), aux_counter_(rules.size(), 0) {
        for (const auto &r : rules_)
            info_.push_back(r.is_fact() ? PivotInfo{{}, true, false, {}} : check_time_constrained(r));
        for (const auto &q : query) {
            const AtomId a = intern(normalize_ground_atom(q.atom), std::nullopt);
            add_to_query(q.negative ? neg_lit(a) : pos_lit(a));
        }
    }

    GroundProgram run() {
        for (std::int64_t n = 0; n <= opt_.eot; ++n) {
            for (int s = 0; s < strat_.size(); ++s) {
                const TimedStratum S{n, s};
                process_stratum(S);
                if (opt_.guided)
                    regress_and_prune(S);
                record_stats(S);
            }
        }
        return finish();
    }

private:
    struct GRule {
        AtomId head;
        std::vector<Lit> body;
        bool alive = true;
    };
    struct GFact {
        AtomId atom;
        double prob;
    };
    struct Pending {
        std::size_t rule;
        Substitution subst;
        std::vector<Lit> positives;
    };

    const std::vector<Rule> &rules_;
    const Stratification &strat_;
    GroundOptions opt_;
    std::vector<PivotInfo> info_;

    GroundProgram out_;
    std::vector<char> in_domain_;
    std::vector<TimedStratum> atom_strat_;
    std::vector<char> has_strat_;
    DomainIndex index_;
    std::vector<GRule> grules_;
    std::vector<GFact> facts_;
    std::unordered_set<std::pair<AtomId, std::vector<Lit>>, RuleKeyHash> rule_keys_;
    std::vector<std::unordered_set<std::vector<AtomId>, MatchKeyHash>> seen_;
    std::vector<int> aux_counter_;
    std::map<TimedStratum, std::vector<Pending>> pending_;
    bool added_at_current_ = false;
    TimedStratum current_{};

    std::vector<Lit> query_;
    std::unordered_set<Lit> query_lits_;
    std::unordered_map<int, AtomId> query_eqs_;
    bool query_inconsistent_ = false;

    AtomTable &table() { return *out_.atoms; }

    AtomId intern(const Atom &a, std::optional<TimedStratum> st) {
        const AtomId id = table().intern(a);
        const auto n = static_cast<std::size_t>(id) + 1;
        if (in_domain_.size() < n) {
            in_domain_.resize(n, 0);
            atom_strat_.resize(n);
            has_strat_.resize(n, 0);
        }
        if (!has_strat_[static_cast<std::size_t>(id)]) {
            if (st) {
                atom_strat_[static_cast<std::size_t>(id)] = *st;
                has_strat_[static_cast<std::size_t>(id)] = 1;
            } else if (int k = strat_.of(a.name); k >= 0) {
                atom_strat_[static_cast<std::size_t>(id)] = {a.time.int_value(), k};
                has_strat_[static_cast<std::size_t>(id)] = 1;
            }
        }
        return id;
    }

    TimedStratum strat_of_atom(AtomId a) const { return atom_strat_[static_cast<std::size_t>(a)]; }

    void add_to_domain(AtomId a) {
        if (in_domain_[static_cast<std::size_t>(a)])
            return;
        if (!has_strat_[static_cast<std::size_t>(a)])
            throw Error(ErrorCode::UnknownAtom, "atom without stratum: " + table().to_string(a));
        in_domain_[static_cast<std::size_t>(a)] = 1;
        if (!indexed_.contains(a)) {
            index_.add(a, table()[a]);
            indexed_.insert(a);
        }
        if (strat_of_atom(a) == current_)
            added_at_current_ = true;
    }
    std::unordered_set<AtomId> indexed_;

    void add_to_query(Lit l) {
        if (!query_lits_.insert(l).second)
            return;
        query_.push_back(l);
        if (query_lits_.contains(complement(l)))
            query_inconsistent_ = true;
        if (!is_neg(l)) {
            const int key = table().eq_key(atom_of(l));
            if (key >= 0) {
                auto [it, inserted] = query_eqs_.emplace(key, atom_of(l));
                if (!inserted && it->second != atom_of(l))
                    query_inconsistent_ = true;
            }
        }
    }

    bool consistent_with_query(const std::vector<Lit> &body) const {
        if (query_inconsistent_)
            return false;
        std::unordered_map<int, AtomId> local;
        for (Lit l : body) {
            if (query_lits_.contains(complement(l)))
                return false;
            if (is_neg(l))
                continue;
            const int key = out_.atoms->eq_key(atom_of(l));
            if (key < 0)
                continue;
            auto it = query_eqs_.find(key);
            if (it != query_eqs_.end() && it->second != atom_of(l))
                return false;
            auto [jt, inserted] = local.emplace(key, atom_of(l));
            if (!inserted && jt->second != atom_of(l))
                return false;
        }
        return true;
    }

    // Stratum of a head instance: its time and the lowest stratum among the
    // predicates it defines.
    std::optional<TimedStratum> head_stratum(const Rule &rule, const Substitution &subst) {
        const std::int64_t t = eval_time(plp::apply(subst, rule.head.time_term()));
        if (t < 0)
            throw Error(ErrorCode::NegativeTime, "head time " + std::to_string(t) + " in " + rule.to_string());
        if (t > opt_.eot)
            return std::nullopt;
        int k = INT32_MAX;
        for (const auto &p : rule.head.predicates())
            k = std::min(k, strat_.of(p));
        return TimedStratum{t, k};
    }

    void process_stratum(const TimedStratum &S) {
        current_ = S;
        if (auto it = pending_.find(S); it != pending_.end()) {
            auto pending = std::move(it->second);
            pending_.erase(it);
            for (const auto &p : pending)
                instantiate(p.rule, p.subst, p.positives, S);
        }
        do {
            added_at_current_ = false;
            sweep(S);
        } while (added_at_current_);
    }

    // Variable-free rules are scheduled at the timed stratum of their head.
    void ground_head_pivot(std::size_t i, const TimedStratum &S) {
        const Rule &rule = rules_[i];
        const auto hs = head_stratum(rule, {});
        if (!hs || *hs != S)
            return;
        std::vector<AtomId> matched;
        for (const auto &b : rule.positives) {
            if (b.is_builtin()) {
                if (!eval_builtin(b))
                    return;
                continue;
            }
            const auto id = table().find(normalize_ground_atom(b));
            if (!id || !in_domain_[static_cast<std::size_t>(*id)] || S < strat_of_atom(*id))
                return;
            matched.push_back(*id);
        }
        if (!seen_[i].insert(matched).second)
            return;
        std::vector<Lit> positives;
        for (AtomId a : matched)
            positives.push_back(pos_lit(a));
        instantiate(i, {}, positives, S);
    }

    void sweep(const TimedStratum &S) {
        const auto upto = [this, S](AtomId a) {
            return in_domain_[static_cast<std::size_t>(a)] && !(S < strat_of_atom(a));
        };
        for (std::size_t i = 0; i < rules_.size(); ++i) {
            const Rule &rule = rules_[i];
            if (info_[i].head_pivot) {
                ground_head_pivot(i, S);
                continue;
            }
            for (std::size_t p : info_[i].pivots) {
                const Atom &pivot = rule.positives[p];
                if (strat_.of(pivot.name) != S.stratum)
                    continue;
                // Copy: instantiation may grow the index while we iterate.
                const std::vector<AtomId> candidates = index_.by_pred_time(pivot.name, S.time);
                for (AtomId c : candidates) {
                    if (!upto(c))
                        continue;
                    Joiner joiner(rule.positives, table(), index_, upto);
                    std::vector<std::pair<Substitution, std::vector<AtomId>>> found;
                    Joiner::Callback cb = [&](const Substitution &s, const std::vector<AtomId> &m) {
                        found.emplace_back(s, m);
                    };
                    joiner.run({}, cb, p, c);
                    for (auto &[subst, matched] : found)
                        on_matcher(i, subst, matched, S);
                }
            }
        }
    }

    void on_matcher(std::size_t i, const Substitution &subst, const std::vector<AtomId> &matched,
                    const TimedStratum &S) {
        if (!seen_[i].insert(matched).second)
            return;
        const auto hs = head_stratum(rules_[i], subst);
        if (!hs)
            return;
        std::vector<Lit> positives;
        for (AtomId a : matched)
            if (a >= 0)
                positives.push_back(pos_lit(a));
        if (info_[i].has_current_negation() && S < *hs) {
            pending_[*hs].push_back({i, subst, std::move(positives)});
            return;
        }
        instantiate(i, subst, positives, S);
    }

    void instantiate(std::size_t i, const Substitution &subst, const std::vector<Lit> &positives,
                     const TimedStratum &S) {
        const Rule &rule = rules_[i];
        std::vector<std::vector<Atom>> negs;
        for (const auto &el : rule.neg_elements) {
            std::vector<Atom> inst;
            for (const auto &a : el) {
                Atom ia = plp::apply(subst, a);
                if (!ia.is_builtin() && ia.time.is_ground()) {
                    const std::int64_t t = eval_time(ia.time);
                    const int k = strat_.of(ia.name);
                    if (k >= 0 && !(TimedStratum{t, k} < S))
                        throw Error(ErrorCode::NotStratified, "negated atom " + ia.to_string() +
                                                                   " is not below timed stratum " + S.to_string());
                }
                inst.push_back(std::move(ia));
            }
            negs.push_back(std::move(inst));
        }
        const auto below = [this, S](AtomId a) {
            return in_domain_[static_cast<std::size_t>(a)] && strat_of_atom(a) < S;
        };
        const auto neg_bodies = ground_negatives(negs, table(), index_, below);
        if (neg_bodies.empty())
            return;
        const Head head = [&] {
            Rule r;
            r.head = rule.head;
            return plp::apply(subst, r).head;
        }();
        for (const auto &nb : neg_bodies) {
            std::vector<Lit> body = positives;
            body.insert(body.end(), nb.begin(), nb.end());
            body = sorted_unique(std::move(body));
            if (self_complementary(body))
                continue;
            if (opt_.guided && !consistent_with_query(body))
                continue;
            emit(i, head, body);
        }
    }

    void emit(std::size_t i, const Head &head, const std::vector<Lit> &body) {
        const std::string prefix = "r" + std::to_string(i) + "_" + std::to_string(++aux_counter_[i]);
        NormalizedRule nr = normalize(head, body, prefix, table());
        int k = INT32_MAX;
        for (const auto &p : head.predicates())
            k = std::min(k, strat_.of(p));
        const TimedStratum aux_st{eval_time(head.time_term()), k};
        for (AtomId a : nr.aux_atoms)
            intern(table()[a], aux_st);
        for (auto &r : nr.rules) {
            intern(table()[r.head], std::nullopt);
            if (!rule_keys_.insert({r.head, r.body}).second)
                continue;
            grules_.push_back({r.head, std::move(r.body), true});
            add_to_domain(r.head);
        }
        for (const auto &f : nr.prob_facts) {
            intern(table()[f.atom], std::nullopt);
            facts_.push_back({f.atom, f.prob});
            add_to_domain(f.atom);
        }
    }

    void regress_and_prune(const TimedStratum &S) {
        for (;;) {
            const std::size_t before = query_.size();
            regress_once(S);
            const bool pruned = prune();
            if (!pruned && query_.size() == before)
                break;
        }
    }

    void regress_once(const TimedStratum &S) {
        std::vector<NormalRule> rules;
        std::unordered_set<AtomId> fact_atoms;
        for (const auto &r : grules_) {
            if (!r.alive || S < strat_of_atom(r.head))
                continue;
            if (r.body.empty())
                fact_atoms.insert(r.head);
            else
                rules.push_back({r.head, r.body});
        }
        for (const auto &f : facts_)
            fact_atoms.insert(f.atom);
        for (Lit l : regress(query_, rules, fact_atoms))
            add_to_query(l);
    }

    bool prune() {
        bool any = false;
        bool changed = true;
        while (changed) {
            changed = false;
            for (auto &r : grules_) {
                if (!r.alive)
                    continue;
                bool dead = !consistent_with_query(r.body);
                for (Lit l : r.body)
                    dead = dead || (!is_neg(l) && !in_domain_[static_cast<std::size_t>(atom_of(l))]);
                if (dead) {
                    r.alive = false;
                    changed = any = true;
                }
            }
            if (!changed)
                break;
            std::vector<char> supported(in_domain_.size(), 0);
            for (const auto &r : grules_)
                if (r.alive)
                    supported[static_cast<std::size_t>(r.head)] = 1;
            for (const auto &f : facts_)
                supported[static_cast<std::size_t>(f.atom)] = 1;
            for (std::size_t a = 0; a < in_domain_.size(); ++a)
                if (in_domain_[a] && !supported[a])
                    in_domain_[a] = 0;
        }
        return any;
    }

    void record_stats(const TimedStratum &S) {
        StratumStats st;
        st.stratum = S;
        for (const auto &r : grules_)
            st.rules += r.alive ? 1 : 0;
        st.prob_facts = facts_.size();
        for (char d : in_domain_)
            st.domain += d ? 1 : 0;
        out_.stats.push_back(st);
    }

    GroundProgram finish() {
        std::unordered_map<AtomId, int> defs;
        for (const auto &r : grules_)
            if (r.alive)
                ++defs[r.head];
        for (const auto &f : facts_)
            ++defs[f.atom];
        int fresh = 0;
        for (const auto &r : grules_)
            if (r.alive)
                out_.rules.push_back({r.head, r.body});
        for (const auto &f : facts_) {
            if (defs[f.atom] == 1) {
                out_.prob_facts.push_back({f.atom, f.prob});
                continue;
            }
            // Keep probabilistic facts disjoint from rule heads.
            const Atom &a = table()[f.atom];
            const AtomId aux = intern(Atom::ordinary("f__" + std::to_string(++fresh), {}, a.time), strat_of_atom(f.atom));
            out_.prob_facts.push_back({aux, f.prob});
            out_.rules.push_back({f.atom, {pos_lit(aux)}});
            in_domain_[static_cast<std::size_t>(aux)] = 1;
        }
        for (std::size_t a = 0; a < in_domain_.size(); ++a)
            if (in_domain_[a])
                out_.domain.push_back(static_cast<AtomId>(a));
        out_.compute_order();
        return std::move(out_);
    }
};

} // namespace

GroundProgram ground(const std::vector<Rule> &rules, const Stratification &strat,
                     const std::vector<GroundLiteral> &query, const GroundOptions &options) {
    if (options.eot < 0)
        throw Error(ErrorCode::NegativeTime, "end of time must be non-negative");
    return Grounder(rules, strat, query, options).run();
}

GroundProgram ground(const std::vector<Rule> &rules, const std::vector<GroundLiteral> &query,
                     const GroundOptions &options) {
    return ground(rules, build_stratification(rules), query, options);
}

namespace {

struct LocalDomain {
    AtomTable table;
    DomainIndex index;

    explicit LocalDomain(const std::vector<Atom> &domain) {
        for (const auto &a : domain) {
            const Atom g = normalize_ground_atom(a);
            const std::size_t before = table.size();
            const AtomId id = table.intern(g);
            if (table.size() > before)
                index.add(id, g);
        }
    }
};

} // namespace

std::vector<std::vector<GroundLiteral>> gnd_body(const std::vector<Atom> &positives,
                                                 const std::vector<std::vector<Atom>> &neg_elements,
                                                 const std::vector<Atom> &domain) {
    LocalDomain dom(domain);
    std::vector<GroundLiteral> pos;
    for (const auto &b : positives) {
        if (b.is_builtin()) {
            if (!eval_builtin(b))
                return {};
            continue;
        }
        pos.push_back({false, normalize_ground_atom(b)});
    }
    const auto bodies = ground_negatives(neg_elements, dom.table, dom.index, [](AtomId) { return true; });
    std::vector<std::vector<GroundLiteral>> out;
    for (const auto &nb : bodies) {
        std::vector<GroundLiteral> body = pos;
        for (Lit l : sorted_unique(nb))
            body.push_back({true, dom.table[atom_of(l)]});
        std::sort(body.begin(), body.end(),
                  [](const GroundLiteral &a, const GroundLiteral &b) { return a.to_string() < b.to_string(); });
        body.erase(std::unique(body.begin(), body.end()), body.end());
        bool clash = false;
        for (const auto &l : body)
            for (const auto &m : body)
                clash = clash || (l.negative != m.negative && l.atom == m.atom);
        if (!clash)
            out.push_back(std::move(body));
    }
    return out;
}

std::vector<Substitution> match_body(const std::vector<Atom> &body, const std::vector<Atom> &domain) {
    LocalDomain dom(domain);
    std::vector<Substitution> out;
    Joiner joiner(body, dom.table, dom.index, [](AtomId) { return true; });
    Joiner::Callback cb = [&](const Substitution &s, const std::vector<AtomId> &) { out.push_back(s); };
    joiner.run({}, cb);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

} // namespace plp
