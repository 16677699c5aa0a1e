#include "plp/inference.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <unordered_map>

#include "plp/semantics.hpp"

namespace plp {

GroundProgram disjoint_transform(const GroundProgram &g, bool cautious) {
    GroundProgram out;
    out.atoms = g.atoms;
    out.prob_facts = g.prob_facts;
    out.domain = g.domain;
    out.stats = g.stats;
    std::unordered_map<AtomId, std::vector<const NormalRule *>> by_head;
    std::vector<AtomId> heads;
    for (const auto &r : g.rules) {
        auto &v = by_head[r.head];
        if (v.empty())
            heads.push_back(r.head);
        v.push_back(&r);
    }
    for (AtomId h : heads) {
        const auto &defs = by_head[h];
        bool keep = defs.size() < 2;
        if (!keep && cautious) {
            keep = true;
            for (std::size_t i = 0; i < defs.size() && keep; ++i)
                for (std::size_t j = i + 1; j < defs.size() && keep; ++j)
                    keep = !consistent(defs[i]->body, defs[j]->body, *g.atoms);
        }
        if (keep) {
            for (const NormalRule *r : defs)
                out.rules.push_back(*r);
            continue;
        }
        const Term head_time = (*g.atoms)[h].time;
        std::vector<AtomId> indicators;
        for (std::size_t i = 0; i < defs.size(); ++i) {
            const AtomId ind = out.atoms->intern(Atom::ordinary(
                "d__" + std::to_string(h) + "_" + std::to_string(i + 1), {}, head_time));
            out.domain.push_back(ind);
            out.rules.push_back({ind, defs[i]->body});
            std::vector<Lit> sel;
            for (AtomId prev : indicators)
                sel.push_back(neg_lit(prev));
            sel.push_back(pos_lit(ind));
            std::sort(sel.begin(), sel.end());
            out.rules.push_back({h, std::move(sel)});
            indicators.push_back(ind);
        }
    }
    out.compute_order();
    return out;
}

namespace {

struct LitsHash {
    std::size_t operator()(const std::vector<Lit> &v) const {
        std::size_t h = v.size();
        for (Lit l : v)
            h = h * 1000003u ^ static_cast<std::size_t>(l);
        return h;
    }
};

class Ve {
public:
    Ve(const GroundProgram &g, const VeOptions &options) : g_(g), opt_(options), by_head_(g.atoms->size()),
                                                          fact_prob_(g.atoms->size(), -1.0) {
        for (const auto &r : g.rules)
            by_head_[static_cast<std::size_t>(r.head)].push_back(&r);
        for (const auto &f : g.prob_facts)
            fact_prob_[static_cast<std::size_t>(f.atom)] = f.prob;
        if (opt_.instrument)
            multiplicity_.assign(g.atoms->size(), 0);
        if (opt_.pruning)
            compute_implied();
    }

    double run(std::span<const Lit> query) {
        std::vector<Lit> q;
        for (Lit l : query) {
            const auto a = static_cast<std::size_t>(atom_of(l));
            const bool present = a < g_.rank.size() && g_.rank[a] >= 0;
            if (present)
                q.push_back(l);
            else if (!is_neg(l))
                return 0.0;
        }
        std::sort(q.begin(), q.end());
        q.erase(std::unique(q.begin(), q.end()), q.end());
        return inner(q);
    }

    VeStats stats;

private:
    const GroundProgram &g_;
    VeOptions opt_;
    std::vector<std::vector<const NormalRule *>> by_head_;
    std::vector<double> fact_prob_;
    std::unordered_map<std::vector<Lit>, double, LitsHash> cache_;
    std::vector<std::size_t> multiplicity_;
    /// Literals true in every model where the atom holds (regression closure).
    std::vector<std::vector<Lit>> implied_;

    void compute_implied() {
        implied_.assign(g_.atoms->size(), {});
        for (AtomId a : g_.order) {
            const auto &defs = by_head_[static_cast<std::size_t>(a)];
            if (defs.empty() || fact_prob_[static_cast<std::size_t>(a)] >= 0.0)
                continue;
            std::vector<Lit> common;
            for (std::size_t k = 0; k < defs.size(); ++k) {
                std::vector<Lit> closure = defs[k]->body;
                for (Lit l : defs[k]->body)
                    if (!is_neg(l)) {
                        const auto &more = implied_[static_cast<std::size_t>(atom_of(l))];
                        closure.insert(closure.end(), more.begin(), more.end());
                    }
                std::sort(closure.begin(), closure.end());
                closure.erase(std::unique(closure.begin(), closure.end()), closure.end());
                if (k == 0) {
                    common = std::move(closure);
                } else {
                    std::vector<Lit> next;
                    std::set_intersection(common.begin(), common.end(), closure.begin(), closure.end(),
                                          std::back_inserter(next));
                    common = std::move(next);
                }
                if (common.empty())
                    break;
            }
            implied_[static_cast<std::size_t>(a)] = std::move(common);
        }
    }

    bool consistent_closure(const std::vector<Lit> &q) const {
        std::vector<Lit> all = q;
        for (Lit l : q)
            if (!is_neg(l)) {
                const auto &more = implied_[static_cast<std::size_t>(atom_of(l))];
                all.insert(all.end(), more.begin(), more.end());
            }
        return consistent(all, {}, *g_.atoms);
    }

    static bool has_complement(const std::vector<Lit> &q) {
        for (std::size_t i = 1; i < q.size(); ++i)
            if (q[i] == complement(q[i - 1]))
                return true;
        return false;
    }

    int rank(Lit l) const { return g_.rank[static_cast<std::size_t>(atom_of(l))]; }

    // Query sets are kept sorted and duplicate free.
    static std::vector<Lit> with(const std::vector<Lit> &q, std::span<const Lit> extra) {
        std::vector<Lit> out;
        out.reserve(q.size() + extra.size());
        std::set_union(q.begin(), q.end(), extra.begin(), extra.end(), std::back_inserter(out));
        return out;
    }

    double inner(const std::vector<Lit> &q) {
        ++stats.inner_calls;
        if (q.empty())
            return 1.0;
        // Complementary literals are always caught (sorted, so they are
        // adjacent); pruning adds equation clashes and implied literals.
        if (has_complement(q) || (opt_.pruning && !consistent_closure(q))) {
            ++stats.pruned;
            return 0.0;
        }
        if (opt_.caching) {
            if (auto it = cache_.find(q); it != cache_.end()) {
                ++stats.cache_hits;
                return it->second;
            }
        }
        // Maximal literal: highest rank, ties to the smaller encoding.
        std::size_t pick = 0;
        for (std::size_t i = 1; i < q.size(); ++i)
            if (rank(q[i]) > rank(q[pick]))
                pick = i;
        const Lit l = q[pick];
        std::vector<Lit> rest = q;
        rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(pick));
        const AtomId a = atom_of(l);
        double result;
        if (is_neg(l)) {
            const Lit pos = pos_lit(a);
            result = inner(rest) - inner(with(rest, std::span<const Lit>(&pos, 1)));
        } else if (const double p = fact_prob_[static_cast<std::size_t>(a)]; p >= 0.0) {
            if (opt_.instrument) {
                auto &m = multiplicity_[static_cast<std::size_t>(a)];
                ++m;
                stats.max_fact_multiplicity = std::max(stats.max_fact_multiplicity, m);
                result = p * inner(rest);
                --m;
            } else {
                result = p * inner(rest);
            }
        } else {
            result = 0.0;
            for (const NormalRule *r : by_head_[static_cast<std::size_t>(a)])
                result += inner(with(rest, r->body));
        }
        if (opt_.caching)
            cache_.emplace(q, result);
        return result;
    }
};

} // namespace

double ve(const GroundProgram &g, std::span<const Lit> query, const VeOptions &options, VeStats *stats) {
    Ve engine(g, options);
    const double p = engine.run(query);
    if (stats) {
        stats->inner_calls += engine.stats.inner_calls;
        stats->cache_hits += engine.stats.cache_hits;
        stats->pruned += engine.stats.pruned;
        stats->max_fact_multiplicity = std::max(stats->max_fact_multiplicity, engine.stats.max_fact_multiplicity);
    }
    return p;
}

std::optional<std::vector<Lit>> resolve_literals(const GroundProgram &g, std::span<const GroundLiteral> lits) {
    std::vector<Lit> out;
    for (const auto &l : lits) {
        const auto id = g.lookup(normalize_ground_atom(l.atom));
        if (!id) {
            if (!l.negative)
                return std::nullopt;
            continue;
        }
        out.push_back(l.negative ? neg_lit(*id) : pos_lit(*id));
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::int64_t default_eot(const SourceProgram &program, const InputQuery &query) {
    if (auto it = program.configs.find("eot"); it != program.configs.end()) {
        if (it->second.kind() != TermKind::Integer)
            throw Error(ErrorCode::Eval, "config eot must be an integer: " + it->second.to_string());
        return it->second.int_value();
    }
    std::int64_t eot = 0;
    auto visit = [&](const Atom &a) {
        if (!a.is_builtin() && a.time.kind() == TermKind::Integer)
            eot = std::max(eot, a.time.int_value());
    };
    for (const auto &a : query.positives)
        visit(a);
    for (const auto &el : query.neg_elements)
        for (const auto &a : el)
            visit(a);
    for (const auto &a : query.evidence)
        visit(a);
    return eot;
}

namespace {

using Clock = std::chrono::steady_clock;

struct Evaluated {
    double prob;
    StageStats stats;
};

class Driver {
public:
    Driver(const std::vector<Rule> &rules, const QueryOptions &options, QueryResult &result)
        : rules_(rules), strat_(build_stratification(rules)), opt_(options), result_(result) {}

    GroundProgram ground_stage(const std::vector<GroundLiteral> &q) {
        return ground(rules_, strat_, q, {result_.eot, opt_.guided});
    }

    // Probability of the disjunction of `bodies` conjoined with `common`.
    double probability(GroundProgram g, const std::vector<GroundLiteral> &common,
                       const std::vector<std::vector<GroundLiteral>> &bodies) {
        auto base = resolve_literals(g, common);
        if (!base)
            return 0.0;
        std::vector<Lit> query = *base;
        if (bodies.size() == 1) {
            auto extra = resolve_literals(g, bodies.front());
            if (!extra)
                return 0.0;
            query.insert(query.end(), extra->begin(), extra->end());
        } else {
            const AtomId goal = g.atoms->intern(Atom::ordinary("q__goal", {}, Term::integer(result_.eot)));
            std::size_t alive = 0;
            for (const auto &b : bodies) {
                auto lits = resolve_literals(g, b);
                if (!lits)
                    continue;
                g.rules.push_back({goal, *lits});
                ++alive;
            }
            if (alive == 0)
                return 0.0;
            g.domain.push_back(goal);
            g.compute_order();
            query.push_back(pos_lit(goal));
        }
        std::sort(query.begin(), query.end());
        query.erase(std::unique(query.begin(), query.end()), query.end());
        if (opt_.oracle)
            return success_probability(g, query);
        const GroundProgram d = disjoint_transform(g, opt_.cautious_disjointing);
        return ve(d, query, opt_.ve, &result_.ve);
    }

    void record(const std::string &stage, const GroundProgram &g, Clock::time_point start) {
        result_.stages.push_back({stage, g.rules.size(), g.prob_facts.size(), g.domain.size(),
                                  std::chrono::duration<double>(Clock::now() - start).count()});
    }

private:
    const std::vector<Rule> &rules_;
    Stratification strat_;
    const QueryOptions &opt_;
    QueryResult &result_;
};

std::vector<GroundLiteral> as_literals(const std::vector<Atom> &atoms) {
    std::vector<GroundLiteral> out;
    for (const auto &a : atoms)
        if (!a.is_builtin() && a.is_ground())
            out.push_back({false, normalize_ground_atom(a)});
    return out;
}

} // namespace

QueryResult answer_conditional(const std::vector<Rule> &rules, const InputQuery &query, const QueryOptions &options) {
    QueryResult result;
    result.eot = options.eot.value_or(0);
    result.variables = query.answer_variables();
    for (const auto &a : query.evidence)
        if (!a.is_ground() || a.is_builtin())
            throw Error(ErrorCode::Parse, "evidence must consist of ground atoms: " + a.to_string());
    Driver driver(rules, options, result);
    const std::vector<GroundLiteral> evidence = as_literals(query.evidence);

    // (a) the evidence alone.
    if (!evidence.empty()) {
        const auto start = Clock::now();
        GroundProgram ga = driver.ground_stage(evidence);
        const GroundProgram copy = ga;
        result.evidence_prob = driver.probability(std::move(ga), evidence, {{}});
        driver.record("evidence", copy, start);
        if (result.evidence_prob <= 0.0)
            throw Error(ErrorCode::ZeroEvidence, "evidence has probability 0: " + query.to_string());
    }

    // (b) the ground literals of the query together with the evidence.
    auto start = Clock::now();
    std::vector<GroundLiteral> qb = as_literals(query.positives);
    for (const auto &el : query.neg_elements)
        if (el.size() == 1 && !el[0].is_builtin() && el[0].is_ground())
            qb.push_back({true, normalize_ground_atom(el[0])});
    qb.insert(qb.end(), evidence.begin(), evidence.end());
    const GroundProgram gb = driver.ground_stage(qb);
    driver.record("query", gb, start);
    std::vector<Atom> domain_b;
    for (AtomId a : gb.domain)
        domain_b.push_back((*gb.atoms)[a]);

    // (c) one grounding per matcher of the positive query body.
    std::vector<Atom> positives;
    for (const auto &a : query.positives)
        positives.push_back(a);
    const bool ground_query = result.variables.empty() && std::all_of(positives.begin(), positives.end(),
                                                                      [](const Atom &a) { return a.is_ground(); });
    std::vector<Substitution> matchers;
    if (ground_query) {
        bool ok = true;
        for (const auto &a : positives)
            if (a.is_builtin())
                ok = ok && eval_builtin(a);
        matchers.push_back({});
        if (!ok) {
            result.answers.push_back({{}, 0.0});
            return result;
        }
    } else {
        matchers = match_body(positives, domain_b);
    }
    for (const auto &gamma : matchers) {
        std::vector<Atom> pos_g;
        for (const auto &a : positives)
            pos_g.push_back(plp::apply(gamma, a));
        std::vector<std::vector<Atom>> negs_g;
        for (const auto &el : query.neg_elements) {
            std::vector<Atom> inst;
            for (const auto &a : el)
                inst.push_back(plp::apply(gamma, a));
            negs_g.push_back(std::move(inst));
        }
        const auto bodies = gnd_body(pos_g, negs_g, domain_b);
        Answer answer;
        answer.subst = gamma;
        if (!bodies.empty()) {
            std::vector<GroundLiteral> qc = bodies.size() == 1 ? bodies.front() : as_literals(pos_g);
            qc.insert(qc.end(), evidence.begin(), evidence.end());
            start = Clock::now();
            GroundProgram gc = driver.ground_stage(qc);
            std::vector<std::vector<GroundLiteral>> disj;
            for (auto b : bodies) {
                b.erase(std::remove_if(b.begin(), b.end(), [](const GroundLiteral &l) { return !l.negative; }),
                        b.end());
                disj.push_back(std::move(b));
            }
            std::vector<GroundLiteral> common = as_literals(pos_g);
            common.insert(common.end(), evidence.begin(), evidence.end());
            const GroundProgram copy = gc;
            answer.prob = driver.probability(std::move(gc), common, disj) / result.evidence_prob;
            driver.record("answer", copy, start);
        }
        if (answer.prob > 0.0 || ground_query) {
            Substitution projected;
            for (const auto &v : result.variables)
                if (auto it = gamma.find(v); it != gamma.end())
                    projected.emplace(v, it->second);
            answer.subst = std::move(projected);
            result.answers.push_back(std::move(answer));
        }
    }
    return result;
}

std::string format_probability(double p, int precision) {
    if (std::fabs(p) < 0.5 * std::pow(10.0, -precision))
        p = 0.0;
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", precision, p);
    std::string s = buf;
    if (s.find('.') == std::string::npos)
        return s + ".0";
    while (s.back() == '0')
        s.pop_back();
    if (s.back() == '.')
        s.push_back('0');
    return s;
}

std::string format_answer(const Answer &answer, const std::vector<std::string> &variables, int precision) {
    std::string out = format_probability(answer.prob, precision);
    if (variables.empty())
        return out;
    out += " :: [";
    bool first = true;
    for (const auto &v : variables) {
        auto it = answer.subst.find(v);
        if (it == answer.subst.end())
            continue;
        out += (first ? "" : ", ") + v + " = " + it->second.to_string();
        first = false;
    }
    return out + "]";
}

} // namespace plp
