#include "plp/semantics.hpp"

#include <unordered_map>

namespace plp {

std::vector<char> lfp_model(const GroundProgram &g, const std::vector<char> &selected) {
    std::vector<char> model(g.atoms->size(), 0);
    for (std::size_t i = 0; i < g.prob_facts.size(); ++i)
        if (selected[i])
            model[static_cast<std::size_t>(g.prob_facts[i].atom)] = 1;
    std::vector<std::vector<const NormalRule *>> by_head(g.atoms->size());
    for (const auto &r : g.rules)
        by_head[static_cast<std::size_t>(r.head)].push_back(&r);
    // Bodies only mention atoms of lower rank, so one pass in rank order
    // reaches the fixpoint.
    for (AtomId a : g.order) {
        auto &v = model[static_cast<std::size_t>(a)];
        for (const NormalRule *r : by_head[static_cast<std::size_t>(a)]) {
            if (v)
                break;
            v = satisfies(model, r->body) ? 1 : 0;
        }
    }
    return model;
}

double choice_probability(const GroundProgram &g, const std::vector<char> &selected) {
    double p = 1.0;
    for (std::size_t i = 0; i < g.prob_facts.size(); ++i)
        p *= selected[i] ? g.prob_facts[i].prob : 1.0 - g.prob_facts[i].prob;
    return p;
}

bool satisfies(const std::vector<char> &model, std::span<const Lit> query) {
    for (Lit l : query) {
        const auto a = static_cast<std::size_t>(atom_of(l));
        const bool holds = a < model.size() && model[a];
        if (holds == is_neg(l))
            return false;
    }
    return true;
}

double success_probability(const GroundProgram &g, std::span<const Lit> query) {
    if (g.prob_facts.size() > kOracleMaxFacts)
        throw Error(ErrorCode::Unsupported, "oracle enumeration limited to " + std::to_string(kOracleMaxFacts) +
                                                " probabilistic facts, program has " +
                                                std::to_string(g.prob_facts.size()));
    double total = 0.0;
    for_each_choice(g, [&](const std::vector<char> &selected, double p) {
        if (p > 0.0 && satisfies(lfp_model(g, selected), query))
            total += p;
    });
    return total;
}

bool check_right_uniqueness(const GroundProgram &g, const std::vector<char> &model) {
    std::unordered_map<int, AtomId> seen;
    for (std::size_t a = 0; a < model.size(); ++a) {
        if (!model[a])
            continue;
        const int key = g.atoms->eq_key(static_cast<AtomId>(a));
        if (key < 0)
            continue;
        if (!seen.emplace(key, static_cast<AtomId>(a)).second)
            return false;
    }
    return true;
}

} // namespace plp
