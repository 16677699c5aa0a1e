#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "plp/ground.hpp"

namespace plp {

/// Largest number of probabilistic facts the exhaustive oracle accepts.
inline constexpr std::size_t kOracleMaxFacts = 24;

/// Truth values per atom id of the least model of `g` where the
/// probabilistic facts flagged in `selected` (indexed like g.prob_facts)
/// hold.
std::vector<char> lfp_model(const GroundProgram &g, const std::vector<char> &selected);

/// Product of p for selected and 1-p for unselected facts.
double choice_probability(const GroundProgram &g, const std::vector<char> &selected);

bool satisfies(const std::vector<char> &model, std::span<const Lit> query);

/// Total probability of the choices whose least model satisfies `query`.
/// Throws Error(Unsupported) above kOracleMaxFacts facts.
double success_probability(const GroundProgram &g, std::span<const Lit> query);

/// False iff two true equations share left-hand side and time.
bool check_right_uniqueness(const GroundProgram &g, const std::vector<char> &model);

/// Calls `visit(selected, probability)` for every choice.
template <typename F>
void for_each_choice(const GroundProgram &g, F &&visit) {
    const std::size_t n = g.prob_facts.size();
    std::vector<char> selected(n, 0);
    for (;;) {
        visit(static_cast<const std::vector<char> &>(selected), choice_probability(g, selected));
        std::size_t i = 0;
        while (i < n && selected[i]) {
            selected[i] = 0;
            ++i;
        }
        if (i == n)
            return;
        selected[i] = 1;
    }
}

} // namespace plp
