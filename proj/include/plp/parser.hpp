#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "plp/term.hpp"

namespace plp {

/// Conditional query `?- body | evidence.`
struct InputQuery {
    std::vector<Atom> positives;
    std::vector<std::vector<Atom>> neg_elements;
    std::vector<Atom> evidence;

    bool operator==(const InputQuery &) const = default;
    /// Variables of the positive part, in order of first occurrence.
    std::vector<std::string> answer_variables() const;
    std::string to_string() const;
};

struct SourceProgram {
    std::vector<Rule> rules;
    std::map<std::string, Term> configs;
    std::vector<InputQuery> queries;
    std::vector<std::string> warnings;

    bool operator==(const SourceProgram &o) const {
        return rules == o.rules && configs == o.configs && queries == o.queries;
    }
    std::string to_string() const;
};

SourceProgram parse_program(std::string_view text);
InputQuery parse_query(std::string_view text);

/// Throws RangeRestrictionError if a head or built-in variable does not
/// occur in an ordinary positive body atom.
void check_range_restricted(const Rule &rule);

} // namespace plp
