#include "plp/ground.hpp"

#include <algorithm>
#include <functional>
#include <queue>
#include <unordered_set>

namespace plp {

std::size_t AtomHash::operator()(const Atom &a) const {
    std::size_t h = std::hash<std::string>{}(a.name) ^ (static_cast<std::size_t>(a.kind) << 1);
    for (const auto &t : a.args)
        h = h * 1000003u ^ t.hash();
    h = h * 1000003u ^ a.rhs.hash();
    h = h * 1000003u ^ a.time.hash();
    return h;
}

Atom normalize_ground_atom(const Atom &a) {
    Atom out = a;
    for (auto &t : out.args)
        t = eval_term(t);
    if (out.kind == AtomKind::Equation)
        out.rhs = eval_term(out.rhs);
    out.time = Term::integer(eval_time(a.time));
    return out;
}

AtomId AtomTable::intern(const Atom &a) {
    auto it = ids_.find(a);
    if (it != ids_.end())
        return it->second;
    const AtomId id = static_cast<AtomId>(atoms_.size());
    atoms_.push_back(a);
    times_.push_back(a.time.int_value());
    int key = -1;
    if (a.kind == AtomKind::Equation) {
        Atom lhs = a;
        lhs.rhs = Term();
        auto [kit, _] = lhs_keys_.emplace(std::move(lhs), static_cast<int>(lhs_keys_.size()));
        key = kit->second;
    }
    eq_keys_.push_back(key);
    ids_.emplace(a, id);
    return id;
}

std::optional<AtomId> AtomTable::find(const Atom &a) const {
    auto it = ids_.find(a);
    if (it == ids_.end())
        return std::nullopt;
    return it->second;
}

std::string AtomTable::lit_to_string(Lit l) const {
    return (is_neg(l) ? "-" : "") + to_string(atom_of(l));
}

bool consistent(std::span<const Lit> a, std::span<const Lit> b, const AtomTable &table) {
    std::unordered_set<Lit> lits;
    std::unordered_map<int, AtomId> eqs;
    for (auto part : {a, b}) {
        for (Lit l : part) {
            if (lits.contains(complement(l)))
                return false;
            lits.insert(l);
            if (is_neg(l))
                continue;
            const AtomId atom = atom_of(l);
            const int key = table.eq_key(atom);
            if (key < 0)
                continue;
            auto [it, inserted] = eqs.emplace(key, atom);
            if (!inserted && it->second != atom)
                return false;
        }
    }
    return true;
}

std::vector<AtomId> GroundProgram::mentioned_atoms() const {
    std::vector<char> seen(atoms->size(), 0);
    for (const auto &r : rules) {
        seen[static_cast<std::size_t>(r.head)] = 1;
        for (Lit l : r.body)
            seen[static_cast<std::size_t>(atom_of(l))] = 1;
    }
    for (const auto &f : prob_facts)
        seen[static_cast<std::size_t>(f.atom)] = 1;
    std::vector<AtomId> out;
    for (std::size_t i = 0; i < seen.size(); ++i)
        if (seen[i])
            out.push_back(static_cast<AtomId>(i));
    return out;
}

void GroundProgram::compute_order() {
    const std::size_t n = atoms->size();
    rank.assign(n, -1);
    order.clear();
    const auto present = mentioned_atoms();
    // Ranks are assigned from the top down: an atom is placed once everything
    // depending on it is placed, so leaves (facts) sit just below their first
    // consumer. Leaves go first among ready atoms, then larger ids.
    std::vector<std::vector<AtomId>> pred(n);
    std::vector<int> outdeg(n, 0);
    std::vector<char> leaf(n, 1);
    for (const auto &r : rules) {
        leaf[static_cast<std::size_t>(r.head)] = r.body.empty() ? leaf[static_cast<std::size_t>(r.head)] : 0;
        for (Lit l : r.body) {
            pred[static_cast<std::size_t>(r.head)].push_back(atom_of(l));
            ++outdeg[static_cast<std::size_t>(atom_of(l))];
        }
    }
    using Entry = std::pair<int, AtomId>;
    std::priority_queue<Entry> ready;
    for (AtomId a : present)
        if (outdeg[static_cast<std::size_t>(a)] == 0)
            ready.push({leaf[static_cast<std::size_t>(a)], a});
    std::vector<AtomId> reversed;
    while (!ready.empty()) {
        const AtomId a = ready.top().second;
        ready.pop();
        reversed.push_back(a);
        for (AtomId b : pred[static_cast<std::size_t>(a)])
            if (--outdeg[static_cast<std::size_t>(b)] == 0)
                ready.push({leaf[static_cast<std::size_t>(b)], b});
    }
    order.assign(reversed.rbegin(), reversed.rend());
    for (std::size_t i = 0; i < order.size(); ++i)
        rank[static_cast<std::size_t>(order[i])] = static_cast<int>(i);
    if (order.size() != present.size()) {
        std::string atoms_on_cycle;
        int shown = 0;
        for (AtomId a : present) {
            if (rank[static_cast<std::size_t>(a)] >= 0)
                continue;
            if (shown++ == 4) {
                atoms_on_cycle += ", ...";
                break;
            }
            atoms_on_cycle += (atoms_on_cycle.empty() ? "" : ", ") + atoms->to_string(a);
        }
        throw Error(ErrorCode::PositiveCycle, "ground program has a dependency cycle involving " + atoms_on_cycle);
    }
}

std::optional<AtomId> GroundProgram::lookup(const Atom &atom) const {
    auto id = atoms->find(atom);
    if (!id || static_cast<std::size_t>(*id) >= rank.size() || rank[static_cast<std::size_t>(*id)] < 0)
        return std::nullopt;
    return id;
}

std::string GroundProgram::to_string() const {
    std::string out;
    for (const auto &f : prob_facts)
        out += Term::real(f.prob).to_string() + " :: " + atoms->to_string(f.atom) + ".\n";
    for (const auto &r : rules) {
        out += atoms->to_string(r.head);
        for (std::size_t i = 0; i < r.body.size(); ++i)
            out += (i ? ", " : " :- ") + atoms->lit_to_string(r.body[i]);
        out += ".\n";
    }
    return out;
}

} // namespace plp
