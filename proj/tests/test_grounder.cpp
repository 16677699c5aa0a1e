#include <doctest.h>

#include <algorithm>
#include <set>

#include "helpers.hpp"

using namespace plp;
using testing::atom;
using testing::literals;

namespace {

std::set<std::set<std::string>> body_set(const std::vector<std::vector<GroundLiteral>> &bodies) {
    std::set<std::set<std::string>> out;
    for (const auto &b : bodies) {
        std::set<std::string> s;
        for (const auto &l : b)
            s.insert(l.to_string());
        out.insert(s);
    }
    return out;
}

std::vector<Atom> domain(std::initializer_list<const char *> atoms) {
    std::vector<Atom> out;
    for (const char *a : atoms)
        out.push_back(atom(a));
    return out;
}

bool has_rule_with_body_atom(const GroundProgram &g, const std::string &printed) {
    for (const auto &r : g.rules)
        for (Lit l : r.body)
            if (g.atoms->to_string(atom_of(l)) == printed)
                return true;
    return false;
}

} // namespace

TEST_CASE("hitting sets") {
    using Family = std::vector<std::vector<std::string>>;
    CHECK(hitting_sets(Family{}) == Family{{}});
    CHECK(hitting_sets(Family{{"a"}, {"a", "b"}}) == Family{{"a"}});
    CHECK(hitting_sets(Family{{"a"}, {}}).empty());
    const auto hs = hitting_sets(Family{{"p(a)", "q(a)"}, {"p(b)", "q(b)"}});
    CHECK(hs == Family{{"p(a)", "p(b)"}, {"p(a)", "q(b)"}, {"p(b)", "q(a)"}, {"q(a)", "q(b)"}});
}

TEST_CASE("body grounding by hitting sets") {
    const auto d = domain({"p(a)", "p(b)", "q(a)", "q(b)", "p(c)"});
    const auto bodies = gnd_body({}, {{atom("p(X)"), atom("q(X)")}}, d);
    CHECK(bodies.size() == 4);
    CHECK(body_set(bodies) == std::set<std::set<std::string>>{
                                  {"-q(a) @ 0", "-q(b) @ 0"},
                                  {"-q(a) @ 0", "-p(b) @ 0"},
                                  {"-p(a) @ 0", "-q(b) @ 0"},
                                  {"-p(a) @ 0", "-p(b) @ 0"},
                              });

    const auto plain = gnd_body({atom("p(a)")}, {}, d);
    REQUIRE(plain.size() == 1);
    CHECK(plain[0].size() == 1);

    const auto vacuous = gnd_body({}, {{atom("r(Z)")}}, d);
    REQUIRE(vacuous.size() == 1);
    CHECK(vacuous[0].empty());

    // The element is false whenever p(a) holds.
    CHECK(gnd_body({atom("p(a)")}, {{atom("p(a)")}}, d).empty());
    CHECK(gnd_body({atom("2 < 1")}, {}, d).empty());
}

TEST_CASE("matching a body against a domain") {
    const auto d = domain({"p(a)", "p(b)", "q(b)", "f(a) = 3"});
    const auto ms = match_body({atom("p(X)"), atom("q(X)")}, d);
    REQUIRE(ms.size() == 1);
    CHECK(ms[0].at("X") == testing::term("b"));
    CHECK(match_body({atom("f(X) = V"), atom("V > 2")}, d).size() == 1);
    CHECK(match_body({atom("f(X) = V"), atom("V > 3")}, d).empty());
}

TEST_CASE("normalize a distribution head") {
    AtomTable table;
    const Rule r = testing::rule("draw ~ [r(1), r(2), g(1)] @ 0 :- b.");
    const AtomId b = table.intern(atom("b"));
    const auto n = normalize(r.head, {pos_lit(b)}, "x", table);
    REQUIRE(n.prob_facts.size() == 2);
    CHECK(n.prob_facts[0].prob == doctest::Approx(1.0 / 3));
    CHECK(n.prob_facts[1].prob == doctest::Approx(0.5));
    // head rule, three selection rules and the certain last case
    CHECK(n.rules.size() == 5);
    CHECK(std::count_if(n.rules.begin(), n.rules.end(), [](const NormalRule &x) { return x.body.empty(); }) == 1);
}

TEST_CASE("normalize sum and ordinary heads") {
    AtomTable table;
    auto n = normalize(testing::rule("0.6 :: s = rainy @ 0 + 0.4 :: s = sunny @ 0.").head, {}, "s", table);
    REQUIRE(n.prob_facts.size() == 1);
    CHECK(n.prob_facts[0].prob == doctest::Approx(0.6));

    n = normalize(testing::rule("1.0 :: a @ 0 :- b.").head, {pos_lit(table.intern(atom("b")))}, "a", table);
    REQUIRE(n.rules.size() == 1);
    CHECK(n.prob_facts.empty());
    CHECK(n.aux_atoms.empty());

    n = normalize(testing::rule("0.3 :: a.").head, {}, "f", table);
    REQUIRE(n.prob_facts.size() == 1);
    CHECK(n.rules.empty());

    CHECK_THROWS_AS(normalize(testing::rule("0.7 :: a + 0.6 :: b.").head, {}, "e", table), Error);
    CHECK_THROWS_AS(normalize(testing::rule("1.5 :: a.").head, {}, "e", table), Error);
    CHECK(normalize(testing::rule("d ~ [] @ 0.").head, {}, "e", table).rules.empty());
}

TEST_CASE("normalized cases keep the head probabilities") {
    const char *program = "0.2 :: a + 0.5 :: b + 0.3 :: c.\n";
    for (const char *q : {"a", "b", "c"}) {
        const double expected = q[0] == 'a' ? 0.2 : q[0] == 'b' ? 0.5 : 0.3;
        CHECK(testing::oracle(program, q, 0, false) == doctest::Approx(expected).epsilon(1e-12));
    }
    CHECK(testing::oracle(program, "a, b", 0, false) == doctest::Approx(0.0));
    CHECK(testing::oracle(program, "b, c", 0, false) == doctest::Approx(0.0));
    CHECK(testing::oracle("s ~ [[x, 0.6], [y, 0.4]] @ 0.", "s = y", 0, false) == doctest::Approx(0.4));
}

TEST_CASE("consistency of literal sets") {
    AtomTable t;
    const AtomId sunny = t.intern(atom("state = sunny @ 0")), rainy = t.intern(atom("state = rainy @ 0"));
    const AtomId fb = t.intern(atom("f(a) = b @ 0")), fc = t.intern(atom("f(a) = c @ 0"));
    const AtomId p = t.intern(atom("p @ 1")), q = t.intern(atom("q @ 1"));
    const AtomId later = t.intern(atom("state = rainy @ 1"));
    auto cons = [&](std::vector<Lit> a, std::vector<Lit> b) { return consistent(a, b, t); };
    CHECK_FALSE(cons({pos_lit(sunny)}, {pos_lit(rainy)}));
    CHECK_FALSE(cons({pos_lit(fb)}, {pos_lit(fc)}));
    CHECK(cons({pos_lit(p)}, {neg_lit(q)}));
    CHECK_FALSE(cons({pos_lit(p)}, {neg_lit(p)}));
    CHECK(cons({pos_lit(sunny)}, {pos_lit(later)}));
    CHECK(cons({neg_lit(sunny)}, {neg_lit(rainy)}));
}

TEST_CASE("goal regression") {
    AtomTable t;
    const AtomId a = t.intern(atom("a")), b = t.intern(atom("b")), c = t.intern(atom("c")), d = t.intern(atom("d"));
    std::vector<NormalRule> rules{{a, {pos_lit(b), pos_lit(c)}}};
    auto r = regress({pos_lit(a)}, rules);
    CHECK(r == std::vector<Lit>{pos_lit(a), pos_lit(b), pos_lit(c)});

    rules = {{a, {pos_lit(b)}}, {a, {pos_lit(c)}}};
    CHECK(regress({pos_lit(a)}, rules) == std::vector<Lit>{pos_lit(a)});

    rules = {{a, {pos_lit(b), pos_lit(d)}}, {a, {pos_lit(c), pos_lit(d)}}, {d, {neg_lit(c)}}};
    CHECK(regress({pos_lit(a)}, rules) == std::vector<Lit>{pos_lit(a), neg_lit(c), pos_lit(d)});
    CHECK(regress({neg_lit(d)}, rules) == std::vector<Lit>{neg_lit(d)});
}

TEST_CASE("regression through the HMM start") {
    const auto g = testing::ground_text(testing::read_file("hmm.plp"), "obs=0 @ 0", 0, false);
    std::vector<NormalRule> rules;
    for (const auto &r : g.rules)
        if (!r.body.empty())
            rules.push_back(r);
    const auto q = testing::resolve(g, "obs=0 @ 0");
    const auto reg = regress(q, rules);
    const auto sunny = g.atoms->find(atom("state = sunny @ 0"));
    REQUIRE(sunny);
    CHECK(std::find(reg.begin(), reg.end(), pos_lit(*sunny)) != reg.end());
}

TEST_CASE("grounding negation over earlier facts") {
    const char *program = "0.5 :: q(0). 0.5 :: q(1). 0.5 :: q(2).\n0.5 :: p(T) :- q(T), \\+ (q(S), S < T).\n";
    const auto g = testing::ground_text(program, "", 0, false);
    std::set<std::string> bodies;
    for (const auto &r : g.rules) {
        std::string s;
        for (Lit l : r.body)
            if (g.atoms->to_string(atom_of(l)).rfind("q(", 0) == 0)
                s += g.atoms->lit_to_string(l) + " ";
        if (!s.empty())
            bodies.insert(s);
    }
    CHECK(bodies == std::set<std::string>{"q(0) @ 0 ", "-q(0) @ 0 q(1) @ 0 ", "-q(0) @ 0 -q(1) @ 0 q(2) @ 0 "});
    CHECK(testing::oracle(program, "p(0)", 0, false) == doctest::Approx(0.25));
    CHECK(testing::oracle(program, "p(1)", 0, false) == doctest::Approx(0.125));
    CHECK(testing::oracle(program, "p(2)", 0, false) == doctest::Approx(0.0625));
}

TEST_CASE("guided grounding rejects rules inconsistent with the query") {
    const std::string hmm = testing::read_file("hmm.plp");
    const auto guided = testing::ground_text(hmm, "obs=0 @ 0", 0, true);
    const auto unguided = testing::ground_text(hmm, "obs=0 @ 0", 0, false);
    CHECK_FALSE(has_rule_with_body_atom(guided, "state = rainy @ 0"));
    CHECK(has_rule_with_body_atom(unguided, "state = rainy @ 0"));
    CHECK_FALSE(guided.lookup(atom("obs = 3 @ 0")));
    CHECK(guided.rules.size() < unguided.rules.size());

    const auto q = testing::resolve(guided, "obs=0 @ 0");
    CHECK(ve(disjoint_transform(guided), q) ==
          doctest::Approx(ve(disjoint_transform(unguided), testing::resolve(unguided, "obs=0 @ 0"))));
}

TEST_CASE("guided and unguided urn groundings agree") {
    const std::string urn = testing::read_file("urn.plp");
    for (const char *q : {"some(green) @ 0", "some(red) @ 1", "some(green) @ 1, some(red) @ 0"}) {
        CHECK(testing::oracle(urn, q, 2, true) == doctest::Approx(testing::oracle(urn, q, 2, false)).epsilon(1e-12));
    }
    CHECK(testing::oracle(urn, "some(green) @ 0", 0, true) == doctest::Approx(1.0 / 3));
}

TEST_CASE("end of time bounds the grounding") {
    const std::string markov = testing::read_file("markov.plp");
    const auto g1 = testing::ground_text(markov, "", 1, false);
    const auto g2 = testing::ground_text(markov, "", 2, false);
    CHECK(g1.lookup(atom("in = a @ 1")));
    CHECK_FALSE(g1.lookup(atom("in = a @ 2")));
    CHECK(g2.lookup(atom("in = a @ 2")));
    CHECK_THROWS_AS(testing::ground_text(markov, "", -1, false), Error);
}

TEST_CASE("recursion within a timed stratum") {
    const auto g = testing::ground_text(testing::read_file("fib.plp"), "", 0, false);
    CHECK(g.lookup(atom("fib(21, 10946)")));
    CHECK_FALSE(g.lookup(atom("fib(22, 17711)")));
}

TEST_CASE("positive ground cycles are rejected") {
    try {
        testing::ground_text("r(a, b).\nr(X, Y) @ T :- r(Y, X) @ T.\n", "", 0, false);
        FAIL("expected PositiveCycle");
    } catch (const Error &e) {
        CHECK(e.code() == ErrorCode::PositiveCycle);
    }
}

TEST_CASE("probabilistic facts stay disjoint from rule heads") {
    const auto g = testing::ground_text("0.5 :: a.\na :- b.\n0.5 :: b.\n", "", 0, false);
    std::set<AtomId> heads;
    for (const auto &r : g.rules)
        heads.insert(r.head);
    for (const auto &f : g.prob_facts)
        CHECK(heads.count(f.atom) == 0);
    CHECK(testing::oracle("0.5 :: a.\na :- b.\n0.5 :: b.\n", "a", 0, false) == doctest::Approx(0.75));
}

TEST_CASE("statistics per timed stratum") {
    const auto g = testing::ground_text(testing::read_file("markov.plp"), "in = a @ 2", 2, true);
    CHECK(g.stats.size() == 3);
    CHECK(g.stats.back().domain == g.domain.size());
}
