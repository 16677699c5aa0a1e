#include <doctest.h>

#include <cmath>
#include <map>

#include "helpers.hpp"

using namespace plp;

namespace {

const char *kExclusive = "0.5 :: p.\na = 1 :- p.\na = 2 :- \\+ p.\n";

double sum_answers(const QueryResult &r) {
    double s = 0.0;
    for (const auto &a : r.answers)
        s += a.prob;
    return s;
}

} // namespace

TEST_CASE("inconsistent goals are pruned before expansion") {
    const auto g = disjoint_transform(testing::ground_text(kExclusive, "a = 1, a = 2", 0, false));
    const auto q = testing::resolve(g, "a = 1, a = 2");
    REQUIRE(q.size() == 2);
    VeStats st;
    CHECK(ve(g, q, {}, &st) == doctest::Approx(0.0));
    CHECK(st.pruned == 1);
    CHECK(st.inner_calls == 1);

    VeStats off;
    CHECK(ve(g, q, {false, true, false}, &off) == doctest::Approx(0.0));
    CHECK(off.inner_calls > st.inner_calls);
}

TEST_CASE("variable elimination on small programs") {
    CHECK(testing::ve_prob("0.3 :: a. 0.6 :: b. c :- a. c :- b.", "c", 0, false) == doctest::Approx(0.72));
    CHECK(testing::ve_prob("0.3 :: a. c :- \\+ a.", "\\+ c", 0, false) == doctest::Approx(0.3));
    CHECK(testing::ve_prob(kExclusive, "a = 1", 0, false) == doctest::Approx(0.5));
    CHECK(testing::ve_prob(kExclusive, "a = 1, \\+ a = 2", 0, false) == doctest::Approx(0.5));
    CHECK(testing::ve_prob("0.3 :: a.", "a, \\+ zzz", 0, false) == doctest::Approx(0.3));
}

TEST_CASE("caching does not change results") {
    const std::string markov = testing::read_file("markov.plp");
    for (const char *q : {"in = a @ 3", "in = b @ 2, in = c @ 3", "\\+ in = a @ 1"}) {
        const double cached = testing::ve_prob(markov, q, 3, false, {true, true, false});
        const double plain = testing::ve_prob(markov, q, 3, false, {true, false, false});
        const double unpruned = testing::ve_prob(markov, q, 3, false, {false, false, false});
        CHECK(cached == doctest::Approx(plain).epsilon(1e-12));
        CHECK(cached == doctest::Approx(unpruned).epsilon(1e-12));
    }
}

TEST_CASE("cache hits on repeated subgoals") {
    VeStats st;
    const auto g = disjoint_transform(testing::ground_text(testing::read_file("markov.plp"), "in = a @ 3", 3, false));
    ve(g, testing::resolve(g, "in = a @ 3"), {}, &st);
    CHECK(st.cache_hits > 0);
}

TEST_CASE("disjoint transform") {
    const auto g = testing::ground_text("0.3 :: a. 0.6 :: b. c :- a. c :- b.", "", 0, false);
    const auto d = disjoint_transform(g);
    CHECK(d.rules.size() > g.rules.size());
    // the bodies of c are pairwise inconsistent after the transform
    const AtomId c = *d.lookup(testing::atom("c"));
    std::vector<const NormalRule *> defs;
    for (const auto &r : d.rules)
        if (r.head == c)
            defs.push_back(&r);
    REQUIRE(defs.size() >= 2);
    for (std::size_t i = 0; i < defs.size(); ++i)
        for (std::size_t j = i + 1; j < defs.size(); ++j)
            CHECK_FALSE(consistent(defs[i]->body, defs[j]->body, *d.atoms));

    // cautious mode leaves already exclusive heads alone
    const auto e = testing::ground_text(kExclusive, "", 0, false);
    CHECK(disjoint_transform(e, true).rules.size() == e.rules.size());
}

TEST_CASE("conditional queries") {
    const std::string urn = testing::read_file("urn.plp");
    auto r = testing::answer(urn, 0);
    REQUIRE(r.answers.size() == 1);
    CHECK(r.answers[0].prob == doctest::Approx(1.0 / 3).epsilon(1e-9));
    CHECK(r.variables.empty());

    r = testing::answer(urn, 1);
    REQUIRE(r.answers.size() == 1);
    CHECK(r.answers[0].prob == doctest::Approx(0.5));
    CHECK(r.evidence_prob == doctest::Approx(2.0 / 3));

    r = testing::answer(urn, 2);
    REQUIRE(r.answers.size() == 2);
    CHECK(r.variables == std::vector<std::string>{"C1", "C2"});
    std::map<std::string, double> got;
    for (const auto &a : r.answers)
        got[format_answer(a, r.variables)] = a.prob;
    CHECK(got.count("0.5 :: [C1 = green, C2 = red]") == 1);
    CHECK(got.count("0.5 :: [C1 = red, C2 = green]") == 1);
    CHECK(sum_answers(r) == doctest::Approx(1.0));
}

TEST_CASE("answers of a right-unique variable sum to one") {
    const std::string markov = testing::read_file("markov.plp");
    for (bool guided : {true, false}) {
        const auto r = testing::answer_query(markov, "in = X @ 2", guided);
        CHECK(r.answers.size() == 3);
        CHECK(sum_answers(r) == doctest::Approx(1.0));
    }
    const auto hmm = testing::answer(testing::read_file("hmm.plp"), 2);
    CHECK(sum_answers(hmm) == doctest::Approx(1.0));
}

TEST_CASE("ground queries keep zero answers") {
    const auto r = testing::answer_query(kExclusive, "a = 1, a = 2");
    REQUIRE(r.answers.size() == 1);
    CHECK(r.answers[0].prob == 0.0);
    CHECK(format_answer(r.answers[0], r.variables) == "0.0");
}

TEST_CASE("oracle and ve answer alike") {
    const std::string urn = testing::read_file("urn.plp");
    const auto a = testing::answer_query(urn, "some(C) @ 1 | some(green) @ 0", true, false);
    const auto b = testing::answer_query(urn, "some(C) @ 1 | some(green) @ 0", true, true);
    REQUIRE(a.answers.size() == b.answers.size());
    for (std::size_t i = 0; i < a.answers.size(); ++i)
        CHECK(a.answers[i].prob == doctest::Approx(b.answers[i].prob).epsilon(1e-12));
}

TEST_CASE("zero-probability evidence") {
    try {
        testing::answer_query(kExclusive, "a = 1 | a = 1, a = 2");
        FAIL("expected ZeroEvidence");
    } catch (const Error &e) {
        CHECK(e.code() == ErrorCode::ZeroEvidence);
    }
}

TEST_CASE("default end of time") {
    auto p = parse_program("config(eot, 5). a @ 0.");
    CHECK(default_eot(p, parse_query("a @ 1")) == 5);
    p = parse_program("a @ 0.");
    CHECK(default_eot(p, parse_query("a @ 1 | b @ 3")) == 3);
    CHECK(default_eot(p, parse_query("a")) == 0);
}

TEST_CASE("probability formatting") {
    CHECK(format_probability(1.0 / 3) == "0.333333");
    CHECK(format_probability(0.5) == "0.5");
    CHECK(format_probability(1.0) == "1.0");
    CHECK(format_probability(0.0) == "0.0");
    CHECK(format_probability(0.123456789, 3) == "0.123");
}
