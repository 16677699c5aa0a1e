#include <doctest.h>

#include "helpers.hpp"
#include "plp/bench.hpp"

using namespace plp;

TEST_CASE("every family generates a parseable program with one query") {
    for (const auto &family : bench_families()) {
        for (int n : {1, 3}) {
            const auto p = parse_program(bench_generate(family, n));
            CHECK_MESSAGE(p.queries.size() == 1, family);
            CHECK(!p.rules.empty());
        }
    }
    CHECK_THROWS_AS(bench_generate("nope", 1), Error);
    CHECK_THROWS_AS(bench_generate("hmm-mixed", -1), Error);
}

TEST_CASE("hmm observation sequences") {
    CHECK(hmm_observations("hmm-sunny", 3) == std::vector<int>{0, 0, 0});
    CHECK(hmm_observations("hmm-rainy", 3) == std::vector<int>{4, 8, 12});
    CHECK(hmm_observations("hmm-mixed", 9) == std::vector<int>{0, 4, 24, 34, 38, 38, 42, 46, 50});
}

TEST_CASE("markov timestep queries") {
    const auto r = testing::answer(bench_generate("markov-timesteps", 2));
    REQUIRE(r.answers.size() == 1);
    CHECK(r.answers[0].prob == doctest::Approx(0.9 * 0.9 / 3));
    const auto t = testing::answer(bench_generate("markov-timepoint", 1));
    CHECK(t.answers[0].prob == doctest::Approx(0.8));
}

TEST_CASE("specificity queries enumerate prefixes") {
    const auto r = testing::answer(bench_generate("markov-specificity", 1));
    // one free position, three values, each compatible with the a-suffix
    CHECK(r.variables == std::vector<std::string>{"L0"});
    CHECK(r.answers.size() == 3);
}

TEST_CASE("sunny observations imply sunny states") {
    const auto r = testing::answer(bench_generate("hmm-sunny", 2));
    REQUIRE(r.answers.size() == 1);
    CHECK(format_answer(r.answers[0], r.variables) == "1.0 :: [S = sunny]");
}
