#include <doctest.h>

#include <filesystem>

#include "helpers.hpp"

using namespace plp;

namespace {

std::vector<std::string> corpus_files() {
    std::vector<std::string> out;
    for (const auto &e : std::filesystem::directory_iterator(PLP_CORPUS_DIR))
        if (e.path().extension() == ".plp" && e.path().stem() != "symmetric")
            out.push_back(e.path().filename().string());
    std::sort(out.begin(), out.end());
    return out;
}

QueryResult run(const SourceProgram &p, std::size_t i, bool guided, bool oracle) {
    QueryOptions opt;
    opt.eot = default_eot(p, p.queries[i]);
    opt.guided = guided;
    opt.oracle = oracle;
    return answer_conditional(p.rules, p.queries[i], opt);
}

void check_same(const QueryResult &a, const QueryResult &b, const std::string &what) {
    REQUIRE_MESSAGE(a.answers.size() == b.answers.size(), what);
    for (std::size_t k = 0; k < a.answers.size(); ++k) {
        CHECK_MESSAGE(a.answers[k].subst == b.answers[k].subst, what);
        CHECK_MESSAGE(std::abs(a.answers[k].prob - b.answers[k].prob) <= 1e-9, what);
    }
}

} // namespace

TEST_CASE("corpus programs are admissible") {
    for (const auto &f : corpus_files()) {
        const auto p = parse_program(testing::read_file(f));
        CHECK_MESSAGE(!p.queries.empty(), f);
        CHECK_NOTHROW(build_stratification(p.rules));
    }
    const auto sym = parse_program(testing::read_file("symmetric.plp"));
    CHECK_THROWS_AS(run(sym, 0, true, false), Error);
}

TEST_CASE("guided and unguided grounding agree on the corpus") {
    for (const auto &f : corpus_files()) {
        const auto p = parse_program(testing::read_file(f));
        for (std::size_t i = 0; i < p.queries.size(); ++i) {
            if (default_eot(p, p.queries[i]) > 4)
                continue;
            check_same(run(p, i, true, false), run(p, i, false, false), f + " #" + std::to_string(i));
        }
    }
}

TEST_CASE("variable elimination matches the oracle on the corpus") {
    std::size_t compared = 0;
    for (const auto &f : corpus_files()) {
        const auto p = parse_program(testing::read_file(f));
        for (std::size_t i = 0; i < p.queries.size(); ++i) {
            QueryResult slow;
            try {
                slow = run(p, i, true, true);
            } catch (const Error &e) {
                if (e.code() == ErrorCode::Unsupported)
                    continue;
                throw;
            }
            check_same(run(p, i, true, false), slow, f + " #" + std::to_string(i));
            ++compared;
        }
    }
    CHECK(compared >= 10);
}
