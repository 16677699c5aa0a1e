// plpc: command-line front end over the plp C interface.
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "plp/plp.h"

namespace {

int fail(plp_status st) {
    std::cerr << "plpc: " << plp_status_name(st) << ": " << plp_last_error() << '\n';
    return st == PLP_E_ZERO_EVIDENCE ? 2 : 1;
}

struct RunArgs {
    std::string file;
    std::optional<long long> eot;
    bool unguided = false;
    bool no_pruning = false;
    bool oracle = false;
    bool dump_ground = false;
    bool dump_strat = false;
    bool stats = false;
    std::optional<int> precision;
    std::optional<std::string> query;
};

int run(const RunArgs &args) {
    plp_program *prog = nullptr;
    plp_status st = plp_program_load(args.file.c_str(), &prog);
    if (st != PLP_OK)
        return fail(st);
    struct Guard {
        plp_program *p;
        ~Guard() { plp_program_free(p); }
    } guard{prog};

    char *warnings = nullptr;
    if (plp_program_warnings(prog, &warnings) == PLP_OK) {
        std::cerr << warnings;
        plp_string_free(warnings);
    }

    if (args.dump_strat) {
        char *text = nullptr;
        if ((st = plp_dump_strat(prog, &text)) != PLP_OK)
            return fail(st);
        std::cout << "# strata\n" << text;
        plp_string_free(text);
    }

    size_t first = 0;
    size_t count = plp_program_query_count(prog);
    if (args.query) {
        if ((st = plp_program_add_query(prog, args.query->c_str(), &first)) != PLP_OK)
            return fail(st);
        count = first + 1;
    }
    if (first == count) {
        if (args.dump_strat)
            return 0;
        std::cerr << "plpc: no query in " << args.file << " (use --query)\n";
        return 1;
    }

    plp_options opts;
    plp_options_init(&opts);
    if (args.eot)
        opts.eot = *args.eot;
    if (args.unguided)
        opts.guided = 0;
    if (args.no_pruning)
        opts.ve_pruning = 0;
    if (args.precision)
        opts.precision = *args.precision;
    opts.oracle = args.oracle ? 1 : 0;

    for (size_t i = first; i < count; ++i) {
        if (count - first > 1 || args.stats) {
            char *text = nullptr;
            if (plp_program_query_text(prog, i, &text) == PLP_OK) {
                std::cout << "% " << text << '\n';
                plp_string_free(text);
            }
        }
        if (args.dump_ground) {
            char *text = nullptr;
            if ((st = plp_dump_ground(prog, i, &opts, &text)) != PLP_OK)
                return fail(st);
            std::cout << "# ground program\n" << text;
            plp_string_free(text);
        }
        plp_result *res = nullptr;
        if ((st = plp_query(prog, i, &opts, &res)) != PLP_OK)
            return fail(st);
        for (size_t k = 0; k < plp_result_count(res); ++k)
            std::cout << plp_result_line(res, k) << '\n';
        if (args.stats)
            std::cout << plp_result_stats(res);
        plp_result_free(res);
    }
    return 0;
}

int bench(const std::string &family, int n, const std::string &output) {
    char *text = nullptr;
    const plp_status st = plp_bench_generate(family.c_str(), n, &text);
    if (st != PLP_OK)
        return fail(st);
    if (output.empty()) {
        std::cout << text;
    } else {
        std::ofstream out(output, std::ios::binary);
        out << text;
        if (!out) {
            plp_string_free(text);
            std::cerr << "plpc: cannot write " << output << '\n';
            return 1;
        }
    }
    plp_string_free(text);
    return 0;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"Probabilistic logic programs: grounding and exact inference"};
    app.set_version_flag("--version", std::string(plp_version()));
    app.require_subcommand(1);

    RunArgs ra;
    auto *run_cmd = app.add_subcommand("run", "answer the queries of a program file");
    run_cmd->add_option("file", ra.file, "program file")->required();
    run_cmd->add_option("--eot", ra.eot, "end of time (overrides config)")->check(CLI::NonNegativeNumber);
    run_cmd->add_flag("--unguided", ra.unguided, "disable query-guided grounding");
    run_cmd->add_flag("--no-ve-pruning", ra.no_pruning, "disable inconsistency pruning in inference");
    run_cmd->add_flag("--oracle", ra.oracle, "enumerate all choices instead of variable elimination");
    run_cmd->add_flag("--dump-ground", ra.dump_ground, "print the ground program of each query");
    run_cmd->add_flag("--dump-strat", ra.dump_strat, "print the predicate strata");
    run_cmd->add_flag("--stats", ra.stats, "print grounding and inference statistics");
    run_cmd->add_option("--precision", ra.precision, "printed decimals")->check(CLI::Range(0, 17));
    run_cmd->add_option("--query", ra.query, "query to answer instead of those in the file");

    std::string family, output;
    int n = 0;
    auto *bench_cmd = app.add_subcommand("bench", "print a benchmark program");
    bench_cmd->add_option("family", family, "benchmark family")
        ->required()
        ->check(CLI::IsMember({"markov-timesteps", "markov-specificity", "markov-timepoint", "hmm-rainy",
                               "hmm-sunny", "hmm-mixed"}));
    bench_cmd->add_option("--n", n, "complexity")->required();
    bench_cmd->add_option("-o,--output", output, "output file");

    CLI11_PARSE(app, argc, argv);
    if (*run_cmd)
        return run(ra);
    return bench(family, n, output);
}
