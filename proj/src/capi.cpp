#include "plp/plp.h"

#include <chrono>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include "plp/bench.hpp"
#include "plp/inference.hpp"
#include "plp/parser.hpp"

struct plp_program {
    plp::SourceProgram source;
};

struct plp_result {
    std::vector<double> probs;
    std::vector<std::string> lines;
    std::string stats;
};

namespace {

thread_local std::string last_error;

char *dup(const std::string &s) {
    char *out = static_cast<char *>(std::malloc(s.size() + 1));
    if (out)
        std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

template <typename F>
plp_status guarded(F &&body) {
    last_error.clear();
    try {
        body();
        return PLP_OK;
    } catch (const plp::Error &e) {
        last_error = e.what();
        return static_cast<plp_status>(e.code());
    } catch (const std::bad_alloc &) {
        last_error = "out of memory";
    } catch (const std::exception &e) {
        last_error = e.what();
    }
    return PLP_E_INTERNAL;
}

plp_status argument_error(const char *msg) {
    last_error = msg;
    return PLP_E_ARGUMENT;
}

int config_flag(const plp::SourceProgram &p, const char *key, int fallback) {
    auto it = p.configs.find(key);
    if (it == p.configs.end())
        return fallback;
    const plp::Term &t = it->second;
    if (t.kind() == plp::TermKind::Integer)
        return t.int_value() != 0;
    if (t.kind() == plp::TermKind::Compound && t.args().empty()) {
        if (t.name() == "true")
            return 1;
        if (t.name() == "false")
            return 0;
    }
    throw plp::Error(plp::ErrorCode::Eval, std::string("config ") + key + " expects true or false, got " +
                                               t.to_string());
}

int pick(int flag, const plp::SourceProgram &p, const char *key, int fallback) {
    return flag >= 0 ? flag : config_flag(p, key, fallback);
}

struct Resolved {
    plp::QueryOptions query;
    bool inst_sol = true;
    int precision = 6;
};

Resolved resolve(const plp_program *program, size_t index, const plp_options *opts) {
    plp_options defaults;
    plp_options_init(&defaults);
    const plp_options &o = opts ? *opts : defaults;
    const auto &src = program->source;
    Resolved r;
    r.query.eot = o.eot >= 0 ? o.eot : plp::default_eot(src, src.queries[index]);
    r.query.guided = pick(o.guided, src, "query_optimization_grounding", 1) != 0;
    r.query.ve.pruning = pick(o.ve_pruning, src, "ve_pruning", 1) != 0;
    r.query.ve.caching = o.ve_caching != 0;
    r.query.cautious_disjointing = pick(o.cautious, src, "cautious_disjointing", 0) != 0;
    r.query.oracle = o.oracle > 0;
    r.inst_sol = pick(o.inst_sol, src, "inst_sol", 1) != 0;
    r.precision = o.precision;
    if (r.precision < 0) {
        r.precision = 6;
        if (auto it = src.configs.find("precision"); it != src.configs.end()) {
            if (it->second.kind() != plp::TermKind::Integer)
                throw plp::Error(plp::ErrorCode::Eval, "config precision expects an integer");
            r.precision = static_cast<int>(it->second.int_value());
        }
    }
    if (r.precision < 0 || r.precision > 17)
        throw plp::Error(plp::ErrorCode::Eval, "precision must lie in 0..17");
    return r;
}

std::string fmt_seconds(double s) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6f", s);
    return buf;
}

} // namespace

extern "C" {

void plp_options_init(plp_options *opts) {
    if (!opts)
        return;
    opts->eot = -1;
    opts->guided = -1;
    opts->ve_pruning = -1;
    opts->ve_caching = 1;
    opts->cautious = -1;
    opts->inst_sol = -1;
    opts->precision = -1;
    opts->oracle = 0;
}

const char *plp_version(void) { return "1.0.0"; }

const char *plp_status_name(plp_status status) {
    switch (status) {
    case PLP_OK:
        return "ok";
    case PLP_E_ARGUMENT:
        return "invalid argument";
    case PLP_E_INTERNAL:
        return "internal error";
    default:
        if (status >= PLP_E_PARSE && status <= PLP_E_IO)
            return plp::error_code_name(static_cast<plp::ErrorCode>(status));
        return "unknown status";
    }
}

const char *plp_last_error(void) { return last_error.c_str(); }

void plp_string_free(char *s) { std::free(s); }

plp_status plp_program_parse(const char *text, plp_program **out) {
    if (!text || !out)
        return argument_error("null argument");
    *out = nullptr;
    return guarded([&] {
        auto p = std::make_unique<plp_program>();
        p->source = plp::parse_program(text);
        *out = p.release();
    });
}

plp_status plp_program_load(const char *path, plp_program **out) {
    if (!path || !out)
        return argument_error("null argument");
    *out = nullptr;
    return guarded([&] {
        std::ifstream in(path, std::ios::binary);
        if (!in)
            throw plp::Error(plp::ErrorCode::Io, std::string("cannot open ") + path);
        std::ostringstream ss;
        ss << in.rdbuf();
        auto p = std::make_unique<plp_program>();
        p->source = plp::parse_program(ss.str());
        *out = p.release();
    });
}

void plp_program_free(plp_program *program) { delete program; }

size_t plp_program_query_count(const plp_program *program) {
    return program ? program->source.queries.size() : 0;
}

plp_status plp_program_add_query(plp_program *program, const char *text, size_t *index) {
    if (!program || !text)
        return argument_error("null argument");
    return guarded([&] {
        program->source.queries.push_back(plp::parse_query(text));
        if (index)
            *index = program->source.queries.size() - 1;
    });
}

plp_status plp_program_query_text(const plp_program *program, size_t index, char **out) {
    if (!program || !out)
        return argument_error("null argument");
    if (index >= program->source.queries.size())
        return argument_error("query index out of range");
    return guarded([&] { *out = dup(program->source.queries[index].to_string()); });
}

plp_status plp_program_warnings(const plp_program *program, char **out) {
    if (!program || !out)
        return argument_error("null argument");
    return guarded([&] {
        std::string s;
        for (const auto &w : program->source.warnings)
            s += w + "\n";
        *out = dup(s);
    });
}

plp_status plp_dump_strat(const plp_program *program, char **out) {
    if (!program || !out)
        return argument_error("null argument");
    return guarded([&] { *out = dup(plp::build_stratification(program->source.rules).to_string()); });
}

plp_status plp_dump_ground(const plp_program *program, size_t index, const plp_options *opts, char **out) {
    if (!program || !out)
        return argument_error("null argument");
    if (index >= program->source.queries.size())
        return argument_error("query index out of range");
    return guarded([&] {
        const Resolved r = resolve(program, index, opts);
        const auto &q = program->source.queries[index];
        std::vector<plp::GroundLiteral> lits;
        for (const auto &a : q.positives)
            if (!a.is_builtin() && a.is_ground())
                lits.push_back({false, a});
        for (const auto &a : q.evidence)
            lits.push_back({false, a});
        const auto g = plp::ground(program->source.rules, lits, {*r.query.eot, r.query.guided});
        *out = dup(g.to_string());
    });
}

plp_status plp_query(const plp_program *program, size_t index, const plp_options *opts, plp_result **out) {
    if (!program || !out)
        return argument_error("null argument");
    if (index >= program->source.queries.size())
        return argument_error("query index out of range");
    *out = nullptr;
    return guarded([&] {
        const Resolved r = resolve(program, index, opts);
        const auto start = std::chrono::steady_clock::now();
        const plp::QueryResult qr =
            plp::answer_conditional(program->source.rules, program->source.queries[index], r.query);
        const double total =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        auto res = std::make_unique<plp_result>();
        const std::vector<std::string> none;
        for (const auto &a : qr.answers) {
            res->probs.push_back(a.prob);
            res->lines.push_back(plp::format_answer(a, r.inst_sol ? qr.variables : none, r.precision));
        }
        std::ostringstream st;
        st << "# eot " << qr.eot << (r.query.guided ? " guided" : " unguided")
           << (r.query.oracle ? " oracle" : " ve") << '\n';
        st << "# stage ground_rules(normal+prob) normal_rules prob_facts domain seconds\n";
        for (const auto &s : qr.stages)
            st << "# " << s.stage << ' ' << s.rules + s.prob_facts << ' ' << s.rules << ' ' << s.prob_facts << ' '
               << s.domain << ' ' << fmt_seconds(s.seconds) << '\n';
        st << "# ve inner_calls " << qr.ve.inner_calls << " cache_hits " << qr.ve.cache_hits << " pruned "
           << qr.ve.pruned << '\n';
        st << "# evidence_probability " << plp::format_probability(qr.evidence_prob, 12) << '\n';
        st << "# total_seconds " << fmt_seconds(total) << '\n';
        res->stats = st.str();
        *out = res.release();
    });
}

void plp_result_free(plp_result *result) { delete result; }

size_t plp_result_count(const plp_result *result) { return result ? result->lines.size() : 0; }

double plp_result_probability(const plp_result *result, size_t i) {
    return result && i < result->probs.size() ? result->probs[i] : 0.0;
}

const char *plp_result_line(const plp_result *result, size_t i) {
    return result && i < result->lines.size() ? result->lines[i].c_str() : "";
}

const char *plp_result_stats(const plp_result *result) { return result ? result->stats.c_str() : ""; }

plp_status plp_bench_generate(const char *family, int n, char **out) {
    if (!family || !out)
        return argument_error("null argument");
    return guarded([&] { *out = dup(plp::bench_generate(family, n)); });
}

} // extern "C"
