/* C interface of the plp engine. */
#ifndef PLP_H
#define PLP_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define PLP_API __declspec(dllexport)
#else
#define PLP_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef struct plp_program plp_program;
typedef struct plp_result plp_result;

typedef enum plp_status {
    PLP_OK = 0,
    PLP_E_PARSE = 1,
    PLP_E_RANGE_RESTRICTION = 2,
    PLP_E_EVAL = 3,
    PLP_E_NOT_TIME_CONSTRAINED = 4,
    PLP_E_NOT_STRATIFIED = 5,
    PLP_E_NEGATIVE_TIME = 6,
    PLP_E_POSITIVE_CYCLE = 7,
    PLP_E_BAD_PROBABILITY = 8,
    PLP_E_UNSUPPORTED = 9,
    PLP_E_ZERO_EVIDENCE = 10,
    PLP_E_UNKNOWN_ATOM = 11,
    PLP_E_IO = 12,
    PLP_E_ARGUMENT = 98,
    PLP_E_INTERNAL = 99
} plp_status;

/* Tri-state fields use -1 for "take the program's config or the default". */
typedef struct plp_options {
    int64_t eot;          /* -1: config(eot, N), else largest query time */
    int guided;           /* query_optimization_grounding, default 1 */
    int ve_pruning;       /* default 1 */
    int ve_caching;       /* default 1 */
    int cautious;         /* cautious_disjointing, default 0 */
    int inst_sol;         /* print answer substitutions, default 1 */
    int precision;        /* printed decimals, default 6 */
    int oracle;           /* 1: brute-force semantics instead of VE */
} plp_options;

PLP_API void plp_options_init(plp_options *opts);

PLP_API const char *plp_version(void);
PLP_API const char *plp_status_name(plp_status status);
/* Message of the last failed call on this thread ("" if none). */
PLP_API const char *plp_last_error(void);
PLP_API void plp_string_free(char *s);

PLP_API plp_status plp_program_parse(const char *text, plp_program **out);
PLP_API plp_status plp_program_load(const char *path, plp_program **out);
PLP_API void plp_program_free(plp_program *program);

PLP_API size_t plp_program_query_count(const plp_program *program);
/* Parses `text` as a query and appends it; its index goes to *index. */
PLP_API plp_status plp_program_add_query(plp_program *program, const char *text, size_t *index);
PLP_API plp_status plp_program_query_text(const plp_program *program, size_t index, char **out);
/* Newline separated parser warnings. */
PLP_API plp_status plp_program_warnings(const plp_program *program, char **out);

PLP_API plp_status plp_dump_strat(const plp_program *program, char **out);
/* Ground program for the query together with its evidence. */
PLP_API plp_status plp_dump_ground(const plp_program *program, size_t index, const plp_options *opts, char **out);

PLP_API plp_status plp_query(const plp_program *program, size_t index, const plp_options *opts, plp_result **out);
PLP_API void plp_result_free(plp_result *result);
PLP_API size_t plp_result_count(const plp_result *result);
PLP_API double plp_result_probability(const plp_result *result, size_t i);
/* Formatted answer line, owned by the result. */
PLP_API const char *plp_result_line(const plp_result *result, size_t i);
/* `# `-prefixed statistics lines, owned by the result. */
PLP_API const char *plp_result_stats(const plp_result *result);

PLP_API plp_status plp_bench_generate(const char *family, int n, char **out);

#ifdef __cplusplus
}
#endif

#endif
