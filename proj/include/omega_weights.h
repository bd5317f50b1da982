#ifndef OMEGA_WEIGHTS_H
#define OMEGA_WEIGHTS_H

/* C interface to the omega_weights library. Every call returns an ow_status;
 * on failure ow_last_error() describes the problem (thread local). Strings
 * returned through char** outputs are owned by the caller and released with
 * ow_string_free. Structured results are JSON documents. */

#include <stdint.h>

#if defined(_WIN32)
#  if defined(OW_BUILDING_LIBRARY)
#    define OW_API __declspec(dllexport)
#  else
#    define OW_API __declspec(dllimport)
#  endif
#else
#  define OW_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ow_status {
    OW_OK = 0,
    OW_ERR_ARGUMENT = 1, /* unknown name, missing structure, null pointer */
    OW_ERR_PARSE = 2,    /* malformed expression, word, value or JSON */
    OW_ERR_DOMAIN = 3,   /* operation undefined for the given input */
    OW_ERR_INTERNAL = 4
} ow_status;

/* A resolved instance: carrier, valuation and/or hemimodule pair plus the
 * alphabet and bounds used for series. */
typedef struct ow_instance ow_instance;

OW_API const char* ow_version(void);
OW_API const char* ow_last_error(void);
OW_API void ow_string_free(char* s);

/* params_json may be NULL; keys: lambda, base, cap, h, alphabet, bound, depth. */
OW_API ow_status ow_instance_new(const char* name, const char* params_json, ow_instance** out);
OW_API void ow_instance_free(ow_instance* inst);
/* JSON manifest {instance, params, alphabet, bound, depth}. */
OW_API ow_status ow_instance_manifest(const ow_instance* inst, char** json_out);
/* JSON array of names. */
OW_API ow_status ow_list_instances(char** json_out);
OW_API ow_status ow_list_suites(char** json_out);

/* Runs a law suite; *passed is 1 when no law failed. The report is JSON. */
OW_API ow_status ow_run_laws(const ow_instance* inst, const char* suite, uint64_t samples,
                             uint64_t seed, int* passed, char** report_json);

/* Coefficient of an expression at a finite word or at "u(v)^w". */
OW_API ow_status ow_coeff(const ow_instance* inst, const char* expr, const char* word,
                          char** value_out);

/* Parses and reprints an expression. */
OW_API ow_status ow_expr_normalize(const char* expr, char** printed_out);

/* Automaton JSON for an expression. */
OW_API ow_status ow_compile(const ow_instance* inst, const char* expr, char** automaton_json);

/* Behavior of an automaton at a word; depth 0 lets disc iterate to tolerance. */
OW_API ow_status ow_behavior(const ow_instance* inst, const char* automaton_json, const char* word,
                             uint64_t depth, char** result_json);

/* {finitary, omega} expressions for the behaviors of an automaton. */
OW_API ow_status ow_eliminate(const ow_instance* inst, const char* automaton_json,
                              char** result_json);

/* Plus- and omega-form group identities for a builtin group (Z1..Z6, S3). */
OW_API ow_status ow_group_check(const ow_instance* inst, const char* group, uint64_t samples,
                                uint64_t seed, int* passed, char** report_json);

/* Counterexample trace; *violated is 1 when direct and regrouped values differ.
 * depth 0 selects the default depth. */
OW_API ow_status ow_counterexample(const char* name, uint64_t depth, int* violated,
                                   char** trace_json);

#ifdef __cplusplus
}
#endif

#endif /* OMEGA_WEIGHTS_H */
