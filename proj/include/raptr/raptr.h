/* Copyright 2026 The raptr-sim Authors.
 * Licensed under the Apache License, Version 2.0. See LICENSE at the
 * repository root or http://www.apache.org/licenses/LICENSE-2.0
 */

#ifndef RAPTR_RAPTR_H
#define RAPTR_RAPTR_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(RAPTR_BUILDING_LIBRARY)
#define RAPTR_API __attribute__((visibility("default")))
#else
#define RAPTR_API
#endif

typedef enum raptr_status {
    RAPTR_OK = 0,
    RAPTR_ERR_INVALID_ARGUMENT = 1,
    RAPTR_ERR_IO = 2,
    RAPTR_ERR_PARSE = 3,
    RAPTR_ERR_INVALID_SCENARIO = 4,
    RAPTR_ERR_HOP_COUNT_MODE = 5,
    RAPTR_ERR_INTERNAL = 6
} raptr_status;

typedef enum raptr_verdict {
    RAPTR_VERDICT_PASS = 0,
    RAPTR_VERDICT_SAFETY_VIOLATION = 1,
    RAPTR_VERDICT_LIVENESS_VIOLATION = 2
} raptr_verdict;

typedef struct raptr_scenario raptr_scenario;
typedef struct raptr_report raptr_report;
typedef struct raptr_campaign raptr_campaign;

RAPTR_API const char* raptr_version(void);
/* Message of the last failed call on this thread; never NULL. */
RAPTR_API const char* raptr_last_error(void);

RAPTR_API raptr_status raptr_scenario_load(const char* path, raptr_scenario** out);
RAPTR_API raptr_status raptr_scenario_parse(const char* json_text, raptr_scenario** out);
/* Caller frees *out with raptr_string_free. */
RAPTR_API raptr_status raptr_scenario_serialize(const raptr_scenario* s, char** out);
RAPTR_API raptr_status raptr_scenario_set_seed(raptr_scenario* s, uint64_t seed);
/* "RAPTR", "BABY_RAPTR" or "BASELINE_QS". */
RAPTR_API raptr_status raptr_scenario_set_variant(raptr_scenario* s, const char* variant);
RAPTR_API raptr_status raptr_scenario_set_hop_count_mode(raptr_scenario* s, int enabled);
RAPTR_API void raptr_scenario_free(raptr_scenario* s);

RAPTR_API raptr_status raptr_run(const raptr_scenario* s, raptr_report** out);
RAPTR_API raptr_verdict raptr_report_verdict(const raptr_report* r);
/* Borrowed strings, valid until raptr_report_free. */
RAPTR_API const char* raptr_report_json(const raptr_report* r);
RAPTR_API const char* raptr_report_counterexample(const raptr_report* r);
RAPTR_API void raptr_report_free(raptr_report* r);

/* seeds: "7", "1-1000" or "3,5,9-12"; parallelism 0 means one thread per core. */
RAPTR_API raptr_status raptr_campaign_run(const raptr_scenario* s, const char* seeds, unsigned parallelism,
                                          raptr_campaign** out);
RAPTR_API size_t raptr_campaign_failures(const raptr_campaign* c);
/* Returns 0 and leaves *seed untouched when every run passed. */
RAPTR_API int raptr_campaign_first_failing_seed(const raptr_campaign* c, uint64_t* seed);
RAPTR_API const char* raptr_campaign_summary(const raptr_campaign* c);
RAPTR_API const char* raptr_campaign_json(const raptr_campaign* c);
RAPTR_API const char* raptr_campaign_counterexample(const raptr_campaign* c);
RAPTR_API void raptr_campaign_free(raptr_campaign* c);

/* variants: comma-separated list, NULL for all three. Writes a text table to
 * *table and JSON to *json; free both with raptr_string_free. */
RAPTR_API raptr_status raptr_compare(const raptr_scenario* s, const char* variants, const char* seeds,
                                     unsigned parallelism, char** table, char** json);

RAPTR_API void raptr_string_free(char* s);

#ifdef __cplusplus
}
#endif

#endif /* RAPTR_RAPTR_H */
