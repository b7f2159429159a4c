/* Copyright (c) 2026 The oraclesim developers
 * Distributed under the MIT software license, see the accompanying
 * file COPYING or http://www.opensource.org/licenses/mit-license.php.
 */

#ifndef ORACLESIM_H
#define ORACLESIM_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define ORACLESIM_API __declspec(dllexport)
#else
#define ORACLESIM_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Status codes. Nonzero values match the library's internal error codes;
 * oraclesim_errc_name() gives the symbolic name. */
#define ORACLESIM_OK 0
#define ORACLESIM_E_INVALID_ARGUMENT 1
#define ORACLESIM_E_MALFORMED 2
#define ORACLESIM_E_TRUNCATED 3
#define ORACLESIM_E_PARSE 4
#define ORACLESIM_E_ASSERTION 5
#define ORACLESIM_E_IO 6
#define ORACLESIM_E_INTERNAL 99

typedef struct oraclesim_run oraclesim_run;

typedef struct oraclesim_safe_params {
    int m;
    int n;
    int threshold;
    int total_keys;
    int agent_keys;
} oraclesim_safe_params;

/* Message for the last failing call on this thread; "" after success. */
ORACLESIM_API const char* oraclesim_last_error(void);
ORACLESIM_API const char* oraclesim_errc_name(int code);
ORACLESIM_API const char* oraclesim_version(void);

/* Run a scenario given as JSON text or a file path. seed_override may be
 * NULL. On success *out owns the run; free it with oraclesim_run_free. A
 * run whose assertions fail still returns ORACLESIM_OK: check
 * oraclesim_run_passed. */
ORACLESIM_API int oraclesim_run_scenario(const char* scenario_json, const uint64_t* seed_override, oraclesim_run** out);
ORACLESIM_API int oraclesim_run_scenario_file(const char* path, const uint64_t* seed_override, oraclesim_run** out);

ORACLESIM_API int oraclesim_run_passed(const oraclesim_run* run);
ORACLESIM_API const char* oraclesim_run_name(const oraclesim_run* run);
ORACLESIM_API uint64_t oraclesim_run_seed(const oraclesim_run* run);
/* Hex SHA-256 of the event log bytes. */
ORACLESIM_API const char* oraclesim_run_digest(const oraclesim_run* run);
/* Line-delimited JSON event log; *len receives its byte length if non-NULL. */
ORACLESIM_API const char* oraclesim_run_events(const oraclesim_run* run, size_t* len);
ORACLESIM_API const char* oraclesim_run_facts(const oraclesim_run* run);
/* "" when every assertion held. */
ORACLESIM_API const char* oraclesim_run_first_failure(const oraclesim_run* run);
ORACLESIM_API void oraclesim_run_free(oraclesim_run* run);

/* *equal = 1 iff the two log files have the same digest. */
ORACLESIM_API int oraclesim_verify_logs(const char* log_a_path, const char* log_b_path, int* equal);
/* Hex digest of a log file; release with oraclesim_string_free. */
ORACLESIM_API int oraclesim_log_digest(const char* log_path, char** hex_out);
/* Write the metrics CSV for a log; *rows (if non-NULL) gets the data row count. */
ORACLESIM_API int oraclesim_export_metrics(const char* log_path, const char* csv_path, size_t* rows);

ORACLESIM_API int oraclesim_orisi_params(int m, int n, oraclesim_safe_params* out);

/* Decode an XOR-keyed meta-protocol payload. Result is JSON. */
ORACLESIM_API int oraclesim_decode_payload(const char* payload_hex, const char* txid_hex, char** json_out);
/* Classify a JSON transaction under era "test2013" or "v090". Result is JSON. */
ORACLESIM_API int oraclesim_classify_tx(const char* tx_json, const char* era, char** json_out);

ORACLESIM_API void oraclesim_string_free(char* s);

#ifdef __cplusplus
}
#endif

#endif /* ORACLESIM_H */
