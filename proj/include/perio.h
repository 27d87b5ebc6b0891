/* C API for the periodontitis diagnosis extraction library.
 *
 * All functions return perio_status; PERIO_OK is zero. On failure the
 * thread-local message from perio_last_error() describes what went wrong.
 * Objects are opaque handles created by _open/_build/_generate functions
 * and released with their matching _close function. Out-parameters are
 * written only on success.
 */
#ifndef PERIO_H
#define PERIO_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum perio_status {
    PERIO_OK = 0,
    PERIO_E_IO = 1,      /* unreadable/unwritable file */
    PERIO_E_PARSE = 2,   /* malformed record or file */
    PERIO_E_INVALID = 3, /* bad argument or precondition */
    PERIO_E_DOMAIN = 4,  /* value outside the declared domain */
    PERIO_E_BOUNDS = 5   /* span offsets out of range */
} perio_status;

typedef enum perio_method {
    PERIO_METHOD_SIMPLE = 0,
    PERIO_METHOD_ADVANCED = 1
} perio_method;

typedef struct perio_corpus perio_corpus;         /* notes + optional gold */
typedef struct perio_captures perio_captures;     /* filtered regex captures */
typedef struct perio_dataset perio_dataset;       /* split annotated sentences */
typedef struct perio_model perio_model;           /* trained tagger */
typedef struct perio_spans perio_spans;           /* note -> entity spans */
typedef struct perio_diagnoses perio_diagnoses;   /* note -> diagnosis or absent */
typedef struct perio_report perio_report;         /* per-attribute metrics */

const char* perio_version(void);

/* Message for the most recent failure on this thread; empty string if none. */
const char* perio_last_error(void);

/* ---- corpus ---- */

/* config_json: {"n_notes": N, "seed": S, "noise_rates": {kind: rate, ...}};
 * omitted noise_rates fall back to the built-in defaults. */
perio_status perio_synth(const char* config_json, perio_corpus** out);

/* format: "jsonl" or "csv". */
perio_status perio_corpus_open(const char* notes_path, const char* format, perio_corpus** out);
perio_status perio_corpus_load_gold(perio_corpus* corpus, const char* gold_path);
perio_status perio_corpus_write_notes(const perio_corpus* corpus, const char* path,
                                      const char* format);
perio_status perio_corpus_write_gold(const perio_corpus* corpus, const char* path);
perio_status perio_corpus_size(const perio_corpus* corpus, size_t* out);
void perio_corpus_close(perio_corpus* corpus);

/* ---- extraction ---- */

perio_status perio_extract(const perio_corpus* corpus, perio_method method,
                           perio_captures** out);
perio_status perio_captures_open(const char* path, perio_captures** out);
perio_status perio_captures_write(const perio_captures* captures, const char* path);
perio_status perio_captures_size(const perio_captures* captures, size_t* out);
perio_status perio_captures_to_diagnoses(const perio_captures* captures,
                                         const perio_corpus* corpus, perio_diagnoses** out);
void perio_captures_close(perio_captures* captures);

/* ---- dataset ---- */

perio_status perio_dataset_build(const perio_captures* captures, uint64_t seed,
                                 perio_dataset** out);
perio_status perio_dataset_write(const perio_dataset* dataset, const char* dir);
perio_status perio_dataset_open(const char* dir, perio_dataset** out);
perio_status perio_dataset_sizes(const perio_dataset* dataset, size_t* train, size_t* validation,
                                 size_t* test);
void perio_dataset_close(perio_dataset* dataset);

/* ---- tagger ---- */

typedef void (*perio_epoch_fn)(int epoch, double validation_f1, void* user);

perio_status perio_train(const perio_dataset* dataset, int epochs, uint64_t seed,
                         perio_epoch_fn on_epoch, void* user, perio_model** out);
perio_status perio_model_write(const perio_model* model, const char* path);
perio_status perio_model_open(const char* path, perio_model** out);
void perio_model_close(perio_model* model);

perio_status perio_predict(const perio_model* model, const perio_corpus* corpus, int workers,
                           perio_spans** out);
perio_status perio_spans_open(const char* path, const perio_corpus* corpus, perio_spans** out);
perio_status perio_spans_write(const perio_spans* spans, const char* path);
perio_status perio_spans_to_diagnoses(const perio_spans* spans, const perio_corpus* corpus,
                                      perio_diagnoses** out);
void perio_spans_close(perio_spans* spans);

/* ---- diagnoses and evaluation ---- */

perio_status perio_diagnoses_open(const char* path, perio_diagnoses** out);
perio_status perio_diagnoses_write(const perio_diagnoses* diagnoses, const char* path);

/* Advanced results as the base, missing values filled from simple. */
perio_status perio_merge(const perio_diagnoses* advanced, const perio_diagnoses* simple,
                         perio_diagnoses** out);
void perio_diagnoses_close(perio_diagnoses* diagnoses);

/* The corpus must have gold loaded (or come from perio_synth). */
perio_status perio_evaluate(const perio_diagnoses* diagnoses, const perio_corpus* corpus,
                            perio_report** out);
perio_status perio_report_write(const perio_report* report, const char* path);

/* Rendered text tables; the pointer stays valid until the report is closed. */
const char* perio_report_text(const perio_report* report);

/* attribute: "stage"|"grade"|"extent"; avg: "macro"|"weighted";
 * metric: "precision"|"recall"|"specificity"|"f1". */
perio_status perio_report_value(const perio_report* report, const char* attribute,
                                const char* avg, const char* metric, double* out);
void perio_report_close(perio_report* report);

/* ---- reference tables ---- */

/* Renders the built-in capture-matrix and split-size checks into buf
 * (NUL-terminated, truncated to buflen). *matched is 1 when everything
 * reproduces, else 0. */
perio_status perio_reproduce_tables(int* matched, char* buf, size_t buflen);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* PERIO_H */
