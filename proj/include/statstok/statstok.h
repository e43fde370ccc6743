/*
 * statstok C API.
 *
 * All objects are opaque handles created by stk_*_create / stk_*_read /
 * producer calls and released with the matching stk_*_destroy. Every fallible
 * call returns an stk_status; on failure stk_last_error() holds a message for
 * the calling thread until its next failing call. Strings returned through
 * char** out-parameters are heap-allocated and must be released with
 * stk_string_free.
 */
#ifndef STATSTOK_H
#define STATSTOK_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(STATSTOK_BUILDING)
#    define STATSTOK_API __declspec(dllexport)
#  else
#    define STATSTOK_API __declspec(dllimport)
#  endif
#else
#  define STATSTOK_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum stk_status {
    STK_OK = 0,
    STK_INVALID_INPUT = 1,
    STK_INSUFFICIENT_DATA = 2,
    STK_SINGULAR_COVARIANCE = 3,
    STK_EMPTY_SCALE = 4,
    STK_TOO_FEW_POINTS = 5,
    STK_PARSE_ERROR = 6,
    STK_EMPTY_DATASET = 7,
    STK_SCHEMA_ERROR = 8,
    STK_IO_ERROR = 9,
    STK_INTERNAL_ERROR = 10
} stk_status;

typedef enum stk_method {
    STK_METHOD_MEAN = 0,
    STK_METHOD_GMM = 1,
    STK_METHOD_UNIFORM = 2
} stk_method;

typedef enum stk_format {
    STK_FORMAT_CSV = 0,      /* one matrix CSV: rows are timesteps */
    STK_FORMAT_ROWS = 1,     /* labeled rows: label,v1,v2,... (tab or comma) */
    STK_FORMAT_MANIFEST = 2  /* path,label per line; each path a matrix CSV */
} stk_format;

/* Tokenizer hyperparameters. Defaults: 5, 500, 5, 10, 20, 2.0, 1e-6, 1.0. */
typedef struct stk_config {
    size_t delta_min;
    size_t delta_max;
    size_t delta_step;
    size_t stride;
    size_t s_min;
    double alpha;
    double epsilon;
    double lambda;
} stk_config;

typedef struct stk_options {
    stk_method method;
    size_t gmm_components; /* default 5 */
    size_t n_chunks;       /* default 10 */
    uint64_t seed;
    unsigned threads;      /* results never depend on this */
} stk_options;

typedef struct stk_prf {
    double precision;
    double recall;
    double f1;
    size_t tolerance;
} stk_prf;

typedef struct stk_series stk_series;
typedef struct stk_dataset stk_dataset;
typedef struct stk_regime_spec stk_regime_spec;
typedef struct stk_detection stk_detection;
typedef struct stk_result stk_result;

STATSTOK_API const char* stk_version(void);
STATSTOK_API const char* stk_status_string(stk_status status);
STATSTOK_API const char* stk_last_error(void);
STATSTOK_API void stk_string_free(char* s);

STATSTOK_API void stk_config_default(stk_config* cfg);
STATSTOK_API stk_status stk_config_validate(const stk_config* cfg);
STATSTOK_API void stk_options_default(stk_options* opts);
STATSTOK_API stk_status stk_method_parse(const char* name, stk_method* out);
STATSTOK_API const char* stk_method_name(stk_method method);

/* ---- series ---------------------------------------------------------- */

/* values is row-major, length x dims. */
STATSTOK_API stk_status stk_series_create(const double* values, size_t length, size_t dims,
                                          const char* id, stk_series** out);
STATSTOK_API stk_status stk_series_read_csv(const char* path, stk_series** out);
STATSTOK_API stk_status stk_series_write_csv(const stk_series* series, const char* path);
STATSTOK_API size_t stk_series_length(const stk_series* series);
STATSTOK_API size_t stk_series_dims(const stk_series* series);
STATSTOK_API const double* stk_series_values(const stk_series* series);
STATSTOK_API void stk_series_destroy(stk_series* series);

/* ---- datasets -------------------------------------------------------- */

STATSTOK_API stk_status stk_dataset_read(const char* path, stk_format format, stk_dataset** out);
STATSTOK_API size_t stk_dataset_size(const stk_dataset* dataset);
/* Copies series `index` into a new handle. */
STATSTOK_API stk_status stk_dataset_get(const stk_dataset* dataset, size_t index, stk_series** out);
STATSTOK_API void stk_dataset_destroy(stk_dataset* dataset);

/* ---- synthetic data -------------------------------------------------- */

STATSTOK_API stk_status stk_regime_spec_parse(const char* text, stk_regime_spec** out);
STATSTOK_API stk_status stk_regime_spec_read(const char* path, stk_regime_spec** out);
STATSTOK_API void stk_regime_spec_destroy(stk_regime_spec* spec);
/* truth_json (optional, may be NULL) receives {"length":T,"splits":[...]}. */
STATSTOK_API stk_status stk_generate(const stk_regime_spec* spec, uint64_t seed, stk_series** series,
                                     char** truth_json);
STATSTOK_API stk_status stk_add_noise(const stk_series* series, double sigma, uint64_t seed,
                                      stk_series** out);

/* ---- detection and summarization ------------------------------------ */

/* Z-normalizes the series, then runs multi-scale split detection. */
STATSTOK_API stk_status stk_detect(const stk_series* series, const stk_config* cfg, unsigned threads,
                                   stk_detection** out);
STATSTOK_API size_t stk_detection_split_count(const stk_detection* det);
STATSTOK_API const size_t* stk_detection_splits(const stk_detection* det);
STATSTOK_API stk_status stk_detection_to_json(const stk_detection* det, char** out);
/* Tidy CSV: position,score,scale for every scored position. */
STATSTOK_API stk_status stk_detection_scores_csv(const stk_detection* det, char** out);
STATSTOK_API void stk_detection_destroy(stk_detection* det);

STATSTOK_API stk_status stk_summarize(const stk_series* series, const stk_config* cfg,
                                      const stk_options* opts, stk_result** out);
STATSTOK_API stk_status stk_result_to_json(const stk_result* result, char** out);
STATSTOK_API stk_status stk_result_from_json(const char* json, stk_result** out);
STATSTOK_API size_t stk_result_token_count(const stk_result* result);
STATSTOK_API size_t stk_result_dims(const stk_result* result);
STATSTOK_API const double* stk_result_tokens(const stk_result* result);
STATSTOK_API double stk_result_compression_ratio(const stk_result* result);
STATSTOK_API size_t stk_result_split_count(const stk_result* result);
STATSTOK_API const size_t* stk_result_splits(const stk_result* result);
STATSTOK_API void stk_result_destroy(stk_result* result);

/* ---- evaluation ------------------------------------------------------ */

/* Reads the "splits" array of any JSON document; free *splits with stk_splits_free. */
STATSTOK_API stk_status stk_splits_from_json(const char* json, size_t** splits, size_t* count);
STATSTOK_API void stk_splits_free(size_t* splits);
STATSTOK_API stk_status stk_change_point_prf(const size_t* predicted, size_t n_predicted,
                                             const size_t* truth, size_t n_truth, size_t tol,
                                             stk_prf* out);
/* {"change_point": {...}} report document. */
STATSTOK_API stk_status stk_prf_to_json(const stk_prf* prf, char** out);
/* a is na x dims, b is nb x dims, both row-major. */
STATSTOK_API stk_status stk_dtw_distance(const double* a, size_t na, const double* b, size_t nb,
                                         size_t dims, double* out);
STATSTOK_API stk_status stk_eval_knn(const stk_dataset* train, const stk_dataset* test,
                                     const stk_method* methods, size_t n_methods,
                                     const stk_config* cfg, const stk_options* opts,
                                     char** report_json);
STATSTOK_API stk_status stk_eval_noise(const stk_dataset* train, const stk_dataset* test,
                                       const double* sigmas, size_t n_sigmas,
                                       const stk_method* methods, size_t n_methods,
                                       const stk_config* cfg, const stk_options* opts,
                                       char** report_json);

/* ---- file helpers ---------------------------------------------------- */

STATSTOK_API stk_status stk_read_text_file(const char* path, char** out);
STATSTOK_API stk_status stk_write_text_file(const char* path, const char* text);

#ifdef __cplusplus
}
#endif

#endif /* STATSTOK_H */
