/* textaug C API: opaque handles over the augmentation and few-shot training
 * toolkit. Every function returns TA_OK or an error code; the message for the
 * most recent failure on the calling thread is available via ta_last_error().
 * Strings returned through char** are owned by the caller and must be freed
 * with ta_string_free(). */

#ifndef TEXTAUG_H
#define TEXTAUG_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#define TEXTAUG_VERSION "1.0.0"

typedef enum ta_status {
  TA_OK = 0,
  TA_ERR_IO = 1,
  TA_ERR_PARSE = 2,
  TA_ERR_INVALID = 3,
  TA_ERR_NOT_FOUND = 4,
  TA_ERR_RUNTIME = 5
} ta_status;

typedef enum ta_format {
  TA_FORMAT_AUTO = 0, /* by file extension: .tsv -> TSV, else JSONL */
  TA_FORMAT_JSONL = 1,
  TA_FORMAT_TSV = 2
} ta_format;

typedef struct ta_dataset ta_dataset;
typedef struct ta_stopwords ta_stopwords;
typedef struct ta_thesaurus ta_thesaurus;
typedef struct ta_scales ta_scales;
typedef struct ta_embeddings ta_embeddings;
typedef struct ta_augset ta_augset;       /* list of augmented examples */
typedef struct ta_scoredset ta_scoredset; /* augmented examples with scores */
typedef struct ta_model ta_model;

const char* ta_version(void);
/* Message for the most recent error on this thread; empty string if none. */
const char* ta_last_error(void);
void ta_string_free(char* s);

/* ---- corpus ---- */

ta_status ta_dataset_load(const char* path, ta_format format, ta_dataset** out);
ta_status ta_dataset_save_jsonl(const ta_dataset* d, const char* path);
void ta_dataset_free(ta_dataset* d);
size_t ta_dataset_size(const ta_dataset* d);
size_t ta_dataset_num_labels(const ta_dataset* d);
/* {"total": N, "per_class": {label: {"count": n, "percent": p}}} */
ta_status ta_dataset_stats_json(const ta_dataset* d, char** json_out);
/* mapping_json: {"FROM": "TO", ...}; unmapped labels pass through. */
ta_status ta_dataset_map_labels(const ta_dataset* d, const char* mapping_json, ta_dataset** out);
ta_status ta_dataset_stratified_split(const ta_dataset* d, double train_frac, double dev_frac,
                                      double test_frac, uint64_t seed, ta_dataset** train_out,
                                      ta_dataset** dev_out, ta_dataset** test_out);
/* Labeled set with t_size/K examples per class; remainder with labels hidden. */
ta_status ta_dataset_sample_training(const ta_dataset* d, size_t t_size, uint64_t seed,
                                     ta_dataset** labeled_out, ta_dataset** unlabeled_out);

/* ---- lexicons ---- */

ta_status ta_stopwords_load(const char* path, ta_stopwords** out);
void ta_stopwords_free(ta_stopwords* s);
ta_status ta_thesaurus_load(const char* path, ta_thesaurus** out);
void ta_thesaurus_free(ta_thesaurus* t);
/* paths: array of scale files, merged in order. */
ta_status ta_scales_load(const char* const* paths, size_t n_paths, ta_scales** out);
void ta_scales_free(ta_scales* s);
size_t ta_scales_count(const ta_scales* s);
ta_status ta_embeddings_load(const char* path, ta_embeddings** out);
void ta_embeddings_free(ta_embeddings* e);
size_t ta_embeddings_dim(const ta_embeddings* e);

/* ---- augmentation ---- */

typedef struct ta_eda_params {
  double alpha_sr;        /* default 0.1 */
  double p_rd;            /* default 0.1 */
  int copies_per_example; /* default 3 */
  int rd_copies;          /* -1: copies_per_example / 3 */
  int jobs;               /* worker threads, >= 1 */
} ta_eda_params;

void ta_eda_params_init(ta_eda_params* params);

ta_status ta_augment_oversample(const ta_dataset* d, uint64_t seed, ta_augset** out);
ta_status ta_augment_eda(const ta_dataset* d, const ta_thesaurus* t, const ta_stopwords* sw,
                         const ta_eda_params* params, uint64_t seed, ta_augset** out);
/* cap < 0 means no per-example cap. */
ta_status ta_augment_greyscale(const ta_dataset* d, const ta_scales* s, int cap, ta_augset** out);
/* endpoint may be NULL: then cache_path must exist and serve every request
 * (the file-backed mock). pivots_csv example: "es,fr,it". */
ta_status ta_augment_backtranslate(const ta_dataset* d, const char* endpoint,
                                   const char* cache_path, const char* pivots_csv,
                                   ta_augset** out);

ta_status ta_augset_load_jsonl(const char* path, ta_augset** out);
/* When originals is non-NULL its rows are written first, without provenance. */
ta_status ta_augset_save_jsonl(const ta_augset* a, const char* path, const ta_dataset* originals);
size_t ta_augset_size(const ta_augset* a);
void ta_augset_free(ta_augset* a);

/* ---- similarity filter ---- */

ta_status ta_score_augmented(const ta_augset* a, const ta_dataset* origins,
                             const ta_embeddings* e, int jobs, ta_scoredset** out);
ta_status ta_scoredset_filter(const ta_scoredset* s, double quantile, ta_augset** kept_out);
/* {"q1": .., "median": .., "q3": .., "min": .., "max": ..} */
ta_status ta_scoredset_distribution_json(const ta_scoredset* s, char** json_out);
size_t ta_scoredset_size(const ta_scoredset* s);
void ta_scoredset_free(ta_scoredset* s);

/* ---- model ---- */

/* config_json keys (all optional): hidden_units, dropout_rate, learning_rate,
 * epochs, batch_size, distill_temperature. NULL means all defaults. */
ta_status ta_model_train(const ta_dataset* train, const ta_embeddings* e, const char* config_json,
                         uint64_t seed, ta_model** out);
ta_status ta_model_save(const ta_model* m, const char* path);
ta_status ta_model_load(const char* path, ta_model** out);
/* JSONL rows: {"id", "text", "label": predicted, "probs": {label: p}}. */
ta_status ta_model_predict_jsonl(const ta_model* m, const ta_dataset* d, const char* out_path);
void ta_model_free(ta_model* m);

/* ---- metrics ---- */

/* Prediction labels are read from `pred`'s label field, matched to truth by
 * id. labels_csv orders the classes; NULL uses the truth dataset's order. */
ta_status ta_evaluate(const ta_dataset* truth, const ta_dataset* pred, const char* labels_csv,
                      char** report_json_out);
/* reports_json: JSON array of metrics reports. */
ta_status ta_aggregate_reports(const char* reports_json, char** aggregate_json_out);
/* rows_json: [{"method": name, "reports": [report objects]}]; format is
 * "text" or "csv". */
ta_status ta_render_report(const char* rows_json, const char* format, char** out);

/* ---- PET / iPET ---- */

/* config_json keys: t_size (required), seeds (array), ipet (bool),
 * generations, growth, model (object as in ta_model_train), pvp (object with
 * patterns/verbalizer) or pvp_path. Returns a JSON result with per-seed
 * metrics, aggregate, history and warnings; optional key save_model writes
 * the final checkpoint there. */
ta_status ta_pet_run(const ta_dataset* train, const ta_dataset* test, const ta_embeddings* e,
                     const char* config_json, char** result_json_out);

/* ---- misc ---- */

/* 64-bit FNV-1a of the file bytes, as 16 hex digits (not cryptographic). */
ta_status ta_hash_file(const char* path, char** hex_out);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* TEXTAUG_H */
