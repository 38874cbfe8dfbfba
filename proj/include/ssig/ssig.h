/* ssig - semantic-signature localization engine, C API.
 *
 * All entry points return ssig_status; on failure ssig_last_error() gives a
 * thread-local message. Handles are opaque and freed with their matching
 * _free function. Output strings allocated by the library are released with
 * ssig_string_free.
 */
#ifndef SSIG_SSIG_H
#define SSIG_SSIG_H

#include <stddef.h>
#include <stdint.h>

#if defined(__cplusplus)
extern "C" {
#endif

typedef enum ssig_status {
  SSIG_OK = 0,
  SSIG_ERROR_INVALID_ARGUMENT = 1,
  SSIG_ERROR_PARSE = 2,
  SSIG_ERROR_IO = 3,
  SSIG_ERROR_FORMAT = 4,
  SSIG_ERROR_NOT_FOUND = 5,
  SSIG_ERROR_BUFFER_TOO_SMALL = 6,
  SSIG_ERROR_INTERNAL = 7
} ssig_status;

const char* ssig_status_name(ssig_status status);
const char* ssig_last_error(void);
const char* ssig_version(void);
void ssig_string_free(char* text);

typedef struct ssig_objects ssig_objects;
typedef struct ssig_database ssig_database;
typedef struct ssig_report ssig_report;

typedef struct ssig_bbox {
  double lon_min;
  double lat_min;
  double lon_max;
  double lat_max;
} ssig_bbox;

typedef struct ssig_build_params {
  double visibility_range_m; /* default 30 */
  double grid_step_m;        /* default 10 */
  uint32_t quantization_levels; /* default 16 */
} ssig_build_params;

void ssig_build_params_init(ssig_build_params* params);

/* ---- object sets ------------------------------------------------------- */

ssig_status ssig_objects_read_csv(const char* path, ssig_objects** out);
ssig_status ssig_objects_read_geojson(const char* path, ssig_objects** out);
ssig_status ssig_objects_write_csv(const ssig_objects* objects,
                                   const char* path);
size_t ssig_objects_count(const ssig_objects* objects);
size_t ssig_objects_row_error_count(const ssig_objects* objects);
/* Row-level ingestion problems; index < ssig_objects_row_error_count. */
const char* ssig_objects_row_error(const ssig_objects* objects, size_t index);
void ssig_objects_free(ssig_objects* objects);

typedef enum ssig_synth_profile {
  SSIG_SYNTH_PARIS = 0,  /* class intensities proportional to the reference
                            per-class counts over 79 km2, times `scale` */
  SSIG_SYNTH_UNIFORM = 1 /* `uniform_per_class_per_km2` for every class */
} ssig_synth_profile;

typedef struct ssig_synth_params {
  double width_m;
  double height_m;
  double anchor_lon; /* planar origin at the area center; default 2.35 */
  double anchor_lat; /* default 48.85 */
  ssig_synth_profile profile;
  double scale;                     /* SSIG_SYNTH_PARIS only; default 1 */
  double uniform_per_class_per_km2; /* SSIG_SYNTH_UNIFORM only */
  uint64_t seed;
} ssig_synth_params;

void ssig_synth_params_init(ssig_synth_params* params);
ssig_status ssig_objects_synthesize(const ssig_synth_params* params,
                                    ssig_objects** out);

/* ---- databases --------------------------------------------------------- */

ssig_status ssig_database_build(const ssig_objects* objects,
                                const ssig_build_params* params,
                                const ssig_bbox* bbox, ssig_database** out);
ssig_status ssig_database_save(const ssig_database* db, const char* path);
ssig_status ssig_database_load(const char* path, ssig_database** out);
void ssig_database_free(ssig_database* db);

typedef struct ssig_database_info {
  uint64_t record_count;
  double mean_signature_length;
  double covered_area_km2; /* record count times cell area */
  ssig_build_params params;
  double origin_lon;
  double origin_lat;
  uint32_t alphabet_size;
} ssig_database_info;

ssig_status ssig_database_get_info(const ssig_database* db,
                                   ssig_database_info* out);

/* Human-readable header summary / one record in text form ("cell_id,lon,
 * lat,signature"). Free the result with ssig_string_free. */
ssig_status ssig_database_describe(const ssig_database* db, char** out_text);
ssig_status ssig_database_record_text(const ssig_database* db,
                                      uint64_t cell_id, char** out_text);

typedef enum ssig_part { SSIG_PART_TYPE = 0, SSIG_PART_ANGLE = 1 } ssig_part;

typedef struct ssig_group_stats {
  uint64_t group_count;
  double mean;
  double stddev;
  uint64_t min;
  double q25;
  double q50;
  double q75;
  uint64_t max;
} ssig_group_stats;

/* Distribution of group sizes when records are grouped by one signature
 * part. */
ssig_status ssig_database_group_stats(const ssig_database* db, ssig_part part,
                                      ssig_group_stats* out);

/* ---- retrieval --------------------------------------------------------- */

typedef enum ssig_metric {
  SSIG_METRIC_JACCARD = 0,
  SSIG_METRIC_HISTOGRAM = 1,
  SSIG_METRIC_EDIT = 2
} ssig_metric;

typedef enum ssig_protocol {
  SSIG_PROTOCOL_FULL = 0,
  SSIG_PROTOCOL_TWO_STAGE = 1,
  SSIG_PROTOCOL_SINGLE = 2 /* one metric on the part given as first_part */
} ssig_protocol;

typedef struct ssig_policy {
  ssig_metric metric_type;
  ssig_metric metric_angle;
  double alpha; /* weight of the type part; the angle weight is 1 - alpha */
  double k_percent;
  uint32_t t;
} ssig_policy;

void ssig_policy_init(ssig_policy* policy);

typedef struct ssig_candidate {
  uint32_t rank;
  uint64_t cell_id;
  double lon;
  double lat;
  double score;
} ssig_candidate;

/* Ranks the database against a signature in its text form (e.g. "BD|0;4").
 * *out_count receives the number of candidates produced (min(t, eligible
 * records)); if that exceeds capacity nothing is written and
 * SSIG_ERROR_BUFFER_TOO_SMALL is returned. */
ssig_status ssig_query(const ssig_database* db, const char* signature_text,
                       const ssig_policy* policy, ssig_protocol protocol,
                       ssig_part first_part, ssig_candidate* out,
                       size_t capacity, size_t* out_count);

/* ---- evaluation -------------------------------------------------------- */

typedef enum ssig_distortion_level {
  SSIG_DISTORTION_NONE = 0,
  SSIG_DISTORTION_LIGHT = 1,  /* 1 type operation  */
  SSIG_DISTORTION_MEDIUM = 2, /* 7 type operations */
  SSIG_DISTORTION_STRONG = 3, /* 13 type operations */
  SSIG_DISTORTION_CUSTOM = 4  /* explicit op_count */
} ssig_distortion_level;

typedef struct ssig_distortion {
  ssig_distortion_level level;
  uint32_t op_count;         /* SSIG_DISTORTION_CUSTOM only */
  double angle_sigma_deg;    /* default 5 */
  double angle_clip_deg;     /* default 30 */
} ssig_distortion;

void ssig_distortion_init(ssig_distortion* distortion);

typedef struct ssig_eval_params {
  uint64_t query_count;
  uint64_t seed;
  ssig_policy policy;
  ssig_protocol protocol;
  ssig_part first_part;
  ssig_distortion distortion;
  int unambiguous_only; /* keep only queries with a unique signature */
} ssig_eval_params;

void ssig_eval_params_init(ssig_eval_params* params);

ssig_status ssig_eval(const ssig_database* db, const ssig_eval_params* params,
                      ssig_report** out);
void ssig_report_free(ssig_report* report);

size_t ssig_report_cdf_size(const ssig_report* report);
ssig_status ssig_report_cdf_point(const ssig_report* report, size_t index,
                                  double* error_m, double* cum_prob);
size_t ssig_report_recall_size(const ssig_report* report);
ssig_status ssig_report_recall_point(const ssig_report* report, size_t index,
                                     double* rank_percent, double* fraction);

typedef struct ssig_report_summary {
  uint64_t query_count;
  double p_error_le_50m;
  double recall_at_10pct;
  /* Wall-clock scoring time; informational, not reproducible run to run. */
  double mean_query_ms;
  double median_query_ms;
  double min_query_ms;
  double max_query_ms;
} ssig_report_summary;

ssig_status ssig_report_get_summary(const ssig_report* report,
                                    ssig_report_summary* out);

/* ---- parameter sweeps --------------------------------------------------- */

typedef enum ssig_sweep_key {
  SSIG_SWEEP_RANGE = 0,  /* visibility range, meters */
  SSIG_SWEEP_QLEVELS = 1 /* angle quantization levels */
} ssig_sweep_key;

typedef struct ssig_sweep_row {
  double param;
  double p_error_le_50m;
  double recall_at_10pct;
} ssig_sweep_row;

/* Rebuilds the database per value and reruns the benchmark with identical
 * seeds. out_rows must hold value_count entries. */
ssig_status ssig_sweep(const ssig_objects* objects, const ssig_bbox* bbox,
                       const ssig_build_params* base,
                       const ssig_eval_params* eval, ssig_sweep_key key,
                       const double* values, size_t value_count,
                       ssig_sweep_row* out_rows);

#if defined(__cplusplus)
} /* extern "C" */
#endif

#endif /* SSIG_SSIG_H */
