#include "ssig/ssig.h"

#include <cstdio>
#include <cstring>
#include <new>
#include <string>
#include <vector>

#include "ssig/distortion.hpp"
#include "ssig/error.hpp"
#include "ssig/evaluation.hpp"
#include "ssig/ingest.hpp"
#include "ssig/metrics.hpp"
#include "ssig/model.hpp"
#include "ssig/retrieval.hpp"
#include "ssig/siggen.hpp"

struct ssig_objects {
  std::vector<ssig::SemanticObject> objects;
  std::vector<std::string> row_errors;
};

struct ssig_database {
  explicit ssig_database(ssig::SignatureDatabase database)
      : db(std::move(database)) {}
  ssig::SignatureDatabase db;
};

struct ssig_report {
  ssig::EvaluationReport report;
};

namespace {

thread_local std::string g_last_error;

void set_last_error(const std::string& message) { g_last_error = message; }

ssig_status status_from(const ssig::Error& e) {
  switch (e.code()) {
    case ssig::ErrorCode::invalid_argument:
      return SSIG_ERROR_INVALID_ARGUMENT;
    case ssig::ErrorCode::parse:
      return SSIG_ERROR_PARSE;
    case ssig::ErrorCode::io:
      return SSIG_ERROR_IO;
    case ssig::ErrorCode::format:
      return SSIG_ERROR_FORMAT;
    case ssig::ErrorCode::not_found:
      return SSIG_ERROR_NOT_FOUND;
  }
  return SSIG_ERROR_INTERNAL;
}

template <typename Fn>
ssig_status guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const ssig::ParseError& e) {
    set_last_error(std::string(e.what()) + " (at position " +
                   std::to_string(e.position()) + ")");
    return SSIG_ERROR_PARSE;
  } catch (const ssig::Error& e) {
    set_last_error(e.what());
    return status_from(e);
  } catch (const std::bad_alloc&) {
    set_last_error("out of memory");
    return SSIG_ERROR_INTERNAL;
  } catch (const std::exception& e) {
    set_last_error(e.what());
    return SSIG_ERROR_INTERNAL;
  }
}

ssig_status require(bool ok, const char* message) {
  if (ok) return SSIG_OK;
  set_last_error(message);
  return SSIG_ERROR_INVALID_ARGUMENT;
}

ssig::MetricKind to_metric(ssig_metric m) {
  switch (m) {
    case SSIG_METRIC_JACCARD:
      return ssig::MetricKind::jaccard;
    case SSIG_METRIC_HISTOGRAM:
      return ssig::MetricKind::histogram;
    case SSIG_METRIC_EDIT:
      return ssig::MetricKind::edit;
  }
  ssig::throw_invalid("unknown metric enum value");
}

ssig::SignaturePart to_part(ssig_part p) {
  return p == SSIG_PART_TYPE ? ssig::SignaturePart::type
                             : ssig::SignaturePart::angle;
}

ssig::FusionPolicy to_policy(const ssig_policy& p) {
  ssig::FusionPolicy policy = ssig::FusionPolicy::with_alpha(p.alpha);
  policy.metric_type = to_metric(p.metric_type);
  policy.metric_angle = to_metric(p.metric_angle);
  policy.k_percent = p.k_percent;
  policy.t = p.t;
  return policy;
}

ssig::Protocol to_protocol(ssig_protocol protocol, ssig_part first_part) {
  switch (protocol) {
    case SSIG_PROTOCOL_FULL:
      return ssig::Protocol::full;
    case SSIG_PROTOCOL_TWO_STAGE:
      return first_part == SSIG_PART_TYPE
                 ? ssig::Protocol::two_stage_type_first
                 : ssig::Protocol::two_stage_angle_first;
    case SSIG_PROTOCOL_SINGLE:
      return first_part == SSIG_PART_TYPE ? ssig::Protocol::single_type
                                          : ssig::Protocol::single_angle;
  }
  ssig::throw_invalid("unknown protocol enum value");
}

ssig::DistortionConfig to_distortion(const ssig_distortion& d) {
  ssig::DistortionConfig cfg;
  switch (d.level) {
    case SSIG_DISTORTION_NONE:
      cfg.level = ssig::DistortionLevel::none;
      break;
    case SSIG_DISTORTION_LIGHT:
      cfg.level = ssig::DistortionLevel::light;
      break;
    case SSIG_DISTORTION_MEDIUM:
      cfg.level = ssig::DistortionLevel::medium;
      break;
    case SSIG_DISTORTION_STRONG:
      cfg.level = ssig::DistortionLevel::strong;
      break;
    case SSIG_DISTORTION_CUSTOM:
      cfg.level = ssig::DistortionLevel::custom;
      cfg.op_count = d.op_count;
      break;
    default:
      ssig::throw_invalid("unknown distortion level enum value");
  }
  cfg.angle_noise_sigma_deg = d.angle_sigma_deg;
  cfg.angle_noise_clip_deg = d.angle_clip_deg;
  return cfg;
}

char* copy_string(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void append_kv(std::string& out, const char* key, const std::string& value) {
  out += key;
  out += ',';
  out += value;
  out += '\n';
}

std::string fmt(const char* spec, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), spec, v);
  return buf;
}

}  // namespace

extern "C" {

const char* ssig_status_name(ssig_status status) {
  switch (status) {
    case SSIG_OK:
      return "ok";
    case SSIG_ERROR_INVALID_ARGUMENT:
      return "invalid argument";
    case SSIG_ERROR_PARSE:
      return "parse error";
    case SSIG_ERROR_IO:
      return "io error";
    case SSIG_ERROR_FORMAT:
      return "format error";
    case SSIG_ERROR_NOT_FOUND:
      return "not found";
    case SSIG_ERROR_BUFFER_TOO_SMALL:
      return "buffer too small";
    case SSIG_ERROR_INTERNAL:
      return "internal error";
  }
  return "unknown";
}

const char* ssig_last_error(void) { return g_last_error.c_str(); }

const char* ssig_version(void) { return "0.1.0"; }

void ssig_string_free(char* text) { delete[] text; }

void ssig_build_params_init(ssig_build_params* params) {
  if (params == nullptr) return;
  params->visibility_range_m = 30.0;
  params->grid_step_m = 10.0;
  params->quantization_levels = 16;
}

ssig_status ssig_objects_read_csv(const char* path, ssig_objects** out) {
  ssig_status rc = require(path && out, "path and out must not be null");
  if (rc != SSIG_OK) return rc;
  return guarded([&] {
    auto result = ssig::read_objects_csv(path);
    auto* handle = new ssig_objects;
    handle->objects = std::move(result.objects);
    for (const auto& e : result.row_errors) {
      handle->row_errors.push_back("line " + std::to_string(e.line) + ": " +
                                   e.message);
    }
    *out = handle;
    return SSIG_OK;
  });
}

ssig_status ssig_objects_read_geojson(const char* path, ssig_objects** out) {
  ssig_status rc = require(path && out, "path and out must not be null");
  if (rc != SSIG_OK) return rc;
  return guarded([&] {
    auto result = ssig::read_objects_geojson(path);
    auto* handle = new ssig_objects;
    handle->objects = std::move(result.objects);
    for (const auto& e : result.row_errors) {
      handle->row_errors.push_back("feature " + std::to_string(e.line) + ": " +
                                   e.message);
    }
    *out = handle;
    return SSIG_OK;
  });
}

ssig_status ssig_objects_write_csv(const ssig_objects* objects,
                                   const char* path) {
  ssig_status rc = require(objects && path, "objects and path must not be null");
  if (rc != SSIG_OK) return rc;
  return guarded([&] {
    ssig::write_objects_csv(objects->objects, path);
    return SSIG_OK;
  });
}

size_t ssig_objects_count(const ssig_objects* objects) {
  return objects == nullptr ? 0 : objects->objects.size();
}

size_t ssig_objects_row_error_count(const ssig_objects* objects) {
  return objects == nullptr ? 0 : objects->row_errors.size();
}

const char* ssig_objects_row_error(const ssig_objects* objects, size_t index) {
  if (objects == nullptr || index >= objects->row_errors.size()) return nullptr;
  return objects->row_errors[index].c_str();
}

void ssig_objects_free(ssig_objects* objects) { delete objects; }

void ssig_synth_params_init(ssig_synth_params* params) {
  if (params == nullptr) return;
  params->width_m = 1000.0;
  params->height_m = 1000.0;
  params->anchor_lon = 2.35;
  params->anchor_lat = 48.85;
  params->profile = SSIG_SYNTH_PARIS;
  params->scale = 1.0;
  params->uniform_per_class_per_km2 = 0.0;
  params->seed = 0;
}

ssig_status ssig_objects_synthesize(const ssig_synth_params* params,
                                    ssig_objects** out) {
  ssig_status rc = require(params && out, "params and out must not be null");
  if (rc != SSIG_OK) return rc;
  return guarded([&] {
    ssig::SyntheticCityConfig cfg;
    if (params->profile == SSIG_SYNTH_PARIS) {
      cfg = ssig::SyntheticCityConfig::paris_profile(
          params->width_m, params->height_m, params->seed, params->scale);
    } else if (params->profile == SSIG_SYNTH_UNIFORM) {
      cfg = ssig::SyntheticCityConfig::uniform_profile(
          params->width_m, params->height_m, params->seed,
          params->uniform_per_class_per_km2);
    } else {
      ssig::throw_invalid("unknown synthetic profile");
    }
    cfg.anchor = ssig::GeoPoint{params->anchor_lon, params->anchor_lat};
    auto* handle = new ssig_objects;
    handle->objects = ssig::generate_synthetic_city(cfg);
    *out = handle;
    return SSIG_OK;
  });
}

ssig_status ssig_database_build(const ssig_objects* objects,
                                const ssig_build_params* params,
                                const ssig_bbox* bbox, ssig_database** out) {
  ssig_status rc =
      require(objects && params && bbox && out, "arguments must not be null");
  if (rc != SSIG_OK) return rc;
  return guarded([&] {
    ssig::BuildParams bp{params->visibility_range_m, params->grid_step_m,
                         params->quantization_levels};
    ssig::GeoBBox box{bbox->lon_min, bbox->lat_min, bbox->lon_max,
                      bbox->lat_max};
    *out = new ssig_database(ssig::build_database(objects->objects, bp, box));
    return SSIG_OK;
  });
}

ssig_status ssig_database_save(const ssig_database* db, const char* path) {
  ssig_status rc = require(db && path, "db and path must not be null");
  if (rc != SSIG_OK) return rc;
  return guarded([&] {
    ssig::save_database(db->db, path);
    return SSIG_OK;
  });
}

ssig_status ssig_database_load(const char* path, ssig_database** out) {
  ssig_status rc = require(path && out, "path and out must not be null");
  if (rc != SSIG_OK) return rc;
  return guarded([&] {
    *out = new ssig_database(ssig::load_database(path));
    return SSIG_OK;
  });
}

void ssig_database_free(ssig_database* db) { delete db; }

ssig_status ssig_database_get_info(const ssig_database* db,
                                   ssig_database_info* out) {
  ssig_status rc = require(db && out, "db and out must not be null");
  if (rc != SSIG_OK) return rc;
  const auto& d = db->db;
  out->record_count = d.size();
  double total = 0.0;
  for (const auto& rec : d.records()) {
    total += static_cast<double>(rec.signature.size());
  }
  out->mean_signature_length =
      d.size() == 0 ? 0.0 : total / static_cast<double>(d.size());
  out->covered_area_km2 = static_cast<double>(d.size()) *
                          d.params().grid_step_m * d.params().grid_step_m / 1e6;
  out->params = {d.params().visibility_range_m, d.params().grid_step_m,
                 d.params().quantization_levels};
  out->origin_lon = d.projection_origin().lon_deg;
  out->origin_lat = d.projection_origin().lat_deg;
  out->alphabet_size = static_cast<uint32_t>(d.alphabet().size());
  return SSIG_OK;
}

ssig_status ssig_database_describe(const ssig_database* db, char** out_text) {
  ssig_status rc = require(db && out_text, "db and out_text must not be null");
  if (rc != SSIG_OK) return rc;
  return guarded([&] {
    const auto& d = db->db;
    ssig_database_info info;
    ssig_database_get_info(db, &info);
    std::string text;
    append_kv(text, "format_version", "1");
    append_kv(text, "visibility_range_m", fmt("%g", info.params.visibility_range_m));
    append_kv(text, "grid_step_m", fmt("%g", info.params.grid_step_m));
    append_kv(text, "quantization_levels",
              std::to_string(info.params.quantization_levels));
    append_kv(text, "origin_lon", fmt("%.7f", info.origin_lon));
    append_kv(text, "origin_lat", fmt("%.7f", info.origin_lat));
    std::string symbols;
    for (const auto& c : d.alphabet()) symbols += c.symbol;
    append_kv(text, "alphabet", symbols);
    append_kv(text, "records", std::to_string(info.record_count));
    append_kv(text, "mean_signature_length",
              fmt("%.6f", info.mean_signature_length));
    append_kv(text, "covered_area_km2", fmt("%.6f", info.covered_area_km2));
    append_kv(text, "empty_cells", "dropped");
    if (d.size() > 0) {
      const auto by_type = ssig::group_stats(d, ssig::SignaturePart::type);
      const auto by_angle = ssig::group_stats(d, ssig::SignaturePart::angle);
      append_kv(text, "group_count_by_type", std::to_string(by_type.group_count));
      append_kv(text, "group_mean_by_type", fmt("%.6f", by_type.mean));
      append_kv(text, "group_max_by_type", std::to_string(by_type.max));
      append_kv(text, "group_count_by_angle",
                std::to_string(by_angle.group_count));
      append_kv(text, "group_mean_by_angle", fmt("%.6f", by_angle.mean));
      append_kv(text, "group_max_by_angle", std::to_string(by_angle.max));
    }
    *out_text = copy_string(text);
    return SSIG_OK;
  });
}

ssig_status ssig_database_record_text(const ssig_database* db,
                                      uint64_t cell_id, char** out_text) {
  ssig_status rc = require(db && out_text, "db and out_text must not be null");
  if (rc != SSIG_OK) return rc;
  return guarded([&] {
    const auto& rec = db->db.records()[db->db.index_of(cell_id)];
    char buf[96];
    std::snprintf(buf, sizeof(buf), "%llu,%.7f,%.7f,",
                  static_cast<unsigned long long>(rec.cell_id),
                  rec.cell_center.lon_deg, rec.cell_center.lat_deg);
    *out_text = copy_string(std::string(buf) +
                            ssig::signature_to_string(rec.signature));
    return SSIG_OK;
  });
}

ssig_status ssig_database_group_stats(const ssig_database* db, ssig_part part,
                                      ssig_group_stats* out) {
  ssig_status rc = require(db && out, "db and out must not be null");
  if (rc != SSIG_OK) return rc;
  return guarded([&] {
    const auto stats = ssig::group_stats(db->db, to_part(part));
    out->group_count = stats.group_count;
    out->mean = stats.mean;
    out->stddev = stats.stddev;
    out->min = stats.min;
    out->q25 = stats.q25;
    out->q50 = stats.q50;
    out->q75 = stats.q75;
    out->max = stats.max;
    return SSIG_OK;
  });
}

void ssig_policy_init(ssig_policy* policy) {
  if (policy == nullptr) return;
  policy->metric_type = SSIG_METRIC_EDIT;
  policy->metric_angle = SSIG_METRIC_EDIT;
  policy->alpha = 0.5;
  policy->k_percent = 5.0;
  policy->t = 100;
}

ssig_status ssig_query(const ssig_database* db, const char* signature_text,
                       const ssig_policy* policy, ssig_protocol protocol,
                       ssig_part first_part, ssig_candidate* out,
                       size_t capacity, size_t* out_count) {
  ssig_status rc = require(db && signature_text && policy && out && out_count,
                           "arguments must not be null");
  if (rc != SSIG_OK) return rc;
  *out_count = 0;
  return guarded([&]() -> ssig_status {
    const ssig::Signature query = ssig::signature_from_string(signature_text);
    const ssig::FusionPolicy fusion = to_policy(*policy);
    std::vector<ssig::RankedCandidate> ranked;
    switch (protocol) {
      case SSIG_PROTOCOL_FULL:
        ranked = ssig::rank_full(db->db, query, fusion);
        break;
      case SSIG_PROTOCOL_TWO_STAGE:
        ranked = ssig::rank_two_stage(db->db, query, fusion,
                                      to_part(first_part));
        break;
      case SSIG_PROTOCOL_SINGLE: {
        const ssig::MetricKind kind = first_part == SSIG_PART_TYPE
                                          ? fusion.metric_type
                                          : fusion.metric_angle;
        ranked = ssig::rank_single(db->db, query, kind, to_part(first_part),
                                   fusion.t, fusion.weights);
        break;
      }
      default:
        ssig::throw_invalid("unknown protocol enum value");
    }
    *out_count = ranked.size();
    if (ranked.size() > capacity) {
      set_last_error("candidate buffer too small; need " +
                     std::to_string(ranked.size()) + " slots");
      return SSIG_ERROR_BUFFER_TOO_SMALL;
    }
    for (size_t i = 0; i < ranked.size(); ++i) {
      out[i] = {ranked[i].rank, ranked[i].cell_id,
                ranked[i].cell_center.lon_deg, ranked[i].cell_center.lat_deg,
                ranked[i].score};
    }
    return SSIG_OK;
  });
}

void ssig_distortion_init(ssig_distortion* distortion) {
  if (distortion == nullptr) return;
  distortion->level = SSIG_DISTORTION_NONE;
  distortion->op_count = 0;
  distortion->angle_sigma_deg = 5.0;
  distortion->angle_clip_deg = 30.0;
}

void ssig_eval_params_init(ssig_eval_params* params) {
  if (params == nullptr) return;
  params->query_count = 1000;
  params->seed = 0;
  ssig_policy_init(&params->policy);
  params->protocol = SSIG_PROTOCOL_FULL;
  params->first_part = SSIG_PART_TYPE;
  ssig_distortion_init(&params->distortion);
  params->unambiguous_only = 0;
}

ssig_status ssig_eval(const ssig_database* db, const ssig_eval_params* params,
                      ssig_report** out) {
  ssig_status rc = require(db && params && out, "arguments must not be null");
  if (rc != SSIG_OK) return rc;
  return guarded([&] {
    ssig::EvalSettings settings;
    settings.query_count = params->query_count;
    settings.seed = params->seed;
    settings.policy = to_policy(params->policy);
    settings.protocol = to_protocol(params->protocol, params->first_part);
    settings.distortion = to_distortion(params->distortion);
    settings.unambiguous_only = params->unambiguous_only != 0;
    auto* handle = new ssig_report;
    handle->report = ssig::evaluate_database(db->db, settings);
    *out = handle;
    return SSIG_OK;
  });
}

void ssig_report_free(ssig_report* report) { delete report; }

size_t ssig_report_cdf_size(const ssig_report* report) {
  return report == nullptr ? 0 : report->report.cdf.error_m.size();
}

ssig_status ssig_report_cdf_point(const ssig_report* report, size_t index,
                                  double* error_m, double* cum_prob) {
  ssig_status rc = require(report && error_m && cum_prob,
                           "arguments must not be null");
  if (rc != SSIG_OK) return rc;
  if (index >= report->report.cdf.error_m.size()) {
    set_last_error("cdf index out of range");
    return SSIG_ERROR_INVALID_ARGUMENT;
  }
  *error_m = report->report.cdf.error_m[index];
  *cum_prob = report->report.cdf.cum_prob[index];
  return SSIG_OK;
}

size_t ssig_report_recall_size(const ssig_report* report) {
  return report == nullptr ? 0 : report->report.recall.rank_percent.size();
}

ssig_status ssig_report_recall_point(const ssig_report* report, size_t index,
                                     double* rank_percent, double* fraction) {
  ssig_status rc = require(report && rank_percent && fraction,
                           "arguments must not be null");
  if (rc != SSIG_OK) return rc;
  if (index >= report->report.recall.rank_percent.size()) {
    set_last_error("recall index out of range");
    return SSIG_ERROR_INVALID_ARGUMENT;
  }
  *rank_percent = report->report.recall.rank_percent[index];
  *fraction = report->report.recall.fraction[index];
  return SSIG_OK;
}

ssig_status ssig_report_get_summary(const ssig_report* report,
                                    ssig_report_summary* out) {
  ssig_status rc = require(report && out, "arguments must not be null");
  if (rc != SSIG_OK) return rc;
  out->query_count = report->report.query_count;
  out->p_error_le_50m = report->report.p_error_le_50m;
  out->recall_at_10pct = report->report.recall_at_10pct;
  out->mean_query_ms = report->report.timing.mean_ms;
  out->median_query_ms = report->report.timing.median_ms;
  out->min_query_ms = report->report.timing.min_ms;
  out->max_query_ms = report->report.timing.max_ms;
  return SSIG_OK;
}

ssig_status ssig_sweep(const ssig_objects* objects, const ssig_bbox* bbox,
                       const ssig_build_params* base,
                       const ssig_eval_params* eval, ssig_sweep_key key,
                       const double* values, size_t value_count,
                       ssig_sweep_row* out_rows) {
  ssig_status rc = require(objects && bbox && base && eval && values && out_rows,
                           "arguments must not be null");
  if (rc != SSIG_OK) return rc;
  rc = require(value_count > 0, "sweep needs at least one value");
  if (rc != SSIG_OK) return rc;
  return guarded([&] {
    ssig::BuildParams bp{base->visibility_range_m, base->grid_step_m,
                         base->quantization_levels};
    ssig::GeoBBox box{bbox->lon_min, bbox->lat_min, bbox->lon_max,
                      bbox->lat_max};
    ssig::EvalSettings settings;
    settings.query_count = eval->query_count;
    settings.seed = eval->seed;
    settings.policy = to_policy(eval->policy);
    settings.protocol = to_protocol(eval->protocol, eval->first_part);
    settings.distortion = to_distortion(eval->distortion);
    settings.unambiguous_only = eval->unambiguous_only != 0;

    std::vector<ssig::SweepRow> rows;
    if (key == SSIG_SWEEP_RANGE) {
      std::vector<double> r_values(values, values + value_count);
      rows = ssig::sweep_visibility(objects->objects, box, bp, r_values,
                                    settings);
    } else if (key == SSIG_SWEEP_QLEVELS) {
      std::vector<std::uint32_t> q_values;
      q_values.reserve(value_count);
      for (size_t i = 0; i < value_count; ++i) {
        const double v = values[i];
        if (!(v >= 2.0) || v != static_cast<double>(static_cast<std::uint32_t>(v))) {
          ssig::throw_invalid("quantization sweep values must be integers >= 2");
        }
        q_values.push_back(static_cast<std::uint32_t>(v));
      }
      rows = ssig::sweep_quantization(objects->objects, box, bp, q_values,
                                      settings);
    } else {
      ssig::throw_invalid("unknown sweep key");
    }
    for (size_t i = 0; i < rows.size(); ++i) {
      out_rows[i] = {rows[i].param, rows[i].p_error_le_50m,
                     rows[i].recall_at_10pct};
    }
    return SSIG_OK;
  });
}

}  // extern "C"
