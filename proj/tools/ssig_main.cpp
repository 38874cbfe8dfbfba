// Command-line front end for the ssig shared library. Talks to the engine
// exclusively through the public C API.

#include <ssig/ssig.h>

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

namespace {

using json = nlohmann::ordered_json;

[[noreturn]] void fail(const std::string& message) {
  std::cerr << "ssig: " << message << "\n";
  std::exit(1);
}

void check(ssig_status status, const std::string& what) {
  if (status != SSIG_OK) {
    fail(what + ": " + ssig_status_name(status) + ": " + ssig_last_error());
  }
}

std::string fnv1a64_hex(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail("cannot open '" + path + "' for digest");
  std::uint64_t h = 1469598103934665603ull;
  char buf[65536];
  while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
    const std::streamsize got = in.gcount();
    for (std::streamsize i = 0; i < got; ++i) {
      h ^= static_cast<unsigned char>(buf[i]);
      h *= 1099511628211ull;
    }
    if (!in) break;
  }
  char hex[32];
  std::snprintf(hex, sizeof(hex), "fnv1a64:%016llx",
                static_cast<unsigned long long>(h));
  return hex;
}

std::string format_double(const char* spec, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), spec, v);
  return buf;
}

// Every run emits a manifest carrying the resolved parameters, seed, and
// input/output digests: enough to reproduce the run exactly. Commands whose
// data goes to stdout print the manifest on stderr instead of a file.
struct Manifest {
  std::string command;
  json parameters = json::object();
  json inputs = json::object();
  json outputs = json::object();

  void add_input(const std::string& path) { inputs[path] = fnv1a64_hex(path); }
  void add_output(const std::string& path) { outputs[path] = fnv1a64_hex(path); }

  json to_json() const {
    json doc;
    doc["tool"] = "ssig";
    doc["version"] = ssig_version();
    doc["command"] = command;
    doc["parameters"] = parameters;
    doc["inputs"] = inputs;
    doc["outputs"] = outputs;
    return doc;
  }
  void write_file(const std::string& path) const {
    std::ofstream out(path, std::ios::trunc);
    if (!out) fail("cannot write manifest '" + path + "'");
    out << to_json().dump(2) << "\n";
  }
  void write_stderr() const { std::cerr << to_json().dump(2) << "\n"; }
};

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() &&
         s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

ssig_objects* read_objects(const std::string& path) {
  ssig_objects* objects = nullptr;
  if (ends_with(path, ".geojson") || ends_with(path, ".json")) {
    check(ssig_objects_read_geojson(path.c_str(), &objects), "reading objects");
  } else {
    check(ssig_objects_read_csv(path.c_str(), &objects), "reading objects");
  }
  const size_t errors = ssig_objects_row_error_count(objects);
  for (size_t i = 0; i < errors; ++i) {
    std::cerr << "ssig: " << path << ": " << ssig_objects_row_error(objects, i)
              << "\n";
  }
  if (errors > 0) {
    std::cerr << "ssig: " << errors << " malformed row(s) skipped\n";
  }
  return objects;
}

ssig_bbox parse_bbox(const std::string& text) {
  ssig_bbox box{};
  if (std::sscanf(text.c_str(), "%lf,%lf,%lf,%lf", &box.lon_min, &box.lat_min,
                  &box.lon_max, &box.lat_max) != 4) {
    fail("bbox must be LONMIN,LATMIN,LONMAX,LATMAX");
  }
  return box;
}

ssig_metric parse_metric(const std::string& name) {
  if (name == "jaccard") return SSIG_METRIC_JACCARD;
  if (name == "histogram" || name == "hist") return SSIG_METRIC_HISTOGRAM;
  if (name == "edit") return SSIG_METRIC_EDIT;
  fail("unknown metric '" + name + "' (expected jaccard|histogram|edit)");
}

ssig_protocol parse_protocol(const std::string& name) {
  if (name == "full") return SSIG_PROTOCOL_FULL;
  if (name == "two-stage") return SSIG_PROTOCOL_TWO_STAGE;
  if (name == "single") return SSIG_PROTOCOL_SINGLE;
  fail("unknown protocol '" + name + "' (expected full|two-stage|single)");
}

ssig_part parse_part(const std::string& name) {
  if (name == "type") return SSIG_PART_TYPE;
  if (name == "angle") return SSIG_PART_ANGLE;
  fail("unknown signature part '" + name + "' (expected type|angle)");
}

ssig_distortion_level parse_distortion(const std::string& name) {
  if (name == "none") return SSIG_DISTORTION_NONE;
  if (name == "light") return SSIG_DISTORTION_LIGHT;
  if (name == "medium") return SSIG_DISTORTION_MEDIUM;
  if (name == "strong") return SSIG_DISTORTION_STRONG;
  if (name == "custom") return SSIG_DISTORTION_CUSTOM;
  fail("unknown distortion level '" + name + "'");
}

// Shared retrieval/evaluation flags.
struct PolicyFlags {
  std::string metric_type = "edit";
  std::string metric_angle = "edit";
  double alpha = 0.5;
  double k_percent = 5.0;
  std::uint32_t t = 100;
  std::string protocol = "full";
  std::string first_part = "type";

  void attach(CLI::App* cmd) {
    cmd->add_option("--metric-type", metric_type,
                    "Metric for the type part (jaccard|histogram|edit)");
    cmd->add_option("--metric-angle", metric_angle,
                    "Metric for the angle part (jaccard|histogram|edit)");
    cmd->add_option("--alpha", alpha,
                    "Weight of the type part; the angle part gets 1-alpha");
    cmd->add_option("--k", k_percent,
                    "Two-stage candidate percentage in (0,100]");
    cmd->add_option("--t", t, "Number of candidates to return");
    cmd->add_option("--protocol", protocol,
                    "Ranking protocol (full|two-stage|single)");
    cmd->add_option("--first-part", first_part,
                    "Stage-1 part for two-stage, or the part for single");
  }

  ssig_policy to_policy() const {
    ssig_policy policy;
    ssig_policy_init(&policy);
    policy.metric_type = parse_metric(metric_type);
    policy.metric_angle = parse_metric(metric_angle);
    policy.alpha = alpha;
    policy.k_percent = k_percent;
    policy.t = t;
    return policy;
  }

  void to_manifest(json& parameters) const {
    parameters["metric_type"] = metric_type;
    parameters["metric_angle"] = metric_angle;
    parameters["alpha"] = alpha;
    parameters["k_percent"] = k_percent;
    parameters["t"] = t;
    parameters["protocol"] = protocol;
    parameters["first_part"] = first_part;
  }
};

struct DistortionFlags {
  std::string level = "none";
  std::uint32_t op_count = 0;
  double angle_sigma = 5.0;
  double angle_clip = 30.0;

  void attach(CLI::App* cmd) {
    cmd->add_option("--distortion", level,
                    "Distortion level (none|light|medium|strong|custom)");
    cmd->add_option("--op-count", op_count,
                    "Type operations for --distortion custom");
    cmd->add_option("--angle-sigma", angle_sigma,
                    "Angle noise standard deviation, degrees");
    cmd->add_option("--angle-clip", angle_clip,
                    "Angle noise clip bound, degrees");
  }

  ssig_distortion to_distortion() const {
    ssig_distortion d;
    ssig_distortion_init(&d);
    d.level = parse_distortion(level);
    d.op_count = op_count;
    d.angle_sigma_deg = angle_sigma;
    d.angle_clip_deg = angle_clip;
    return d;
  }

  void to_manifest(json& parameters) const {
    parameters["distortion"] = level;
    parameters["op_count"] = op_count;
    parameters["angle_sigma"] = angle_sigma;
    parameters["angle_clip"] = angle_clip;
  }
};

int cmd_build(const std::string& objects_path, const std::string& bbox_text,
              double range, double step, std::uint32_t qlevels,
              const std::string& out_path) {
  ssig_objects* objects = read_objects(objects_path);
  ssig_build_params params;
  ssig_build_params_init(&params);
  params.visibility_range_m = range;
  params.grid_step_m = step;
  params.quantization_levels = qlevels;
  const ssig_bbox bbox = parse_bbox(bbox_text);

  ssig_database* db = nullptr;
  check(ssig_database_build(objects, &params, &bbox, &db), "building database");
  check(ssig_database_save(db, out_path.c_str()), "saving database");

  ssig_database_info info;
  check(ssig_database_get_info(db, &info), "database info");
  std::ifstream sized(out_path, std::ios::binary | std::ios::ate);
  const auto file_size = static_cast<long long>(sized.tellg());

  std::cout << "records," << info.record_count << "\n"
            << "mean_signature_length,"
            << format_double("%.6f", info.mean_signature_length) << "\n"
            << "covered_area_km2,"
            << format_double("%.6f", info.covered_area_km2) << "\n"
            << "file_size_bytes," << file_size << "\n";

  Manifest manifest;
  manifest.command = "build";
  manifest.parameters["objects"] = objects_path;
  manifest.parameters["bbox"] = bbox_text;
  manifest.parameters["range"] = range;
  manifest.parameters["step"] = step;
  manifest.parameters["qlevels"] = qlevels;
  manifest.parameters["out"] = out_path;
  manifest.add_input(objects_path);
  manifest.add_output(out_path);
  manifest.write_file(out_path + ".manifest.json");

  ssig_database_free(db);
  ssig_objects_free(objects);
  return 0;
}

int cmd_query(const std::string& db_path, const std::string& signature,
              const PolicyFlags& flags) {
  ssig_database* db = nullptr;
  check(ssig_database_load(db_path.c_str(), &db), "loading database");
  const ssig_policy policy = flags.to_policy();
  std::vector<ssig_candidate> candidates(policy.t);
  size_t count = 0;
  check(ssig_query(db, signature.c_str(), &policy,
                   parse_protocol(flags.protocol), parse_part(flags.first_part),
                   candidates.data(), candidates.size(), &count),
        "query");
  std::cout << "rank,cell_id,lon,lat,score\n";
  char buf[128];
  for (size_t i = 0; i < count; ++i) {
    std::snprintf(buf, sizeof(buf), "%u,%llu,%.7f,%.7f,%.9f",
                  candidates[i].rank,
                  static_cast<unsigned long long>(candidates[i].cell_id),
                  candidates[i].lon, candidates[i].lat, candidates[i].score);
    std::cout << buf << "\n";
  }

  Manifest manifest;
  manifest.command = "query";
  manifest.parameters["db"] = db_path;
  manifest.parameters["signature"] = signature;
  flags.to_manifest(manifest.parameters);
  manifest.add_input(db_path);
  manifest.write_stderr();

  ssig_database_free(db);
  return 0;
}

int cmd_eval(const std::string& db_path, std::uint64_t queries,
             std::uint64_t seed, const PolicyFlags& policy_flags,
             const DistortionFlags& distortion_flags, bool unambiguous_only,
             const std::string& out_prefix) {
  ssig_database* db = nullptr;
  check(ssig_database_load(db_path.c_str(), &db), "loading database");

  ssig_eval_params params;
  ssig_eval_params_init(&params);
  params.query_count = queries;
  params.seed = seed;
  params.policy = policy_flags.to_policy();
  params.protocol = parse_protocol(policy_flags.protocol);
  params.first_part = parse_part(policy_flags.first_part);
  params.distortion = distortion_flags.to_distortion();
  params.unambiguous_only = unambiguous_only ? 1 : 0;

  ssig_report* report = nullptr;
  check(ssig_eval(db, &params, &report), "evaluation");

  const std::string cdf_path = out_prefix + ".cdf.csv";
  const std::string recall_path = out_prefix + ".recall.csv";
  const std::string summary_path = out_prefix + ".summary.csv";

  {
    std::ofstream out(cdf_path, std::ios::trunc);
    if (!out) fail("cannot write '" + cdf_path + "'");
    out << "error_m,cum_prob\n";
    for (size_t i = 0; i < ssig_report_cdf_size(report); ++i) {
      double error_m = 0.0;
      double prob = 0.0;
      check(ssig_report_cdf_point(report, i, &error_m, &prob), "cdf point");
      out << format_double("%g", error_m) << ','
          << format_double("%.6f", prob) << "\n";
    }
  }
  {
    std::ofstream out(recall_path, std::ios::trunc);
    if (!out) fail("cannot write '" + recall_path + "'");
    out << "rank_pct,recall\n";
    for (size_t i = 0; i < ssig_report_recall_size(report); ++i) {
      double rank_pct = 0.0;
      double recall = 0.0;
      check(ssig_report_recall_point(report, i, &rank_pct, &recall),
            "recall point");
      out << format_double("%g", rank_pct) << ','
          << format_double("%.6f", recall) << "\n";
    }
  }
  ssig_report_summary summary;
  check(ssig_report_get_summary(report, &summary), "summary");
  {
    std::ofstream out(summary_path, std::ios::trunc);
    if (!out) fail("cannot write '" + summary_path + "'");
    out << "metric,value\n";
    out << "queries," << summary.query_count << "\n";
    out << "p_error_le_50m," << format_double("%.6f", summary.p_error_le_50m)
        << "\n";
    out << "recall_at_10pct," << format_double("%.6f", summary.recall_at_10pct)
        << "\n";
  }
  // Wall-clock numbers are diagnostics only; persisted outputs stay
  // byte-identical across reruns with the same seed.
  std::cerr << "timing: mean=" << format_double("%.3f", summary.mean_query_ms)
            << " ms median=" << format_double("%.3f", summary.median_query_ms)
            << " min=" << format_double("%.3f", summary.min_query_ms)
            << " max=" << format_double("%.3f", summary.max_query_ms) << "\n";

  Manifest manifest;
  manifest.command = "eval";
  manifest.parameters["db"] = db_path;
  manifest.parameters["queries"] = queries;
  manifest.parameters["seed"] = seed;
  policy_flags.to_manifest(manifest.parameters);
  distortion_flags.to_manifest(manifest.parameters);
  manifest.parameters["unambiguous_only"] = unambiguous_only;
  manifest.parameters["out_prefix"] = out_prefix;
  manifest.add_input(db_path);
  manifest.add_output(cdf_path);
  manifest.add_output(recall_path);
  manifest.add_output(summary_path);
  manifest.write_file(out_prefix + ".manifest.json");

  ssig_report_free(report);
  ssig_database_free(db);
  return 0;
}

int cmd_sweep(const std::string& objects_path, const std::string& bbox_text,
              double range, double step, std::uint32_t qlevels,
              const std::string& sweep_spec, std::uint64_t queries,
              std::uint64_t seed, const PolicyFlags& policy_flags,
              const DistortionFlags& distortion_flags,
              const std::string& out_prefix) {
  const std::size_t colon = sweep_spec.find(':');
  if (colon == std::string::npos) fail("--sweep expects KEY:V1,V2,...");
  const std::string key_name = sweep_spec.substr(0, colon);
  ssig_sweep_key key;
  if (key_name == "range") {
    key = SSIG_SWEEP_RANGE;
  } else if (key_name == "qlevels") {
    key = SSIG_SWEEP_QLEVELS;
  } else {
    fail("unknown sweep key '" + key_name + "' (expected range|qlevels)");
  }
  std::vector<double> values;
  std::string rest = sweep_spec.substr(colon + 1);
  std::size_t start = 0;
  while (start <= rest.size()) {
    std::size_t comma = rest.find(',', start);
    if (comma == std::string::npos) comma = rest.size();
    const std::string field = rest.substr(start, comma - start);
    if (field.empty()) fail("--sweep has an empty value");
    try {
      values.push_back(std::stod(field));
    } catch (const std::exception&) {
      fail("--sweep value '" + field + "' is not a number");
    }
    start = comma + 1;
    if (start == rest.size() + 1) break;
  }
  if (values.empty()) fail("--sweep needs at least one value");

  ssig_objects* objects = read_objects(objects_path);
  ssig_build_params base;
  ssig_build_params_init(&base);
  base.visibility_range_m = range;
  base.grid_step_m = step;
  base.quantization_levels = qlevels;
  const ssig_bbox bbox = parse_bbox(bbox_text);

  ssig_eval_params params;
  ssig_eval_params_init(&params);
  params.query_count = queries;
  params.seed = seed;
  params.policy = policy_flags.to_policy();
  params.protocol = parse_protocol(policy_flags.protocol);
  params.first_part = parse_part(policy_flags.first_part);
  params.distortion = distortion_flags.to_distortion();

  std::vector<ssig_sweep_row> rows(values.size());
  check(ssig_sweep(objects, &bbox, &base, &params, key, values.data(),
                   values.size(), rows.data()),
        "sweep");

  std::string table = "param,p_error_le_50m,recall_at_10pct\n";
  for (const auto& row : rows) {
    table += format_double("%g", row.param);
    table += ',';
    table += format_double("%.6f", row.p_error_le_50m);
    table += ',';
    table += format_double("%.6f", row.recall_at_10pct);
    table += '\n';
  }
  std::cout << table;
  const std::string table_path = out_prefix + ".sweep.csv";
  {
    std::ofstream out(table_path, std::ios::trunc);
    if (!out) fail("cannot write '" + table_path + "'");
    out << table;
  }

  Manifest manifest;
  manifest.command = "sweep";
  manifest.parameters["objects"] = objects_path;
  manifest.parameters["bbox"] = bbox_text;
  manifest.parameters["range"] = range;
  manifest.parameters["step"] = step;
  manifest.parameters["qlevels"] = qlevels;
  manifest.parameters["sweep"] = sweep_spec;
  manifest.parameters["queries"] = queries;
  manifest.parameters["seed"] = seed;
  policy_flags.to_manifest(manifest.parameters);
  distortion_flags.to_manifest(manifest.parameters);
  manifest.parameters["out_prefix"] = out_prefix;
  manifest.add_input(objects_path);
  manifest.add_output(table_path);
  manifest.write_file(out_prefix + ".manifest.json");

  ssig_objects_free(objects);
  return 0;
}

int cmd_synth(const std::string& area, const std::string& profile,
              double scale, const std::string& anchor, std::uint64_t seed,
              const std::string& out_path) {
  ssig_synth_params params;
  ssig_synth_params_init(&params);
  if (std::sscanf(area.c_str(), "%lfx%lf", &params.width_m, &params.height_m) !=
      2) {
    fail("--area must be WIDTHxHEIGHT in meters, e.g. 1000x1000");
  }
  if (profile == "paris") {
    params.profile = SSIG_SYNTH_PARIS;
    params.scale = scale;
  } else if (profile.rfind("uniform:", 0) == 0) {
    params.profile = SSIG_SYNTH_UNIFORM;
    try {
      params.uniform_per_class_per_km2 = std::stod(profile.substr(8));
    } catch (const std::exception&) {
      fail("uniform profile expects uniform:N with N per km2 per class");
    }
  } else {
    fail("unknown intensity profile '" + profile +
         "' (expected paris or uniform:N)");
  }
  if (!anchor.empty() &&
      std::sscanf(anchor.c_str(), "%lf,%lf", &params.anchor_lon,
                  &params.anchor_lat) != 2) {
    fail("--anchor must be LON,LAT");
  }
  params.seed = seed;

  ssig_objects* objects = nullptr;
  check(ssig_objects_synthesize(&params, &objects), "synthesizing city");
  check(ssig_objects_write_csv(objects, out_path.c_str()), "writing objects");
  std::cout << "objects," << ssig_objects_count(objects) << "\n";

  Manifest manifest;
  manifest.command = "synth";
  manifest.parameters["area"] = area;
  manifest.parameters["intensity_profile"] = profile;
  manifest.parameters["scale"] = scale;
  manifest.parameters["anchor"] =
      anchor.empty() ? "2.35,48.85" : anchor;
  manifest.parameters["seed"] = seed;
  manifest.parameters["out"] = out_path;
  manifest.add_output(out_path);
  manifest.write_file(out_path + ".manifest.json");

  ssig_objects_free(objects);
  return 0;
}

int cmd_inspect(const std::string& db_path, std::int64_t cell) {
  ssig_database* db = nullptr;
  check(ssig_database_load(db_path.c_str(), &db), "loading database");
  char* text = nullptr;
  if (cell < 0) {
    check(ssig_database_describe(db, &text), "describing database");
  } else {
    check(ssig_database_record_text(db, static_cast<std::uint64_t>(cell), &text),
          "reading record");
  }
  std::cout << text << "\n";
  ssig_string_free(text);

  Manifest manifest;
  manifest.command = "inspect";
  manifest.parameters["db"] = db_path;
  manifest.parameters["cell"] = cell;
  manifest.add_input(db_path);
  manifest.write_stderr();

  ssig_database_free(db);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "ssig - semantic-signature localization engine\n"
      "Set SSIG_THREADS to override the worker count."};
  app.require_subcommand(1);

  // build
  auto* build = app.add_subcommand("build", "Build a signature database");
  std::string objects_path, bbox_text, out_path;
  double range = 30.0, step = 10.0;
  std::uint32_t qlevels = 16;
  build->add_option("--objects", objects_path, "Object CSV or GeoJSON file")
      ->required();
  build->add_option("--bbox", bbox_text, "LONMIN,LATMIN,LONMAX,LATMAX")
      ->required();
  build->add_option("--range", range, "Visibility range R in meters");
  build->add_option("--step", step, "Grid step s in meters");
  build->add_option("--qlevels", qlevels, "Angle quantization levels Q");
  build->add_option("--out", out_path, "Output database path")->required();

  // query
  auto* query = app.add_subcommand("query", "Rank a database for a signature");
  std::string query_db, query_signature;
  PolicyFlags query_policy;
  query->add_option("--db", query_db, "Database file")->required();
  query->add_option("--signature", query_signature,
                    "Signature text, e.g. \"BD|0;4\"")
      ->required();
  query_policy.attach(query);

  // eval
  auto* eval = app.add_subcommand("eval", "Run the benchmark protocol");
  std::string eval_db, eval_prefix;
  std::uint64_t eval_queries = 1000, eval_seed = 0;
  bool unambiguous_only = false;
  PolicyFlags eval_policy;
  DistortionFlags eval_distortion;
  eval->add_option("--db", eval_db, "Database file")->required();
  eval->add_option("--queries", eval_queries, "Number of sampled queries");
  eval->add_option("--seed", eval_seed, "Master seed");
  eval->add_flag("--unambiguous-only", unambiguous_only,
                 "Keep only queries whose signature is unique");
  eval->add_option("--out-prefix", eval_prefix, "Prefix for result files")
      ->required();
  eval_policy.attach(eval);
  eval_distortion.attach(eval);

  // sweep
  auto* sweep = app.add_subcommand("sweep", "Parameter sweep over rebuilt DBs");
  std::string sweep_objects, sweep_bbox, sweep_spec, sweep_prefix;
  double sweep_range = 30.0, sweep_step = 10.0;
  std::uint32_t sweep_qlevels = 16;
  std::uint64_t sweep_queries = 1000, sweep_seed = 0;
  PolicyFlags sweep_policy;
  DistortionFlags sweep_distortion;
  sweep->add_option("--objects", sweep_objects, "Object CSV or GeoJSON file")
      ->required();
  sweep->add_option("--bbox", sweep_bbox, "LONMIN,LATMIN,LONMAX,LATMAX")
      ->required();
  sweep->add_option("--range", sweep_range, "Base visibility range");
  sweep->add_option("--step", sweep_step, "Base grid step");
  sweep->add_option("--qlevels", sweep_qlevels, "Base quantization levels");
  sweep->add_option("--sweep", sweep_spec,
                    "range:20,30,40 or qlevels:8,16,24,32")
      ->required();
  sweep->add_option("--queries", sweep_queries, "Queries per configuration");
  sweep->add_option("--seed", sweep_seed, "Master seed (shared across rows)");
  sweep->add_option("--out-prefix", sweep_prefix, "Prefix for result files")
      ->required();
  sweep_policy.attach(sweep);
  sweep_distortion.attach(sweep);

  // synth
  auto* synth = app.add_subcommand("synth", "Generate a synthetic object set");
  std::string synth_area, synth_profile = "paris", synth_anchor, synth_out;
  double synth_scale = 1.0;
  std::uint64_t synth_seed = 0;
  synth->add_option("--area", synth_area, "WIDTHxHEIGHT in meters")->required();
  synth->add_option("--intensity-profile", synth_profile,
                    "paris or uniform:N (N objects/km2 per class)");
  synth->add_option("--scale", synth_scale,
                    "Scale factor for the paris profile");
  synth->add_option("--anchor", synth_anchor, "Center LON,LAT");
  synth->add_option("--seed", synth_seed, "Generation seed");
  synth->add_option("--out", synth_out, "Output CSV path")->required();

  // inspect
  auto* inspect = app.add_subcommand("inspect", "Show a database header or cell");
  std::string inspect_db;
  std::int64_t inspect_cell = -1;
  inspect->add_option("--db", inspect_db, "Database file")->required();
  inspect->add_option("--cell", inspect_cell, "Cell id to print");

  CLI11_PARSE(app, argc, argv);

  try {
    if (build->parsed()) {
      return cmd_build(objects_path, bbox_text, range, step, qlevels, out_path);
    }
    if (query->parsed()) {
      return cmd_query(query_db, query_signature, query_policy);
    }
    if (eval->parsed()) {
      return cmd_eval(eval_db, eval_queries, eval_seed, eval_policy,
                      eval_distortion, unambiguous_only, eval_prefix);
    }
    if (sweep->parsed()) {
      return cmd_sweep(sweep_objects, sweep_bbox, sweep_range, sweep_step,
                       sweep_qlevels, sweep_spec, sweep_queries, sweep_seed,
                       sweep_policy, sweep_distortion, sweep_prefix);
    }
    if (synth->parsed()) {
      return cmd_synth(synth_area, synth_profile, synth_scale, synth_anchor,
                       synth_seed, synth_out);
    }
    if (inspect->parsed()) {
      return cmd_inspect(inspect_db, inspect_cell);
    }
  } catch (const std::exception& e) {
    fail(e.what());
  }
  return 0;
}
