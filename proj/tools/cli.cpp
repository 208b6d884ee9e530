#include "cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include <CLI11.hpp>
#include <spdlog/sinks/ostream_sink.h>
#include <spdlog/spdlog.h>

#include "manifest.hpp"
#include "wcr/cachesim.hpp"
#include "wcr/classification.hpp"
#include "wcr/csv.hpp"
#include "wcr/error.hpp"
#include "wcr/ingest.hpp"
#include "wcr/profile_model.hpp"
#include "wcr/reduction.hpp"
#include "wcr/report.hpp"

namespace fs = std::filesystem;

namespace wcr::cli {

// ---------------------------------------------------------------------------
// RunConfig

nlohmann::json to_json(const RunConfig& c) {
  nlohmann::json j;
  j["schema_path"] = c.schema_path ? nlohmann::json(*c.schema_path) : nlohmann::json();
  j["warmup_s"] = c.warmup_s;
  j["variance_target"] = c.variance_target;
  j["k"] = c.k ? nlohmann::json(*c.k) : nlohmann::json("auto");
  j["k_range"] = {c.k_min, c.k_max};
  j["seed"] = c.seed;
  j["restarts"] = c.restarts;
  j["sizes"] = c.sizes.empty() ? default_capacity_grid() : c.sizes;
  j["knee_ratio"] = c.knee_ratio;
  j["associativity"] = c.associativity ? nlohmann::json(*c.associativity) : nlohmann::json("full");
  j["line_bytes"] = c.line_bytes;
  j["write_allocate"] = c.write_allocate;
  j["skip"] = c.skip;
  return j;
}

namespace {

std::optional<int> parse_k(const std::string& s) {
  if (s == "auto") return std::nullopt;
  try {
    std::size_t pos = 0;
    const int k = std::stoi(s, &pos);
    if (pos != s.size() || k <= 0) throw std::invalid_argument(s);
    return k;
  } catch (const std::exception&) {
    throw UsageError("--k expects a positive integer or 'auto', got '" + s + "'");
  }
}

std::optional<std::uint32_t> parse_ways(const std::string& s) {
  if (s == "full" || s == "fully-associative") return std::nullopt;
  try {
    std::size_t pos = 0;
    const unsigned long w = std::stoul(s, &pos);
    if (pos != s.size() || w == 0) throw std::invalid_argument(s);
    return static_cast<std::uint32_t>(w);
  } catch (const std::exception&) {
    throw UsageError("associativity must be a positive integer or 'full', got '" + s + "'");
  }
}

std::vector<std::uint64_t> parse_sizes(const std::string& s) {
  std::vector<std::uint64_t> out;
  for (const auto& tok : csv::split(s)) out.push_back(parse_size(tok));
  return out;
}

void check_ranges(const RunConfig& c) {
  if (!(c.warmup_s >= 0.0)) throw UsageError("warmup must be >= 0");
  if (!(c.variance_target > 0.0 && c.variance_target <= 1.0)) throw UsageError("variance target must be in (0, 1]");
  if (c.k_min < 1 || c.k_min > c.k_max) throw UsageError("k range must satisfy 1 <= k_min <= k_max");
  if (c.restarts < 1) throw UsageError("restarts must be >= 1");
  if (!(c.knee_ratio > 0.0 && c.knee_ratio <= 1.0)) throw UsageError("knee ratio must be in (0, 1]");
  if (c.schema_path && !fs::exists(*c.schema_path)) throw IoError("schema file '" + *c.schema_path + "' does not exist");
}

}  // namespace

RunConfig run_config_from_json(const nlohmann::json& j) {
  RunConfig c;
  try {
    if (j.contains("schema_path") && !j["schema_path"].is_null()) c.schema_path = j["schema_path"].get<std::string>();
    c.warmup_s = j.value("warmup_s", c.warmup_s);
    c.variance_target = j.value("variance_target", c.variance_target);
    if (j.contains("k")) {
      c.k = j["k"].is_string() ? parse_k(j["k"].get<std::string>()) : std::optional<int>(j["k"].get<int>());
    }
    if (j.contains("k_range")) {
      const auto r = j["k_range"].get<std::vector<int>>();
      if (r.size() != 2) throw UsageError("k_range needs two values");
      c.k_min = r[0];
      c.k_max = r[1];
    }
    c.seed = j.value("seed", c.seed);
    c.restarts = j.value("restarts", c.restarts);
    if (j.contains("sizes")) {
      for (const auto& s : j["sizes"]) c.sizes.push_back(s.is_string() ? parse_size(s.get<std::string>()) : s.get<std::uint64_t>());
    }
    c.knee_ratio = j.value("knee_ratio", c.knee_ratio);
    if (j.contains("associativity")) {
      const auto& a = j["associativity"];
      c.associativity = a.is_string() ? parse_ways(a.get<std::string>()) : std::optional<std::uint32_t>(a.get<std::uint32_t>());
    }
    c.line_bytes = j.value("line_bytes", c.line_bytes);
    c.write_allocate = j.value("write_allocate", c.write_allocate);
    c.skip = j.value("skip", c.skip);
  } catch (const nlohmann::json::exception& e) {
    throw UsageError(std::string("config: ") + e.what());
  }
  return c;
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw UsageError("config '" + path + "': " + e.what());
  }
  return run_config_from_json(j);
}

// ---------------------------------------------------------------------------
// Helpers

namespace {

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

nlohmann::json read_json(const std::string& path) {
  const std::string text = read_text(path);
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("'" + path + "': " + e.what());
  }
}

MetricSchema resolve_schema(const RunConfig& c, const nlohmann::json* embedded, Manifest& manifest) {
  if (c.schema_path) {
    manifest.add_input(*c.schema_path);
    return load_schema(*c.schema_path);
  }
  if (embedded && embedded->contains("schema")) return schema_from_json(embedded->at("schema"));
  return default_schema();
}

struct LoadedWorkload {
  RawProfile profile;
  std::optional<MetricVector> metrics;
};

std::vector<LoadedWorkload> load_workloads(const nlohmann::json& doc, const MetricSchema& schema) {
  std::vector<LoadedWorkload> out;
  try {
    for (const auto& w : doc.at("workloads")) {
      LoadedWorkload lw;
      if (w.contains("profile")) lw.profile = w.at("profile").get<RawProfile>();
      if (w.contains("metrics") && w["metrics"].value("schema_version", schema.version()) == schema.version()) {
        lw.metrics = vector_from_json(w.at("metrics"), schema);
        if (lw.profile.workload_id.empty()) lw.profile.workload_id = lw.metrics->workload_id();
      } else if (w.contains("profile")) {
        lw.metrics = derive_microarch_metrics(lw.profile, schema);
      } else {
        throw ValidationError("workload entry has neither 'metrics' nor 'profile'");
      }
      out.push_back(std::move(lw));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("profiles file: ") + e.what());
  }
  return out;
}

std::string trace_stem(const std::string& path) { return fs::path(path).stem().string(); }

}  // namespace

// ---------------------------------------------------------------------------
// Subcommands

namespace {

struct Context {
  RunConfig config;
  fs::path out_dir;
  std::ostream& out;
  std::shared_ptr<spdlog::logger> log;
};

std::string finish(Context& ctx, Manifest& manifest) {
  manifest.set_config(to_json(ctx.config));
  const std::string digest = manifest.write(ctx.out_dir);
  ctx.log->info("manifest sha256 {}", digest);
  return digest;
}

void cmd_ingest(Context& ctx, const std::string& counters_path, const std::optional<std::string>& telemetry_path) {
  Manifest manifest("ingest");
  manifest.add_input(counters_path);
  const MetricSchema schema = resolve_schema(ctx.config, nullptr, manifest);

  std::istringstream counters(read_text(counters_path));
  const auto profiles = parse_counter_csv(counters);
  ctx.log->info("parsed {} profiles from {}", profiles.size(), counters_path);

  std::map<std::string, SystemTelemetry> telemetry;
  if (telemetry_path) {
    manifest.add_input(*telemetry_path);
    std::istringstream t(read_text(*telemetry_path));
    for (auto& series : parse_telemetry_csv(t)) telemetry.emplace(series.workload_id, std::move(series));
  }

  nlohmann::json workloads = nlohmann::json::array();
  for (const auto& p : profiles) {
    nlohmann::json w = {{"profile", p}, {"metrics", vector_to_json(derive_microarch_metrics(p, schema))}};
    if (const auto it = telemetry.find(p.workload_id); it != telemetry.end()) {
      const SystemTelemetry steady = trim_ramp_up(it->second, ctx.config.warmup_s);
      const double window = steady.samples.back().t_s - steady.samples.front().t_s;
      const double runtime = window > 0.0 ? window : p.wall_time_s;
      w["system"] = aggregate_telemetry(steady, runtime);
    } else if (telemetry_path) {
      ctx.log->warn("no telemetry for workload '{}'", p.workload_id);
    }
    workloads.push_back(std::move(w));
  }

  const nlohmann::json doc = {{"schema", schema_to_json(schema)}, {"workloads", workloads}};
  write_file(ctx.out_dir / "profiles.json", doc.dump(2) + "\n");
  manifest.add_output("profiles.json");
  finish(ctx, manifest);
  ctx.out << "ingested " << profiles.size() << " workloads -> " << (ctx.out_dir / "profiles.json").string() << '\n';
}

void cmd_reduce(Context& ctx, const std::string& profiles_path) {
  Manifest manifest("reduce");
  manifest.add_input(profiles_path);
  const nlohmann::json doc = read_json(profiles_path);
  const MetricSchema schema = resolve_schema(ctx.config, &doc, manifest);

  std::vector<MetricVector> vectors;
  for (auto& w : load_workloads(doc, schema)) vectors.push_back(std::move(*w.metrics));

  ReductionConfig rc;
  rc.variance_target = ctx.config.variance_target;
  rc.fixed_k = ctx.config.k;
  rc.k_min = ctx.config.k_min;
  rc.k_max = ctx.config.k_max;
  rc.seed = ctx.config.seed;
  rc.restarts = ctx.config.restarts;
  const ReductionResult r = reduce_vectors(std::move(vectors), schema, rc);

  write_file(ctx.out_dir / "reduction.json", reduction_to_json(r).dump(2) + "\n");
  write_file(ctx.out_dir / "normalized.csv", normalized_to_csv(r.normalized));
  manifest.add_output("reduction.json");
  manifest.add_output("normalized.csv");
  finish(ctx, manifest);

  ctx.out << "k = " << r.clustering.k << ", " << r.pca.retained << " principal components\n";
  for (std::size_t c = 0; c < r.representatives.size(); ++c) {
    ctx.out << r.representatives[c] << " (" << r.cluster_sizes[c] << ")\n";
  }
}

void cmd_classify(Context& ctx, const std::string& behavior_path) {
  Manifest manifest("classify");
  manifest.add_input(behavior_path);
  std::istringstream in(read_text(behavior_path));
  const auto labels = classify_rows(parse_behavior_csv(in));
  const std::string text = labels_to_csv(labels);
  write_file(ctx.out_dir / "labels.csv", text);
  manifest.add_output("labels.csv");
  finish(ctx, manifest);
  ctx.out << text;
}

void cmd_simulate(Context& ctx, const std::string& trace_path, const std::string& kind_name,
                  const std::optional<std::string>& workload) {
  Manifest manifest("simulate");
  manifest.add_input(trace_path);
  if (fs::exists(trace_path + ".json")) manifest.add_input(trace_path + ".json");

  AccessTrace trace = read_trace(trace_path);
  if (ctx.config.skip > 0) trace = skip_accesses(std::move(trace), ctx.config.skip);
  trace = normalize_weights(std::move(trace));

  CacheConfig tmpl;
  tmpl.line_bytes = ctx.config.line_bytes;
  tmpl.associativity = ctx.config.associativity;
  tmpl.write_allocate = ctx.config.write_allocate;
  const CurveKind kind = parse_curve_kind(kind_name);
  const auto sizes = ctx.config.sizes.empty() ? default_capacity_grid() : ctx.config.sizes;
  const MissRatioCurve curve = sweep_capacities(trace, sizes, tmpl, filter_for(kind));

  const std::string name = (workload ? *workload : trace_stem(trace_path)) + "_" + to_string(kind) + ".csv";
  const std::string text = curve_to_csv(curve);
  write_file(ctx.out_dir / name, text);
  manifest.add_output(name);
  finish(ctx, manifest);
  ctx.out << text;
}

void cmd_footprint(Context& ctx, const std::string& curve_path) {
  Manifest manifest("footprint");
  manifest.add_input(curve_path);
  CurveKind kind = CurveKind::Unified;
  const std::string stem = trace_stem(curve_path);
  if (const auto us = stem.rfind('_'); us != std::string::npos) {
    try {
      kind = parse_curve_kind(stem.substr(us + 1));
    } catch (const ValidationError&) {
    }
  }
  const MissRatioCurve curve = parse_curve_csv(read_text(curve_path), kind);
  const auto fp = estimate_footprint(curve, ctx.config.knee_ratio);

  const nlohmann::json j = {{"curve", fs::path(curve_path).filename().string()},
                            {"kind", to_string(kind)},
                            {"knee_ratio", ctx.config.knee_ratio},
                            {"footprint_bytes", fp ? nlohmann::json(*fp) : nlohmann::json()},
                            {"reached", fp.has_value()}};
  write_file(ctx.out_dir / "footprint.json", j.dump(2) + "\n");
  manifest.add_output("footprint.json");
  finish(ctx, manifest);
  if (fp) {
    ctx.out << "footprint: " << *fp << " bytes (" << (*fp >> 10) << " KB)\n";
  } else {
    ctx.out << "footprint: not reached below knee " << ctx.config.knee_ratio << '\n';
  }
}

struct ReportInputs {
  std::optional<std::string> profiles;
  std::optional<std::string> labels;
  std::optional<std::string> meta;
  std::vector<std::string> curve_dirs;
  std::vector<std::string> metrics;
};

void cmd_report(Context& ctx, const ReportInputs& in) {
  Manifest manifest("report");
  ReportBundle bundle;
  std::vector<WorkloadRecord> records;
  std::vector<std::string> metric_names = in.metrics;

  if (in.profiles) {
    manifest.add_input(*in.profiles);
    const nlohmann::json doc = read_json(*in.profiles);
    const MetricSchema schema = resolve_schema(ctx.config, &doc, manifest);
    if (metric_names.empty()) metric_names = schema.names();

    for (const auto& w : load_workloads(doc, schema)) {
      WorkloadRecord r;
      r.workload_id = w.profile.workload_id;
      r.stack = w.profile.stack;
      for (std::size_t i = 0; i < schema.size(); ++i) r.metrics[schema.metrics()[i].name] = (*w.metrics)[i];
      records.push_back(std::move(r));

      // Integer-breakdown counters are optional extras in a profile.
      const auto& c = w.profile.counters;
      const auto& m = records.back().metrics;
      if (c.count("int_addr_calc") && c.count("fp_addr_calc") && c.count("other_calc") && m.count("branch_ratio") &&
          m.count("integer_ratio") && m.count("fp_ratio") && m.count("load_ratio") && m.count("store_ratio")) {
        const auto ib = integer_breakdown({static_cast<std::uint64_t>(c.at("int_addr_calc")),
                                           static_cast<std::uint64_t>(c.at("fp_addr_calc")),
                                           static_cast<std::uint64_t>(c.at("other_calc"))});
        const InstructionMix mix{m.at("branch_ratio"), m.at("integer_ratio"), m.at("fp_ratio"), m.at("load_ratio"),
                                 m.at("store_ratio")};
        bundle.data_movement.push_back({records.back().workload_id, data_movement_share(mix, ib)});
      }
    }
  }

  std::map<std::string, WorkloadRecord*> by_id;
  for (auto& r : records) by_id[r.workload_id] = &r;

  if (in.meta) {
    manifest.add_input(*in.meta);
    std::istringstream meta(read_text(*in.meta));
    std::size_t line_no = 0;
    csv::expect_header(meta, line_no, {"workload", "suite", "algorithm", "stack"});
    std::string line;
    while (csv::next_line(meta, line, line_no)) {
      const auto f = csv::split(line);
      if (f.size() != 4) throw ValidationError(*in.meta + ": line " + std::to_string(line_no) + ": expected 4 fields");
      const auto it = by_id.find(f[0]);
      if (it == by_id.end()) {
        ctx.log->warn("metadata for unknown workload '{}' ignored", f[0]);
        continue;
      }
      it->second->suite = f[1];
      it->second->algorithm = f[2];
      if (!f[3].empty()) it->second->stack = f[3];
    }
  }

  if (in.labels) {
    manifest.add_input(*in.labels);
    std::istringstream lab(read_text(*in.labels));
    for (const auto& l : parse_labels_csv(lab)) {
      if (const auto it = by_id.find(l.workload); it != by_id.end()) it->second->labels = l.labels;
    }
  }

  if (!records.empty()) {
    const bool all_labeled = std::all_of(records.begin(), records.end(), [](const auto& r) { return r.labels.has_value(); });
    const bool all_suite = std::all_of(records.begin(), records.end(), [](const auto& r) { return !r.suite.empty(); });
    const bool all_stack = std::all_of(records.begin(), records.end(), [](const auto& r) { return !r.stack.empty(); });
    if (in.labels && !all_labeled) throw ValidationError("labels file does not cover every workload");
    if (all_labeled) {
      bundle.summaries.push_back(group_summary(records, Grouping::ApplicationCategory, metric_names));
      bundle.summaries.push_back(group_summary(records, Grouping::SystemBehavior, metric_names));
    }
    if (all_suite) bundle.summaries.push_back(group_summary(records, Grouping::Suite, metric_names));
    if (all_stack) bundle.summaries.push_back(group_summary(records, Grouping::Stack, metric_names));
    bundle.stack_impact = stack_impact_table(records, metric_names);
    if (bundle.stack_impact->rows.empty()) bundle.stack_impact.reset();
  }

  for (const auto& dir : in.curve_dirs) {
    if (!fs::is_directory(dir)) throw IoError("curve directory '" + dir + "' does not exist");
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(dir)) {
      if (e.is_regular_file() && e.path().extension() == ".csv") files.push_back(e.path());
    }
    std::sort(files.begin(), files.end());
    for (const auto& f : files) {
      const std::string stem = f.stem().string();
      const auto us = stem.rfind('_');
      if (us == std::string::npos) continue;
      CurveKind kind;
      try {
        kind = parse_curve_kind(stem.substr(us + 1));
      } catch (const ValidationError&) {
        continue;
      }
      manifest.add_input(f.string());
      bundle.curves.push_back({stem.substr(0, us), parse_curve_csv(read_text(f.string()), kind)});
    }
  }

  for (const auto& s : bundle.summaries) {
    for (const auto& n : s.notes) bundle.warnings.push_back(to_string(s.grouping) + ": " + n);
  }
  if (empty(bundle)) {
    bundle.warnings.push_back("no report inputs; bundle is empty");
    ctx.log->warn("no report inputs; writing an empty bundle");
  }

  for (const auto& f : emit(bundle, ctx.out_dir)) manifest.add_output(f);
  finish(ctx, manifest);
  ctx.out << "report written to " << ctx.out_dir.string() << '\n';
}

spdlog::level::level_enum log_level_from_env() {
  const char* v = std::getenv("WCR_LOG");
  if (!v || !*v) return spdlog::level::warn;
  return spdlog::level::from_str(v);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  auto sink = std::make_shared<spdlog::sinks::ostream_sink_mt>(err);
  auto log = std::make_shared<spdlog::logger>("wcr", sink);
  log->set_pattern("wcr: %l: %v");
  log->set_level(log_level_from_env());

  CLI::App app{"Workload characterization and reduction toolkit", "wcr"};
  app.require_subcommand(1);
  app.fallthrough();

  std::optional<std::string> config_path, schema, out_dir;
  std::optional<double> warmup, variance_target, knee;
  std::optional<std::string> k, k_range, sizes, ways;
  std::optional<std::uint64_t> seed, skip, line;
  std::optional<int> restarts;
  bool no_write_allocate = false;

  app.add_option("--config", config_path, "JSON run configuration; flags override it");
  app.add_option("--out", out_dir, "Output directory (default: wcr_out)");
  app.add_option("--schema", schema, "Metric schema JSON");

  auto* ingest = app.add_subcommand("ingest", "Counters (+ telemetry) CSV -> profiles.json");
  std::string counters_path;
  std::optional<std::string> telemetry_path;
  ingest->add_option("--counters", counters_path, "Counter CSV")->required();
  ingest->add_option("--telemetry", telemetry_path, "Telemetry CSV");
  ingest->add_option("--warmup", warmup, "Ramp-up seconds to discard (default 30)");

  auto* reduce = app.add_subcommand("reduce", "profiles.json -> reduction.json (PCA + K-means)");
  std::string profiles_path;
  reduce->add_option("profiles", profiles_path, "profiles.json")->required();
  reduce->add_option("--variance-target", variance_target, "Cumulative explained variance to retain (default 0.85)");
  reduce->add_option("--k", k, "Cluster count or 'auto' (default auto)");
  reduce->add_option("--k-range", k_range, "k_min,k_max for automatic selection (default 1,20)");
  reduce->add_option("--seed", seed, "Random seed (default 42)");
  reduce->add_option("--restarts", restarts, "K-means restarts per k (default 10)");

  auto* classify = app.add_subcommand("classify", "Behavior CSV -> labels.csv");
  std::string behavior_path;
  classify->add_option("behavior", behavior_path, "Behavior CSV")->required();

  auto* simulate = app.add_subcommand("simulate", "Trace -> miss-ratio curve CSV");
  std::string trace_path, kind = "unified";
  std::optional<std::string> workload;
  simulate->add_option("trace", trace_path, "Trace file (.bin binary, otherwise text)")->required();
  simulate->add_option("--kind", kind, "instruction | data | unified (default unified)");
  simulate->add_option("--sizes", sizes, "Comma-separated capacities, e.g. 16K,32K,64K (default 16K..8192K)");
  simulate->add_option("--ways", ways, "Associativity or 'full' (default 8)");
  simulate->add_option("--line", line, "Line size in bytes (default 64)");
  simulate->add_option("--skip", skip, "Accesses to skip at the start of the trace");
  simulate->add_flag("--no-write-allocate", no_write_allocate, "Store misses do not allocate");
  simulate->add_option("--workload", workload, "Name used for the output file (default: trace file stem)");

  auto* footprint = app.add_subcommand("footprint", "Curve CSV -> footprint estimate");
  std::string curve_path;
  footprint->add_option("curve", curve_path, "Curve CSV")->required();
  footprint->add_option("--knee", knee, "Miss-ratio knee (default 0.01)");

  auto* report = app.add_subcommand("report", "Profiles, labels and curves -> summary tables");
  ReportInputs rin;
  std::optional<std::string> metrics;
  report->add_option("--profiles", rin.profiles, "profiles.json");
  report->add_option("--labels", rin.labels, "labels.csv");
  report->add_option("--meta", rin.meta, "CSV workload,suite,algorithm,stack");
  report->add_option("--curves", rin.curve_dirs, "Directory of <workload>_<kind>.csv curves (repeatable)");
  report->add_option("--metrics", metrics, "Comma-separated metric names (default: all)");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "wcr: " << e.what() << "\n" << app.help();
    return 1;
  }

  try {
    RunConfig cfg = config_path ? load_run_config(*config_path) : RunConfig{};
    if (schema) cfg.schema_path = schema;
    if (warmup) cfg.warmup_s = *warmup;
    if (variance_target) cfg.variance_target = *variance_target;
    if (k) cfg.k = parse_k(*k);
    if (k_range) {
      const auto parts = csv::split(*k_range);
      if (parts.size() != 2) throw UsageError("--k-range expects k_min,k_max");
      try {
        cfg.k_min = std::stoi(parts[0]);
        cfg.k_max = std::stoi(parts[1]);
      } catch (const std::exception&) {
        throw UsageError("--k-range expects two integers");
      }
    }
    if (seed) cfg.seed = *seed;
    if (restarts) cfg.restarts = *restarts;
    if (sizes) cfg.sizes = parse_sizes(*sizes);
    if (knee) cfg.knee_ratio = *knee;
    if (ways) cfg.associativity = parse_ways(*ways);
    if (line) cfg.line_bytes = *line;
    if (skip) cfg.skip = *skip;
    if (no_write_allocate) cfg.write_allocate = false;
    if (metrics) rin.metrics = csv::split(*metrics);
    check_ranges(cfg);

    Context ctx{cfg, fs::path(out_dir.value_or("wcr_out")), out, log};
    std::error_code ec;
    fs::create_directories(ctx.out_dir, ec);
    if (ec) throw IoError("cannot create output directory '" + ctx.out_dir.string() + "': " + ec.message());

    if (ingest->parsed()) cmd_ingest(ctx, counters_path, telemetry_path);
    else if (reduce->parsed()) cmd_reduce(ctx, profiles_path);
    else if (classify->parsed()) cmd_classify(ctx, behavior_path);
    else if (simulate->parsed()) cmd_simulate(ctx, trace_path, kind, workload);
    else if (footprint->parsed()) cmd_footprint(ctx, curve_path);
    else if (report->parsed()) cmd_report(ctx, rin);
    return 0;
  } catch (const UsageError& e) {
    err << "wcr: " << e.what() << "\n" << app.help();
    return 1;
  } catch (const Error& e) {
    err << "wcr: " << e.what() << '\n';
    return static_cast<int>(e.kind());
  } catch (const nlohmann::json::exception& e) {
    err << "wcr: " << e.what() << '\n';
    return static_cast<int>(ErrorKind::Validation);
  } catch (const fs::filesystem_error& e) {
    err << "wcr: " << e.what() << '\n';
    return static_cast<int>(ErrorKind::Io);
  }
}

}  // namespace wcr::cli
