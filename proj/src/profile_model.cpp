#include "wcr/profile_model.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <fstream>
#include <set>
#include <unordered_map>

#include "wcr/error.hpp"

namespace wcr {

namespace {

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

std::string fold(std::string_view s) {
  std::string out;
  for (char c : s) {
    if (c == ' ' || c == '_' || c == '-') continue;
    out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  return out;
}

bool valid_counter_name(std::string_view s) {
  if (s.empty()) return false;
  return std::all_of(s.begin(), s.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.';
  });
}

std::vector<std::string> parse_sum(std::string_view arg, std::string_view formula_id) {
  std::vector<std::string> terms;
  std::size_t start = 0;
  while (true) {
    const std::size_t plus = arg.find('+', start);
    std::string term = trim(arg.substr(start, plus == std::string_view::npos ? arg.size() - start : plus - start));
    if (!valid_counter_name(term)) {
      throw ValidationError("formula '" + std::string(formula_id) + "': bad counter name '" + term + "'");
    }
    terms.push_back(std::move(term));
    if (plus == std::string_view::npos) break;
    start = plus + 1;
  }
  return terms;
}

template <typename E, std::size_t N>
E parse_enum(std::string_view s, const std::array<E, N>& values, std::string_view what) {
  const std::string key = fold(s);
  for (E v : values) {
    if (fold(to_string(v)) == key) return v;
  }
  throw ValidationError("unknown " + std::string(what) + " '" + std::string(s) + "'");
}

constexpr std::array kAllGroups = {MetricGroup::InstructionMix, MetricGroup::Cache,
                                   MetricGroup::Tlb,            MetricGroup::Branch,
                                   MetricGroup::Pipeline,       MetricGroup::OffcoreSnoop,
                                   MetricGroup::Parallelism,    MetricGroup::OperationIntensity};
constexpr std::array kAllUnits = {MetricUnit::Ratio, MetricUnit::PerKiloInstr, MetricUnit::PerCycle,
                                  MetricUnit::FlopsPerByte, MetricUnit::Count};
constexpr std::array kAllSystem = {SystemBehavior::CpuIntensive, SystemBehavior::IoIntensive,
                                   SystemBehavior::Hybrid};
constexpr std::array kAllRatios = {DataRatio::MuchLess, DataRatio::Less, DataRatio::Equal,
                                   DataRatio::Greater, DataRatio::NoIntermediate};
constexpr std::array kAllCategories = {AppCategory::DataAnalysis, AppCategory::Service,
                                       AppCategory::InteractiveAnalysis};

}  // namespace

// ---------------------------------------------------------------------------
// Formulas

Formula parse_formula(std::string_view formula_id) {
  const std::string id = trim(formula_id);
  const auto open = id.find('(');
  if (open == std::string::npos || id.back() != ')') {
    throw ValidationError("formula '" + id + "': expected fn(args)");
  }
  const std::string fn = trim(std::string_view(id).substr(0, open));
  const std::string_view args = std::string_view(id).substr(open + 1, id.size() - open - 2);

  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const auto comma = args.find(',', start);
    parts.push_back(args.substr(start, comma == std::string_view::npos ? args.size() - start : comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }

  static const std::unordered_map<std::string, std::pair<FormulaKind, std::size_t>> kKinds = {
      {"ratio", {FormulaKind::Ratio, 2}},        {"remainder", {FormulaKind::Remainder, 1}},
      {"mpki", {FormulaKind::Mpki, 1}},          {"per_cycle", {FormulaKind::PerCycle, 1}},
      {"per_byte", {FormulaKind::PerByte, 2}},   {"quotient", {FormulaKind::Quotient, 2}},
  };
  const auto it = kKinds.find(fn);
  if (it == kKinds.end()) throw ValidationError("formula '" + id + "': unknown function '" + fn + "'");
  if (parts.size() != it->second.second) {
    throw ValidationError("formula '" + id + "': " + fn + " takes " + std::to_string(it->second.second) +
                          " argument(s)");
  }

  Formula f{it->second.first, parse_sum(parts[0], id), {}};
  if (parts.size() == 2) f.denominator = parse_sum(parts[1], id);
  return f;
}

std::vector<std::string> Formula::required_counters() const {
  std::vector<std::string> out = numerator;
  out.insert(out.end(), denominator.begin(), denominator.end());
  switch (kind) {
    case FormulaKind::Remainder:
    case FormulaKind::Mpki:
      out.emplace_back(kInstructionsRetired);
      break;
    case FormulaKind::PerCycle:
      out.emplace_back(kCycles);
      break;
    default:
      break;
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

MetricUnit Formula::unit() const {
  switch (kind) {
    case FormulaKind::Ratio:
    case FormulaKind::Remainder:
      return MetricUnit::Ratio;
    case FormulaKind::Mpki:
      return MetricUnit::PerKiloInstr;
    case FormulaKind::PerCycle:
      return MetricUnit::PerCycle;
    case FormulaKind::PerByte:
      return MetricUnit::FlopsPerByte;
    case FormulaKind::Quotient:
      return MetricUnit::Count;
  }
  return MetricUnit::Count;
}

// ---------------------------------------------------------------------------
// Schema

MetricSchema MetricSchema::create(std::vector<MetricDescriptor> metrics, std::string version) {
  std::set<std::string> seen;
  for (const auto& d : metrics) {
    if (d.name.empty()) throw ValidationError("metric with empty name");
    if (!seen.insert(d.name).second) throw ValidationError("duplicate metric name '" + d.name + "'");
    const Formula f = parse_formula(d.formula_id);
    if (f.unit() != d.unit) {
      throw ValidationError("metric '" + d.name + "': unit " + std::string(to_string(d.unit)) +
                            " does not match formula unit " + std::string(to_string(f.unit())));
    }
  }
  MetricSchema s;
  s.metrics_ = std::move(metrics);
  s.version_ = std::move(version);
  return s;
}

std::optional<std::size_t> MetricSchema::index_of(std::string_view name) const {
  for (std::size_t i = 0; i < metrics_.size(); ++i) {
    if (metrics_[i].name == name) return i;
  }
  return std::nullopt;
}

std::vector<std::string> MetricSchema::names() const {
  std::vector<std::string> out;
  out.reserve(metrics_.size());
  for (const auto& d : metrics_) out.push_back(d.name);
  return out;
}

MetricSchema default_schema() {
  using G = MetricGroup;
  using U = MetricUnit;
  std::vector<MetricDescriptor> m = {
      // Instruction mix. The five counted classes plus `other` partition the
      // retired instructions.
      {"branch_ratio", G::InstructionMix, U::Ratio, "ratio(branch_instructions, instructions_retired)"},
      {"integer_ratio", G::InstructionMix, U::Ratio, "ratio(integer_instructions, instructions_retired)"},
      {"fp_ratio", G::InstructionMix, U::Ratio, "ratio(fp_instructions, instructions_retired)"},
      {"load_ratio", G::InstructionMix, U::Ratio, "ratio(load_instructions, instructions_retired)"},
      {"store_ratio", G::InstructionMix, U::Ratio, "ratio(store_instructions, instructions_retired)"},
      {"other_ratio", G::InstructionMix, U::Ratio,
       "remainder(branch_instructions+integer_instructions+fp_instructions+load_instructions+store_instructions)"},

      {"l1i_mpki", G::Cache, U::PerKiloInstr, "mpki(l1i_misses)"},
      {"l1d_mpki", G::Cache, U::PerKiloInstr, "mpki(l1d_misses)"},
      {"l2_mpki", G::Cache, U::PerKiloInstr, "mpki(l2_misses)"},
      {"l3_mpki", G::Cache, U::PerKiloInstr, "mpki(l3_misses)"},
      {"l1i_miss_ratio", G::Cache, U::Ratio, "ratio(l1i_misses, l1i_accesses)"},
      {"l1d_miss_ratio", G::Cache, U::Ratio, "ratio(l1d_misses, l1d_accesses)"},
      {"l2_miss_ratio", G::Cache, U::Ratio, "ratio(l2_misses, l2_accesses)"},
      {"l3_miss_ratio", G::Cache, U::Ratio, "ratio(l3_misses, l3_accesses)"},
      {"l2_writeback_mpki", G::Cache, U::PerKiloInstr, "mpki(l2_writebacks)"},

      {"itlb_mpki", G::Tlb, U::PerKiloInstr, "mpki(itlb_misses)"},
      {"dtlb_mpki", G::Tlb, U::PerKiloInstr, "mpki(dtlb_load_misses+dtlb_store_misses)"},
      {"dtlb_load_mpki", G::Tlb, U::PerKiloInstr, "mpki(dtlb_load_misses)"},
      {"dtlb_store_mpki", G::Tlb, U::PerKiloInstr, "mpki(dtlb_store_misses)"},
      {"itlb_walk_cycle_ratio", G::Tlb, U::Ratio, "ratio(itlb_walk_cycles, cycles)"},
      {"dtlb_walk_cycle_ratio", G::Tlb, U::Ratio, "ratio(dtlb_walk_cycles, cycles)"},

      {"branch_mispredict_ratio", G::Branch, U::Ratio, "ratio(mispredicted_branches, branch_instructions)"},
      {"branch_mispredict_mpki", G::Branch, U::PerKiloInstr, "mpki(mispredicted_branches)"},
      {"taken_branch_ratio", G::Branch, U::Ratio, "ratio(taken_branches, branch_instructions)"},
      {"indirect_branch_ratio", G::Branch, U::Ratio, "ratio(indirect_branches, branch_instructions)"},
      {"baclear_mpki", G::Branch, U::PerKiloInstr, "mpki(baclears)"},

      {"ipc", G::Pipeline, U::PerCycle, "per_cycle(instructions_retired)"},
      {"uops_retired_per_cycle", G::Pipeline, U::PerCycle, "per_cycle(uops_retired)"},
      {"uops_per_instruction", G::Pipeline, U::Count, "quotient(uops_retired, instructions_retired)"},
      {"fetch_stall_ratio", G::Pipeline, U::Ratio, "ratio(fetch_stall_cycles, cycles)"},
      {"rat_stall_ratio", G::Pipeline, U::Ratio, "ratio(rat_stall_cycles, cycles)"},
      {"load_buffer_full_ratio", G::Pipeline, U::Ratio, "ratio(load_buffer_full_cycles, cycles)"},
      {"store_buffer_full_ratio", G::Pipeline, U::Ratio, "ratio(store_buffer_full_cycles, cycles)"},
      {"rs_full_ratio", G::Pipeline, U::Ratio, "ratio(rs_full_cycles, cycles)"},
      {"rob_full_ratio", G::Pipeline, U::Ratio, "ratio(rob_full_cycles, cycles)"},

      {"offcore_data_read_mpki", G::OffcoreSnoop, U::PerKiloInstr, "mpki(offcore_data_reads)"},
      {"offcore_rfo_mpki", G::OffcoreSnoop, U::PerKiloInstr, "mpki(offcore_rfos)"},
      {"offcore_code_read_mpki", G::OffcoreSnoop, U::PerKiloInstr, "mpki(offcore_code_reads)"},
      {"snoop_hit_ratio", G::OffcoreSnoop, U::Ratio, "ratio(snoop_hits, snoop_responses)"},
      {"snoop_hitm_ratio", G::OffcoreSnoop, U::Ratio, "ratio(snoop_hitm, snoop_responses)"},

      {"memory_level_parallelism", G::Parallelism, U::Count,
       "quotient(offcore_outstanding_occupancy, offcore_outstanding_cycles)"},
      {"uops_executed_per_cycle", G::Parallelism, U::PerCycle, "per_cycle(uops_executed)"},
      {"multi_issue_cycle_ratio", G::Parallelism, U::Ratio, "ratio(multi_issue_cycles, cycles)"},

      // Floating-point (and integer) operations per byte of off-core traffic.
      {"operation_intensity", G::OperationIntensity, U::FlopsPerByte, "per_byte(fp_operations, offcore_bytes)"},
      {"integer_operation_intensity", G::OperationIntensity, U::FlopsPerByte,
       "per_byte(integer_instructions, offcore_bytes)"},
  };
  return MetricSchema::create(std::move(m), "wcr-default-45/1");
}

std::string canonical_counter_name(std::string_view event) {
  std::string key = trim(event);
  for (char& c : key) {
    c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    if (c == '-' || c == '.' || c == ':') c = '_';
  }
  static const std::unordered_map<std::string, std::string> kAliases = {
      {"instructions", "instructions_retired"},
      {"inst_retired_any", "instructions_retired"},
      {"inst_retired_any_p", "instructions_retired"},
      {"cpu_cycles", "cycles"},
      {"cpu_clk_unhalted_thread", "cycles"},
      {"cpu_clk_unhalted_core", "cycles"},
      {"branches", "branch_instructions"},
      {"br_inst_retired_all_branches", "branch_instructions"},
      {"branch_misses", "mispredicted_branches"},
      {"br_misp_retired_all_branches", "mispredicted_branches"},
      {"l1_icache_load_misses", "l1i_misses"},
      {"l1_icache_loads", "l1i_accesses"},
      {"icache_misses", "l1i_misses"},
      {"l1_dcache_load_misses", "l1d_misses"},
      {"l1_dcache_loads", "l1d_accesses"},
      {"llc_load_misses", "l3_misses"},
      {"llc_loads", "l3_accesses"},
      {"longest_lat_cache_miss", "l3_misses"},
      {"longest_lat_cache_reference", "l3_accesses"},
      {"l2_rqsts_miss", "l2_misses"},
      {"l2_rqsts_references", "l2_accesses"},
      {"itlb_load_misses", "itlb_misses"},
      {"itlb_misses_any", "itlb_misses"},
      {"dtlb_load_misses_any", "dtlb_load_misses"},
      {"dtlb_store_misses_any", "dtlb_store_misses"},
      {"uops_retired_any", "uops_retired"},
      {"uops_executed_thread", "uops_executed"},
      {"baclear_clear", "baclears"},
      {"baclears_any", "baclears"},
      {"mem_inst_retired_loads", "load_instructions"},
      {"mem_inst_retired_stores", "store_instructions"},
  };
  const auto it = kAliases.find(key);
  return it == kAliases.end() ? key : it->second;
}

// ---------------------------------------------------------------------------
// Profiles and vectors

std::vector<std::string> validate_profile(const RawProfile& p, const MetricSchema& s) {
  std::vector<std::string> report;
  if (p.workload_id.empty()) report.emplace_back("workload_id is empty");
  if (!(p.wall_time_s > 0.0) || !std::isfinite(p.wall_time_s)) {
    report.emplace_back("wall_time_s must be positive");
  }
  if (p.node_count <= 0) report.emplace_back("node_count must be positive");

  for (const auto& [name, value] : p.counters) {
    if (value < 0) report.push_back("counter '" + name + "' is negative (" + std::to_string(value) + ")");
  }

  std::set<std::string> required = {std::string(kInstructionsRetired), std::string(kCycles)};
  for (const auto& d : s.metrics()) {
    for (auto& c : parse_formula(d.formula_id).required_counters()) required.insert(std::move(c));
  }
  for (const auto& name : required) {
    const auto it = p.counters.find(name);
    if (it == p.counters.end()) {
      report.push_back("counter '" + name + "' is absent");
    } else if ((name == kInstructionsRetired || name == kCycles) && it->second <= 0) {
      report.push_back("counter '" + name + "' must be > 0");
    }
  }
  return report;
}

MetricVector MetricVector::create(const MetricSchema& schema, std::string workload_id,
                                  std::vector<double> values) {
  if (values.size() != schema.size()) {
    throw ValidationError("metric vector for '" + workload_id + "' has " + std::to_string(values.size()) +
                          " values, schema has " + std::to_string(schema.size()));
  }
  for (std::size_t i = 0; i < values.size(); ++i) {
    const auto& d = schema.metrics()[i];
    if (!std::isfinite(values[i])) {
      throw ValidationError("metric '" + d.name + "' of '" + workload_id + "' is not finite");
    }
    if (d.unit == MetricUnit::Ratio && (values[i] < 0.0 || values[i] > 1.0)) {
      throw ValidationError("ratio metric '" + d.name + "' of '" + workload_id + "' outside [0,1]: " +
                            std::to_string(values[i]));
    }
  }
  MetricVector v;
  v.workload_id_ = std::move(workload_id);
  v.values_ = std::move(values);
  v.schema_version_ = schema.version();
  return v;
}

void check_telemetry(const SystemTelemetry& t) {
  for (std::size_t i = 0; i < t.samples.size(); ++i) {
    const auto& s = t.samples[i];
    if (i > 0 && !(s.t_s > t.samples[i - 1].t_s)) {
      throw ValidationError("telemetry of '" + t.workload_id + "': t_s not strictly increasing at sample " +
                            std::to_string(i));
    }
    if (!(s.cpu_util >= 0.0 && s.cpu_util <= 1.0) || !(s.io_wait >= 0.0 && s.io_wait <= 1.0)) {
      throw ValidationError("telemetry of '" + t.workload_id + "': cpu_util/io_wait outside [0,1] at t=" +
                            std::to_string(s.t_s));
    }
    if (!(s.weighted_io_time_ms >= 0.0)) {
      throw ValidationError("telemetry of '" + t.workload_id + "': negative weighted_io_time_ms");
    }
  }
}

void check_system_metrics(const SystemBehaviorMetrics& m) {
  if (!(m.cpu_util >= 0.0 && m.cpu_util <= 1.0)) throw ValidationError("cpu_util outside [0,1]");
  if (!(m.io_wait >= 0.0 && m.io_wait <= 1.0)) throw ValidationError("io_wait outside [0,1]");
  if (!(m.weighted_io_ratio >= 0.0) || !std::isfinite(m.weighted_io_ratio)) {
    throw ValidationError("weighted_io_ratio must be a non-negative number");
  }
}

// ---------------------------------------------------------------------------
// Enum names

std::string_view to_string(MetricGroup g) {
  switch (g) {
    case MetricGroup::InstructionMix: return "InstructionMix";
    case MetricGroup::Cache: return "Cache";
    case MetricGroup::Tlb: return "TLB";
    case MetricGroup::Branch: return "Branch";
    case MetricGroup::Pipeline: return "Pipeline";
    case MetricGroup::OffcoreSnoop: return "OffcoreSnoop";
    case MetricGroup::Parallelism: return "Parallelism";
    case MetricGroup::OperationIntensity: return "OperationIntensity";
  }
  return "?";
}

std::string_view to_string(MetricUnit u) {
  switch (u) {
    case MetricUnit::Ratio: return "Ratio";
    case MetricUnit::PerKiloInstr: return "PerKiloInstr";
    case MetricUnit::PerCycle: return "PerCycle";
    case MetricUnit::FlopsPerByte: return "FlopsPerByte";
    case MetricUnit::Count: return "Count";
  }
  return "?";
}

std::string_view to_string(SystemBehavior b) {
  switch (b) {
    case SystemBehavior::CpuIntensive: return "CpuIntensive";
    case SystemBehavior::IoIntensive: return "IoIntensive";
    case SystemBehavior::Hybrid: return "Hybrid";
  }
  return "?";
}

std::string_view to_string(DataRatio r) {
  switch (r) {
    case DataRatio::MuchLess: return "MuchLess";
    case DataRatio::Less: return "Less";
    case DataRatio::Equal: return "Equal";
    case DataRatio::Greater: return "Greater";
    case DataRatio::NoIntermediate: return "NoIntermediate";
  }
  return "?";
}

std::string_view to_string(AppCategory c) {
  switch (c) {
    case AppCategory::DataAnalysis: return "DataAnalysis";
    case AppCategory::Service: return "Service";
    case AppCategory::InteractiveAnalysis: return "InteractiveAnalysis";
  }
  return "?";
}

SystemBehavior parse_system_behavior(std::string_view s) { return parse_enum(s, kAllSystem, "system behavior"); }
AppCategory parse_app_category(std::string_view s) { return parse_enum(s, kAllCategories, "application category"); }
DataRatio parse_data_ratio(std::string_view s) { return parse_enum(s, kAllRatios, "data ratio class"); }

// ---------------------------------------------------------------------------
// JSON

void to_json(nlohmann::json& j, const MetricDescriptor& d) {
  j = {{"name", d.name},
       {"group", to_string(d.group)},
       {"unit", to_string(d.unit)},
       {"formula_id", d.formula_id}};
}

void from_json(const nlohmann::json& j, MetricDescriptor& d) {
  d.name = j.at("name").get<std::string>();
  d.group = parse_enum(j.at("group").get<std::string>(), kAllGroups, "metric group");
  d.unit = parse_enum(j.at("unit").get<std::string>(), kAllUnits, "metric unit");
  d.formula_id = j.at("formula_id").get<std::string>();
}

nlohmann::json schema_to_json(const MetricSchema& s) {
  return {{"version", s.version()}, {"metrics", s.metrics()}};
}

MetricSchema schema_from_json(const nlohmann::json& j) {
  try {
    return MetricSchema::create(j.at("metrics").get<std::vector<MetricDescriptor>>(),
                                j.at("version").get<std::string>());
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("schema: ") + e.what());
  }
}

MetricSchema load_schema(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open schema file '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("schema file '" + path + "': " + e.what());
  }
  return schema_from_json(j);
}

void to_json(nlohmann::json& j, const RawProfile& p) {
  j = {{"workload_id", p.workload_id},
       {"stack", p.stack},
       {"counters", p.counters},
       {"wall_time_s", p.wall_time_s},
       {"node_count", p.node_count}};
}

void from_json(const nlohmann::json& j, RawProfile& p) {
  p.workload_id = j.at("workload_id").get<std::string>();
  p.stack = j.value("stack", std::string{});
  p.counters = j.at("counters").get<std::map<std::string, std::int64_t>>();
  p.wall_time_s = j.at("wall_time_s").get<double>();
  p.node_count = j.value("node_count", 1);
}

nlohmann::json vector_to_json(const MetricVector& v) {
  return {{"workload_id", v.workload_id()},
          {"values", std::vector<double>(v.values().begin(), v.values().end())},
          {"schema_version", v.schema_version()}};
}

MetricVector vector_from_json(const nlohmann::json& j, const MetricSchema& schema) {
  const auto version = j.value("schema_version", schema.version());
  if (version != schema.version()) {
    throw ValidationError("metric vector schema version '" + version + "' does not match '" + schema.version() + "'");
  }
  return MetricVector::create(schema, j.at("workload_id").get<std::string>(),
                              j.at("values").get<std::vector<double>>());
}

void to_json(nlohmann::json& j, const TelemetrySample& s) {
  j = {{"t_s", s.t_s},
       {"cpu_util", s.cpu_util},
       {"io_wait", s.io_wait},
       {"weighted_io_time_ms", s.weighted_io_time_ms},
       {"disk_bw_Bps", s.disk_bw_Bps},
       {"net_bw_Bps", s.net_bw_Bps}};
}

void from_json(const nlohmann::json& j, TelemetrySample& s) {
  s.t_s = j.at("t_s").get<double>();
  s.cpu_util = j.at("cpu_util").get<double>();
  s.io_wait = j.at("io_wait").get<double>();
  s.weighted_io_time_ms = j.at("weighted_io_time_ms").get<double>();
  s.disk_bw_Bps = j.value("disk_bw_Bps", 0.0);
  s.net_bw_Bps = j.value("net_bw_Bps", 0.0);
}

void to_json(nlohmann::json& j, const SystemTelemetry& t) {
  j = {{"workload_id", t.workload_id}, {"samples", t.samples}};
}

void from_json(const nlohmann::json& j, SystemTelemetry& t) {
  t.workload_id = j.at("workload_id").get<std::string>();
  t.samples = j.at("samples").get<std::vector<TelemetrySample>>();
}

void to_json(nlohmann::json& j, const SystemBehaviorMetrics& m) {
  j = {{"cpu_util", m.cpu_util},
       {"io_wait", m.io_wait},
       {"weighted_io_ratio", m.weighted_io_ratio},
       {"disk_bw_Bps", m.disk_bw_Bps},
       {"net_bw_Bps", m.net_bw_Bps}};
}

void from_json(const nlohmann::json& j, SystemBehaviorMetrics& m) {
  m.cpu_util = j.at("cpu_util").get<double>();
  m.io_wait = j.at("io_wait").get<double>();
  m.weighted_io_ratio = j.at("weighted_io_ratio").get<double>();
  m.disk_bw_Bps = j.value("disk_bw_Bps", 0.0);
  m.net_bw_Bps = j.value("net_bw_Bps", 0.0);
}

void to_json(nlohmann::json& j, const DataVolumes& v) {
  j = {{"input_bytes", v.input_bytes}, {"output_bytes", v.output_bytes}, {"intermediate_bytes", v.intermediate_bytes}};
}

void from_json(const nlohmann::json& j, DataVolumes& v) {
  v.input_bytes = j.at("input_bytes").get<std::uint64_t>();
  v.output_bytes = j.at("output_bytes").get<std::uint64_t>();
  v.intermediate_bytes = j.value("intermediate_bytes", std::uint64_t{0});
}

void to_json(nlohmann::json& j, const BehaviorLabels& l) {
  j = {{"system", to_string(l.system)},
       {"data_out", to_string(l.data_out)},
       {"data_intermediate", to_string(l.data_intermediate)},
       {"category", to_string(l.category)}};
}

void from_json(const nlohmann::json& j, BehaviorLabels& l) {
  l.system = parse_system_behavior(j.at("system").get<std::string>());
  l.data_out = parse_data_ratio(j.at("data_out").get<std::string>());
  l.data_intermediate = parse_data_ratio(j.at("data_intermediate").get<std::string>());
  l.category = parse_app_category(j.at("category").get<std::string>());
}

}  // namespace wcr
