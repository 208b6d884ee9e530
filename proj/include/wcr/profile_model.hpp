#pragma once

// Canonical data model shared by every stage of the toolkit: metric schemas,
// raw counter profiles, metric vectors, OS telemetry and behavior labels.

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace wcr {

enum class MetricGroup {
  InstructionMix,
  Cache,
  Tlb,
  Branch,
  Pipeline,
  OffcoreSnoop,
  Parallelism,
  OperationIntensity,
};

inline constexpr int kMetricGroupCount = 8;

enum class MetricUnit { Ratio, PerKiloInstr, PerCycle, FlopsPerByte, Count };

// Derivation rules understood by `derive_microarch_metrics`. A formula id is
// written as `fn(a+b, c)` where each argument is a `+`-joined list of counter
// names:
//
//   ratio(num, den)      num / den                          -> Ratio
//   remainder(parts)     (instructions_retired - parts) / instructions_retired -> Ratio
//   mpki(num)            1000 * num / instructions_retired  -> PerKiloInstr
//   per_cycle(num)       num / cycles                       -> PerCycle
//   per_byte(num, den)   num / den                          -> FlopsPerByte
//   quotient(num, den)   num / den                          -> Count
enum class FormulaKind { Ratio, Remainder, Mpki, PerCycle, PerByte, Quotient };

struct Formula {
  FormulaKind kind;
  std::vector<std::string> numerator;
  std::vector<std::string> denominator;  // empty for single-argument kinds

  // Every counter the formula reads, implicit ones included.
  std::vector<std::string> required_counters() const;
  MetricUnit unit() const;
};

// Throws ValidationError on a malformed id.
Formula parse_formula(std::string_view formula_id);

struct MetricDescriptor {
  std::string name;
  MetricGroup group;
  MetricUnit unit;
  std::string formula_id;

  bool operator==(const MetricDescriptor&) const = default;
};

// Ordered list of metrics. Index order defines MetricVector layout.
class MetricSchema {
 public:
  // Validates uniqueness, non-empty names and formula/unit agreement.
  static MetricSchema create(std::vector<MetricDescriptor> metrics, std::string version);

  const std::vector<MetricDescriptor>& metrics() const noexcept { return metrics_; }
  const std::string& version() const noexcept { return version_; }
  std::size_t size() const noexcept { return metrics_.size(); }
  std::optional<std::size_t> index_of(std::string_view name) const;
  std::vector<std::string> names() const;

  bool operator==(const MetricSchema&) const = default;

 private:
  MetricSchema() = default;
  std::vector<MetricDescriptor> metrics_;
  std::string version_;
};

// The 45-metric default fingerprint: eight groups covering instruction mix,
// cache, TLB, branch, pipeline, off-core/snoop, parallelism and operation
// intensity.
MetricSchema default_schema();

// Counter names used by the default schema.
inline constexpr std::string_view kInstructionsRetired = "instructions_retired";
inline constexpr std::string_view kCycles = "cycles";

// Maps vendor / perf event spellings onto the canonical counter vocabulary.
// Unknown names are returned lower-cased with '-' and '.' turned into '_'.
std::string canonical_counter_name(std::string_view event);

struct RawProfile {
  std::string workload_id;
  std::string stack;
  std::map<std::string, std::int64_t> counters;
  double wall_time_s = 0.0;
  int node_count = 1;

  bool operator==(const RawProfile&) const = default;
};

// Violations are reported as data; an empty list means the profile is usable
// with the schema.
std::vector<std::string> validate_profile(const RawProfile& p, const MetricSchema& s);

// Values aligned to a schema. Only constructible through `create`, which checks
// length, finiteness and the [0,1] range of Ratio-unit entries.
class MetricVector {
 public:
  static MetricVector create(const MetricSchema& schema, std::string workload_id,
                             std::vector<double> values);

  const std::string& workload_id() const noexcept { return workload_id_; }
  std::span<const double> values() const noexcept { return values_; }
  const std::string& schema_version() const noexcept { return schema_version_; }
  double operator[](std::size_t i) const { return values_.at(i); }

  bool operator==(const MetricVector&) const = default;

 private:
  MetricVector() = default;
  std::string workload_id_;
  std::vector<double> values_;
  std::string schema_version_;
};

struct TelemetrySample {
  double t_s = 0.0;
  double cpu_util = 0.0;
  double io_wait = 0.0;
  double weighted_io_time_ms = 0.0;
  double disk_bw_Bps = 0.0;
  double net_bw_Bps = 0.0;

  bool operator==(const TelemetrySample&) const = default;
};

struct SystemTelemetry {
  std::string workload_id;
  std::vector<TelemetrySample> samples;

  bool operator==(const SystemTelemetry&) const = default;
};

// Throws ValidationError unless t_s is strictly increasing and the fractions
// lie in [0, 1].
void check_telemetry(const SystemTelemetry& t);

struct SystemBehaviorMetrics {
  double cpu_util = 0.0;
  double io_wait = 0.0;
  double weighted_io_ratio = 0.0;
  double disk_bw_Bps = 0.0;
  double net_bw_Bps = 0.0;

  bool operator==(const SystemBehaviorMetrics&) const = default;
};

void check_system_metrics(const SystemBehaviorMetrics& m);

struct DataVolumes {
  std::uint64_t input_bytes = 0;
  std::uint64_t output_bytes = 0;
  std::uint64_t intermediate_bytes = 0;

  bool operator==(const DataVolumes&) const = default;
};

enum class SystemBehavior { CpuIntensive, IoIntensive, Hybrid };

// Size of output (or intermediate) data relative to input. NoIntermediate is
// only produced for the intermediate column.
enum class DataRatio { MuchLess, Less, Equal, Greater, NoIntermediate };

enum class AppCategory { DataAnalysis, Service, InteractiveAnalysis };

struct BehaviorLabels {
  SystemBehavior system = SystemBehavior::Hybrid;
  DataRatio data_out = DataRatio::Equal;
  DataRatio data_intermediate = DataRatio::NoIntermediate;
  AppCategory category = AppCategory::DataAnalysis;

  bool operator==(const BehaviorLabels&) const = default;
};

std::string_view to_string(MetricGroup g);
std::string_view to_string(MetricUnit u);
std::string_view to_string(SystemBehavior b);
std::string_view to_string(DataRatio r);
std::string_view to_string(AppCategory c);

// Lenient parsers: case, spaces, '-' and '_' are ignored ("data analysis",
// "DataAnalysis" and "data_analysis" are the same category).
SystemBehavior parse_system_behavior(std::string_view s);
AppCategory parse_app_category(std::string_view s);
DataRatio parse_data_ratio(std::string_view s);

// JSON encoding. Schema files use {"version": ..., "metrics": [...]}.
void to_json(nlohmann::json& j, const MetricDescriptor& d);
void from_json(const nlohmann::json& j, MetricDescriptor& d);
nlohmann::json schema_to_json(const MetricSchema& s);
MetricSchema schema_from_json(const nlohmann::json& j);
MetricSchema load_schema(const std::string& path);

void to_json(nlohmann::json& j, const RawProfile& p);
void from_json(const nlohmann::json& j, RawProfile& p);

nlohmann::json vector_to_json(const MetricVector& v);
MetricVector vector_from_json(const nlohmann::json& j, const MetricSchema& schema);

void to_json(nlohmann::json& j, const TelemetrySample& s);
void from_json(const nlohmann::json& j, TelemetrySample& s);
void to_json(nlohmann::json& j, const SystemTelemetry& t);
void from_json(const nlohmann::json& j, SystemTelemetry& t);
void to_json(nlohmann::json& j, const SystemBehaviorMetrics& m);
void from_json(const nlohmann::json& j, SystemBehaviorMetrics& m);
void to_json(nlohmann::json& j, const DataVolumes& v);
void from_json(const nlohmann::json& j, DataVolumes& v);
void to_json(nlohmann::json& j, const BehaviorLabels& l);
void from_json(const nlohmann::json& j, BehaviorLabels& l);

}  // namespace wcr
