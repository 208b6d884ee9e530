#pragma once

// Group summaries, instruction-mix derived shares, software-stack comparisons
// and byte-stable emission of tables and plot data.

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "wcr/cachesim.hpp"
#include "wcr/ingest.hpp"
#include "wcr/profile_model.hpp"

namespace wcr {

struct WorkloadRecord {
  std::string workload_id;
  std::string suite;
  std::string algorithm;
  std::string stack;
  std::optional<BehaviorLabels> labels;
  std::map<std::string, double> metrics;
};

enum class Grouping { ApplicationCategory, SystemBehavior, Suite, Stack };

std::string to_string(Grouping g);  // snake_case, used in file names
Grouping parse_grouping(const std::string& s);

struct GroupRow {
  std::string group;
  std::size_t members = 0;
  std::map<std::string, double> means;
};

struct GroupSummary {
  Grouping grouping = Grouping::ApplicationCategory;
  std::vector<std::string> metrics;
  std::vector<GroupRow> rows;
  std::vector<std::string> notes;  // e.g. omitted empty groups
};

// Unweighted mean per group and metric. Members are summed in workload-id
// order so the result does not depend on input order.
GroupSummary group_summary(const std::vector<WorkloadRecord>& records, Grouping grouping,
                           const std::vector<std::string>& metrics);

struct InstructionMix {
  double branch = 0.0;
  double integer = 0.0;
  double fp = 0.0;
  double load = 0.0;
  double store = 0.0;
};

struct DataMovementShare {
  double without_branch = 0.0;
  double with_branch = 0.0;
};

// without_branch = load + store + integer * (int_addr + fp_addr);
// with_branch = without_branch + branch.
DataMovementShare data_movement_share(const InstructionMix& mix, const IntegerBreakdown& ib);

enum class GapFlag { None, NearOrderOfMagnitude, OrderOfMagnitude };

std::string to_string(GapFlag f);

// max/min >= 10 is an order-of-magnitude gap; >= sqrt(10) (one order of
// magnitude after rounding in log10) is flagged as near.
GapFlag classify_gap(double max_min_ratio);

struct StackImpactRow {
  std::string algorithm;
  std::string metric;
  std::map<std::string, double> values;  // stack -> value
  double max_min_ratio = 1.0;
  GapFlag gap = GapFlag::None;
};

struct StackImpactTable {
  std::vector<std::string> metrics;
  std::vector<std::string> stacks;
  std::vector<StackImpactRow> rows;
};

// One row per (algorithm, metric) for algorithms seen under >= 2 stacks.
// Several records for one (algorithm, stack) are averaged.
StackImpactTable stack_impact_table(const std::vector<WorkloadRecord>& records, const std::vector<std::string>& metrics);

struct NamedCurve {
  std::string workload;
  MissRatioCurve curve;
};

struct WorkloadShare {
  std::string workload;
  DataMovementShare share;
};

struct ReportBundle {
  std::vector<GroupSummary> summaries;
  std::optional<StackImpactTable> stack_impact;
  std::vector<NamedCurve> curves;
  std::vector<WorkloadShare> data_movement;
  std::vector<std::string> warnings;
};

bool empty(const ReportBundle& b);

nlohmann::json bundle_to_json(const ReportBundle& b);
std::string summary_to_csv(const GroupSummary& s);
std::string stack_impact_to_csv(const StackImpactTable& t);

// Writes summary_<grouping>.csv, stack_impact.csv, curves/<workload>_<kind>.csv
// and bundle.json under out_dir. Returns the written paths relative to
// out_dir, sorted. Floats use 4 decimals; JSON keys are sorted.
std::vector<std::string> emit(const ReportBundle& b, const std::filesystem::path& out_dir);

// Writes `content` to `path`, creating parent directories. Throws IoError with
// the path on failure.
void write_file(const std::filesystem::path& path, const std::string& content);

}  // namespace wcr
