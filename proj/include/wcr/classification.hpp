#pragma once

#include <istream>
#include <string>
#include <utility>
#include <vector>

#include "wcr/profile_model.hpp"

namespace wcr {

// Rule thresholds. All comparisons are strict; boundary values fall through to
// the next rule.
inline constexpr double kCpuIntensiveUtil = 0.85;
inline constexpr double kIoWeightedRatio = 10.0;
inline constexpr double kIoWaitRatio = 0.20;
inline constexpr double kIoMaxCpuUtil = 0.60;

// Ratio bands: [0, 0.01) MuchLess, [0.01, 0.9) Less, [0.9, 1.1) Equal, [1.1, inf) Greater.
inline constexpr double kMuchLessBound = 0.01;
inline constexpr double kEqualLowerBound = 0.9;
inline constexpr double kEqualUpperBound = 1.1;

// 1. cpu_util > 0.85                                            -> CpuIntensive
// 2. (weighted_io_ratio > 10 or io_wait > 0.20) and cpu_util < 0.60 -> IoIntensive
// 3. otherwise                                                   -> Hybrid
SystemBehavior classify_system_behavior(const SystemBehaviorMetrics& m);

DataRatio ratio_band(double ratio);

struct DataBehavior {
  DataRatio output;
  DataRatio intermediate;
};

DataBehavior classify_data_behavior(const DataVolumes& v);

BehaviorLabels label_workload(const SystemBehaviorMetrics& m, const DataVolumes& v, AppCategory category);

struct BehaviorRow {
  std::string workload;
  SystemBehaviorMetrics metrics;
  DataVolumes volumes;
  AppCategory category = AppCategory::DataAnalysis;
};

struct LabeledWorkload {
  std::string workload;
  BehaviorLabels labels;
};

// `workload,cpu_util,io_wait,weighted_io_ratio,input_bytes,output_bytes,intermediate_bytes,category`
std::vector<BehaviorRow> parse_behavior_csv(std::istream& in);
std::vector<LabeledWorkload> classify_rows(const std::vector<BehaviorRow>& rows);

// `workload,system,data_out,data_intermediate,category`
std::string labels_to_csv(const std::vector<LabeledWorkload>& labels);
std::vector<LabeledWorkload> parse_labels_csv(std::istream& in);

}  // namespace wcr
