#include "wcr/classification.hpp"

#include <cmath>
#include <set>
#include <sstream>

#include "wcr/csv.hpp"
#include "wcr/error.hpp"

namespace wcr {

SystemBehavior classify_system_behavior(const SystemBehaviorMetrics& m) {
  check_system_metrics(m);
  if (m.cpu_util > kCpuIntensiveUtil) return SystemBehavior::CpuIntensive;
  if ((m.weighted_io_ratio > kIoWeightedRatio || m.io_wait > kIoWaitRatio) && m.cpu_util < kIoMaxCpuUtil) {
    return SystemBehavior::IoIntensive;
  }
  return SystemBehavior::Hybrid;
}

DataRatio ratio_band(double ratio) {
  if (!(ratio >= 0.0)) throw ValidationError("data ratio must be non-negative");
  if (ratio < kMuchLessBound) return DataRatio::MuchLess;
  if (ratio < kEqualLowerBound) return DataRatio::Less;
  if (ratio < kEqualUpperBound) return DataRatio::Equal;
  return DataRatio::Greater;
}

DataBehavior classify_data_behavior(const DataVolumes& v) {
  if (v.input_bytes == 0) throw ValidationError("data behavior: input_bytes must be > 0");
  const double in = static_cast<double>(v.input_bytes);
  const DataRatio out = ratio_band(static_cast<double>(v.output_bytes) / in);
  const DataRatio mid = v.intermediate_bytes == 0 ? DataRatio::NoIntermediate
                                                  : ratio_band(static_cast<double>(v.intermediate_bytes) / in);
  return {out, mid};
}

BehaviorLabels label_workload(const SystemBehaviorMetrics& m, const DataVolumes& v, AppCategory category) {
  const auto data = classify_data_behavior(v);
  return {classify_system_behavior(m), data.output, data.intermediate, category};
}

std::vector<BehaviorRow> parse_behavior_csv(std::istream& in) {
  std::size_t line_no = 0;
  csv::expect_header(in, line_no,
                     {"workload", "cpu_util", "io_wait", "weighted_io_ratio", "input_bytes", "output_bytes",
                      "intermediate_bytes", "category"});
  std::vector<BehaviorRow> rows;
  std::set<std::string> seen;
  std::string line;
  while (csv::next_line(in, line, line_no)) {
    const auto f = csv::split(line);
    if (f.size() != 8) {
      throw ValidationError("line " + std::to_string(line_no) + ": expected 8 fields, got " + std::to_string(f.size()));
    }
    if (f[0].empty() || !seen.insert(f[0]).second) {
      throw ValidationError("line " + std::to_string(line_no) + ": empty or duplicate workload '" + f[0] + "'");
    }
    BehaviorRow r;
    r.workload = f[0];
    r.metrics.cpu_util = csv::to_double(f[1], line_no, "cpu_util");
    r.metrics.io_wait = csv::to_double(f[2], line_no, "io_wait");
    r.metrics.weighted_io_ratio = csv::to_double(f[3], line_no, "weighted_io_ratio");
    r.volumes.input_bytes = csv::to_uint(f[4], line_no, "input_bytes");
    r.volumes.output_bytes = csv::to_uint(f[5], line_no, "output_bytes");
    r.volumes.intermediate_bytes = csv::to_uint(f[6], line_no, "intermediate_bytes");
    try {
      r.category = parse_app_category(f[7]);
      check_system_metrics(r.metrics);
    } catch (const ValidationError& e) {
      throw ValidationError("line " + std::to_string(line_no) + ": " + e.what());
    }
    rows.push_back(std::move(r));
  }
  return rows;
}

std::vector<LabeledWorkload> classify_rows(const std::vector<BehaviorRow>& rows) {
  std::vector<LabeledWorkload> out;
  out.reserve(rows.size());
  for (const auto& r : rows) {
    try {
      out.push_back({r.workload, label_workload(r.metrics, r.volumes, r.category)});
    } catch (const ValidationError& e) {
      throw ValidationError("workload '" + r.workload + "': " + e.what());
    }
  }
  return out;
}

std::string labels_to_csv(const std::vector<LabeledWorkload>& labels) {
  std::ostringstream out;
  out << "workload,system,data_out,data_intermediate,category\n";
  for (const auto& l : labels) {
    out << l.workload << ',' << to_string(l.labels.system) << ',' << to_string(l.labels.data_out) << ','
        << to_string(l.labels.data_intermediate) << ',' << to_string(l.labels.category) << '\n';
  }
  return out.str();
}

std::vector<LabeledWorkload> parse_labels_csv(std::istream& in) {
  std::size_t line_no = 0;
  csv::expect_header(in, line_no, {"workload", "system", "data_out", "data_intermediate", "category"});
  std::vector<LabeledWorkload> out;
  std::string line;
  while (csv::next_line(in, line, line_no)) {
    const auto f = csv::split(line);
    if (f.size() != 5) throw ValidationError("line " + std::to_string(line_no) + ": expected 5 fields");
    try {
      out.push_back({f[0],
                     {parse_system_behavior(f[1]), parse_data_ratio(f[2]), parse_data_ratio(f[3]),
                      parse_app_category(f[4])}});
    } catch (const ValidationError& e) {
      throw ValidationError("line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

}  // namespace wcr
