#include "wcr/report.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "wcr/csv.hpp"
#include "wcr/error.hpp"

namespace wcr {

namespace {

double round4(double v) {
  if (!std::isfinite(v)) return v;
  const double r = std::round(v * 1e4) / 1e4;
  return r == 0.0 ? 0.0 : r;
}

// JSON for a possibly-infinite ratio.
nlohmann::json json_number(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return round4(v);
}

std::string group_key(const WorkloadRecord& r, Grouping g) {
  switch (g) {
    case Grouping::ApplicationCategory:
    case Grouping::SystemBehavior:
      if (!r.labels) throw ValidationError("workload '" + r.workload_id + "' has no behavior labels");
      return std::string(g == Grouping::ApplicationCategory ? to_string(r.labels->category)
                                                            : to_string(r.labels->system));
    case Grouping::Suite:
      if (r.suite.empty()) throw ValidationError("workload '" + r.workload_id + "' has no suite");
      return r.suite;
    case Grouping::Stack:
      if (r.stack.empty()) throw ValidationError("workload '" + r.workload_id + "' has no stack");
      return r.stack;
  }
  return {};
}

std::vector<std::string> enum_groups(Grouping g) {
  switch (g) {
    case Grouping::ApplicationCategory:
      return {"DataAnalysis", "Service", "InteractiveAnalysis"};
    case Grouping::SystemBehavior:
      return {"CpuIntensive", "IoIntensive", "Hybrid"};
    default:
      return {};
  }
}

double metric_of(const WorkloadRecord& r, const std::string& metric) {
  const auto it = r.metrics.find(metric);
  if (it == r.metrics.end()) {
    throw ValidationError("workload '" + r.workload_id + "' has no metric '" + metric + "'");
  }
  return it->second;
}

std::vector<const WorkloadRecord*> sorted_by_id(const std::vector<WorkloadRecord>& records) {
  std::vector<const WorkloadRecord*> out;
  for (const auto& r : records) out.push_back(&r);
  std::sort(out.begin(), out.end(), [](const auto* a, const auto* b) { return a->workload_id < b->workload_id; });
  return out;
}

}  // namespace

std::string to_string(Grouping g) {
  switch (g) {
    case Grouping::ApplicationCategory: return "application_category";
    case Grouping::SystemBehavior: return "system_behavior";
    case Grouping::Suite: return "suite";
    case Grouping::Stack: return "stack";
  }
  return "?";
}

Grouping parse_grouping(const std::string& s) {
  for (Grouping g : {Grouping::ApplicationCategory, Grouping::SystemBehavior, Grouping::Suite, Grouping::Stack}) {
    if (s == to_string(g)) return g;
  }
  throw ValidationError("unknown grouping '" + s + "'");
}

GroupSummary group_summary(const std::vector<WorkloadRecord>& records, Grouping grouping,
                           const std::vector<std::string>& metrics) {
  GroupSummary s;
  s.grouping = grouping;
  s.metrics = metrics;

  std::map<std::string, std::vector<const WorkloadRecord*>> members;
  for (const auto* r : sorted_by_id(records)) members[group_key(*r, grouping)].push_back(r);

  std::vector<std::string> order = enum_groups(grouping);
  if (order.empty()) {
    for (const auto& [key, _] : members) order.push_back(key);
  }

  for (const auto& key : order) {
    const auto it = members.find(key);
    if (it == members.end()) {
      s.notes.push_back("group '" + key + "' has no members and is omitted");
      continue;
    }
    GroupRow row{key, it->second.size(), {}};
    for (const auto& m : metrics) {
      double sum = 0.0;
      for (const auto* r : it->second) sum += metric_of(*r, m);
      const double mean = sum / static_cast<double>(it->second.size());
      if (!std::isfinite(mean)) throw ValidationError("non-finite mean for metric '" + m + "' in group '" + key + "'");
      row.means[m] = mean;
    }
    s.rows.push_back(std::move(row));
  }
  return s;
}

DataMovementShare data_movement_share(const InstructionMix& mix, const IntegerBreakdown& ib) {
  for (double v : {mix.branch, mix.integer, mix.fp, mix.load, mix.store, ib.int_addr, ib.fp_addr, ib.other}) {
    if (!(v >= 0.0 && v <= 1.0)) throw ValidationError("instruction mix fractions must lie in [0,1]");
  }
  if (mix.branch + mix.integer + mix.fp + mix.load + mix.store > 1.0 + 1e-9) {
    throw ValidationError("instruction mix fractions sum above 1");
  }
  DataMovementShare s;
  s.without_branch = std::min(1.0, mix.load + mix.store + mix.integer * (ib.int_addr + ib.fp_addr));
  s.with_branch = std::min(1.0, s.without_branch + mix.branch);
  return s;
}

std::string to_string(GapFlag f) {
  switch (f) {
    case GapFlag::None: return "none";
    case GapFlag::NearOrderOfMagnitude: return "near_order_of_magnitude";
    case GapFlag::OrderOfMagnitude: return "order_of_magnitude";
  }
  return "none";
}

GapFlag classify_gap(double r) {
  if (r >= 10.0) return GapFlag::OrderOfMagnitude;
  if (r >= std::sqrt(10.0)) return GapFlag::NearOrderOfMagnitude;
  return GapFlag::None;
}

StackImpactTable stack_impact_table(const std::vector<WorkloadRecord>& records, const std::vector<std::string>& metrics) {
  StackImpactTable t;
  t.metrics = metrics;

  // algorithm -> stack -> records (id order)
  std::map<std::string, std::map<std::string, std::vector<const WorkloadRecord*>>> by_alg;
  std::set<std::string> stacks;
  for (const auto* r : sorted_by_id(records)) {
    if (r->algorithm.empty() || r->stack.empty()) continue;
    by_alg[r->algorithm][r->stack].push_back(r);
  }

  for (const auto& [alg, per_stack] : by_alg) {
    if (per_stack.size() < 2) continue;
    for (const auto& m : metrics) {
      StackImpactRow row{alg, m, {}, 1.0, GapFlag::None};
      for (const auto& [stack, rs] : per_stack) {
        double sum = 0.0;
        for (const auto* r : rs) sum += metric_of(*r, m);
        row.values[stack] = sum / static_cast<double>(rs.size());
        stacks.insert(stack);
      }
      double lo = std::numeric_limits<double>::infinity(), hi = -lo;
      for (const auto& [_, v] : row.values) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
      if (hi == lo) {
        row.max_min_ratio = 1.0;
      } else if (lo <= 0.0) {
        row.max_min_ratio = std::numeric_limits<double>::infinity();
      } else {
        row.max_min_ratio = hi / lo;
      }
      row.gap = classify_gap(row.max_min_ratio);
      t.rows.push_back(std::move(row));
    }
  }
  t.stacks.assign(stacks.begin(), stacks.end());
  return t;
}

bool empty(const ReportBundle& b) {
  const bool no_summaries = std::all_of(b.summaries.begin(), b.summaries.end(),
                                        [](const GroupSummary& s) { return s.rows.empty(); });
  return no_summaries && (!b.stack_impact || b.stack_impact->rows.empty()) && b.curves.empty() &&
         b.data_movement.empty();
}

nlohmann::json bundle_to_json(const ReportBundle& b) {
  nlohmann::json j = nlohmann::json::object();

  nlohmann::json summaries = nlohmann::json::object();
  for (const auto& s : b.summaries) {
    nlohmann::json groups = nlohmann::json::object();
    for (const auto& row : s.rows) {
      nlohmann::json means = nlohmann::json::object();
      for (const auto& [m, v] : row.means) means[m] = round4(v);
      groups[row.group] = {{"members", row.members}, {"means", means}};
    }
    summaries[to_string(s.grouping)] = {{"groups", groups}, {"notes", s.notes}};
  }
  j["summaries"] = summaries;

  nlohmann::json impact = nlohmann::json::array();
  if (b.stack_impact) {
    for (const auto& r : b.stack_impact->rows) {
      nlohmann::json values = nlohmann::json::object();
      for (const auto& [stack, v] : r.values) values[stack] = round4(v);
      impact.push_back({{"algorithm", r.algorithm},
                        {"metric", r.metric},
                        {"values", values},
                        {"max_min_ratio", json_number(r.max_min_ratio)},
                        {"gap", to_string(r.gap)}});
    }
  }
  j["stack_impact"] = impact;

  nlohmann::json curves = nlohmann::json::object();
  for (const auto& c : b.curves) {
    nlohmann::json pts = nlohmann::json::array();
    for (const auto& p : c.curve.points) pts.push_back({p.capacity_bytes, round4(p.miss_ratio)});
    curves[c.workload + "_" + to_string(c.curve.kind)] = pts;
  }
  j["curves"] = curves;

  nlohmann::json shares = nlohmann::json::object();
  for (const auto& s : b.data_movement) {
    shares[s.workload] = {{"without_branch", round4(s.share.without_branch)},
                          {"with_branch", round4(s.share.with_branch)}};
  }
  j["data_movement"] = shares;
  j["warnings"] = b.warnings;
  return j;
}

std::string summary_to_csv(const GroupSummary& s) {
  std::ostringstream out;
  out << "group,members";
  for (const auto& m : s.metrics) out << ',' << m;
  out << '\n';
  for (const auto& row : s.rows) {
    out << row.group << ',' << row.members;
    for (const auto& m : s.metrics) out << ',' << csv::fixed4(row.means.at(m));
    out << '\n';
  }
  return out.str();
}

std::string stack_impact_to_csv(const StackImpactTable& t) {
  std::ostringstream out;
  out << "algorithm,metric";
  for (const auto& s : t.stacks) out << ',' << s;
  out << ",max_min_ratio,gap\n";
  for (const auto& r : t.rows) {
    out << r.algorithm << ',' << r.metric;
    for (const auto& s : t.stacks) {
      out << ',';
      if (const auto it = r.values.find(s); it != r.values.end()) out << csv::fixed4(it->second);
    }
    out << ',' << (std::isinf(r.max_min_ratio) ? std::string("inf") : csv::fixed4(r.max_min_ratio)) << ','
        << to_string(r.gap) << '\n';
  }
  return out.str();
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::error_code ec;
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path(), ec);
    if (ec) throw IoError("cannot create directory '" + path.parent_path().string() + "': " + ec.message());
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << content;
  out.close();
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

std::vector<std::string> emit(const ReportBundle& b, const std::filesystem::path& out_dir) {
  std::vector<std::string> written;
  auto put = [&](const std::string& rel, const std::string& content) {
    write_file(out_dir / rel, content);
    written.push_back(rel);
  };

  for (const auto& s : b.summaries) put("summary_" + to_string(s.grouping) + ".csv", summary_to_csv(s));
  if (b.stack_impact) put("stack_impact.csv", stack_impact_to_csv(*b.stack_impact));
  for (const auto& c : b.curves) {
    std::ostringstream csv_out;
    csv_out << "capacity_bytes,miss_ratio\n";
    for (const auto& p : c.curve.points) csv_out << p.capacity_bytes << ',' << csv::fixed4(p.miss_ratio) << '\n';
    put("curves/" + c.workload + "_" + to_string(c.curve.kind) + ".csv", csv_out.str());
  }
  put("bundle.json", bundle_to_json(b).dump(2) + "\n");
  std::sort(written.begin(), written.end());
  return written;
}

}  // namespace wcr
