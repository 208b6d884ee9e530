#include "wcr/ingest.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <tuple>
#include <unordered_map>

#include "wcr/csv.hpp"
#include "wcr/error.hpp"

namespace wcr {

std::vector<RawProfile> parse_counter_csv(std::istream& in) {
  std::size_t line_no = 0;
  const std::size_t columns =
      csv::expect_header(in, line_no, {"workload", "node", "event", "count", "wall_time_s"}, {"stack"});

  std::vector<RawProfile> profiles;
  std::unordered_map<std::string, std::size_t> index;
  std::map<std::string, std::set<std::string>> nodes;
  std::set<std::tuple<std::string, std::string, std::string>> seen;

  std::string line;
  while (csv::next_line(in, line, line_no)) {
    const auto f = csv::split(line);
    if (f.size() != columns) {
      throw ValidationError("line " + std::to_string(line_no) + ": expected " + std::to_string(columns) +
                            " fields, got " + std::to_string(f.size()));
    }
    const std::string& workload = f[0];
    const std::string& node = f[1];
    if (workload.empty()) throw ValidationError("line " + std::to_string(line_no) + ": empty workload");
    const std::string event = canonical_counter_name(f[2]);
    if (event.empty()) throw ValidationError("line " + std::to_string(line_no) + ": empty event");
    const std::int64_t count = csv::to_int(f[3], line_no, "count");
    if (count < 0) throw ValidationError("line " + std::to_string(line_no) + ": negative count");
    const double wall = csv::to_double(f[4], line_no, "wall_time_s");

    if (!seen.emplace(workload, node, event).second) {
      throw ValidationError("line " + std::to_string(line_no) + ": duplicate (" + workload + "," + node + "," +
                            event + ")");
    }

    auto [it, inserted] = index.try_emplace(workload, profiles.size());
    if (inserted) {
      profiles.push_back(RawProfile{workload, {}, {}, 0.0, 0});
    }
    RawProfile& p = profiles[it->second];
    p.counters[event] += count;
    p.wall_time_s = std::max(p.wall_time_s, wall);
    if (columns == 6 && !f[5].empty()) {
      if (!p.stack.empty() && p.stack != f[5]) {
        throw ValidationError("line " + std::to_string(line_no) + ": conflicting stack for '" + workload + "'");
      }
      p.stack = f[5];
    }
    nodes[workload].insert(node);
  }
  for (auto& p : profiles) p.node_count = static_cast<int>(nodes[p.workload_id].size());
  return profiles;
}

std::vector<SystemTelemetry> parse_telemetry_csv(std::istream& in) {
  std::size_t line_no = 0;
  csv::expect_header(in, line_no, {"workload", "t_s", "cpu_util", "io_wait", "weighted_io_time_ms", "disk_bw", "net_bw"});

  std::vector<SystemTelemetry> out;
  std::unordered_map<std::string, std::size_t> index;
  std::string line;
  while (csv::next_line(in, line, line_no)) {
    const auto f = csv::split(line);
    if (f.size() != 7) {
      throw ValidationError("line " + std::to_string(line_no) + ": expected 7 fields, got " + std::to_string(f.size()));
    }
    if (f[0].empty()) throw ValidationError("line " + std::to_string(line_no) + ": empty workload");
    TelemetrySample s{csv::to_double(f[1], line_no, "t_s"),
                      csv::to_double(f[2], line_no, "cpu_util"),
                      csv::to_double(f[3], line_no, "io_wait"),
                      csv::to_double(f[4], line_no, "weighted_io_time_ms"),
                      csv::to_double(f[5], line_no, "disk_bw"),
                      csv::to_double(f[6], line_no, "net_bw")};
    auto [it, inserted] = index.try_emplace(f[0], out.size());
    if (inserted) out.push_back(SystemTelemetry{f[0], {}});
    auto& t = out[it->second];
    if (!t.samples.empty() && !(s.t_s > t.samples.back().t_s)) {
      throw ValidationError("line " + std::to_string(line_no) + ": t_s not increasing for '" + f[0] + "'");
    }
    t.samples.push_back(s);
  }
  for (const auto& t : out) check_telemetry(t);
  return out;
}

SystemTelemetry trim_ramp_up(const SystemTelemetry& t, double warmup_s) {
  if (!(warmup_s >= 0.0)) throw ValidationError("warmup must be >= 0");
  SystemTelemetry out{t.workload_id, {}};
  std::copy_if(t.samples.begin(), t.samples.end(), std::back_inserter(out.samples),
               [&](const TelemetrySample& s) { return s.t_s >= warmup_s; });
  if (out.samples.empty()) {
    throw ValidationError("telemetry of '" + t.workload_id + "': no steady-state samples");
  }
  return out;
}

namespace {

double counter_sum(const RawProfile& p, const std::vector<std::string>& names) {
  double total = 0.0;
  for (const auto& n : names) total += static_cast<double>(p.counters.at(n));
  return total;
}

}  // namespace

MetricVector derive_microarch_metrics(const RawProfile& p, const MetricSchema& s) {
  const auto violations = validate_profile(p, s);
  if (!violations.empty()) {
    std::string msg = "profile '" + p.workload_id + "' is not valid for schema " + s.version() + ":";
    for (const auto& v : violations) msg += "\n  " + v;
    throw ValidationError(msg);
  }

  const double instructions = static_cast<double>(p.counters.at(std::string(kInstructionsRetired)));
  const double cycles = static_cast<double>(p.counters.at(std::string(kCycles)));

  std::vector<double> values;
  values.reserve(s.size());
  for (const auto& d : s.metrics()) {
    const Formula f = parse_formula(d.formula_id);
    const double num = counter_sum(p, f.numerator);
    double den = 0.0;
    double scale = 1.0;
    switch (f.kind) {
      case FormulaKind::Ratio:
      case FormulaKind::PerByte:
      case FormulaKind::Quotient:
        den = counter_sum(p, f.denominator);
        break;
      case FormulaKind::Mpki:
        den = instructions;
        scale = 1000.0;
        break;
      case FormulaKind::PerCycle:
        den = cycles;
        break;
      case FormulaKind::Remainder:
        den = instructions;
        break;
    }
    if (den == 0.0) {
      throw ValidationError("profile '" + p.workload_id + "': metric '" + d.name + "' has a zero denominator");
    }
    double v = f.kind == FormulaKind::Remainder ? (instructions - num) / den : scale * num / den;
    if (d.unit == MetricUnit::Ratio && (v < 0.0 || v > 1.0)) {
      throw ValidationError("profile '" + p.workload_id + "': metric '" + d.name + "' = " + std::to_string(v) +
                            " is outside [0,1]");
    }
    values.push_back(v);
  }
  return MetricVector::create(s, p.workload_id, std::move(values));
}

SystemBehaviorMetrics aggregate_telemetry(const SystemTelemetry& t, double runtime_s) {
  if (!(runtime_s > 0.0)) throw ValidationError("runtime must be > 0");
  if (t.samples.empty()) throw ValidationError("telemetry of '" + t.workload_id + "' is empty");
  check_telemetry(t);

  const auto& s = t.samples;
  auto mean = [&](auto field) {
    if (s.size() == 1) return s.front().*field;
    double area = 0.0;
    for (std::size_t i = 1; i < s.size(); ++i) {
      area += 0.5 * (s[i - 1].*field + s[i].*field) * (s[i].t_s - s[i - 1].t_s);
    }
    const double v = area / (s.back().t_s - s.front().t_s);
    // A constant series must come back exactly.
    const auto [lo, hi] = std::minmax_element(s.begin(), s.end(), [&](const auto& a, const auto& b) {
      return a.*field < b.*field;
    });
    return std::clamp(v, (*lo).*field, (*hi).*field);
  };

  SystemBehaviorMetrics m;
  m.cpu_util = mean(&TelemetrySample::cpu_util);
  m.io_wait = mean(&TelemetrySample::io_wait);
  m.disk_bw_Bps = mean(&TelemetrySample::disk_bw_Bps);
  m.net_bw_Bps = mean(&TelemetrySample::net_bw_Bps);
  const double io_ms = s.back().weighted_io_time_ms - s.front().weighted_io_time_ms;
  m.weighted_io_ratio = std::max(0.0, io_ms) / (runtime_s * 1000.0);
  return m;
}

IntegerBreakdown integer_breakdown(const IntegerOpCounts& counts) {
  const double total = static_cast<double>(counts.int_addr_calc) + static_cast<double>(counts.fp_addr_calc) +
                       static_cast<double>(counts.other_calc);
  if (total == 0.0) throw ValidationError("integer breakdown: all counts are zero");
  return {static_cast<double>(counts.int_addr_calc) / total, static_cast<double>(counts.fp_addr_calc) / total,
          static_cast<double>(counts.other_calc) / total};
}

}  // namespace wcr
