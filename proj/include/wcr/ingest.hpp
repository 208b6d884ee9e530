#pragma once

#include <cstdint>
#include <istream>
#include <vector>

#include "wcr/profile_model.hpp"

namespace wcr {

// Counter CSV: header `workload,node,event,count,wall_time_s` with an optional
// trailing `stack` column. Counts for one (workload, event) are summed across
// nodes, wall time is the max across nodes. Event names are canonicalized
// before duplicate detection. Profiles come back in first-appearance order.
std::vector<RawProfile> parse_counter_csv(std::istream& in);

// Telemetry CSV: `workload,t_s,cpu_util,io_wait,weighted_io_time_ms,disk_bw,net_bw`.
std::vector<SystemTelemetry> parse_telemetry_csv(std::istream& in);

inline constexpr double kDefaultWarmupSeconds = 30.0;

// Keeps samples with t_s >= warmup_s.
SystemTelemetry trim_ramp_up(const SystemTelemetry& t, double warmup_s = kDefaultWarmupSeconds);

MetricVector derive_microarch_metrics(const RawProfile& p, const MetricSchema& s);

// Time-weighted (trapezoidal) means of the series; the weighted I/O ratio is
// the growth of the cumulative weighted I/O time divided by runtime.
SystemBehaviorMetrics aggregate_telemetry(const SystemTelemetry& t, double runtime_s);

struct IntegerOpCounts {
  std::uint64_t int_addr_calc = 0;
  std::uint64_t fp_addr_calc = 0;
  std::uint64_t other_calc = 0;
};

struct IntegerBreakdown {
  double int_addr = 0.0;
  double fp_addr = 0.0;
  double other = 0.0;
};

IntegerBreakdown integer_breakdown(const IntegerOpCounts& counts);

}  // namespace wcr
