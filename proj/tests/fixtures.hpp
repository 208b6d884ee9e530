#pragma once

// Test fixtures and reference implementations shared by the unit tests and
// the acceptance runner. Nothing here calls into the code under test beyond
// constructing inputs.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "wcr/cachesim.hpp"
#include "wcr/profile_model.hpp"

namespace wcr::testing {

// A profile carrying every counter of the default schema with consistent
// values. `scale` perturbs rates so distinct profiles differ.
inline RawProfile synthetic_profile(const std::string& id, double scale = 1.0, const std::string& stack = "") {
  const std::int64_t instr = 1'000'000'000;
  const std::int64_t cycles = static_cast<std::int64_t>(800'000'000 * scale);
  auto frac = [&](double f) { return static_cast<std::int64_t>(static_cast<double>(instr) * f); };
  RawProfile p;
  p.workload_id = id;
  p.stack = stack;
  p.wall_time_s = 100.0;
  p.counters = {
      {"instructions_retired", instr},
      {"cycles", cycles},
      {"branch_instructions", frac(0.18 * scale)},
      {"integer_instructions", frac(0.30)},
      {"fp_instructions", frac(0.02 * scale)},
      {"load_instructions", frac(0.25)},
      {"store_instructions", frac(0.10)},
      {"l1i_misses", frac(0.015 * scale)},
      {"l1i_accesses", frac(0.5)},
      {"l1d_misses", frac(0.02 * scale)},
      {"l1d_accesses", frac(0.35)},
      {"l2_misses", frac(0.005 * scale)},
      {"l2_accesses", frac(0.035)},
      {"l3_misses", frac(0.001 * scale)},
      {"l3_accesses", frac(0.005)},
      {"l2_writebacks", frac(0.002)},
      {"itlb_misses", frac(0.0005 * scale)},
      {"dtlb_load_misses", frac(0.001)},
      {"dtlb_store_misses", frac(0.0004)},
      {"itlb_walk_cycles", cycles / 100},
      {"dtlb_walk_cycles", cycles / 50},
      {"mispredicted_branches", frac(0.005 * scale)},
      {"taken_branches", frac(0.1)},
      {"indirect_branches", frac(0.01)},
      {"baclears", frac(0.002)},
      {"uops_retired", frac(1.2)},
      {"fetch_stall_cycles", cycles / 4},
      {"rat_stall_cycles", cycles / 10},
      {"load_buffer_full_cycles", cycles / 40},
      {"store_buffer_full_cycles", cycles / 30},
      {"rs_full_cycles", cycles / 8},
      {"rob_full_cycles", cycles / 12},
      {"offcore_data_reads", frac(0.003)},
      {"offcore_rfos", frac(0.001)},
      {"offcore_code_reads", frac(0.0008 * scale)},
      {"snoop_hits", 40'000},
      {"snoop_hitm", 10'000},
      {"snoop_responses", 100'000},
      {"offcore_outstanding_occupancy", cycles},
      {"offcore_outstanding_cycles", cycles / 3},
      {"uops_executed", frac(1.3)},
      {"multi_issue_cycles", cycles / 2},
      {"fp_operations", frac(0.03 * scale)},
      {"offcore_bytes", frac(0.3)},
  };
  return p;
}

// Counters whose IPC and L1I MPKI equal the averages reported for the big
// data workloads: 1.28 and 15.
inline RawProfile reference_average_profile() {
  RawProfile p = synthetic_profile("reference_avg");
  p.counters["instructions_retired"] = 1'280'000;
  p.counters["cycles"] = 1'000'000;
  p.counters["l1i_misses"] = 19'200;
  p.counters["l1i_accesses"] = 400'000;
  p.counters["branch_instructions"] = 230'400;
  p.counters["integer_instructions"] = 384'000;
  p.counters["fp_instructions"] = 12'800;
  p.counters["load_instructions"] = 320'000;
  p.counters["store_instructions"] = 128'000;
  // Remaining counters scaled down with the instruction count.
  const double f = 1'280'000.0 / 1e9;
  for (auto& [name, v] : p.counters) {
    static const std::vector<std::string> fixed = {
        "instructions_retired", "cycles", "l1i_misses", "l1i_accesses", "branch_instructions",
        "integer_instructions", "fp_instructions", "load_instructions", "store_instructions"};
    if (std::find(fixed.begin(), fixed.end(), name) != fixed.end()) continue;
    if (name.find("cycles") != std::string::npos) {
      v = static_cast<std::int64_t>(static_cast<double>(v) * 1'000'000.0 / 800'000'000.0);
    } else {
      v = std::max<std::int64_t>(1, static_cast<std::int64_t>(static_cast<double>(v) * f));
    }
  }
  p.counters["snoop_responses"] = 100;
  p.counters["snoop_hits"] = 40;
  p.counters["snoop_hitm"] = 10;
  return p;
}

struct PlantedClusters {
  std::vector<MetricVector> vectors;
  std::vector<int> truth;  // planted cluster per vector, same order
  double sigma = 0.0;
  double min_center_distance = 0.0;
};

// `sizes[c]` vectors around each of sizes.size() random centers in
// [0.2, 0.8]^d, Gaussian noise `sigma`, centers at least `min_sep * sigma`
// apart. Ids are shuffled relative to clusters.
inline PlantedClusters planted_clusters(const MetricSchema& schema, const std::vector<int>& sizes, double sigma,
                                        double min_sep, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> center_coord(0.2, 0.8);
  std::normal_distribution<double> noise(0.0, sigma);
  const std::size_t d = schema.size();

  std::vector<std::vector<double>> centers;
  double min_dist = std::numeric_limits<double>::infinity();
  while (centers.size() < sizes.size()) {
    std::vector<double> c(d);
    for (auto& x : c) x = center_coord(gen);
    double nearest = std::numeric_limits<double>::infinity();
    for (const auto& o : centers) {
      double s = 0.0;
      for (std::size_t i = 0; i < d; ++i) s += (c[i] - o[i]) * (c[i] - o[i]);
      nearest = std::min(nearest, std::sqrt(s));
    }
    if (nearest < min_sep * sigma) continue;
    min_dist = std::min(min_dist, nearest);
    centers.push_back(std::move(c));
  }

  std::vector<int> order;
  for (std::size_t c = 0; c < sizes.size(); ++c) {
    for (int i = 0; i < sizes[c]; ++i) order.push_back(static_cast<int>(c));
  }
  std::shuffle(order.begin(), order.end(), gen);

  PlantedClusters out;
  out.sigma = sigma;
  out.min_center_distance = min_dist;
  for (std::size_t i = 0; i < order.size(); ++i) {
    std::vector<double> v(d);
    for (std::size_t j = 0; j < d; ++j) v[j] = std::clamp(centers[order[i]][j] + noise(gen), 0.0, 1.0);
    char id[32];
    std::snprintf(id, sizeof id, "w%03zu", i);
    out.vectors.push_back(MetricVector::create(schema, id, std::move(v)));
    out.truth.push_back(order[i]);
  }
  return out;
}

// Hubert-Arabie adjusted Rand index.
inline double adjusted_rand_index(const std::vector<int>& a, const std::vector<int>& b) {
  const std::size_t n = a.size();
  std::map<std::pair<int, int>, double> nij;
  std::map<int, double> ai, bj;
  for (std::size_t i = 0; i < n; ++i) {
    nij[{a[i], b[i]}] += 1;
    ai[a[i]] += 1;
    bj[b[i]] += 1;
  }
  auto c2 = [](double x) { return x * (x - 1) / 2; };
  double sum_ij = 0, sum_a = 0, sum_b = 0;
  for (const auto& [_, v] : nij) sum_ij += c2(v);
  for (const auto& [_, v] : ai) sum_a += c2(v);
  for (const auto& [_, v] : bj) sum_b += c2(v);
  const double expected = sum_a * sum_b / c2(static_cast<double>(n));
  const double max_index = (sum_a + sum_b) / 2;
  if (max_index == expected) return 1.0;
  return (sum_ij - expected) / (max_index - expected);
}

// Relabels clusters by order of first appearance.
inline std::vector<int> canonical_labels(const std::vector<int>& labels) {
  std::map<int, int> remap;
  std::vector<int> out;
  for (int l : labels) {
    auto [it, _] = remap.emplace(l, static_cast<int>(remap.size()));
    out.push_back(it->second);
  }
  return out;
}

inline double partition_inertia(const Eigen::MatrixXd& pts, const std::vector<int>& labels, int k) {
  Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(k, pts.cols());
  std::vector<int> counts(k, 0);
  for (Eigen::Index i = 0; i < pts.rows(); ++i) {
    sums.row(labels[i]) += pts.row(i);
    ++counts[labels[i]];
  }
  double inertia = 0.0;
  for (Eigen::Index i = 0; i < pts.rows(); ++i) {
    const Eigen::RowVectorXd c = sums.row(labels[i]) / counts[labels[i]];
    inertia += (pts.row(i) - c).squaredNorm();
  }
  return inertia;
}

struct ExhaustiveOptimum {
  double inertia = std::numeric_limits<double>::infinity();
  std::vector<int> labels;  // canonical
};

// Enumerates all k^n labelings with every cluster non-empty.
inline ExhaustiveOptimum exhaustive_kmeans(const Eigen::MatrixXd& pts, int k) {
  const int n = static_cast<int>(pts.rows());
  ExhaustiveOptimum best;
  std::vector<int> labels(n, 0);
  while (true) {
    std::vector<int> counts(k, 0);
    for (int l : labels) ++counts[l];
    if (std::all_of(counts.begin(), counts.end(), [](int c) { return c > 0; })) {
      const double inertia = partition_inertia(pts, labels, k);
      if (inertia < best.inertia) {
        best.inertia = inertia;
        best.labels = canonical_labels(labels);
      }
    }
    int i = 0;
    while (i < n && ++labels[i] == k) labels[i++] = 0;
    if (i == n) break;
  }
  return best;
}

// Mixed-kind trace with some locality: most accesses come from a hot pool.
inline std::vector<Access> random_trace(std::uint64_t seed, std::size_t n, std::uint64_t pool_lines = 4096) {
  std::mt19937_64 gen(seed);
  std::uniform_int_distribution<std::uint64_t> cold(0, pool_lines - 1);
  std::uniform_int_distribution<std::uint64_t> hot(0, pool_lines / 16);
  std::uniform_int_distribution<int> kind(0, 2);
  std::uniform_int_distribution<int> offset(0, 63);
  std::bernoulli_distribution pick_hot(0.7);
  std::vector<Access> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::uint64_t line = pick_hot(gen) ? hot(gen) : cold(gen);
    out.push_back({line * 64 + static_cast<std::uint64_t>(offset(gen)), static_cast<AccessKind>(kind(gen))});
  }
  return out;
}

// `passes` sequential sweeps over `lines` 64-byte lines.
inline AccessTrace cyclic_trace(std::uint64_t lines, int passes, AccessKind kind = AccessKind::IFetch) {
  TraceSegment seg;
  seg.accesses.reserve(lines * static_cast<std::uint64_t>(passes));
  for (int p = 0; p < passes; ++p) {
    for (std::uint64_t l = 0; l < lines; ++l) seg.accesses.push_back({0x400000 + l * 64, kind});
  }
  AccessTrace t;
  t.segments.push_back(std::move(seg));
  return t;
}

// Stack-impact fixture: L1I MPKI per algorithm and stack.
struct StackFixtureRow {
  const char* algorithm;
  double mpi, hadoop, spark;
};

inline const std::vector<StackFixtureRow>& stack_fixture() {
  static const std::vector<StackFixtureRow> rows = {
      {"WordCount", 2.0, 7.0, 17.0},   {"Sort", 3.1, 8.1, 14.3},      {"Grep", 2.9, 9.4, 16.0},
      {"Kmeans", 4.2, 10.2, 13.9},     {"NaiveBayes", 3.6, 11.5, 15.6}, {"PageRank", 4.6, 12.0, 16.2},
  };
  return rows;
}

}  // namespace wcr::testing
