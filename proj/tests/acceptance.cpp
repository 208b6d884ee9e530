// Acceptance runner: one PASS/FAIL line per criterion, non-zero exit if any
// criterion fails.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include "fixtures.hpp"
#include "wcr/cachesim.hpp"
#include "wcr/classification.hpp"
#include "wcr/ingest.hpp"
#include "wcr/reduction.hpp"
#include "wcr/report.hpp"

using namespace wcr;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

class Check {
 public:
  void expect(bool ok, const std::string& what) {
    if (!ok && out_.pass) out_.detail = what;
    out_.pass = out_.pass && ok;
  }
  void note(const std::string& s) {
    if (out_.pass) out_.detail = s;
  }
  Outcome result() const { return out_; }

 private:
  Outcome out_;
};

std::string fmt(const char* f, double a, double b = 0, double c = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

// 1 ------------------------------------------------------------------------

Outcome reduction_recovery() {
  Check c;
  const auto schema = default_schema();
  std::vector<int> sizes(17, 4);
  for (int i = 0; i < 9; ++i) sizes[i] = 5;
  const double sigma = 0.01;
  const auto planted = testing::planted_clusters(schema, sizes, sigma, 5.0, 42);
  c.expect(planted.vectors.size() == 77, "fixture must hold 77 vectors");
  c.expect(planted.min_center_distance >= 5.0 * sigma, "planted centers closer than 5 sigma");

  ReductionConfig cfg;
  cfg.fixed_k = 17;
  cfg.seed = 42;
  const auto t0 = std::chrono::steady_clock::now();
  const auto r = reduce_vectors(planted.vectors, schema, cfg);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  std::map<std::string, int> truth;
  std::vector<int> found;
  for (std::size_t i = 0; i < planted.vectors.size(); ++i) {
    truth[planted.vectors[i].workload_id()] = planted.truth[i];
    found.push_back(r.cluster_of(planted.vectors[i].workload_id()));
  }
  const double ari = testing::adjusted_rand_index(found, planted.truth);
  std::set<int> covered;
  for (const auto& id : r.representatives) covered.insert(truth.at(id));

  c.expect(r.representatives.size() == 17, "expected 17 representatives");
  c.expect(ari >= 0.95, fmt("ARI %.4f < 0.95", ari));
  c.expect(covered.size() == 17, fmt("representatives cover %.0f of 17 planted clusters", double(covered.size())));
  c.expect(secs < 10.0, fmt("took %.2f s", secs));
  c.note(fmt("ARI %.4f, %.0f/17 clusters represented, %.3f s", ari, double(covered.size()), secs));
  return c.result();
}

// 2 ------------------------------------------------------------------------

Outcome kmeans_optimality() {
  Check c;
  std::mt19937_64 gen(20240601);
  std::uniform_real_distribution<double> u(0.0, 10.0);
  int matched = 0;
  for (int inst = 0; inst < 20; ++inst) {
    const int k = inst % 2 ? 3 : 2;
    Eigen::MatrixXd x(8, 2);
    for (int i = 0; i < 8; ++i) x.row(i) << u(gen), u(gen);
    const auto best = kmeans_best_of(x, k, 0, 32);
    const auto opt = testing::exhaustive_kmeans(x, k);
    const bool same_partition = testing::canonical_labels(best.assignments) == opt.labels;
    const bool same_inertia = std::abs(best.inertia - opt.inertia) <= 1e-12 * std::max(1.0, opt.inertia);
    if (same_partition && same_inertia) ++matched;
    c.expect(same_partition && same_inertia,
             fmt("instance %.0f (k=%.0f): inertia %.12g vs optimum", inst, k, best.inertia) + fmt(" %.12g", opt.inertia));
  }
  c.note(fmt("%.0f/20 instances match the exhaustive optimum", matched));
  return c.result();
}

// 3 ------------------------------------------------------------------------

Outcome pca_properties() {
  Check c;
  std::mt19937_64 gen(99);
  std::normal_distribution<double> g(0.0, 1.0);
  std::uniform_int_distribution<int> dims(2, 12);
  double worst_orth = 0, worst_var = 0, worst_rec = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const int d = dims(gen);
    const int n = d + 5 + trial % 20;
    Eigen::MatrixXd raw(n, d);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < d; ++j) raw(i, j) = g(gen) + 0.5 * g(gen) * (j % 3) + (j ? 0.3 * raw(i, j - 1) : 0.0);
    std::vector<std::string> rows(n), cols(d);
    for (int i = 0; i < n; ++i) rows[i] = "r" + std::to_string(i);
    for (int j = 0; j < d; ++j) cols[j] = "c" + std::to_string(j);
    const auto nm = normalize_zscore(rows, cols, raw);
    const auto m = fit_pca(nm, 1.0);
    c.expect(m.retained == d, "full retention must keep every component");

    const Eigen::MatrixXd gram = m.components * m.components.transpose();
    worst_orth = std::max(worst_orth, (gram - Eigen::MatrixXd::Identity(d, d)).cwiseAbs().maxCoeff());
    const Eigen::MatrixXd scores = project(nm, m);
    for (int k = 0; k < d; ++k) {
      const double var = scores.col(k).squaredNorm() / (n - 1);
      worst_var = std::max(worst_var, std::abs(var - m.eigenvalues(k)));
    }
    worst_rec = std::max(worst_rec, (reconstruct(scores, m) - nm.data).cwiseAbs().maxCoeff());
  }
  c.expect(worst_orth <= 1e-9, fmt("orthonormality error %.3g", worst_orth));
  c.expect(worst_var <= 1e-9, fmt("variance/eigenvalue error %.3g", worst_var));
  c.expect(worst_rec <= 1e-9, fmt("reconstruction error %.3g", worst_rec));
  c.note(fmt("max errors: orth %.2g, variance %.2g, reconstruction %.2g", worst_orth, worst_var, worst_rec));
  return c.result();
}

// 4 ------------------------------------------------------------------------

Outcome classification_fixtures() {
  Check c;
  using S = SystemBehavior;
  struct Row {
    double cpu, wio, iow;
    S expect;
  };
  const Row table[] = {
      {0.84, 0, 0, S::Hybrid},         {0.85, 0, 0, S::Hybrid},          {0.86, 0, 0, S::CpuIntensive},
      {0.50, 9, 0, S::Hybrid},         {0.50, 10, 0, S::Hybrid},         {0.50, 11, 0, S::IoIntensive},
      {0.50, 0, 0.19, S::Hybrid},      {0.50, 0, 0.20, S::Hybrid},       {0.50, 0, 0.21, S::IoIntensive},
      {0.86, 11, 0.21, S::CpuIntensive}, {0.60, 11, 0.21, S::Hybrid},    {0.59, 9, 0.21, S::IoIntensive},
  };
  int sys_ok = 0;
  for (const auto& r : table) {
    const auto got = classify_system_behavior({r.cpu, r.iow, r.wio, 0, 0});
    if (got == r.expect) ++sys_ok;
    c.expect(got == r.expect, fmt("cpu %.2f wio %.0f io_wait %.2f misclassified", r.cpu, r.wio, r.iow));
  }

  struct Band {
    std::uint64_t out;
    DataRatio expect;
  };
  const std::uint64_t in = 100000;
  const Band bands[] = {{900, DataRatio::MuchLess}, {1000, DataRatio::Less},   {89000, DataRatio::Less},
                        {90000, DataRatio::Equal},  {109000, DataRatio::Equal}, {110000, DataRatio::Greater}};
  int band_ok = 0;
  for (const auto& b : bands) {
    const auto got = classify_data_behavior({in, b.out, b.out});
    const bool ok = got.output == b.expect && got.intermediate == b.expect;
    if (ok) ++band_ok;
    c.expect(ok, fmt("ratio %.3f in the wrong band", double(b.out) / double(in)));
  }
  c.note(fmt("%.0f/12 system rows, %.0f/6 data bands", sys_ok, band_ok));
  return c.result();
}

// 5 ------------------------------------------------------------------------

Outcome derived_metrics() {
  Check c;
  const auto s = default_schema();
  const auto v = derive_microarch_metrics(testing::reference_average_profile(), s);
  const double ipc = v[*s.index_of("ipc")];
  const double mpki = v[*s.index_of("l1i_mpki")];
  c.expect(ipc == 1.28, fmt("IPC %.17g", ipc));
  c.expect(mpki == 15.0, fmt("L1I MPKI %.17g", mpki));

  auto big = testing::synthetic_profile("big");
  big.counters["instructions_retired"] = 2'560'000'000;
  big.counters["cycles"] = 2'000'000'000;
  big.counters["l1i_misses"] = 38'400'000;
  const auto bv = derive_microarch_metrics(big, s);
  c.expect(bv[*s.index_of("ipc")] == 1.28, "IPC from 2.56e9 / 2e9");
  c.expect(bv[*s.index_of("l1i_mpki")] == 15.0, "L1I MPKI from 3.84e7 / 2.56e9");

  double worst = 0;
  for (int i = 0; i < 50; ++i) {
    const auto mv = derive_microarch_metrics(testing::synthetic_profile("m", 0.6 + 0.02 * i), s);
    double sum = 0;
    for (const char* m : {"branch_ratio", "integer_ratio", "fp_ratio", "load_ratio", "store_ratio", "other_ratio"}) {
      sum += mv[*s.index_of(m)];
    }
    worst = std::max(worst, std::abs(sum - 1.0));
  }
  c.expect(worst <= 1e-9, fmt("mix sums off by %.3g", worst));
  c.note(fmt("IPC %.2f, L1I MPKI %.0f, mix sum error %.2g", ipc, mpki, worst));
  return c.result();
}

// 6 ------------------------------------------------------------------------

Outcome simulator_oracle() {
  Check c;
  int cases = 0, agree = 0, monotone = 0;
  const std::vector<std::uint64_t> caps = {16 * 1024, 64 * 1024, 256 * 1024, 1024 * 1024};
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto trace = testing::random_trace(1000 + seed, 10000, 8192 + 512 * seed);
    for (auto ways : {std::optional<std::uint32_t>{}, std::optional<std::uint32_t>{8}}) {
      for (auto cap : caps) {
        CacheConfig cfg;
        cfg.capacity_bytes = cap;
        cfg.associativity = ways;
        const auto sim = simulate(trace, cfg, KindFilter::unified());
        const auto ref = stack_distance_oracle(trace, cfg.lines(), cfg.sets(), KindFilter::unified());
        ++cases;
        if (sim.misses == ref) ++agree;
      }
    }
    std::uint64_t prev = std::numeric_limits<std::uint64_t>::max();
    bool mono = true;
    for (auto cap : default_capacity_grid()) {
      CacheConfig cfg;
      cfg.capacity_bytes = cap;
      cfg.associativity = std::nullopt;
      const auto m = simulate(trace, cfg, KindFilter::unified()).misses;
      mono = mono && m <= prev;
      prev = m;
    }
    if (mono) ++monotone;
  }
  c.expect(agree == cases, fmt("%.0f/%.0f cases agree with the oracle", agree, cases));
  c.expect(monotone == 50, fmt("%.0f/50 traces monotone", monotone));
  c.note(fmt("%.0f/%.0f oracle matches, %.0f/50 monotone sweeps", agree, cases, monotone));
  return c.result();
}

// 7 ------------------------------------------------------------------------

Outcome footprint_estimation() {
  Check c;
  CacheConfig tmpl;  // 8-way, 64-byte lines
  const auto big = sweep_capacities(testing::cyclic_trace(16384, 200), default_capacity_grid(), tmpl,
                                    KindFilter::instruction());
  const auto small = sweep_capacities(testing::cyclic_trace(2048, 200), default_capacity_grid(), tmpl,
                                      KindFilter::instruction());
  const auto fb = estimate_footprint(big, 0.01);
  const auto fs_ = estimate_footprint(small, 0.01);
  c.expect(fb == 1024u * 1024, fb ? fmt("1024 KB set estimated at %.0f KB", double(*fb >> 10)) : "1024 KB set: not reached");
  c.expect(fs_ == 128u * 1024, fs_ ? fmt("128 KB set estimated at %.0f KB", double(*fs_ >> 10)) : "128 KB set: not reached");
  c.note(fmt("footprints %.0f KB and %.0f KB", fb ? double(*fb >> 10) : -1, fs_ ? double(*fs_ >> 10) : -1));
  return c.result();
}

// 8 ------------------------------------------------------------------------

Outcome stack_impact() {
  Check c;
  std::vector<WorkloadRecord> per_stack, pooled;
  for (const auto& row : testing::stack_fixture()) {
    for (auto [stack, v] : {std::pair{"MPI", row.mpi}, {"Hadoop", row.hadoop}, {"Spark", row.spark}}) {
      WorkloadRecord r;
      r.workload_id = std::string(stack) + "-" + row.algorithm;
      r.algorithm = row.algorithm;
      r.stack = stack;
      r.metrics["l1i_mpki"] = v;
      per_stack.push_back(r);
      r.stack = std::string(stack) == "MPI" ? "MPI" : "Hadoop/Spark";
      pooled.push_back(r);
    }
  }
  const auto table = stack_impact_table(per_stack, {"l1i_mpki"});
  const auto summary = group_summary(pooled, Grouping::Stack, {"l1i_mpki"});
  double mpi = -1, hs = -1;
  for (const auto& row : summary.rows) {
    if (row.group == "MPI") mpi = row.means.at("l1i_mpki");
    if (row.group == "Hadoop/Spark") hs = row.means.at("l1i_mpki");
  }
  c.expect(std::abs(mpi - 3.4) <= 0.1, fmt("MPI mean %.4f", mpi));
  c.expect(std::abs(hs - 12.6) <= 0.1, fmt("Hadoop/Spark mean %.4f", hs));

  const StackImpactRow* wc = nullptr;
  for (const auto& r : table.rows) {
    if (r.algorithm == "WordCount") wc = &r;
  }
  c.expect(wc && wc->values.at("MPI") == 2 && wc->values.at("Hadoop") == 7 && wc->values.at("Spark") == 17,
           "WordCount row values");
  c.expect(wc && std::abs(wc->max_min_ratio - 8.5) < 1e-12, "WordCount max/min ratio");
  c.expect(wc && wc->gap == GapFlag::NearOrderOfMagnitude, "WordCount gap not flagged");
  c.expect(classify_gap(hs / mpi) == GapFlag::NearOrderOfMagnitude, "pooled gap not flagged");
  c.note(fmt("MPI %.2f vs Hadoop/Spark %.2f; WordCount ratio %.1f flagged", mpi, hs, wc ? wc->max_min_ratio : 0));
  return c.result();
}

// 9 ------------------------------------------------------------------------

void spit(const fs::path& p, const std::string& s) { std::ofstream(p, std::ios::binary) << s; }

std::map<std::string, std::string> snapshot(const fs::path& dir) {
  std::map<std::string, std::string> files;
  for (const auto& e : fs::recursive_directory_iterator(dir)) {
    if (!e.is_regular_file()) continue;
    std::ifstream in(e.path(), std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    files[fs::relative(e.path(), dir).string()] = ss.str();
  }
  return files;
}

std::string quote(const fs::path& p) { return "'" + p.string() + "'"; }

Outcome end_to_end_determinism() {
  Check c;
  const fs::path root = fs::temp_directory_path() / "wcr_acceptance_e2e";
  fs::remove_all(root);
  const fs::path in = root / "inputs";
  fs::create_directories(in);

  // Inputs: 12 counter profiles with telemetry, behavior table, metadata,
  // a two-segment trace and the 77-vector planted fixture.
  const char* stacks[] = {"Hadoop", "Spark", "MPI"};
  const char* algs[] = {"WordCount", "Sort", "Grep", "Kmeans"};
  std::ostringstream counters, telemetry, behavior, meta;
  counters << "workload,node,event,count,wall_time_s,stack\n";
  telemetry << "workload,t_s,cpu_util,io_wait,weighted_io_time_ms,disk_bw,net_bw\n";
  behavior << "workload,cpu_util,io_wait,weighted_io_ratio,input_bytes,output_bytes,intermediate_bytes,category\n";
  meta << "workload,suite,algorithm,stack\n";
  for (int i = 0; i < 12; ++i) {
    const std::string id = std::string(stacks[i % 3]).substr(0, 1) + "-" + algs[i / 3];
    auto p = testing::synthetic_profile(id, 0.7 + 0.04 * i + (i % 3) * 0.2, stacks[i % 3]);
    for (const auto& [e, v] : p.counters) {
      counters << id << ",n1," << e << ',' << v / 2 << ",100," << p.stack << '\n';
      counters << id << ",n2," << e << ',' << v - v / 2 << ",101," << p.stack << '\n';
    }
    for (int t = 0; t <= 90; t += 10) {
      telemetry << id << ',' << t << ',' << 0.4 + 0.04 * i << ',' << 0.02 * (i % 4) << ',' << 150.0 * t * i << ",1e6,2e5\n";
    }
    behavior << id << ',' << 0.4 + 0.04 * i << ',' << 0.02 * (i % 4) << ',' << 0.9 * i << ",1000000," << 1000 * i * i
             << ',' << (i % 2 ? 0 : 1000000) << ',' << (i % 3 ? "DataAnalysis" : "Service") << '\n';
    meta << id << ",BigDataBench," << algs[i / 3] << ',' << stacks[i % 3] << '\n';
  }
  spit(in / "counters.csv", counters.str());
  spit(in / "telemetry.csv", telemetry.str());
  spit(in / "behavior.csv", behavior.str());
  spit(in / "meta.csv", meta.str());

  AccessTrace trace;
  trace.segments.push_back({0.5, testing::random_trace(5, 20000, 6000)});
  trace.segments.push_back({0.5, testing::random_trace(6, 20000, 3000)});
  write_binary_trace((in / "H-WordCount.bin").string(), trace, (in / "H-WordCount.bin.json").string());

  const auto schema = default_schema();
  std::vector<int> sizes(17, 4);
  for (int i = 0; i < 9; ++i) sizes[i] = 5;
  const auto planted = testing::planted_clusters(schema, sizes, 0.01, 5.0, 7);
  nlohmann::json wl = nlohmann::json::array();
  for (const auto& v : planted.vectors) wl.push_back({{"metrics", vector_to_json(v)}});
  spit(in / "planted77.json", nlohmann::json{{"schema", schema_to_json(schema)}, {"workloads", wl}}.dump());

  spit(in / "config.json", R"({"seed": 42, "restarts": 5, "k_range": [1, 8], "knee_ratio": 0.01})");

  const fs::path out = root / "out";
  const std::string exe = quote(WCR_EXE);
  const std::string cfg = " --config " + quote(in / "config.json");
  auto o = [&](const char* sub) { return " --out " + quote(out / sub); };
  const std::vector<std::string> cmds = {
      exe + " ingest --counters " + quote(in / "counters.csv") + " --telemetry " + quote(in / "telemetry.csv") + cfg + o("profiles"),
      exe + " reduce " + quote(out / "profiles/profiles.json") + cfg + o("reduce"),
      exe + " reduce " + quote(in / "planted77.json") + " --k 17 --seed 42" + cfg + o("reduce77"),
      exe + " classify " + quote(in / "behavior.csv") + cfg + o("labels"),
      exe + " simulate " + quote(in / "H-WordCount.bin") + " --kind data" + cfg + o("curves"),
      exe + " simulate " + quote(in / "H-WordCount.bin") + " --kind instruction --ways full" + cfg + o("curves"),
      exe + " footprint " + quote(out / "curves/H-WordCount_data.csv") + cfg + o("footprint"),
      exe + " report --profiles " + quote(out / "profiles/profiles.json") + " --labels " + quote(out / "labels/labels.csv") +
          " --meta " + quote(in / "meta.csv") + " --curves " + quote(out / "curves") + cfg + o("report"),
  };

  std::map<std::string, std::string> runs[2];
  for (int run = 0; run < 2; ++run) {
    fs::remove_all(out);
    for (const auto& cmd : cmds) {
      const int rc = std::system((cmd + " > /dev/null").c_str());
      c.expect(rc == 0, "command failed: " + cmd);
    }
    runs[run] = snapshot(out);
  }

  c.expect(!runs[0].empty(), "no outputs produced");
  c.expect(runs[0] == runs[1], "output directories differ between runs");
  std::size_t reps = 0;
  try {
    std::ifstream r77(out / "reduce77/reduction.json");
    reps = nlohmann::json::parse(r77)["representatives"].size();
  } catch (const std::exception&) {
  }
  c.expect(reps == 17, fmt("reduce --k 17 gave %.0f representatives", double(reps)));
  c.note(fmt("%.0f files byte-identical across two runs; 77-workload fixture -> %.0f representatives",
             double(runs[0].size()), double(reps)));
  fs::remove_all(root);
  return c.result();
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"1 reduction recovery (77 vectors, 17 planted clusters)", reduction_recovery},
      {"2 k-means optimality vs exhaustive enumeration", kmeans_optimality},
      {"3 PCA properties on 100 random matrices", pca_properties},
      {"4 classification boundary fixtures", classification_fixtures},
      {"5 derived metrics (IPC 1.28, L1I MPKI 15)", derived_metrics},
      {"6 cache simulator vs stack-distance oracle", simulator_oracle},
      {"7 footprint estimation (1024 KB and 128 KB)", footprint_estimation},
      {"8 stack-impact report (3.4 vs 12.6)", stack_impact},
      {"9 end-to-end determinism", end_to_end_determinism},
  };
  int failed = 0;
  for (const auto& [name, fn] : criteria) {
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failed;
    std::cout << (o.pass ? "PASS" : "FAIL") << "  criterion " << name << "  [" << o.detail << "]" << std::endl;
  }
  std::cout << (criteria.size() - failed) << "/" << criteria.size() << " criteria passed" << std::endl;
  return failed == 0 ? 0 : 1;
}
