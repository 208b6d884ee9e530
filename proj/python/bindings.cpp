#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "wcr/cachesim.hpp"
#include "wcr/classification.hpp"
#include "wcr/error.hpp"
#include "wcr/ingest.hpp"
#include "wcr/profile_model.hpp"
#include "wcr/reduction.hpp"
#include "wcr/report.hpp"

namespace py = pybind11;
using namespace wcr;

namespace {

MetricSchema schema_or_default(const std::optional<std::string>& path) {
  return path ? load_schema(*path) : default_schema();
}

std::vector<Access> make_accesses(const std::vector<std::uint64_t>& addresses, const std::vector<int>& kinds) {
  if (addresses.size() != kinds.size()) throw ValidationError("addresses and kinds differ in length");
  std::vector<Access> out;
  out.reserve(addresses.size());
  for (std::size_t i = 0; i < addresses.size(); ++i) {
    if (kinds[i] < 0 || kinds[i] > 2) throw ValidationError("access kind must be 0 (ifetch), 1 (load) or 2 (store)");
    out.push_back({addresses[i], static_cast<AccessKind>(kinds[i])});
  }
  return out;
}

CacheConfig make_config(std::uint64_t capacity, std::uint64_t line, std::optional<std::uint32_t> ways, bool wa) {
  CacheConfig c;
  c.capacity_bytes = capacity;
  c.line_bytes = line;
  c.associativity = ways;
  c.write_allocate = wa;
  return c;
}

py::dict clustering_dict(const Clustering& c) {
  py::dict d;
  d["k"] = c.k;
  d["assignments"] = c.assignments;
  d["centroids"] = c.centroids;
  d["inertia"] = c.inertia;
  d["iterations"] = c.iterations;
  d["seed"] = c.seed;
  d["inertia_trace"] = c.inertia_trace;
  return d;
}

Clustering clustering_from(const std::vector<int>& assignments, const Eigen::MatrixXd& centroids) {
  Clustering c;
  c.k = static_cast<int>(centroids.rows());
  c.assignments = assignments;
  c.centroids = centroids;
  return c;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Workload characterization and reduction toolkit";

  py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
  py::register_exception<IoError>(m, "IoError", PyExc_OSError);

  m.def(
      "schema_metrics",
      [](std::optional<std::string> path) {
        std::vector<std::tuple<std::string, std::string, std::string, std::string>> out;
        const auto schema = schema_or_default(path);
        for (const auto& d : schema.metrics()) {
          out.emplace_back(d.name, std::string(to_string(d.group)), std::string(to_string(d.unit)), d.formula_id);
        }
        return out;
      },
      py::arg("schema_path") = py::none(), "(name, group, unit, formula) for every metric of a schema.");
  m.def("schema_version", [](std::optional<std::string> path) { return schema_or_default(path).version(); },
        py::arg("schema_path") = py::none());

  m.def(
      "derive_metrics",
      [](const std::map<std::string, std::int64_t>& counters, std::optional<std::string> schema_path,
         double wall_time_s) {
        const auto s = schema_or_default(schema_path);
        RawProfile p;
        p.workload_id = "python";
        p.wall_time_s = wall_time_s;
        for (const auto& [name, v] : counters) p.counters[canonical_counter_name(name)] += v;
        const auto v = derive_microarch_metrics(p, s);
        std::map<std::string, double> out;
        for (std::size_t i = 0; i < s.size(); ++i) out[s.metrics()[i].name] = v[i];
        return out;
      },
      py::arg("counters"), py::arg("schema_path") = py::none(), py::arg("wall_time_s") = 1.0,
      "Counter name -> count to metric name -> value.");

  m.def(
      "integer_breakdown",
      [](std::uint64_t int_addr, std::uint64_t fp_addr, std::uint64_t other) {
        const auto b = integer_breakdown({int_addr, fp_addr, other});
        return std::make_tuple(b.int_addr, b.fp_addr, b.other);
      },
      py::arg("int_addr_calc"), py::arg("fp_addr_calc"), py::arg("other_calc"));

  m.def(
      "classify_system_behavior",
      [](double cpu_util, double io_wait, double weighted_io_ratio) {
        return std::string(to_string(classify_system_behavior({cpu_util, io_wait, weighted_io_ratio, 0, 0})));
      },
      py::arg("cpu_util"), py::arg("io_wait") = 0.0, py::arg("weighted_io_ratio") = 0.0);
  m.def(
      "classify_data_behavior",
      [](std::uint64_t input, std::uint64_t output, std::uint64_t intermediate) {
        const auto d = classify_data_behavior({input, output, intermediate});
        return std::make_pair(std::string(to_string(d.output)), std::string(to_string(d.intermediate)));
      },
      py::arg("input_bytes"), py::arg("output_bytes"), py::arg("intermediate_bytes") = 0);

  m.def(
      "normalize_zscore",
      [](const Eigen::MatrixXd& raw) {
        std::vector<std::string> rows, cols;
        for (Eigen::Index i = 0; i < raw.rows(); ++i) rows.push_back(std::to_string(i));
        for (Eigen::Index j = 0; j < raw.cols(); ++j) cols.push_back(std::to_string(j));
        const auto nm = normalize_zscore(rows, cols, raw);
        std::vector<int> kept, dropped;
        for (const auto& c : nm.cols) kept.push_back(std::stoi(c));
        for (const auto& c : nm.dropped_cols) dropped.push_back(std::stoi(c));
        return py::make_tuple(nm.data, kept, dropped);
      },
      py::arg("matrix"), "Returns (z-scores, kept column indices, dropped column indices).");

  m.def(
      "fit_pca",
      [](const Eigen::MatrixXd& centered, double target) {
        const auto p = fit_pca(centered, target);
        py::dict d;
        d["components"] = p.components;
        d["eigenvalues"] = p.eigenvalues;
        d["explained_variance_ratio"] = p.explained_variance_ratio;
        d["retained"] = p.retained;
        return d;
      },
      py::arg("centered"), py::arg("variance_target") = kDefaultVarianceTarget);

  m.def(
      "kmeans",
      [](const Eigen::MatrixXd& points, int k, std::uint64_t seed, int restarts, int max_iter, double tol) {
        return clustering_dict(kmeans_best_of(points, k, seed, restarts, {max_iter, tol}));
      },
      py::arg("points"), py::arg("k"), py::arg("seed") = 42, py::arg("restarts") = 1, py::arg("max_iter") = 300,
      py::arg("tol") = 1e-6);
  m.def("choose_k", &choose_k, py::arg("points"), py::arg("k_min"), py::arg("k_max"), py::arg("seed") = 42,
        py::arg("restarts") = kDefaultRestarts);
  m.def(
      "bic_score",
      [](const Eigen::MatrixXd& points, const std::vector<int>& assignments, const Eigen::MatrixXd& centroids) {
        auto c = clustering_from(assignments, centroids);
        c.inertia = recompute_inertia(points, c);
        return bic_score(points, c);
      },
      py::arg("points"), py::arg("assignments"), py::arg("centroids"));
  m.def(
      "select_representatives",
      [](const Eigen::MatrixXd& points, const std::vector<int>& assignments, const Eigen::MatrixXd& centroids,
         const std::vector<std::string>& ids) {
        return select_representatives(clustering_from(assignments, centroids), points, ids);
      },
      py::arg("points"), py::arg("assignments"), py::arg("centroids"), py::arg("ids"));

  m.def(
      "reduce",
      [](const std::vector<std::string>& ids, const Eigen::MatrixXd& values, std::optional<int> k, double variance_target,
         int k_min, int k_max, std::uint64_t seed, int restarts, std::optional<std::string> schema_path) {
        const auto s = schema_or_default(schema_path);
        if (static_cast<std::size_t>(values.rows()) != ids.size()) throw ValidationError("ids and rows differ in count");
        std::vector<MetricVector> vectors;
        for (Eigen::Index i = 0; i < values.rows(); ++i) {
          const Eigen::RowVectorXd r = values.row(i);
          vectors.push_back(MetricVector::create(s, ids[i], std::vector<double>(r.data(), r.data() + r.size())));
        }
        ReductionConfig cfg;
        cfg.fixed_k = k;
        cfg.variance_target = variance_target;
        cfg.k_min = k_min;
        cfg.k_max = k_max;
        cfg.seed = seed;
        cfg.restarts = restarts;
        const auto r = reduce_vectors(std::move(vectors), s, cfg);
        py::dict d = clustering_dict(r.clustering);
        d["workload_ids"] = r.workload_ids;
        d["representatives"] = r.representatives;
        d["cluster_sizes"] = r.cluster_sizes;
        d["retained_components"] = r.pca.retained;
        d["dropped_metrics"] = r.normalized.dropped_cols;
        d["projected"] = r.projected;
        return d;
      },
      py::arg("ids"), py::arg("values"), py::arg("k") = py::none(), py::arg("variance_target") = kDefaultVarianceTarget,
      py::arg("k_min") = 1, py::arg("k_max") = 20, py::arg("seed") = 42, py::arg("restarts") = kDefaultRestarts,
      py::arg("schema_path") = py::none(),
      "Full subsetting pipeline over metric vectors (rows aligned to the schema).");

  m.def(
      "simulate",
      [](const std::vector<std::uint64_t>& addresses, const std::vector<int>& kinds, std::uint64_t capacity,
         std::uint64_t line, std::optional<std::uint32_t> ways, bool write_allocate, const std::string& kind) {
        const auto r = simulate(make_accesses(addresses, kinds), make_config(capacity, line, ways, write_allocate),
                                filter_for(parse_curve_kind(kind)));
        return py::make_tuple(r.accesses, r.misses, r.miss_ratio);
      },
      py::arg("addresses"), py::arg("kinds"), py::arg("capacity_bytes"), py::arg("line_bytes") = 64,
      py::arg("ways") = 8, py::arg("write_allocate") = true, py::arg("kind") = "unified",
      "Returns (accesses, misses, miss_ratio). ways=None is fully associative.");
  m.def(
      "stack_distance_oracle",
      [](const std::vector<std::uint64_t>& addresses, const std::vector<int>& kinds, std::uint64_t capacity_lines,
         std::uint64_t set_count, std::uint64_t line, bool write_allocate, const std::string& kind) {
        return stack_distance_oracle(make_accesses(addresses, kinds), capacity_lines, set_count,
                                     filter_for(parse_curve_kind(kind)), line, write_allocate);
      },
      py::arg("addresses"), py::arg("kinds"), py::arg("capacity_lines"), py::arg("set_count"), py::arg("line_bytes") = 64,
      py::arg("write_allocate") = true, py::arg("kind") = "unified");
  m.def(
      "sweep_capacities",
      [](const std::vector<std::uint64_t>& addresses, const std::vector<int>& kinds,
         std::optional<std::vector<std::uint64_t>> sizes, std::uint64_t line, std::optional<std::uint32_t> ways,
         bool write_allocate, const std::string& kind) {
        AccessTrace t;
        t.segments.push_back({1.0, make_accesses(addresses, kinds)});
        const auto c = sweep_capacities(t, sizes ? *sizes : default_capacity_grid(),
                                        make_config(32 * 1024, line, ways, write_allocate),
                                        filter_for(parse_curve_kind(kind)));
        std::vector<std::pair<std::uint64_t, double>> out;
        for (const auto& p : c.points) out.emplace_back(p.capacity_bytes, p.miss_ratio);
        return out;
      },
      py::arg("addresses"), py::arg("kinds"), py::arg("sizes") = py::none(), py::arg("line_bytes") = 64,
      py::arg("ways") = 8, py::arg("write_allocate") = true, py::arg("kind") = "unified");
  m.def("default_capacity_grid", &default_capacity_grid);
  m.def(
      "estimate_footprint",
      [](const std::vector<std::pair<std::uint64_t, double>>& points, double knee) {
        MissRatioCurve c;
        for (const auto& [cap, ratio] : points) c.points.push_back({cap, ratio});
        return estimate_footprint(c, knee);
      },
      py::arg("curve"), py::arg("knee_ratio") = kDefaultKneeRatio,
      "Smallest capacity with miss ratio below the knee, or None.");

  m.def(
      "data_movement_share",
      [](double branch, double integer, double fp, double load, double store, double int_addr, double fp_addr,
         double other) {
        const auto s = data_movement_share({branch, integer, fp, load, store}, {int_addr, fp_addr, other});
        return py::make_tuple(s.without_branch, s.with_branch);
      },
      py::arg("branch"), py::arg("integer"), py::arg("fp"), py::arg("load"), py::arg("store"), py::arg("int_addr"),
      py::arg("fp_addr"), py::arg("other"), "Returns (without_branch, with_branch).");
}
