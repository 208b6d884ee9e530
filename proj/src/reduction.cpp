#include "wcr/reduction.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "wcr/error.hpp"
#include "wcr/ingest.hpp"

namespace wcr {

namespace {

// Uniform double in [0, 1) built from the top 53 bits, so the stream is the
// same on every standard library (std::uniform_real_distribution is not).
double unit_uniform(std::mt19937_64& gen) { return static_cast<double>(gen() >> 11) * 0x1.0p-53; }

std::size_t uniform_index(std::mt19937_64& gen, std::size_t n) {
  return std::min(n - 1, static_cast<std::size_t>(unit_uniform(gen) * static_cast<double>(n)));
}

double sq_dist(const Eigen::MatrixXd& a, Eigen::Index i, const Eigen::MatrixXd& b, Eigen::Index j) {
  return (a.row(i) - b.row(j)).squaredNorm();
}

Eigen::MatrixXd kmeanspp_init(const Eigen::MatrixXd& points, int k, std::mt19937_64& gen) {
  const auto n = static_cast<std::size_t>(points.rows());
  Eigen::MatrixXd centroids(k, points.cols());
  centroids.row(0) = points.row(static_cast<Eigen::Index>(uniform_index(gen, n)));

  std::vector<double> d2(n);
  for (std::size_t i = 0; i < n; ++i) d2[i] = sq_dist(points, static_cast<Eigen::Index>(i), centroids, 0);

  for (int c = 1; c < k; ++c) {
    const double total = std::accumulate(d2.begin(), d2.end(), 0.0);
    std::size_t pick = 0;
    if (total > 0.0) {
      const double target = unit_uniform(gen) * total;
      double cum = 0.0;
      pick = n;
      std::size_t last_positive = 0;
      for (std::size_t i = 0; i < n; ++i) {
        if (d2[i] <= 0.0) continue;
        last_positive = i;
        cum += d2[i];
        if (cum > target) {
          pick = i;
          break;
        }
      }
      if (pick == n) pick = last_positive;
    } else {
      pick = uniform_index(gen, n);
    }
    centroids.row(c) = points.row(static_cast<Eigen::Index>(pick));
    for (std::size_t i = 0; i < n; ++i) {
      d2[i] = std::min(d2[i], sq_dist(points, static_cast<Eigen::Index>(i), centroids, c));
    }
  }
  return centroids;
}

}  // namespace

// ---------------------------------------------------------------------------
// Normalization

NormalizedMatrix normalize_zscore(const std::vector<std::string>& row_ids, const std::vector<std::string>& col_names,
                                  const Eigen::MatrixXd& raw) {
  if (raw.rows() < 2) throw ValidationError("normalization needs at least 2 rows");
  if (static_cast<std::size_t>(raw.rows()) != row_ids.size() ||
      static_cast<std::size_t>(raw.cols()) != col_names.size()) {
    throw ValidationError("normalization: matrix shape does not match row/column labels");
  }
  const double n = static_cast<double>(raw.rows());

  std::vector<Eigen::Index> keep;
  NormalizedMatrix nm;
  nm.rows = row_ids;
  std::vector<double> means, stds;
  for (Eigen::Index c = 0; c < raw.cols(); ++c) {
    const double mean = raw.col(c).sum() / n;
    const double var = (raw.col(c).array() - mean).square().sum() / (n - 1.0);
    const double sd = std::sqrt(var);
    if (sd == 0.0 || sd <= 1e-12 * std::fabs(mean)) {
      nm.dropped_cols.push_back(col_names[static_cast<std::size_t>(c)]);
      continue;
    }
    keep.push_back(c);
    nm.cols.push_back(col_names[static_cast<std::size_t>(c)]);
    means.push_back(mean);
    stds.push_back(sd);
  }

  nm.data.resize(raw.rows(), static_cast<Eigen::Index>(keep.size()));
  nm.col_means = Eigen::Map<Eigen::VectorXd>(means.data(), static_cast<Eigen::Index>(means.size()));
  nm.col_stds = Eigen::Map<Eigen::VectorXd>(stds.data(), static_cast<Eigen::Index>(stds.size()));
  for (std::size_t j = 0; j < keep.size(); ++j) {
    nm.data.col(static_cast<Eigen::Index>(j)) = (raw.col(keep[j]).array() - means[j]) / stds[j];
  }
  return nm;
}

NormalizedMatrix normalize_zscore(std::span<const MetricVector> vectors, const MetricSchema& schema) {
  Eigen::MatrixXd raw(static_cast<Eigen::Index>(vectors.size()), static_cast<Eigen::Index>(schema.size()));
  std::vector<std::string> ids;
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    const auto& v = vectors[i];
    if (v.values().size() != schema.size() || v.schema_version() != schema.version()) {
      throw ValidationError("metric vector '" + v.workload_id() + "' is not aligned to schema " + schema.version());
    }
    ids.push_back(v.workload_id());
    for (std::size_t j = 0; j < schema.size(); ++j) {
      raw(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = v.values()[j];
    }
  }
  return normalize_zscore(ids, schema.names(), raw);
}

// ---------------------------------------------------------------------------
// PCA

PcaModel fit_pca(const Eigen::MatrixXd& centered, double variance_target) {
  if (!(variance_target > 0.0 && variance_target <= 1.0)) {
    throw ValidationError("variance target must be in (0, 1]");
  }
  if (centered.rows() < 2) throw ValidationError("PCA needs at least 2 rows");
  const Eigen::Index d = centered.cols();
  PcaModel m;
  if (d == 0) {
    m.components.resize(0, 0);
    m.eigenvalues.resize(0);
    m.explained_variance_ratio.resize(0);
    return m;
  }

  const Eigen::MatrixXd cov = (centered.transpose() * centered) / static_cast<double>(centered.rows() - 1);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov);
  if (solver.info() != Eigen::Success) throw ValidationError("PCA eigendecomposition failed");

  // Eigen returns ascending order.
  m.eigenvalues = solver.eigenvalues().reverse().cwiseMax(0.0);
  Eigen::MatrixXd vectors = solver.eigenvectors().rowwise().reverse().transpose();  // rows = components

  for (Eigen::Index r = 0; r < d; ++r) {
    Eigen::Index arg = 0;
    for (Eigen::Index c = 1; c < d; ++c) {
      if (std::fabs(vectors(r, c)) > std::fabs(vectors(r, arg))) arg = c;
    }
    if (vectors(r, arg) < 0.0) vectors.row(r) *= -1.0;
  }

  const double total = m.eigenvalues.sum();
  m.explained_variance_ratio =
      total > 0.0 ? Eigen::VectorXd(m.eigenvalues / total) : Eigen::VectorXd(Eigen::VectorXd::Zero(d));

  if (variance_target >= 1.0) {
    m.retained = static_cast<int>(d);
  } else if (total > 0.0) {
    double cum = 0.0;
    m.retained = static_cast<int>(d);
    for (Eigen::Index i = 0; i < d; ++i) {
      cum += m.eigenvalues(i);
      if (cum >= variance_target * total) {
        m.retained = static_cast<int>(i + 1);
        break;
      }
    }
  }
  m.components = vectors.topRows(m.retained);
  return m;
}

PcaModel fit_pca(const NormalizedMatrix& nm, double variance_target) { return fit_pca(nm.data, variance_target); }

Eigen::MatrixXd project(const Eigen::MatrixXd& data, const PcaModel& m) {
  if (m.retained > 0 && data.cols() != m.components.cols()) {
    throw ValidationError("projection: data has " + std::to_string(data.cols()) + " columns, model expects " +
                          std::to_string(m.components.cols()));
  }
  if (m.retained == 0) return Eigen::MatrixXd(data.rows(), 0);
  return data * m.components.transpose();
}

Eigen::MatrixXd project(const NormalizedMatrix& nm, const PcaModel& m) { return project(nm.data, m); }

Eigen::MatrixXd reconstruct(const Eigen::MatrixXd& scores, const PcaModel& m) {
  if (scores.cols() != m.retained) throw ValidationError("reconstruction: score width does not match model");
  return scores * m.components;
}

// ---------------------------------------------------------------------------
// K-means

Clustering kmeans(const Eigen::MatrixXd& points, int k, std::uint64_t seed, KMeansOptions opts) {
  const Eigen::Index n = points.rows();
  if (k <= 0) throw ValidationError("k must be positive");
  if (k > n) throw ValidationError("k = " + std::to_string(k) + " exceeds the number of points (" + std::to_string(n) + ")");
  if (opts.max_iter <= 0) throw ValidationError("max_iter must be positive");

  std::mt19937_64 gen(seed);
  Clustering c;
  c.k = k;
  c.seed = seed;
  c.centroids = kmeanspp_init(points, k, gen);
  c.assignments.assign(static_cast<std::size_t>(n), 0);

  std::vector<double> dist(static_cast<std::size_t>(n));
  std::vector<int> counts(static_cast<std::size_t>(k));
  for (int it = 0; it < opts.max_iter; ++it) {
    // Assignment, ties to the lowest cluster index.
    std::fill(counts.begin(), counts.end(), 0);
    for (Eigen::Index i = 0; i < n; ++i) {
      int best = 0;
      double best_d = sq_dist(points, i, c.centroids, 0);
      for (int j = 1; j < k; ++j) {
        const double dj = sq_dist(points, i, c.centroids, j);
        if (dj < best_d) {
          best_d = dj;
          best = j;
        }
      }
      c.assignments[static_cast<std::size_t>(i)] = best;
      dist[static_cast<std::size_t>(i)] = best_d;
      ++counts[static_cast<std::size_t>(best)];
    }

    // Empty clusters take the point farthest from its centroid.
    for (int j = 0; j < k; ++j) {
      if (counts[static_cast<std::size_t>(j)] > 0) continue;
      Eigen::Index far = -1;
      for (Eigen::Index i = 0; i < n; ++i) {
        const auto owner = static_cast<std::size_t>(c.assignments[static_cast<std::size_t>(i)]);
        if (counts[owner] < 2) continue;
        if (far < 0 || dist[static_cast<std::size_t>(i)] > dist[static_cast<std::size_t>(far)]) far = i;
      }
      const auto f = static_cast<std::size_t>(far);
      --counts[static_cast<std::size_t>(c.assignments[f])];
      c.assignments[f] = j;
      counts[static_cast<std::size_t>(j)] = 1;
      dist[f] = 0.0;
      c.centroids.row(j) = points.row(far);
    }

    Eigen::MatrixXd next = Eigen::MatrixXd::Zero(k, points.cols());
    for (Eigen::Index i = 0; i < n; ++i) next.row(c.assignments[static_cast<std::size_t>(i)]) += points.row(i);
    for (int j = 0; j < k; ++j) next.row(j) /= static_cast<double>(counts[static_cast<std::size_t>(j)]);

    double shift = 0.0;
    for (int j = 0; j < k; ++j) shift = std::max(shift, (next.row(j) - c.centroids.row(j)).norm());
    c.centroids = std::move(next);
    c.iterations = it + 1;
    c.inertia = recompute_inertia(points, c);
    c.inertia_trace.push_back(c.inertia);
    if (shift < opts.tol) break;
  }
  return c;
}

Clustering kmeans_best_of(const Eigen::MatrixXd& points, int k, std::uint64_t seed, int restarts, KMeansOptions opts) {
  if (restarts <= 0) throw ValidationError("restarts must be positive");
  Clustering best = kmeans(points, k, seed, opts);
  for (int r = 1; r < restarts; ++r) {
    Clustering c = kmeans(points, k, seed + static_cast<std::uint64_t>(r), opts);
    if (c.inertia < best.inertia) best = std::move(c);
  }
  return best;
}

double recompute_inertia(const Eigen::MatrixXd& points, const Clustering& c) {
  double total = 0.0;
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    total += sq_dist(points, i, c.centroids, c.assignments[static_cast<std::size_t>(i)]);
  }
  return total;
}

double bic_score(const Eigen::MatrixXd& points, const Clustering& c) {
  const double n = static_cast<double>(points.rows());
  const double d = static_cast<double>(points.cols());
  const int k = c.k;

  std::vector<double> sizes(static_cast<std::size_t>(k), 0.0);
  for (int a : c.assignments) sizes[static_cast<std::size_t>(a)] += 1.0;
  double log_likelihood = 0.0;
  for (double nj : sizes) {
    if (nj > 0.0) log_likelihood += nj * std::log(nj / n);
  }

  double params = static_cast<double>(k - 1);
  if (points.cols() > 0) {
    // Pooled per-dimension variance, floored relative to the data's own spread
    // so zero-variance clusterings stay finite and comparable.
    const Eigen::RowVectorXd mean = points.colwise().mean();
    const double spread = (points.rowwise() - mean).squaredNorm() / (n * d);
    const double floor = spread > 0.0 ? 1e-10 * spread : 1.0;
    const double variance = std::max(c.inertia / (n * d), floor);
    log_likelihood += -0.5 * n * d * std::log(2.0 * std::numbers::pi * variance) - c.inertia / (2.0 * variance);
    params += static_cast<double>(k) * d + 1.0;
  }
  return log_likelihood - 0.5 * params * std::log(n);
}

KSelection select_k(const Eigen::MatrixXd& points, int k_min, int k_max, std::uint64_t seed, int restarts) {
  if (k_min < 1 || k_min > k_max || k_max > points.rows()) {
    throw ValidationError("k range [" + std::to_string(k_min) + ", " + std::to_string(k_max) +
                          "] invalid for " + std::to_string(points.rows()) + " points");
  }
  KSelection sel;
  double best = -std::numeric_limits<double>::infinity();
  for (int k = k_min; k <= k_max; ++k) {
    const Clustering c = kmeans_best_of(points, k, seed, restarts);
    const double score = bic_score(points, c);
    sel.ks.push_back(k);
    sel.bic.push_back(score);
    if (score > best) {
      best = score;
      sel.k = k;
    }
  }
  return sel;
}

int choose_k(const Eigen::MatrixXd& points, int k_min, int k_max, std::uint64_t seed, int restarts) {
  return select_k(points, k_min, k_max, seed, restarts).k;
}

std::vector<std::string> select_representatives(const Clustering& c, const Eigen::MatrixXd& points,
                                                const std::vector<std::string>& ids) {
  if (static_cast<std::size_t>(points.rows()) != ids.size() || c.assignments.size() != ids.size() ||
      c.centroids.rows() != c.k || (c.k > 0 && c.centroids.cols() != points.cols())) {
    throw ValidationError("representatives: clustering, points and ids are inconsistent");
  }
  std::vector<std::string> reps(static_cast<std::size_t>(c.k));
  std::vector<double> best(static_cast<std::size_t>(c.k), std::numeric_limits<double>::infinity());
  for (std::size_t i = 0; i < ids.size(); ++i) {
    const int a = c.assignments[i];
    if (a < 0 || a >= c.k) throw ValidationError("representatives: assignment out of range");
    const auto ai = static_cast<std::size_t>(a);
    const double d = sq_dist(points, static_cast<Eigen::Index>(i), c.centroids, a);
    if (d < best[ai] || (d == best[ai] && ids[i] < reps[ai])) {
      best[ai] = d;
      reps[ai] = ids[i];
    }
  }
  for (std::size_t j = 0; j < reps.size(); ++j) {
    if (std::isinf(best[j])) throw ValidationError("representatives: cluster " + std::to_string(j) + " is empty");
  }
  return reps;
}

// ---------------------------------------------------------------------------
// Pipeline

int ReductionResult::cluster_of(const std::string& workload_id) const {
  const auto it = std::find(workload_ids.begin(), workload_ids.end(), workload_id);
  if (it == workload_ids.end()) throw ValidationError("unknown workload '" + workload_id + "'");
  return clustering.assignments[static_cast<std::size_t>(it - workload_ids.begin())];
}

ReductionResult reduce_vectors(std::vector<MetricVector> vectors, const MetricSchema& schema,
                               const ReductionConfig& config) {
  if (vectors.size() < 2) throw ValidationError("reduction needs at least 2 workloads");
  std::sort(vectors.begin(), vectors.end(),
            [](const MetricVector& a, const MetricVector& b) { return a.workload_id() < b.workload_id(); });
  for (std::size_t i = 1; i < vectors.size(); ++i) {
    if (vectors[i].workload_id() == vectors[i - 1].workload_id()) {
      throw ValidationError("duplicate workload id '" + vectors[i].workload_id() + "'");
    }
  }

  ReductionResult r;
  r.normalized = normalize_zscore(vectors, schema);
  r.workload_ids = r.normalized.rows;
  r.pca = fit_pca(r.normalized, config.variance_target);
  r.projected = project(r.normalized, r.pca);

  int k = 0;
  if (config.fixed_k) {
    k = *config.fixed_k;
  } else {
    const int n = static_cast<int>(vectors.size());
    r.k_selection = select_k(r.projected, std::max(1, config.k_min), std::min(config.k_max, n), config.seed,
                             config.restarts);
    k = r.k_selection->k;
  }
  r.clustering = kmeans_best_of(r.projected, k, config.seed, config.restarts, config.kmeans);
  r.representatives = select_representatives(r.clustering, r.projected, r.workload_ids);
  r.cluster_sizes.assign(static_cast<std::size_t>(k), 0);
  for (int a : r.clustering.assignments) ++r.cluster_sizes[static_cast<std::size_t>(a)];
  return r;
}

ReductionResult reduce_pipeline(const std::vector<RawProfile>& profiles, const MetricSchema& schema,
                                const ReductionConfig& config) {
  if (profiles.size() < 2) throw ValidationError("reduction needs at least 2 profiles");
  std::vector<MetricVector> vectors;
  vectors.reserve(profiles.size());
  for (const auto& p : profiles) vectors.push_back(derive_microarch_metrics(p, schema));
  return reduce_vectors(std::move(vectors), schema, config);
}

namespace {

nlohmann::json matrix_json(const Eigen::MatrixXd& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    std::vector<double> row(static_cast<std::size_t>(m.cols()));
    for (Eigen::Index j = 0; j < m.cols(); ++j) row[static_cast<std::size_t>(j)] = m(i, j);
    rows.push_back(row);
  }
  return rows;
}

std::vector<double> vec(const Eigen::VectorXd& v) { return {v.data(), v.data() + v.size()}; }

}  // namespace

nlohmann::json reduction_to_json(const ReductionResult& r) {
  nlohmann::json assignments = nlohmann::json::object();
  for (std::size_t i = 0; i < r.workload_ids.size(); ++i) assignments[r.workload_ids[i]] = r.clustering.assignments[i];

  nlohmann::json j = {
      {"workloads", r.workload_ids},
      {"k", r.clustering.k},
      {"seed", r.clustering.seed},
      {"iterations", r.clustering.iterations},
      {"inertia", r.clustering.inertia},
      {"assignments", assignments},
      {"centroids", matrix_json(r.clustering.centroids)},
      {"representatives", r.representatives},
      {"cluster_sizes", r.cluster_sizes},
      {"retained_metrics", r.normalized.cols},
      {"dropped_metrics", r.normalized.dropped_cols},
      {"pca",
       {{"retained", r.pca.retained},
        {"eigenvalues", vec(r.pca.eigenvalues)},
        {"explained_variance_ratio", vec(r.pca.explained_variance_ratio)},
        {"components", matrix_json(r.pca.components)}}},
  };
  if (r.k_selection) j["k_selection"] = {{"k", r.k_selection->ks}, {"bic", r.k_selection->bic}};
  return j;
}

std::string normalized_to_csv(const NormalizedMatrix& nm) {
  std::ostringstream out;
  out << "workload";
  for (const auto& c : nm.cols) out << ',' << c;
  out << '\n';
  char buf[64];
  for (Eigen::Index i = 0; i < nm.data.rows(); ++i) {
    out << nm.rows[static_cast<std::size_t>(i)];
    for (Eigen::Index j = 0; j < nm.data.cols(); ++j) {
      std::snprintf(buf, sizeof buf, "%.12g", nm.data(i, j));
      out << ',' << buf;
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace wcr
