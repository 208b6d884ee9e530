#pragma once

// Workload subsetting: z-score normalization, PCA, K-means with BIC-driven
// choice of k, and nearest-to-centroid representative selection.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "wcr/profile_model.hpp"

namespace wcr {

struct NormalizedMatrix {
  std::vector<std::string> rows;
  std::vector<std::string> cols;  // retained metric names
  Eigen::MatrixXd data;           // rows x cols, z-scores
  Eigen::VectorXd col_means;
  Eigen::VectorXd col_stds;
  std::vector<std::string> dropped_cols;
};

// Per column: subtract the mean, divide by the sample (n-1) standard deviation.
// Zero-variance columns are dropped and listed. Requires >= 2 rows.
NormalizedMatrix normalize_zscore(const std::vector<std::string>& row_ids, const std::vector<std::string>& col_names,
                                  const Eigen::MatrixXd& raw);
NormalizedMatrix normalize_zscore(std::span<const MetricVector> vectors, const MetricSchema& schema);

struct PcaModel {
  Eigen::MatrixXd components;                // retained x d_in, orthonormal rows
  Eigen::VectorXd eigenvalues;               // full spectrum, descending
  Eigen::VectorXd explained_variance_ratio;  // full spectrum
  int retained = 0;
};

inline constexpr double kDefaultVarianceTarget = 0.85;

// Eigendecomposition of the sample covariance. Keeps the smallest number of
// components whose cumulative explained variance reaches `variance_target`;
// a target of 1 keeps every component. Each component is signed so its
// largest-magnitude entry is positive.
PcaModel fit_pca(const NormalizedMatrix& nm, double variance_target = kDefaultVarianceTarget);
PcaModel fit_pca(const Eigen::MatrixXd& centered, double variance_target = kDefaultVarianceTarget);

// rows x retained scores.
Eigen::MatrixXd project(const NormalizedMatrix& nm, const PcaModel& m);
Eigen::MatrixXd project(const Eigen::MatrixXd& data, const PcaModel& m);
// Inverse of `project` (exact when every component is retained).
Eigen::MatrixXd reconstruct(const Eigen::MatrixXd& scores, const PcaModel& m);

struct Clustering {
  int k = 0;
  std::vector<int> assignments;  // one cluster index per point row
  Eigen::MatrixXd centroids;     // k x d
  double inertia = 0.0;
  int iterations = 0;
  std::uint64_t seed = 0;
  std::vector<double> inertia_trace;  // inertia after every Lloyd iteration
};

struct KMeansOptions {
  int max_iter = 300;
  double tol = 1e-6;
};

// Lloyd iterations from a k-means++ start. Deterministic for (points, k, seed).
Clustering kmeans(const Eigen::MatrixXd& points, int k, std::uint64_t seed, KMeansOptions opts = {});

// Runs seeds seed, seed+1, ..., seed+restarts-1 and keeps the lowest inertia;
// ties go to the earliest seed.
Clustering kmeans_best_of(const Eigen::MatrixXd& points, int k, std::uint64_t seed, int restarts,
                          KMeansOptions opts = {});

double recompute_inertia(const Eigen::MatrixXd& points, const Clustering& c);

// Spherical-Gaussian BIC (higher is better) of a clustering.
double bic_score(const Eigen::MatrixXd& points, const Clustering& c);

struct KSelection {
  int k = 0;
  std::vector<int> ks;
  std::vector<double> bic;
};

inline constexpr int kDefaultRestarts = 10;

KSelection select_k(const Eigen::MatrixXd& points, int k_min, int k_max, std::uint64_t seed,
                    int restarts = kDefaultRestarts);
int choose_k(const Eigen::MatrixXd& points, int k_min, int k_max, std::uint64_t seed,
             int restarts = kDefaultRestarts);

// Member nearest its centroid per cluster; ties go to the smallest id.
std::vector<std::string> select_representatives(const Clustering& c, const Eigen::MatrixXd& points,
                                                const std::vector<std::string>& ids);

struct ReductionConfig {
  double variance_target = kDefaultVarianceTarget;
  std::optional<int> fixed_k;
  int k_min = 1;
  int k_max = 20;
  std::uint64_t seed = 42;
  int restarts = kDefaultRestarts;
  KMeansOptions kmeans;
};

struct ReductionResult {
  std::vector<std::string> workload_ids;  // row order used throughout (sorted)
  NormalizedMatrix normalized;
  PcaModel pca;
  Eigen::MatrixXd projected;
  std::optional<KSelection> k_selection;
  Clustering clustering;
  std::vector<std::string> representatives;  // index = cluster
  std::vector<int> cluster_sizes;

  int cluster_of(const std::string& workload_id) const;
};

// Rows are sorted by workload id before any stage, which makes the result
// independent of input order. Workload ids must be unique.
ReductionResult reduce_vectors(std::vector<MetricVector> vectors, const MetricSchema& schema,
                               const ReductionConfig& config);
ReductionResult reduce_pipeline(const std::vector<RawProfile>& profiles, const MetricSchema& schema,
                                const ReductionConfig& config);

nlohmann::json reduction_to_json(const ReductionResult& r);
std::string normalized_to_csv(const NormalizedMatrix& nm);

}  // namespace wcr
