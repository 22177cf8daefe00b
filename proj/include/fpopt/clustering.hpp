#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "fpopt/kernels.hpp"

namespace fpopt {

struct KMeansParams {
  int max_iters = 300;
  double tol = 1e-6;  // max centroid shift (Euclidean) to declare convergence
};

struct KMeansResult {
  std::vector<Point> centroids;  // ordered by descending member count,
                                 // ties by lexicographic centroid order
  std::vector<int> labels;       // parallel to the input points
  std::vector<std::int64_t> cluster_sizes;
  double wcss = 0.0;
  // wcss after every assignment step; non-increasing by construction
  std::vector<double> wcss_by_iteration;
  int iterations = 0;
};

// Lloyd iterations from k-means++ seeding driven by `seed`. Empty clusters
// are re-seeded at the point farthest from their current centroid. Throws
// InsufficientPoints when |points| < k or when fewer than k distinct points
// exist.
KMeansResult kmeans(std::span<const Point> points, int k, std::uint64_t seed,
                    const KMeansParams& params = {});

// Mean silhouette sample over all points, Euclidean metric; singleton
// clusters contribute 0. Throws SilhouetteUndefined with fewer than two
// nonempty clusters.
double silhouette_score(std::span<const Point> points,
                        std::span<const int> labels);

// Frozen clustering: centroids never move after training.
struct ClusterModel {
  int k = 0;
  std::vector<Point> centroids;
  double silhouette = 0.0;
  std::map<int, double> wcss_curve;
  std::uint64_t seed = 0;
  std::int32_t trained_through = 0;  // civil day
};

struct SelectKParams {
  int k_min = 2;
  int k_max = 8;
  double elbow_threshold = 0.10;  // relative wcss improvement
  int n_restarts = 10;
  KMeansParams kmeans;
};

struct SelectKResult {
  ClusterModel model;
  std::vector<int> labels;  // labels of the chosen clustering
};

// Evaluates k upward from k_min, each the best of n_restarts by wcss, and
// stops at the first k whose next step no longer improves wcss by at least
// elbow_threshold (or whose wcss is already zero). A warm start from the
// previous k keeps the recorded wcss curve non-increasing.
SelectKResult select_k(std::span<const Point> points, std::uint64_t seed,
                       const SelectKParams& params = {});

std::string model_to_json(const ClusterModel& model);
ClusterModel model_from_json(const std::string& text);
void save_model(const ClusterModel& model, const std::string& path);
ClusterModel load_model(const std::string& path);

}  // namespace fpopt
