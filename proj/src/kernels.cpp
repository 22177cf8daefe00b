#include "fpopt/kernels.hpp"

#include <cmath>
#include <limits>

namespace fpopt::kernels {

void nearest_centroids(std::span<const Point> points,
                       std::span<const Point> centroids,
                       std::span<int> labels, std::span<double> sqdist) {
  const auto n = static_cast<std::int64_t>(points.size());
  const auto k = static_cast<int>(centroids.size());

#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < n; ++i) {
    const Point& point = points[static_cast<std::size_t>(i)];
    int best = 0;
    double best_dist = squared_distance(point, centroids[0]);
    for (int c = 1; c < k; ++c) {
      const double dist = squared_distance(point, centroids[static_cast<std::size_t>(c)]);
      if (dist < best_dist) {
        best_dist = dist;
        best = c;
      }
    }
    labels[static_cast<std::size_t>(i)] = best;
    sqdist[static_cast<std::size_t>(i)] = best_dist;
  }
}

void silhouette_samples(std::span<const Point> points,
                        std::span<const int> labels,
                        std::span<const std::int64_t> cluster_sizes,
                        std::span<double> samples) {
  const auto n = static_cast<std::int64_t>(points.size());
  const auto k = static_cast<int>(cluster_sizes.size());

#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < n; ++i) {
    const Point& point = points[static_cast<std::size_t>(i)];
    const int own = labels[static_cast<std::size_t>(i)];
    if (cluster_sizes[static_cast<std::size_t>(own)] <= 1) {
      samples[static_cast<std::size_t>(i)] = 0.0;
      continue;
    }
    std::vector<double> dist_sums(static_cast<std::size_t>(k), 0.0);
    for (std::int64_t j = 0; j < n; ++j) {
      if (j == i) {
        continue;
      }
      dist_sums[static_cast<std::size_t>(labels[static_cast<std::size_t>(j)])] +=
          std::sqrt(squared_distance(point, points[static_cast<std::size_t>(j)]));
    }
    const double a =
        dist_sums[static_cast<std::size_t>(own)] /
        static_cast<double>(cluster_sizes[static_cast<std::size_t>(own)] - 1);
    double b = std::numeric_limits<double>::infinity();
    for (int c = 0; c < k; ++c) {
      if (c == own || cluster_sizes[static_cast<std::size_t>(c)] == 0) {
        continue;
      }
      const double mean =
          dist_sums[static_cast<std::size_t>(c)] /
          static_cast<double>(cluster_sizes[static_cast<std::size_t>(c)]);
      if (mean < b) {
        b = mean;
      }
    }
    const double denom = a > b ? a : b;
    samples[static_cast<std::size_t>(i)] = denom == 0.0 ? 0.0 : (b - a) / denom;
  }
}

}  // namespace fpopt::kernels
