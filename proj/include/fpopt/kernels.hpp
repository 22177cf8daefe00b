#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

namespace fpopt {

using Point = std::array<double, 24>;

inline double squared_distance(const Point& a, const Point& b) {
  double sum = 0.0;
  for (std::size_t i = 0; i < 24; ++i) {
    const double diff = a[i] - b[i];
    sum += diff * diff;
  }
  return sum;
}

namespace kernels {

// OpenMP data-parallel kernels. Every loop writes only its own slot and all
// floating-point reductions happen serially afterwards, so results are
// bit-identical for any thread count (and to the serial reference).

// labels[i] = index of the nearest centroid (ties to the lowest index);
// sqdist[i] = squared Euclidean distance to it.
void nearest_centroids(std::span<const Point> points,
                       std::span<const Point> centroids,
                       std::span<int> labels, std::span<double> sqdist);

// Rousseeuw silhouette sample s(i) per point; singleton clusters get 0.
// `cluster_sizes[c]` must hold the member count of cluster c.
void silhouette_samples(std::span<const Point> points,
                        std::span<const int> labels,
                        std::span<const std::int64_t> cluster_sizes,
                        std::span<double> samples);

}  // namespace kernels
}  // namespace fpopt
