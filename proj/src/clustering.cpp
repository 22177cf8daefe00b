#include "fpopt/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>

#include <json.hpp>

#include "fpopt/errors.hpp"
#include "fpopt/rng.hpp"
#include "fpopt/time.hpp"

namespace fpopt {

namespace {

// k-means++ D^2 seeding. Picks distinct points by construction; throws when
// the data has fewer than k distinct points.
std::vector<Point> seed_centroids(std::span<const Point> points, int k,
                                  std::mt19937_64& rng) {
  const std::size_t n = points.size();
  std::vector<Point> centroids;
  centroids.reserve(static_cast<std::size_t>(k));
  centroids.push_back(points[next_below(rng, n)]);

  std::vector<double> min_sq(n);
  for (std::size_t i = 0; i < n; ++i) {
    min_sq[i] = squared_distance(points[i], centroids[0]);
  }
  while (centroids.size() < static_cast<std::size_t>(k)) {
    double total = 0.0;
    for (const double w : min_sq) {
      total += w;
    }
    if (total == 0.0) {
      throw InsufficientPoints("fewer distinct points than clusters requested");
    }
    const double r = next_double(rng) * total;
    double cum = 0.0;
    std::size_t chosen = n;
    for (std::size_t i = 0; i < n; ++i) {
      cum += min_sq[i];
      if (min_sq[i] > 0.0 && cum > r) {
        chosen = i;
        break;
      }
    }
    if (chosen == n) {  // float round-off at the tail
      for (std::size_t i = n; i-- > 0;) {
        if (min_sq[i] > 0.0) {
          chosen = i;
          break;
        }
      }
    }
    centroids.push_back(points[chosen]);
    for (std::size_t i = 0; i < n; ++i) {
      const double d = squared_distance(points[i], centroids.back());
      if (d < min_sq[i]) {
        min_sq[i] = d;
      }
    }
  }
  return centroids;
}

std::vector<std::int64_t> tally(std::span<const int> labels, int k) {
  std::vector<std::int64_t> counts(static_cast<std::size_t>(k), 0);
  for (const int label : labels) {
    ++counts[static_cast<std::size_t>(label)];
  }
  return counts;
}

// Assignment step plus the empty-cluster rule: an empty cluster is re-seeded
// at the point farthest from its current centroid and the assignment redone.
std::vector<std::int64_t> assign_with_fixes(std::span<const Point> points,
                                            std::vector<Point>& centroids,
                                            std::vector<int>& labels,
                                            std::vector<double>& sqdist) {
  const int k = static_cast<int>(centroids.size());
  for (int attempt = 0; attempt <= k; ++attempt) {
    kernels::nearest_centroids(points, centroids, labels, sqdist);
    auto counts = tally(labels, k);
    bool fixed_any = false;
    for (int c = 0; c < k; ++c) {
      if (counts[static_cast<std::size_t>(c)] != 0) {
        continue;
      }
      std::size_t farthest = 0;
      double farthest_d = -1.0;
      for (std::size_t i = 0; i < points.size(); ++i) {
        const double d =
            squared_distance(points[i], centroids[static_cast<std::size_t>(c)]);
        if (d > farthest_d) {
          farthest_d = d;
          farthest = i;
        }
      }
      if (farthest_d > 0.0) {
        centroids[static_cast<std::size_t>(c)] = points[farthest];
        fixed_any = true;
      }
    }
    if (!fixed_any) {
      return counts;
    }
  }
  kernels::nearest_centroids(points, centroids, labels, sqdist);
  return tally(labels, k);
}

void order_clusters(std::span<const Point> points, KMeansResult* result) {
  const int k = static_cast<int>(result->centroids.size());
  std::vector<int> order(static_cast<std::size_t>(k));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    const auto ca = result->cluster_sizes[static_cast<std::size_t>(a)];
    const auto cb = result->cluster_sizes[static_cast<std::size_t>(b)];
    if (ca != cb) {
      return ca > cb;
    }
    return result->centroids[static_cast<std::size_t>(a)] <
           result->centroids[static_cast<std::size_t>(b)];
  });
  std::vector<int> new_id(static_cast<std::size_t>(k));
  for (int rank = 0; rank < k; ++rank) {
    new_id[static_cast<std::size_t>(order[static_cast<std::size_t>(rank)])] =
        rank;
  }
  std::vector<Point> centroids(static_cast<std::size_t>(k));
  std::vector<std::int64_t> sizes(static_cast<std::size_t>(k));
  for (int rank = 0; rank < k; ++rank) {
    const auto from = static_cast<std::size_t>(order[static_cast<std::size_t>(rank)]);
    centroids[static_cast<std::size_t>(rank)] = result->centroids[from];
    sizes[static_cast<std::size_t>(rank)] = result->cluster_sizes[from];
  }
  result->centroids = std::move(centroids);
  result->cluster_sizes = std::move(sizes);
  for (std::size_t i = 0; i < points.size(); ++i) {
    result->labels[i] = new_id[static_cast<std::size_t>(result->labels[i])];
  }
}

// Lloyd iterations from explicit starting centroids. The update step
// accumulates serially in point order, so runs are reproducible for any
// thread count.
KMeansResult lloyd_from(std::span<const Point> points,
                        std::vector<Point> centroids,
                        const KMeansParams& params) {
  const int k = static_cast<int>(centroids.size());
  KMeansResult result;
  result.centroids = std::move(centroids);
  result.labels.assign(points.size(), 0);
  std::vector<double> sqdist(points.size(), 0.0);

  auto record_wcss = [&] {
    double wcss = 0.0;
    for (const double d : sqdist) {
      wcss += d;
    }
    result.wcss_by_iteration.push_back(wcss);
    return wcss;
  };

  for (int iter = 0; iter < params.max_iters; ++iter) {
    result.cluster_sizes =
        assign_with_fixes(points, result.centroids, result.labels, sqdist);
    record_wcss();
    ++result.iterations;

    std::vector<Point> means(static_cast<std::size_t>(k), Point{});
    for (std::size_t i = 0; i < points.size(); ++i) {
      auto& mean = means[static_cast<std::size_t>(result.labels[i])];
      for (std::size_t h = 0; h < 24; ++h) {
        mean[h] += points[i][h];
      }
    }
    double max_shift_sq = 0.0;
    for (int c = 0; c < k; ++c) {
      const auto size = result.cluster_sizes[static_cast<std::size_t>(c)];
      if (size == 0) {
        continue;  // unresolvable empty cluster (duplicate-heavy input)
      }
      auto& mean = means[static_cast<std::size_t>(c)];
      for (std::size_t h = 0; h < 24; ++h) {
        mean[h] /= static_cast<double>(size);
      }
      const double shift_sq =
          squared_distance(mean, result.centroids[static_cast<std::size_t>(c)]);
      if (shift_sq > max_shift_sq) {
        max_shift_sq = shift_sq;
      }
      result.centroids[static_cast<std::size_t>(c)] = mean;
    }
    if (std::sqrt(max_shift_sq) < params.tol) {
      break;
    }
  }

  // Final pass so labels and wcss refer to the reported centroids.
  result.cluster_sizes =
      assign_with_fixes(points, result.centroids, result.labels, sqdist);
  result.wcss = record_wcss();
  order_clusters(points, &result);
  return result;
}

// Extra restart candidate for k built from the previous k-1 solution: its
// centroids plus the point farthest from them. Starting wcss can only be
// lower, which keeps the recorded wcss curve non-increasing in k.
std::vector<Point> augmented_warm_start(std::span<const Point> points,
                                        const std::vector<Point>& previous) {
  std::size_t farthest = 0;
  double farthest_d = -1.0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    double nearest = squared_distance(points[i], previous[0]);
    for (std::size_t c = 1; c < previous.size(); ++c) {
      const double d = squared_distance(points[i], previous[c]);
      if (d < nearest) {
        nearest = d;
      }
    }
    if (nearest > farthest_d) {
      farthest_d = nearest;
      farthest = i;
    }
  }
  std::vector<Point> centroids = previous;
  centroids.push_back(points[farthest]);
  return centroids;
}

}  // namespace

KMeansResult kmeans(std::span<const Point> points, int k, std::uint64_t seed,
                    const KMeansParams& params) {
  if (k < 1) {
    throw InsufficientPoints("k must be at least 1");
  }
  if (points.size() < static_cast<std::size_t>(k)) {
    throw InsufficientPoints("need at least " + std::to_string(k) +
                             " points for k=" + std::to_string(k) + ", got " +
                             std::to_string(points.size()));
  }
  std::mt19937_64 rng(seed);
  return lloyd_from(points, seed_centroids(points, k, rng), params);
}

double silhouette_score(std::span<const Point> points,
                        std::span<const int> labels) {
  int k = 0;
  for (const int label : labels) {
    if (label >= k) {
      k = label + 1;
    }
  }
  const auto sizes = tally(labels, k);
  int nonempty = 0;
  for (const auto size : sizes) {
    if (size > 0) {
      ++nonempty;
    }
  }
  if (nonempty < 2) {
    throw SilhouetteUndefined(
        "silhouette needs at least two nonempty clusters");
  }
  std::vector<double> samples(points.size(), 0.0);
  kernels::silhouette_samples(points, labels, sizes, samples);
  double sum = 0.0;
  for (const double s : samples) {
    sum += s;
  }
  return sum / static_cast<double>(points.size());
}

SelectKResult select_k(std::span<const Point> points, std::uint64_t seed,
                       const SelectKParams& params) {
  if (params.k_min < 2) {
    throw InsufficientPoints("k_min must be at least 2");
  }
  if (points.size() < static_cast<std::size_t>(params.k_max)) {
    throw InsufficientPoints("need at least k_max points to select k");
  }

  std::map<int, KMeansResult> by_k;
  auto run_for_k = [&](int k) {
    KMeansResult best;
    bool have_best = false;
    for (int restart = 0; restart < params.n_restarts; ++restart) {
      KMeansResult candidate = kmeans(
          points, k,
          derive_seed(seed, static_cast<std::uint64_t>(k),
                      static_cast<std::uint64_t>(restart)),
          params.kmeans);
      if (!have_best || candidate.wcss < best.wcss) {
        best = std::move(candidate);
        have_best = true;
      }
    }
    if (const auto prev = by_k.find(k - 1); prev != by_k.end()) {
      KMeansResult warm = lloyd_from(
          points, augmented_warm_start(points, prev->second.centroids),
          params.kmeans);
      if (warm.wcss < best.wcss) {
        best = std::move(warm);
      }
    }
    by_k.emplace(k, std::move(best));
  };

  int chosen = -1;
  for (int k = params.k_min; k <= params.k_max; ++k) {
    run_for_k(k);
    const double wcss_k = by_k.at(k).wcss;
    if (wcss_k == 0.0) {
      chosen = k;  // perfect fit; more clusters cannot be an improvement
      break;
    }
    if (k > params.k_min) {
      const double wcss_prev = by_k.at(k - 1).wcss;
      const double improvement = (wcss_prev - wcss_k) / wcss_prev;
      if (improvement < params.elbow_threshold) {
        chosen = k - 1;
        break;
      }
    }
  }
  if (chosen == -1) {
    chosen = params.k_max;
  }

  const KMeansResult& winner = by_k.at(chosen);
  SelectKResult result;
  result.model.k = chosen;
  result.model.centroids = winner.centroids;
  result.model.seed = seed;
  result.model.silhouette = silhouette_score(points, winner.labels);
  for (const auto& [k, run] : by_k) {
    result.model.wcss_curve[k] = run.wcss;
  }
  result.labels = winner.labels;
  return result;
}

std::string model_to_json(const ClusterModel& model) {
  nlohmann::ordered_json doc;
  doc["k"] = model.k;
  doc["seed"] = model.seed;
  doc["silhouette"] = model.silhouette;
  doc["trained_through"] = format_civil_day(model.trained_through);
  nlohmann::ordered_json curve = nlohmann::ordered_json::object();
  for (const auto& [k, wcss] : model.wcss_curve) {
    curve[std::to_string(k)] = wcss;
  }
  doc["wcss_curve"] = std::move(curve);
  nlohmann::ordered_json centroids = nlohmann::ordered_json::array();
  for (const Point& centroid : model.centroids) {
    centroids.push_back(centroid);
  }
  doc["centroids"] = std::move(centroids);
  return doc.dump(2) + "\n";
}

ClusterModel model_from_json(const std::string& text) {
  const auto doc = nlohmann::json::parse(text, nullptr, false);
  if (doc.is_discarded() || !doc.is_object()) {
    throw FatalError("model file is not valid JSON");
  }
  ClusterModel model;
  try {
    model.k = doc.at("k").get<int>();
    model.seed = doc.at("seed").get<std::uint64_t>();
    model.silhouette = doc.at("silhouette").get<double>();
    const auto day =
        parse_civil_day(doc.at("trained_through").get<std::string>());
    if (!day) {
      throw FatalError("model file: bad trained_through day");
    }
    model.trained_through = *day;
    for (const auto& [key, value] : doc.at("wcss_curve").items()) {
      model.wcss_curve[std::stoi(key)] = value.get<double>();
    }
    for (const auto& row : doc.at("centroids")) {
      if (!row.is_array() || row.size() != 24) {
        throw FatalError("model file: centroid is not a 24-vector");
      }
      Point centroid{};
      for (std::size_t h = 0; h < 24; ++h) {
        centroid[h] = row[h].get<double>();
      }
      model.centroids.push_back(centroid);
    }
  } catch (const nlohmann::json::exception& e) {
    throw FatalError(std::string("model file: ") + e.what());
  }
  if (static_cast<int>(model.centroids.size()) != model.k || model.k < 1) {
    throw FatalError("model file: centroid count does not match k");
  }
  return model;
}

void save_model(const ClusterModel& model, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw IoError("cannot write model file: " + path);
  }
  out << model_to_json(model);
}

ClusterModel load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot read model file: " + path);
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return model_from_json(buffer.str());
}

}  // namespace fpopt
