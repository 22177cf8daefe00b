#include "fpopt/reference.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "fpopt/errors.hpp"
#include "fpopt/rng.hpp"

namespace fpopt::reference {

namespace {

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) {
    --q;
  }
  return q;
}

std::int32_t event_day(const ClickEvent& event, TzOffset tz) {
  return static_cast<std::int32_t>(floor_div(event.timestamp + tz.seconds(), 86400));
}

int event_hour(const ClickEvent& event, TzOffset tz) {
  const std::int64_t shifted = event.timestamp + tz.seconds();
  return static_cast<int>((shifted - floor_div(shifted, 86400) * 86400) / 3600);
}

double sq_dist(const Point& a, const Point& b) {
  double sum = 0.0;
  for (std::size_t i = 0; i < 24; ++i) {
    const double diff = a[i] - b[i];
    sum += diff * diff;
  }
  return sum;
}

bool hour_in_rule(const BlockingRule& rule, int hour) {
  if (rule.kind == RuleKind::kUnblocked) {
    return false;
  }
  if (rule.kind == RuleKind::kBlockedAlways) {
    return true;
  }
  if (rule.window_start < rule.window_end) {
    return hour >= rule.window_start && hour < rule.window_end;
  }
  return hour >= rule.window_start || hour < rule.window_end;
}

}  // namespace

void nearest_centroids(std::span<const Point> points,
                       std::span<const Point> centroids, std::span<int> labels,
                       std::span<double> sqdist) {
  for (std::size_t i = 0; i < points.size(); ++i) {
    int best = 0;
    double best_dist = sq_dist(points[i], centroids[0]);
    for (std::size_t c = 1; c < centroids.size(); ++c) {
      const double dist = sq_dist(points[i], centroids[c]);
      if (dist < best_dist) {
        best_dist = dist;
        best = static_cast<int>(c);
      }
    }
    labels[i] = best;
    sqdist[i] = best_dist;
  }
}

double silhouette_score(std::span<const Point> points,
                        std::span<const int> labels) {
  int k = 0;
  for (const int label : labels) {
    k = std::max(k, label + 1);
  }
  std::vector<std::int64_t> sizes(static_cast<std::size_t>(k), 0);
  for (const int label : labels) {
    ++sizes[static_cast<std::size_t>(label)];
  }
  int nonempty = 0;
  for (const auto size : sizes) {
    nonempty += size > 0 ? 1 : 0;
  }
  if (nonempty < 2) {
    throw SilhouetteUndefined(
        "silhouette needs at least two nonempty clusters");
  }

  double total = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const int own = labels[i];
    if (sizes[static_cast<std::size_t>(own)] <= 1) {
      continue;  // singleton contributes 0
    }
    std::vector<double> sums(static_cast<std::size_t>(k), 0.0);
    for (std::size_t j = 0; j < points.size(); ++j) {
      if (i == j) {
        continue;
      }
      sums[static_cast<std::size_t>(labels[j])] +=
          std::sqrt(sq_dist(points[i], points[j]));
    }
    const double a = sums[static_cast<std::size_t>(own)] /
                     static_cast<double>(sizes[static_cast<std::size_t>(own)] - 1);
    double b = std::numeric_limits<double>::infinity();
    for (int c = 0; c < k; ++c) {
      if (c == own || sizes[static_cast<std::size_t>(c)] == 0) {
        continue;
      }
      b = std::min(b, sums[static_cast<std::size_t>(c)] /
                          static_cast<double>(sizes[static_cast<std::size_t>(c)]));
    }
    const double denom = std::max(a, b);
    total += denom == 0.0 ? 0.0 : (b - a) / denom;
  }
  return total / static_cast<double>(points.size());
}

KMeansResult kmeans(std::span<const Point> points, int k, std::uint64_t seed,
                    const KMeansParams& params) {
  if (k < 1) {
    throw InsufficientPoints("k must be at least 1");
  }
  const std::size_t n = points.size();
  if (n < static_cast<std::size_t>(k)) {
    throw InsufficientPoints("fewer points than clusters requested");
  }

  // Seeding mirrors the production contract: k-means++ driven by the seed.
  std::mt19937_64 rng(seed);
  std::vector<Point> centroids;
  centroids.push_back(points[next_below(rng, n)]);
  std::vector<double> min_sq(n);
  for (std::size_t i = 0; i < n; ++i) {
    min_sq[i] = sq_dist(points[i], centroids[0]);
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
    if (chosen == n) {
      for (std::size_t i = n; i-- > 0;) {
        if (min_sq[i] > 0.0) {
          chosen = i;
          break;
        }
      }
    }
    centroids.push_back(points[chosen]);
    for (std::size_t i = 0; i < n; ++i) {
      min_sq[i] = std::min(min_sq[i], sq_dist(points[i], centroids.back()));
    }
  }

  KMeansResult result;
  result.centroids = std::move(centroids);
  result.labels.assign(n, 0);
  std::vector<double> sqdist(n, 0.0);

  auto assign_pass = [&] {
    for (int attempt = 0; attempt <= k; ++attempt) {
      nearest_centroids(points, result.centroids, result.labels, sqdist);
      std::vector<std::int64_t> counts(static_cast<std::size_t>(k), 0);
      for (const int label : result.labels) {
        ++counts[static_cast<std::size_t>(label)];
      }
      bool fixed_any = false;
      for (int c = 0; c < k; ++c) {
        if (counts[static_cast<std::size_t>(c)] != 0) {
          continue;
        }
        std::size_t farthest = 0;
        double farthest_d = -1.0;
        for (std::size_t i = 0; i < n; ++i) {
          const double d =
              sq_dist(points[i], result.centroids[static_cast<std::size_t>(c)]);
          if (d > farthest_d) {
            farthest_d = d;
            farthest = i;
          }
        }
        if (farthest_d > 0.0) {
          result.centroids[static_cast<std::size_t>(c)] = points[farthest];
          fixed_any = true;
        }
      }
      if (!fixed_any) {
        result.cluster_sizes = std::move(counts);
        return;
      }
    }
    nearest_centroids(points, result.centroids, result.labels, sqdist);
    std::vector<std::int64_t> counts(static_cast<std::size_t>(k), 0);
    for (const int label : result.labels) {
      ++counts[static_cast<std::size_t>(label)];
    }
    result.cluster_sizes = std::move(counts);
  };

  auto record_wcss = [&] {
    double wcss = 0.0;
    for (const double d : sqdist) {
      wcss += d;
    }
    result.wcss_by_iteration.push_back(wcss);
    return wcss;
  };

  for (int iter = 0; iter < params.max_iters; ++iter) {
    assign_pass();
    record_wcss();
    ++result.iterations;
    std::vector<Point> means(static_cast<std::size_t>(k), Point{});
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t h = 0; h < 24; ++h) {
        means[static_cast<std::size_t>(result.labels[i])][h] += points[i][h];
      }
    }
    double max_shift_sq = 0.0;
    for (int c = 0; c < k; ++c) {
      const auto size = result.cluster_sizes[static_cast<std::size_t>(c)];
      if (size == 0) {
        continue;
      }
      for (std::size_t h = 0; h < 24; ++h) {
        means[static_cast<std::size_t>(c)][h] /= static_cast<double>(size);
      }
      max_shift_sq = std::max(
          max_shift_sq,
          sq_dist(means[static_cast<std::size_t>(c)],
                  result.centroids[static_cast<std::size_t>(c)]));
      result.centroids[static_cast<std::size_t>(c)] =
          means[static_cast<std::size_t>(c)];
    }
    if (std::sqrt(max_shift_sq) < params.tol) {
      break;
    }
  }
  assign_pass();
  result.wcss = record_wcss();

  // Order clusters by size, ties lexicographically.
  std::vector<int> order(static_cast<std::size_t>(k));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    const auto ca = result.cluster_sizes[static_cast<std::size_t>(a)];
    const auto cb = result.cluster_sizes[static_cast<std::size_t>(b)];
    if (ca != cb) {
      return ca > cb;
    }
    return result.centroids[static_cast<std::size_t>(a)] <
           result.centroids[static_cast<std::size_t>(b)];
  });
  std::vector<int> new_id(static_cast<std::size_t>(k));
  std::vector<Point> ordered_centroids(static_cast<std::size_t>(k));
  std::vector<std::int64_t> ordered_sizes(static_cast<std::size_t>(k));
  for (int rank = 0; rank < k; ++rank) {
    const auto from = static_cast<std::size_t>(order[static_cast<std::size_t>(rank)]);
    new_id[from] = rank;
    ordered_centroids[static_cast<std::size_t>(rank)] = result.centroids[from];
    ordered_sizes[static_cast<std::size_t>(rank)] = result.cluster_sizes[from];
  }
  result.centroids = std::move(ordered_centroids);
  result.cluster_sizes = std::move(ordered_sizes);
  for (auto& label : result.labels) {
    label = new_id[static_cast<std::size_t>(label)];
  }
  return result;
}

FingerprintMap update_fingerprints(const EventStore& store,
                                   std::int32_t up_to_day) {
  const TzOffset tz = store.tz();
  std::map<std::string, std::array<std::int64_t, 24>> counts;
  for (const ClickEvent& event : store.events()) {
    const std::int32_t day = event_day(event, tz);
    if (day > up_to_day || store.is_blocked_day(event.domain_id, day)) {
      continue;
    }
    ++counts[event.domain_id][static_cast<std::size_t>(event_hour(event, tz))];
  }
  FingerprintMap out;
  for (const auto& [domain, hourly] : counts) {
    std::int64_t total = 0;
    for (const auto count : hourly) {
      total += count;
    }
    if (total == 0) {
      continue;
    }
    TrafficFingerprint fingerprint;
    fingerprint.domain_id = domain;
    fingerprint.total_clicks = total;
    fingerprint.as_of = up_to_day;
    for (std::size_t h = 0; h < 24; ++h) {
      fingerprint.hourly_share[h] =
          static_cast<double>(hourly[h]) / static_cast<double>(total);
    }
    out.emplace(domain, std::move(fingerprint));
  }
  return out;
}

SimulationReport replay(const EventStore& store, std::int64_t split_instant,
                        const ClusterModel& model, const RuleSet& rules,
                        std::int64_t min_clicks) {
  if (static_cast<int>(rules.rules.size()) < model.k) {
    throw FatalError("ruleset does not cover all clusters of the model");
  }
  const TzOffset tz = store.tz();
  const std::vector<ClickEvent>& events = store.events();

  std::int32_t first_day = INT32_MAX;
  std::int32_t last_day = INT32_MIN;
  bool any_test = false;
  for (const ClickEvent& event : events) {
    if (event.timestamp < split_instant) {
      continue;
    }
    any_test = true;
    const std::int32_t day = event_day(event, tz);
    first_day = std::min(first_day, day);
    last_day = std::max(last_day, day);
  }
  if (!any_test) {
    throw EmptyPeriod("no events at or after the split instant");
  }

  std::map<std::string, std::set<std::int32_t>> blocked = [&] {
    std::map<std::string, std::set<std::int32_t>> initial;
    for (const auto& [domain, days] : store.blocked_days()) {
      initial[domain] = days;
    }
    return initial;
  }();

  SimulationReport report;
  for (std::int32_t day = first_day; day <= last_day; ++day) {
    // Assignments from scratch: tally every event through day-1.
    std::map<std::string, std::array<std::int64_t, 24>> counts;
    for (const ClickEvent& event : events) {
      const std::int32_t event_d = event_day(event, tz);
      if (event_d > day - 1) {
        continue;
      }
      const auto blocked_it = blocked.find(event.domain_id);
      if (blocked_it != blocked.end() && blocked_it->second.contains(event_d)) {
        continue;
      }
      ++counts[event.domain_id][static_cast<std::size_t>(event_hour(event, tz))];
    }
    std::map<std::string, int> assignment;
    for (const auto& [domain, hourly] : counts) {
      std::int64_t total = 0;
      for (const auto count : hourly) {
        total += count;
      }
      if (total < min_clicks || total == 0) {
        continue;
      }
      Point share{};
      for (std::size_t h = 0; h < 24; ++h) {
        share[h] = static_cast<double>(hourly[h]) / static_cast<double>(total);
      }
      int best = 0;
      double best_dist = sq_dist(share, model.centroids[0]);
      for (int c = 1; c < model.k; ++c) {
        const double dist =
            sq_dist(share, model.centroids[static_cast<std::size_t>(c)]);
        if (dist < best_dist) {
          best_dist = dist;
          best = c;
        }
      }
      assignment[domain] = best;
    }

    DayArmTotals day_totals;
    day_totals.day = day;
    std::map<int, DayClusterBreakdown> by_cluster;
    bool day_has_events = false;
    for (const ClickEvent& event : events) {
      if (event.timestamp < split_instant || event_day(event, tz) != day) {
        continue;
      }
      day_has_events = true;
      int cluster = -1;
      bool drop = false;
      if (const auto it = assignment.find(event.domain_id);
          it != assignment.end()) {
        cluster = it->second;
        drop = hour_in_rule(rules.for_cluster(cluster), event_hour(event, tz));
      }
      day_totals.baseline.clicks += 1;
      day_totals.baseline.conversions += event.converted ? 1 : 0;
      day_totals.baseline.cost += event.cost;
      day_totals.baseline.revenue += event.revenue;
      auto& cell = by_cluster[cluster];
      cell.day = day;
      cell.cluster_id = cluster;
      if (drop) {
        cell.clicks_dropped += 1;
        blocked[event.domain_id].insert(day);
      } else {
        cell.clicks_kept += 1;
        cell.conversions += event.converted ? 1 : 0;
        cell.cost += event.cost;
        cell.revenue += event.revenue;
        day_totals.blocked.clicks += 1;
        day_totals.blocked.conversions += event.converted ? 1 : 0;
        day_totals.blocked.cost += event.cost;
        day_totals.blocked.revenue += event.revenue;
      }
    }
    if (day_has_events) {
      for (const auto& [cluster, cell] : by_cluster) {
        report.by_day_cluster.push_back(cell);
      }
    }
    report.baseline.clicks += day_totals.baseline.clicks;
    report.baseline.conversions += day_totals.baseline.conversions;
    report.baseline.cost += day_totals.baseline.cost;
    report.baseline.revenue += day_totals.baseline.revenue;
    report.blocked.clicks += day_totals.blocked.clicks;
    report.blocked.conversions += day_totals.blocked.conversions;
    report.blocked.cost += day_totals.blocked.cost;
    report.blocked.revenue += day_totals.blocked.revenue;
    report.by_day.push_back(day_totals);
  }

  const Micros base_profit = report.baseline.profit();
  if (base_profit != 0) {
    report.profit_increase =
        static_cast<double>(report.blocked.profit() - base_profit) /
        static_cast<double>(base_profit < 0 ? -base_profit : base_profit);
    report.profit_increase_defined = true;
  }
  return report;
}

}  // namespace fpopt::reference
