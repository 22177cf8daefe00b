#pragma once

#include <cstdint>
#include <span>

#include "fpopt/clustering.hpp"
#include "fpopt/fingerprint.hpp"
#include "fpopt/simulate.hpp"

namespace fpopt::reference {

// Straightforward serial implementations of the pipeline's kernels, written
// against the same contracts but sharing no logic with the OpenMP paths.
// Tests compare the two; the benchmark binary measures them side by side.
// Production code never calls into this namespace.

void nearest_centroids(std::span<const Point> points,
                       std::span<const Point> centroids, std::span<int> labels,
                       std::span<double> sqdist);

double silhouette_score(std::span<const Point> points,
                        std::span<const int> labels);

KMeansResult kmeans(std::span<const Point> points, int k, std::uint64_t seed,
                    const KMeansParams& params = {});

// Naive per-event tally over the whole store.
FingerprintMap update_fingerprints(const EventStore& store,
                                   std::int32_t up_to_day);

// Single-event-filter replay: walks raw events one by one, re-deriving
// fingerprints, eligibility and assignments from scratch each day.
SimulationReport replay(const EventStore& store, std::int64_t split_instant,
                        const ClusterModel& model, const RuleSet& rules,
                        std::int64_t min_clicks);

}  // namespace fpopt::reference
