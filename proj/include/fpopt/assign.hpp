#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "fpopt/clustering.hpp"
#include "fpopt/fingerprint.hpp"

namespace fpopt {

// Daily picture of which domain belongs to which frozen cluster. Domains
// below the click threshold stay unassigned (and unblocked downstream).
struct AssignmentSnapshot {
  std::int32_t day = 0;
  std::map<std::string, int> assignments;
  std::vector<std::string> unassigned;  // sorted
};

// Nearest centroid by Euclidean distance; ties go to the lowest cluster id.
// Throws NoModel when the model has no centroids.
int assign_domain(const TrafficFingerprint& fingerprint,
                  const ClusterModel& model);

// Fingerprints updated through `day` (blocked days excluded), thresholded at
// min_clicks, then assigned against the frozen centroids.
AssignmentSnapshot daily_snapshot(const EventStore& store,
                                  const ClusterModel& model, std::int32_t day,
                                  std::int64_t min_clicks);

// CSV rows day,domain_id,cluster_id with cluster_id -1 for unassigned.
void write_snapshot_csv(const AssignmentSnapshot& snapshot, std::ostream& out);
AssignmentSnapshot read_snapshot_csv(std::istream& in);

}  // namespace fpopt
