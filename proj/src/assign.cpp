#include "fpopt/assign.hpp"

#include <istream>
#include <ostream>

#include "fpopt/errors.hpp"

namespace fpopt {

int assign_domain(const TrafficFingerprint& fingerprint,
                  const ClusterModel& model) {
  if (model.k < 1 || model.centroids.empty()) {
    throw NoModel("cannot assign without a trained model");
  }
  int best = 0;
  double best_dist = squared_distance(fingerprint.hourly_share, model.centroids[0]);
  for (int c = 1; c < model.k; ++c) {
    const double dist = squared_distance(fingerprint.hourly_share,
                                         model.centroids[static_cast<std::size_t>(c)]);
    if (dist < best_dist) {
      best_dist = dist;
      best = c;
    }
  }
  return best;
}

AssignmentSnapshot daily_snapshot(const EventStore& store,
                                  const ClusterModel& model, std::int32_t day,
                                  std::int64_t min_clicks) {
  if (model.k < 1 || model.centroids.empty()) {
    throw NoModel("cannot assign without a trained model");
  }
  const FingerprintMap fingerprints = update_fingerprints(store, day);

  AssignmentSnapshot snapshot;
  snapshot.day = day;

  // Flatten for the parallel pass; slots keep the sorted order.
  std::vector<const TrafficFingerprint*> ordered;
  ordered.reserve(fingerprints.size());
  for (const auto& [domain, fingerprint] : fingerprints) {
    ordered.push_back(&fingerprint);
  }
  std::vector<int> labels(ordered.size(), -1);
  const auto n = static_cast<std::int64_t>(ordered.size());

#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < n; ++i) {
    const TrafficFingerprint& fingerprint = *ordered[static_cast<std::size_t>(i)];
    if (fingerprint.total_clicks >= min_clicks) {
      labels[static_cast<std::size_t>(i)] = assign_domain(fingerprint, model);
    }
  }

  for (std::size_t i = 0; i < ordered.size(); ++i) {
    if (labels[i] >= 0) {
      snapshot.assignments.emplace_hint(snapshot.assignments.end(),
                                        ordered[i]->domain_id, labels[i]);
    } else {
      snapshot.unassigned.push_back(ordered[i]->domain_id);
    }
  }
  return snapshot;
}

void write_snapshot_csv(const AssignmentSnapshot& snapshot,
                        std::ostream& out) {
  out << "day,domain_id,cluster_id\n";
  const std::string day = format_civil_day(snapshot.day);
  auto assigned = snapshot.assignments.cbegin();
  auto unassigned = snapshot.unassigned.cbegin();
  // Merge the two sorted sequences so rows come out in domain order.
  while (assigned != snapshot.assignments.cend() ||
         unassigned != snapshot.unassigned.cend()) {
    const bool take_assigned =
        unassigned == snapshot.unassigned.cend() ||
        (assigned != snapshot.assignments.cend() &&
         assigned->first < *unassigned);
    if (take_assigned) {
      out << day << ',' << assigned->first << ',' << assigned->second << '\n';
      ++assigned;
    } else {
      out << day << ',' << *unassigned << ",-1\n";
      ++unassigned;
    }
  }
}

AssignmentSnapshot read_snapshot_csv(std::istream& in) {
  AssignmentSnapshot snapshot;
  std::string line;
  std::size_t line_no = 0;
  bool have_day = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') {
      line.pop_back();
    }
    if (line_no == 1 || line.empty()) {
      continue;
    }
    const auto first = line.find(',');
    const auto second = line.rfind(',');
    if (first == std::string::npos || second == first) {
      throw FatalError("snapshot file: bad row at line " +
                       std::to_string(line_no));
    }
    const auto day = parse_civil_day(line.substr(0, first));
    if (!day) {
      throw FatalError("snapshot file: bad day at line " +
                       std::to_string(line_no));
    }
    if (!have_day) {
      snapshot.day = *day;
      have_day = true;
    }
    const std::string domain = line.substr(first + 1, second - first - 1);
    const int cluster = std::stoi(line.substr(second + 1));
    if (cluster < 0) {
      snapshot.unassigned.push_back(domain);
    } else {
      snapshot.assignments[domain] = cluster;
    }
  }
  return snapshot;
}

}  // namespace fpopt
