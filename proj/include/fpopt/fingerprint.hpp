#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "fpopt/events.hpp"

namespace fpopt {

// Normalized 24-hour click distribution of one domain. Never materialized
// for zero-click domains, so the shares always sum to 1.
struct TrafficFingerprint {
  std::string domain_id;
  std::array<double, 24> hourly_share{};
  std::int64_t total_clicks = 0;
  std::int32_t as_of = 0;  // civil day of last update

  friend bool operator==(const TrafficFingerprint&,
                         const TrafficFingerprint&) = default;
};

struct FingerprintPayload {
  std::array<double, 24> hourly_share{};
  std::int64_t total_clicks = 0;
};

// share_i = counts_i / total. Throws UndefinedFingerprint on all-zero counts.
FingerprintPayload compute_fingerprint(
    const std::array<std::int64_t, 24>& counts);

using FingerprintMap = std::map<std::string, TrafficFingerprint>;

// Fingerprints for every domain with at least one click on a non-blocked day
// up to `up_to_day`. Blocked days are excluded whole; domains whose clicks
// all fall on blocked days are omitted. Parallel across domains with a
// deterministic (sorted) result.
FingerprintMap update_fingerprints(const EventStore& store,
                                   std::int32_t up_to_day);

// Domains with total_clicks >= min_clicks, sorted.
std::vector<std::string> eligible_domains(const FingerprintMap& fingerprints,
                                          std::int64_t min_clicks);

// Snapshot CSV: domain_id,total_clicks,as_of,f0,...,f23 (12 significant
// digits on the shares).
void write_fingerprint_csv(const FingerprintMap& fingerprints,
                           std::ostream& out);

}  // namespace fpopt
