#include "fpopt/fingerprint.hpp"

#include <cstdio>
#include <ostream>

#include "fpopt/errors.hpp"

namespace fpopt {

FingerprintPayload compute_fingerprint(
    const std::array<std::int64_t, 24>& counts) {
  std::int64_t total = 0;
  for (const std::int64_t count : counts) {
    total += count;
  }
  if (total <= 0) {
    throw UndefinedFingerprint("fingerprint undefined for zero clicks");
  }
  FingerprintPayload payload;
  payload.total_clicks = total;
  for (std::size_t hour = 0; hour < 24; ++hour) {
    payload.hourly_share[hour] =
        static_cast<double>(counts[hour]) / static_cast<double>(total);
  }
  return payload;
}

FingerprintMap update_fingerprints(const EventStore& store,
                                   std::int32_t up_to_day) {
  const std::vector<std::string>& domains = store.domains();
  const auto n = static_cast<std::int64_t>(domains.size());
  static const std::set<std::int32_t> kNoExclusions;

  // Slot per domain; the parallel loop never reduces across slots, so the
  // result is identical for any thread count.
  std::vector<TrafficFingerprint> slots(domains.size());
  std::vector<char> present(domains.size(), 0);

#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < n; ++i) {
    const std::string& domain = domains[static_cast<std::size_t>(i)];
    const std::set<std::int32_t>* blocked = store.blocked_days_of(domain);
    const auto counts =
        store.hourly_counts(domain, blocked ? *blocked : kNoExclusions, up_to_day);
    std::int64_t total = 0;
    for (const std::int64_t count : counts) {
      total += count;
    }
    if (total == 0) {
      continue;
    }
    const FingerprintPayload payload = compute_fingerprint(counts);
    auto& slot = slots[static_cast<std::size_t>(i)];
    slot.domain_id = domain;
    slot.hourly_share = payload.hourly_share;
    slot.total_clicks = payload.total_clicks;
    slot.as_of = up_to_day;
    present[static_cast<std::size_t>(i)] = 1;
  }

  FingerprintMap result;
  for (std::size_t i = 0; i < slots.size(); ++i) {
    if (present[i]) {
      result.emplace_hint(result.end(), slots[i].domain_id,
                          std::move(slots[i]));
    }
  }
  return result;
}

std::vector<std::string> eligible_domains(const FingerprintMap& fingerprints,
                                          std::int64_t min_clicks) {
  std::vector<std::string> out;
  for (const auto& [domain, fingerprint] : fingerprints) {
    if (fingerprint.total_clicks >= min_clicks) {
      out.push_back(domain);
    }
  }
  return out;
}

void write_fingerprint_csv(const FingerprintMap& fingerprints,
                           std::ostream& out) {
  out << "domain_id,total_clicks,as_of";
  for (int hour = 0; hour < 24; ++hour) {
    out << ",f" << hour;
  }
  out << '\n';
  char buf[32];
  for (const auto& [domain, fingerprint] : fingerprints) {
    out << domain << ',' << fingerprint.total_clicks << ','
        << format_civil_day(fingerprint.as_of);
    for (const double share : fingerprint.hourly_share) {
      std::snprintf(buf, sizeof(buf), "%.12g", share);
      out << ',' << buf;
    }
    out << '\n';
  }
}

}  // namespace fpopt
