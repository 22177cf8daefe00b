#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "fpopt/money.hpp"
#include "fpopt/time.hpp"

namespace fpopt {

// One paid click. Revenue is attributed to the click instant, so a
// conversion shows up as revenue > 0 and converted = true on the click row.
struct ClickEvent {
  std::int64_t timestamp = 0;  // unix epoch seconds
  std::string domain_id;
  std::string campaign_id;
  Micros cost = 0;
  Micros revenue = 0;
  bool converted = false;

  friend bool operator==(const ClickEvent&, const ClickEvent&) = default;
};

struct RecordError {
  std::size_t line = 0;  // 1-based physical line in the input
  std::string reason;

  friend bool operator==(const RecordError&, const RecordError&) = default;
};

// Append-only store over ClickEvents with per-domain and time-range access.
// Single writer: append() runs in batches; readers are safe once a batch
// returns. Civil days and hours are derived under the store's offset.
class EventStore {
 public:
  explicit EventStore(TzOffset tz = {});

  void append(std::vector<ClickEvent> batch);

  std::size_t size() const { return events_.size(); }
  bool empty() const { return events_.empty(); }
  const std::vector<ClickEvent>& events() const { return events_; }
  const ClickEvent& event(std::size_t index) const { return events_[index]; }
  TzOffset tz() const { return tz_; }

  std::int32_t day_of(std::size_t index) const { return days_[index]; }
  int hour_of(std::size_t index) const { return hours_[index]; }

  // Sorted, deduplicated domain ids.
  const std::vector<std::string>& domains() const;
  // Indices of the domain's events in append order; nullptr when unknown.
  const std::vector<std::uint32_t>* events_of(std::string_view domain) const;

  // Event indices with from_ts <= timestamp < to_ts, in append order.
  std::vector<std::uint32_t> events_in_range(std::int64_t from_ts,
                                             std::int64_t to_ts) const;

  // Clicks per hour-of-day for one domain. Days in `exclude` and days after
  // `up_to_day` are skipped. Unknown domains yield a zero vector.
  std::array<std::int64_t, 24> hourly_counts(
      std::string_view domain, const std::set<std::int32_t>& exclude = {},
      std::int32_t up_to_day = kMaxCivilDay) const;

  // Days on which the domain was blocked for any hour; such days are
  // excluded from fingerprint updates.
  void block_day(std::string_view domain, std::int32_t day);
  bool is_blocked_day(std::string_view domain, std::int32_t day) const;
  const std::set<std::int32_t>* blocked_days_of(std::string_view domain) const;
  const std::map<std::string, std::set<std::int32_t>, std::less<>>&
  blocked_days() const {
    return blocked_days_;
  }

  std::optional<std::int64_t> min_timestamp() const;
  std::optional<std::int64_t> max_timestamp() const;
  std::optional<std::int32_t> min_day() const;
  std::optional<std::int32_t> max_day() const;

 private:
  TzOffset tz_;
  std::vector<ClickEvent> events_;
  std::vector<std::int32_t> days_;
  std::vector<std::int8_t> hours_;
  std::map<std::string, std::vector<std::uint32_t>, std::less<>> by_domain_;
  std::map<std::string, std::set<std::int32_t>, std::less<>> blocked_days_;
  mutable std::vector<std::string> domain_cache_;
  mutable bool domain_cache_valid_ = false;
};

struct SplitResult {
  EventStore train;
  EventStore test;
  std::optional<std::string> warning;  // set when one side is empty
};

// Events strictly before the instant go to train, the rest to test.
// Blocked-day markings are inherited by both sides.
SplitResult split_train_test(const EventStore& store,
                             std::int64_t split_instant);

}  // namespace fpopt
