#include "fpopt/events.hpp"

#include <algorithm>

namespace fpopt {

EventStore::EventStore(TzOffset tz) : tz_(tz) {}

void EventStore::append(std::vector<ClickEvent> batch) {
  events_.reserve(events_.size() + batch.size());
  days_.reserve(events_.capacity());
  hours_.reserve(events_.capacity());
  for (auto& event : batch) {
    const auto index = static_cast<std::uint32_t>(events_.size());
    days_.push_back(civil_day_of(event.timestamp, tz_));
    hours_.push_back(static_cast<std::int8_t>(hour_of_day(event.timestamp, tz_)));
    by_domain_[event.domain_id].push_back(index);
    events_.push_back(std::move(event));
  }
  domain_cache_valid_ = false;
}

const std::vector<std::string>& EventStore::domains() const {
  if (!domain_cache_valid_) {
    domain_cache_.clear();
    domain_cache_.reserve(by_domain_.size());
    for (const auto& [domain, indices] : by_domain_) {
      domain_cache_.push_back(domain);
    }
    domain_cache_valid_ = true;
  }
  return domain_cache_;
}

const std::vector<std::uint32_t>* EventStore::events_of(
    std::string_view domain) const {
  const auto it = by_domain_.find(domain);
  return it == by_domain_.end() ? nullptr : &it->second;
}

std::vector<std::uint32_t> EventStore::events_in_range(
    std::int64_t from_ts, std::int64_t to_ts) const {
  std::vector<std::uint32_t> out;
  for (std::size_t i = 0; i < events_.size(); ++i) {
    if (events_[i].timestamp >= from_ts && events_[i].timestamp < to_ts) {
      out.push_back(static_cast<std::uint32_t>(i));
    }
  }
  return out;
}

std::array<std::int64_t, 24> EventStore::hourly_counts(
    std::string_view domain, const std::set<std::int32_t>& exclude,
    std::int32_t up_to_day) const {
  std::array<std::int64_t, 24> counts{};
  const auto* indices = events_of(domain);
  if (indices == nullptr) {
    return counts;
  }
  for (const std::uint32_t index : *indices) {
    const std::int32_t day = days_[index];
    if (day > up_to_day || exclude.contains(day)) {
      continue;
    }
    ++counts[static_cast<std::size_t>(hours_[index])];
  }
  return counts;
}

void EventStore::block_day(std::string_view domain, std::int32_t day) {
  blocked_days_[std::string(domain)].insert(day);
}

bool EventStore::is_blocked_day(std::string_view domain,
                                std::int32_t day) const {
  const auto it = blocked_days_.find(domain);
  return it != blocked_days_.end() && it->second.contains(day);
}

const std::set<std::int32_t>* EventStore::blocked_days_of(
    std::string_view domain) const {
  const auto it = blocked_days_.find(domain);
  return it == blocked_days_.end() ? nullptr : &it->second;
}

std::optional<std::int64_t> EventStore::min_timestamp() const {
  if (events_.empty()) {
    return std::nullopt;
  }
  auto it = std::min_element(
      events_.begin(), events_.end(),
      [](const auto& a, const auto& b) { return a.timestamp < b.timestamp; });
  return it->timestamp;
}

std::optional<std::int64_t> EventStore::max_timestamp() const {
  if (events_.empty()) {
    return std::nullopt;
  }
  auto it = std::max_element(
      events_.begin(), events_.end(),
      [](const auto& a, const auto& b) { return a.timestamp < b.timestamp; });
  return it->timestamp;
}

std::optional<std::int32_t> EventStore::min_day() const {
  if (days_.empty()) {
    return std::nullopt;
  }
  return *std::min_element(days_.begin(), days_.end());
}

std::optional<std::int32_t> EventStore::max_day() const {
  if (days_.empty()) {
    return std::nullopt;
  }
  return *std::max_element(days_.begin(), days_.end());
}

SplitResult split_train_test(const EventStore& store,
                             std::int64_t split_instant) {
  SplitResult result{EventStore(store.tz()), EventStore(store.tz()),
                     std::nullopt};
  std::vector<ClickEvent> train_batch;
  std::vector<ClickEvent> test_batch;
  for (const ClickEvent& event : store.events()) {
    if (event.timestamp < split_instant) {
      train_batch.push_back(event);
    } else {
      test_batch.push_back(event);
    }
  }
  if (!store.empty()) {
    if (train_batch.empty()) {
      result.warning = "split instant precedes all events; train set is empty";
    } else if (test_batch.empty()) {
      result.warning = "split instant follows all events; test set is empty";
    }
  }
  result.train.append(std::move(train_batch));
  result.test.append(std::move(test_batch));
  for (const auto& [domain, days] : store.blocked_days()) {
    for (const std::int32_t day : days) {
      result.train.block_day(domain, day);
      result.test.block_day(domain, day);
    }
  }
  return result;
}

}  // namespace fpopt
