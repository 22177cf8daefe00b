#pragma once

#include <random>
#include <string>
#include <vector>

#include "fpopt/events.hpp"
#include "fpopt/kernels.hpp"
#include "fpopt/rng.hpp"

namespace testgen {

// Hand-rolled generators for property-style tests. Everything is driven by
// an explicit seed so failures replay exactly.

inline fpopt::ClickEvent random_event(std::mt19937_64& rng, int n_domains,
                                      std::int32_t start_day, int n_days) {
  fpopt::ClickEvent event;
  event.domain_id =
      "dom" + std::to_string(fpopt::next_below(rng, static_cast<std::uint64_t>(n_domains)));
  event.campaign_id = "camp" + std::to_string(fpopt::next_below(rng, 3));
  const auto day = start_day + static_cast<std::int32_t>(
                                   fpopt::next_below(rng, static_cast<std::uint64_t>(n_days)));
  event.timestamp = static_cast<std::int64_t>(day) * 86400 +
                    static_cast<std::int64_t>(fpopt::next_below(rng, 86400));
  event.cost = static_cast<fpopt::Micros>(fpopt::next_below(rng, 500'000));
  if (fpopt::next_bernoulli(rng, 0.05)) {
    event.converted = true;
    event.revenue = static_cast<fpopt::Micros>(fpopt::next_below(rng, 30'000'000));
  }
  return event;
}

inline std::vector<fpopt::ClickEvent> random_events(std::mt19937_64& rng,
                                                    std::size_t count,
                                                    int n_domains,
                                                    std::int32_t start_day,
                                                    int n_days) {
  std::vector<fpopt::ClickEvent> events;
  events.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    events.push_back(random_event(rng, n_domains, start_day, n_days));
  }
  return events;
}

inline fpopt::EventStore store_of(std::vector<fpopt::ClickEvent> events,
                                  fpopt::TzOffset tz = {}) {
  fpopt::EventStore store(tz);
  store.append(std::move(events));
  return store;
}

// Normalized random point (random hourly shares).
inline fpopt::Point random_point(std::mt19937_64& rng) {
  fpopt::Point point{};
  double total = 0.0;
  for (std::size_t h = 0; h < 24; ++h) {
    point[h] = fpopt::next_double(rng) + 1e-3;
    total += point[h];
  }
  for (std::size_t h = 0; h < 24; ++h) {
    point[h] /= total;
  }
  return point;
}

// Point with mass concentrated on a wrapped hour block, jittered.
inline fpopt::Point diurnal_point(std::mt19937_64& rng, int peak_start,
                                  int peak_len) {
  fpopt::Point point{};
  double total = 0.0;
  for (int i = 0; i < peak_len; ++i) {
    const auto h = static_cast<std::size_t>((peak_start + i) % 24);
    point[h] = 1.0 + fpopt::next_double(rng) * 0.3;
    total += point[h];
  }
  for (std::size_t h = 0; h < 24; ++h) {
    if (point[h] == 0.0) {
      const double bg = fpopt::next_double(rng) * 0.02;
      point[h] = bg;
      total += bg;
    }
  }
  for (std::size_t h = 0; h < 24; ++h) {
    point[h] /= total;
  }
  return point;
}

inline fpopt::Point one_hot(int hour) {
  fpopt::Point point{};
  point[static_cast<std::size_t>(hour)] = 1.0;
  return point;
}

}  // namespace testgen
