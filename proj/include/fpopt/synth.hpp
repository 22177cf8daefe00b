#pragma once

#include <cstdint>
#include <vector>

#include "fpopt/events.hpp"

namespace fpopt {

// Two-population synthetic click stream: "day" domains peak 9-17 and convert
// around the clock; "night" domains peak 21-3 and never convert during
// 22-6, which makes those hours run at a loss. Timestamps are UTC.
struct SynthParams {
  std::uint64_t seed = 7;
  int day_domains = 500;
  int night_domains = 500;
  std::int64_t min_clicks_per_domain = 50;
  std::int64_t max_clicks_per_domain = 150;
  std::int32_t start_day = 18687;  // 2021-03-01
  int n_days = 60;
  Micros cost_per_click = 100'000;             // 0.10
  Micros revenue_per_conversion = 15'000'000;  // 15.00
  double day_conv_prob = 0.012;
  double night_conv_prob = 0.02;  // outside the loss-making hours
  int campaigns = 3;
};

std::vector<ClickEvent> generate_events(const SynthParams& params);

// Profile shares used by the generator, exposed for tests.
std::array<double, 24> day_profile();
std::array<double, 24> night_profile();
bool night_loss_hour(int hour);  // true for 22..23 and 0..5

}  // namespace fpopt
