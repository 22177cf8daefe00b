#include "fpopt/synth.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <random>

#include "fpopt/rng.hpp"

namespace fpopt {

namespace {

std::array<double, 24> block_profile(int peak_start, int peak_len,
                                     double peak_mass) {
  std::array<double, 24> profile{};
  const double in_peak = peak_mass / static_cast<double>(peak_len);
  const double outside = (1.0 - peak_mass) / static_cast<double>(24 - peak_len);
  for (int h = 0; h < 24; ++h) {
    profile[static_cast<std::size_t>(h)] = outside;
  }
  for (int i = 0; i < peak_len; ++i) {
    profile[static_cast<std::size_t>((peak_start + i) % 24)] = in_peak;
  }
  return profile;
}

int sample_hour(std::mt19937_64& rng, const std::array<double, 24>& profile) {
  const double r = next_double(rng);
  double cum = 0.0;
  for (int h = 0; h < 24; ++h) {
    cum += profile[static_cast<std::size_t>(h)];
    if (r < cum) {
      return h;
    }
  }
  return 23;
}

}  // namespace

std::array<double, 24> day_profile() { return block_profile(9, 9, 0.9); }

std::array<double, 24> night_profile() { return block_profile(21, 7, 0.9); }

bool night_loss_hour(int hour) { return hour >= 22 || hour < 6; }

std::vector<ClickEvent> generate_events(const SynthParams& params) {
  std::mt19937_64 rng(params.seed);
  const auto day_shares = day_profile();
  const auto night_shares = night_profile();

  std::vector<ClickEvent> events;
  const int total_domains = params.day_domains + params.night_domains;
  for (int d = 0; d < total_domains; ++d) {
    const bool is_day_domain = d < params.day_domains;
    char name[16];
    std::snprintf(name, sizeof(name), "d%05d", d);
    const std::int64_t clicks = next_in_range(
        rng, params.min_clicks_per_domain, params.max_clicks_per_domain);
    for (std::int64_t c = 0; c < clicks; ++c) {
      ClickEvent event;
      event.domain_id = name;
      event.campaign_id =
          "camp" + std::to_string(next_below(rng, static_cast<std::uint64_t>(
                                                      params.campaigns)));
      const std::int32_t day =
          params.start_day + static_cast<std::int32_t>(next_below(
                                 rng, static_cast<std::uint64_t>(params.n_days)));
      const int hour =
          sample_hour(rng, is_day_domain ? day_shares : night_shares);
      event.timestamp = static_cast<std::int64_t>(day) * 86400 + hour * 3600 +
                        static_cast<std::int64_t>(next_below(rng, 60)) * 60 +
                        static_cast<std::int64_t>(next_below(rng, 60));
      event.cost = params.cost_per_click;
      double conv_prob = 0.0;
      if (is_day_domain) {
        conv_prob = params.day_conv_prob;
      } else if (!night_loss_hour(hour)) {
        conv_prob = params.night_conv_prob;
      }
      if (next_bernoulli(rng, conv_prob)) {
        event.converted = true;
        event.revenue = params.revenue_per_conversion;
      }
      events.push_back(std::move(event));
    }
  }
  std::stable_sort(events.begin(), events.end(),
                   [](const ClickEvent& a, const ClickEvent& b) {
                     if (a.timestamp != b.timestamp) {
                       return a.timestamp < b.timestamp;
                     }
                     return a.domain_id < b.domain_id;
                   });
  return events;
}

}  // namespace fpopt
