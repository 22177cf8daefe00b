#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "fpopt/clustering.hpp"
#include "fpopt/events.hpp"

namespace fpopt {

// Per-hour training statistics of one cluster's member domains.
struct HourlyProfitProfile {
  int cluster_id = -1;
  std::array<Micros, 24> profit{};  // revenue - cost per hour
  std::array<std::int64_t, 24> clicks{};
  std::array<std::int64_t, 24> conversions{};
};

enum class RuleKind { kUnblocked, kBlockedAlways, kBlockedWindow };

// Window semantics are end-exclusive with wrap-around: (20, 5) blocks
// 20..23 and 0..4; (16, 24) blocks 16..23. A window always blocks between
// 1 and 23 hours.
struct BlockingRule {
  int cluster_id = -1;
  RuleKind kind = RuleKind::kUnblocked;
  int window_start = 0;  // 0..23, meaningful iff kBlockedWindow
  int window_end = 0;    // 1..24, end-exclusive

  friend bool operator==(const BlockingRule&, const BlockingRule&) = default;
};

// Exactly one rule per cluster id, in cluster-id order.
struct RuleSet {
  std::vector<BlockingRule> rules;

  const BlockingRule& for_cluster(int cluster_id) const {
    return rules[static_cast<std::size_t>(cluster_id)];
  }
};

// Sums clicks, conversions and profit per hour over the members' events in
// the store.
HourlyProfitProfile profile_cluster(const EventStore& store,
                                    const std::vector<std::string>& members);

// Negative-profit hours drive the rule: none -> unblocked; fewer than
// min_profitable_hours non-negative hours -> always blocked; otherwise the
// longest wrapped run of consecutive negative hours becomes the window
// (ties prefer the run containing hour 0, then the smallest start).
BlockingRule synthesize_rule(const HourlyProfitProfile& profile,
                             int min_profitable_hours);

// One rule per cluster 0..k-1; clusters without members stay unblocked.
RuleSet build_ruleset(const ClusterModel& model, const EventStore& store,
                      const std::map<std::string, int>& assignments,
                      int min_profitable_hours);

bool is_blocked(const BlockingRule& rule, int hour);

// "Not blocked", "Blocked", "Blocked 20 - 5"
std::string render_rule(const BlockingRule& rule);

std::string ruleset_to_json(const RuleSet& ruleset);
RuleSet ruleset_from_json(const std::string& text);
void save_ruleset(const RuleSet& ruleset, const std::string& path);
RuleSet load_ruleset(const std::string& path);

}  // namespace fpopt
