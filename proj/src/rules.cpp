#include "fpopt/rules.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "fpopt/errors.hpp"

namespace fpopt {

namespace {

struct HourRun {
  int start = 0;   // 0..23
  int length = 0;  // 1..24
  bool contains(int hour) const {
    for (int i = 0; i < length; ++i) {
      if ((start + i) % 24 == hour) {
        return true;
      }
    }
    return false;
  }
};

// Maximal circular runs of hours where negative[h] holds.
std::vector<HourRun> negative_runs(const std::array<bool, 24>& negative) {
  std::vector<HourRun> runs;
  for (int h = 0; h < 24; ++h) {
    const bool prev = negative[static_cast<std::size_t>((h + 23) % 24)];
    if (!negative[static_cast<std::size_t>(h)] || prev) {
      continue;  // not a run start
    }
    int length = 0;
    while (length < 24 && negative[static_cast<std::size_t>((h + length) % 24)]) {
      ++length;
    }
    runs.push_back({h, length});
  }
  return runs;
}

}  // namespace

HourlyProfitProfile profile_cluster(const EventStore& store,
                                    const std::vector<std::string>& members) {
  HourlyProfitProfile profile;
  for (const std::string& member : members) {
    const auto* indices = store.events_of(member);
    if (indices == nullptr) {
      continue;
    }
    for (const std::uint32_t index : *indices) {
      const ClickEvent& event = store.event(index);
      const auto hour = static_cast<std::size_t>(store.hour_of(index));
      profile.clicks[hour] += 1;
      profile.conversions[hour] += event.converted ? 1 : 0;
      profile.profit[hour] += event.revenue - event.cost;
    }
  }
  return profile;
}

BlockingRule synthesize_rule(const HourlyProfitProfile& profile,
                             int min_profitable_hours) {
  BlockingRule rule;
  rule.cluster_id = profile.cluster_id;

  std::array<bool, 24> negative{};
  int negative_count = 0;
  for (std::size_t h = 0; h < 24; ++h) {
    negative[h] = profile.profit[h] < 0;
    negative_count += negative[h] ? 1 : 0;
  }
  if (negative_count == 0) {
    rule.kind = RuleKind::kUnblocked;
    return rule;
  }
  const int profitable = 24 - negative_count;
  if (profitable < min_profitable_hours || negative_count == 24) {
    rule.kind = RuleKind::kBlockedAlways;
    return rule;
  }

  const auto runs = negative_runs(negative);
  HourRun best = runs.front();
  for (const HourRun& run : runs) {
    if (run.length > best.length) {
      best = run;
    } else if (run.length == best.length) {
      if (run.contains(0) && !best.contains(0)) {
        best = run;
      } else if (run.contains(0) == best.contains(0) &&
                 run.start < best.start) {
        best = run;
      }
    }
  }
  rule.kind = RuleKind::kBlockedWindow;
  rule.window_start = best.start;
  rule.window_end = (best.start + best.length - 1) % 24 + 1;
  return rule;
}

RuleSet build_ruleset(const ClusterModel& model, const EventStore& store,
                      const std::map<std::string, int>& assignments,
                      int min_profitable_hours) {
  std::vector<std::vector<std::string>> members(
      static_cast<std::size_t>(model.k));
  for (const auto& [domain, cluster] : assignments) {
    if (cluster < 0 || cluster >= model.k) {
      throw FatalError("assignment references unknown cluster " +
                       std::to_string(cluster));
    }
    members[static_cast<std::size_t>(cluster)].push_back(domain);
  }
  RuleSet ruleset;
  for (int cluster = 0; cluster < model.k; ++cluster) {
    if (members[static_cast<std::size_t>(cluster)].empty()) {
      BlockingRule rule;
      rule.cluster_id = cluster;
      rule.kind = RuleKind::kUnblocked;
      ruleset.rules.push_back(rule);
      continue;
    }
    HourlyProfitProfile profile =
        profile_cluster(store, members[static_cast<std::size_t>(cluster)]);
    profile.cluster_id = cluster;
    ruleset.rules.push_back(synthesize_rule(profile, min_profitable_hours));
  }
  return ruleset;
}

bool is_blocked(const BlockingRule& rule, int hour) {
  switch (rule.kind) {
    case RuleKind::kUnblocked:
      return false;
    case RuleKind::kBlockedAlways:
      return true;
    case RuleKind::kBlockedWindow:
      if (rule.window_start < rule.window_end) {
        return hour >= rule.window_start && hour < rule.window_end;
      }
      return hour >= rule.window_start || hour < rule.window_end;
  }
  return false;
}

std::string render_rule(const BlockingRule& rule) {
  switch (rule.kind) {
    case RuleKind::kUnblocked:
      return "Not blocked";
    case RuleKind::kBlockedAlways:
      return "Blocked";
    case RuleKind::kBlockedWindow:
      return "Blocked " + std::to_string(rule.window_start) + " - " +
             std::to_string(rule.window_end);
  }
  return "Not blocked";
}

std::string ruleset_to_json(const RuleSet& ruleset) {
  nlohmann::ordered_json doc = nlohmann::ordered_json::object();
  for (const BlockingRule& rule : ruleset.rules) {
    nlohmann::ordered_json entry;
    switch (rule.kind) {
      case RuleKind::kUnblocked:
        entry["kind"] = "unblocked";
        break;
      case RuleKind::kBlockedAlways:
        entry["kind"] = "blocked_always";
        break;
      case RuleKind::kBlockedWindow:
        entry["kind"] = "blocked_window";
        entry["start"] = rule.window_start;
        entry["end"] = rule.window_end;
        break;
    }
    doc[std::to_string(rule.cluster_id)] = std::move(entry);
  }
  return doc.dump(2) + "\n";
}

RuleSet ruleset_from_json(const std::string& text) {
  const auto doc = nlohmann::json::parse(text, nullptr, false);
  if (doc.is_discarded() || !doc.is_object()) {
    throw FatalError("ruleset file is not valid JSON");
  }
  std::map<int, BlockingRule> by_cluster;
  try {
    for (const auto& [key, value] : doc.items()) {
      BlockingRule rule;
      rule.cluster_id = std::stoi(key);
      const auto kind = value.at("kind").get<std::string>();
      if (kind == "unblocked") {
        rule.kind = RuleKind::kUnblocked;
      } else if (kind == "blocked_always") {
        rule.kind = RuleKind::kBlockedAlways;
      } else if (kind == "blocked_window") {
        rule.kind = RuleKind::kBlockedWindow;
        rule.window_start = value.at("start").get<int>();
        rule.window_end = value.at("end").get<int>();
        // start == end (mod 24) would mean a 0- or 24-hour window
        if (rule.window_start < 0 || rule.window_start > 23 ||
            rule.window_end < 1 || rule.window_end > 24 ||
            rule.window_start == rule.window_end % 24) {
          throw FatalError("ruleset file: invalid window for cluster " + key);
        }
      } else {
        throw FatalError("ruleset file: unknown kind \"" + kind + "\"");
      }
      by_cluster[rule.cluster_id] = rule;
    }
  } catch (const nlohmann::json::exception& e) {
    throw FatalError(std::string("ruleset file: ") + e.what());
  }
  RuleSet ruleset;
  int expected = 0;
  for (const auto& [cluster, rule] : by_cluster) {
    if (cluster != expected) {
      throw FatalError("ruleset file: cluster ids must be contiguous from 0");
    }
    ruleset.rules.push_back(rule);
    ++expected;
  }
  if (ruleset.rules.empty()) {
    throw FatalError("ruleset file: no rules");
  }
  return ruleset;
}

void save_ruleset(const RuleSet& ruleset, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw IoError("cannot write ruleset file: " + path);
  }
  out << ruleset_to_json(ruleset);
}

RuleSet load_ruleset(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot read ruleset file: " + path);
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return ruleset_from_json(buffer.str());
}

}  // namespace fpopt
