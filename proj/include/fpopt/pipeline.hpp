#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fpopt/config.hpp"
#include "fpopt/events.hpp"
#include "fpopt/rules.hpp"

namespace fpopt::pipeline {

// Artifact locations under the configured output directory.
struct ArtifactPaths {
  std::string dir;

  std::string events_csv() const { return dir + "/events.csv"; }
  std::string record_errors_csv() const { return dir + "/record_errors.csv"; }
  std::string blocked_days_csv() const { return dir + "/blocked_days.csv"; }
  std::string model_json() const { return dir + "/model.json"; }
  std::string ruleset_json() const { return dir + "/ruleset.json"; }
  std::string fingerprints_csv(std::int32_t day) const {
    return dir + "/fingerprints_" + format_civil_day(day) + ".csv";
  }
  std::string snapshot_csv(std::int32_t day) const {
    return dir + "/snapshot_" + format_civil_day(day) + ".csv";
  }
  std::string report_json() const { return dir + "/report.json"; }
  std::string report_daily_csv() const { return dir + "/report_daily.csv"; }
  std::string actions_csv(std::int32_t day) const {
    return dir + "/actions_" + format_civil_day(day) + ".csv";
  }
  std::string state_json(std::int32_t day) const {
    return dir + "/state_" + format_civil_day(day) + ".json";
  }
  std::string manifest_json(const std::string& subcommand) const {
    return dir + "/manifests/" + subcommand + ".json";
  }
};

// Hours a domain is blocked; either the whole day or a wrapped window.
struct BlockScope {
  bool always = false;
  int start = 0;
  int end = 0;

  friend bool operator==(const BlockScope&, const BlockScope&) = default;
};

enum class ActionVerb { kBlock, kUnblock };

struct Action {
  std::string domain_id;
  BlockScope scope;
  ActionVerb verb = ActionVerb::kBlock;

  friend bool operator==(const Action&, const Action&) = default;
};

// Block/unblock deltas against the previous day's state.
struct ActionList {
  std::int32_t day = 0;
  std::vector<Action> actions;
};

using BlockState = std::map<std::string, BlockScope>;

// Target block state implied by a rule set and assignment; unassigned
// domains and unblocked clusters contribute nothing.
BlockState target_block_state(const std::map<std::string, int>& assignments,
                              const RuleSet& rules);

// Pure diff used by cmd_daily; exposed for tests. Unblock of the old scope
// precedes block of the new one when a domain's scope changes.
ActionList diff_block_state(std::int32_t day, const BlockState& previous,
                            const BlockState& target);

void write_actions_csv(const ActionList& actions, std::ostream& out);
std::string block_state_to_json(std::int32_t day, const BlockState& state);
BlockState block_state_from_json(const std::string& text);

// Subcommand drivers. Each writes its artifacts atomically plus a manifest
// (config hash, seed, input hashes) and logs a short summary.
void cmd_ingest(const PipelineConfig& config, std::ostream& log);
void cmd_train(const PipelineConfig& config, std::ostream& log);
void cmd_rules(const PipelineConfig& config, std::ostream& log);
void cmd_assign(const PipelineConfig& config,
                std::optional<std::int32_t> day, std::ostream& log);
void cmd_simulate(const PipelineConfig& config, std::ostream& log);
void cmd_report(const PipelineConfig& config, std::ostream& log);
ActionList cmd_daily(const PipelineConfig& config,
                     std::optional<std::int32_t> day, std::ostream& log);

}  // namespace fpopt::pipeline
