#include "fpopt/pipeline.hpp"

#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "fpopt/assign.hpp"
#include "fpopt/errors.hpp"
#include "fpopt/fingerprint.hpp"
#include "fpopt/report.hpp"
#include "fpopt/sha256.hpp"
#include "fpopt/simulate.hpp"

namespace fpopt::pipeline {

namespace fs = std::filesystem;

namespace {

void atomic_write(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) {
      throw IoError("cannot write file: " + tmp);
    }
    out << content;
    if (!out) {
      throw IoError("write failed: " + tmp);
    }
  }
  fs::rename(tmp, path);
}

void write_manifest(const PipelineConfig& config, const std::string& subcommand,
                    const std::vector<std::string>& inputs,
                    const std::vector<std::string>& outputs) {
  const ArtifactPaths paths{config.output_dir};
  fs::create_directories(config.output_dir + "/manifests");
  nlohmann::ordered_json doc;
  doc["subcommand"] = subcommand;
  doc["config_sha256"] = config.sha256();
  doc["seed"] = config.seed;
  nlohmann::ordered_json in = nlohmann::ordered_json::object();
  for (const std::string& path : inputs) {
    in[path] = Sha256::of_file(path);
  }
  doc["inputs"] = std::move(in);
  doc["outputs"] = outputs;
  atomic_write(paths.manifest_json(subcommand), doc.dump(2) + "\n");
}

void require_artifact(const std::string& path, const std::string& producer) {
  if (!fs::exists(path)) {
    throw FatalError("missing artifact " + path + "; run `fpopt " + producer +
                     "` first");
  }
}

EventStore load_store(const PipelineConfig& config, bool with_blocked_days) {
  const ArtifactPaths paths{config.output_dir};
  require_artifact(paths.events_csv(), "ingest");
  const ParseResult parsed =
      parse_events_file(paths.events_csv(), EventFormat::kCsv);
  if (!parsed.errors.empty()) {
    throw FatalError("event store artifact is corrupt: " +
                     std::to_string(parsed.errors.size()) + " bad records");
  }
  EventStore store(config.timezone);
  store.append(parsed.events);
  if (with_blocked_days && fs::exists(paths.blocked_days_csv())) {
    std::ifstream in(paths.blocked_days_csv(), std::ios::binary);
    if (!in) {
      throw IoError("cannot read " + paths.blocked_days_csv());
    }
    read_blocked_days_csv(in, &store);
  }
  return store;
}

// Train-side assignments shared by cmd_rules and cmd_report: fingerprints
// through the model's training day, thresholded, nearest-centroid.
std::map<std::string, int> train_assignments(const EventStore& train_store,
                                             const ClusterModel& model,
                                             std::int64_t min_clicks) {
  const FingerprintMap fingerprints =
      update_fingerprints(train_store, model.trained_through);
  std::map<std::string, int> assignments;
  for (const std::string& domain : eligible_domains(fingerprints, min_clicks)) {
    assignments[domain] = assign_domain(fingerprints.at(domain), model);
  }
  return assignments;
}

std::string render_scope(const BlockScope& scope) {
  if (scope.always) {
    return "always";
  }
  return std::to_string(scope.start) + "-" + std::to_string(scope.end);
}

std::optional<std::int32_t> latest_state_day_before(const ArtifactPaths& paths,
                                                    std::int32_t day) {
  std::optional<std::int32_t> latest;
  if (!fs::exists(paths.dir)) {
    return latest;
  }
  for (const auto& entry : fs::directory_iterator(paths.dir)) {
    const std::string name = entry.path().filename().string();
    if (name.size() != 21 || !name.starts_with("state_") ||
        !name.ends_with(".json")) {
      continue;
    }
    const auto parsed = parse_civil_day(name.substr(6, 10));
    if (parsed && *parsed < day && (!latest || *parsed > *latest)) {
      latest = *parsed;
    }
  }
  return latest;
}

}  // namespace

BlockState target_block_state(const std::map<std::string, int>& assignments,
                              const RuleSet& rules) {
  BlockState state;
  for (const auto& [domain, cluster] : assignments) {
    const BlockingRule& rule = rules.for_cluster(cluster);
    if (rule.kind == RuleKind::kUnblocked) {
      continue;
    }
    BlockScope scope;
    if (rule.kind == RuleKind::kBlockedAlways) {
      scope.always = true;
    } else {
      scope.start = rule.window_start;
      scope.end = rule.window_end;
    }
    state.emplace(domain, scope);
  }
  return state;
}

ActionList diff_block_state(std::int32_t day, const BlockState& previous,
                            const BlockState& target) {
  ActionList list;
  list.day = day;
  auto prev_it = previous.cbegin();
  auto next_it = target.cbegin();
  while (prev_it != previous.cend() || next_it != target.cend()) {
    const bool only_prev =
        next_it == target.cend() ||
        (prev_it != previous.cend() && prev_it->first < next_it->first);
    const bool only_next =
        prev_it == previous.cend() ||
        (next_it != target.cend() && next_it->first < prev_it->first);
    if (only_prev) {
      list.actions.push_back({prev_it->first, prev_it->second,
                              ActionVerb::kUnblock});
      ++prev_it;
    } else if (only_next) {
      list.actions.push_back({next_it->first, next_it->second,
                              ActionVerb::kBlock});
      ++next_it;
    } else {
      if (!(prev_it->second == next_it->second)) {
        list.actions.push_back({prev_it->first, prev_it->second,
                                ActionVerb::kUnblock});
        list.actions.push_back({next_it->first, next_it->second,
                                ActionVerb::kBlock});
      }
      ++prev_it;
      ++next_it;
    }
  }
  return list;
}

void write_actions_csv(const ActionList& actions, std::ostream& out) {
  out << "day,domain_id,scope,action\n";
  const std::string day = format_civil_day(actions.day);
  for (const Action& action : actions.actions) {
    out << day << ',' << action.domain_id << ',' << render_scope(action.scope)
        << ',' << (action.verb == ActionVerb::kBlock ? "block" : "unblock")
        << '\n';
  }
}

std::string block_state_to_json(std::int32_t day, const BlockState& state) {
  nlohmann::ordered_json doc;
  doc["day"] = format_civil_day(day);
  nlohmann::ordered_json blocked = nlohmann::ordered_json::object();
  for (const auto& [domain, scope] : state) {
    nlohmann::ordered_json entry;
    if (scope.always) {
      entry["always"] = true;
    } else {
      entry["start"] = scope.start;
      entry["end"] = scope.end;
    }
    blocked[domain] = std::move(entry);
  }
  doc["blocked"] = std::move(blocked);
  return doc.dump(2) + "\n";
}

BlockState block_state_from_json(const std::string& text) {
  const auto doc = nlohmann::json::parse(text, nullptr, false);
  if (doc.is_discarded() || !doc.is_object()) {
    throw FatalError("state file is not valid JSON");
  }
  BlockState state;
  try {
    for (const auto& [domain, entry] : doc.at("blocked").items()) {
      BlockScope scope;
      if (entry.contains("always")) {
        scope.always = entry.at("always").get<bool>();
      } else {
        scope.start = entry.at("start").get<int>();
        scope.end = entry.at("end").get<int>();
      }
      state.emplace(domain, scope);
    }
  } catch (const nlohmann::json::exception& e) {
    throw FatalError(std::string("state file: ") + e.what());
  }
  return state;
}

void cmd_ingest(const PipelineConfig& config, std::ostream& log) {
  const ArtifactPaths paths{config.output_dir};
  fs::create_directories(config.output_dir);
  const ParseResult parsed =
      parse_events_file(config.input_events, config.input_format);

  std::ostringstream events_out;
  serialize_events(parsed.events, events_out, EventFormat::kCsv);
  atomic_write(paths.events_csv(), events_out.str());

  std::ostringstream errors_out;
  write_record_errors_csv(parsed.errors, errors_out);
  atomic_write(paths.record_errors_csv(), errors_out.str());

  write_manifest(config, "ingest", {config.input_events},
                 {paths.events_csv(), paths.record_errors_csv()});
  log << "ingest: " << parsed.events.size() << " events, "
      << parsed.errors.size() << " rejected records\n";
}

void cmd_train(const PipelineConfig& config, std::ostream& log) {
  const ArtifactPaths paths{config.output_dir};
  const EventStore store = load_store(config, /*with_blocked_days=*/true);
  SplitResult split = split_train_test(store, config.split_instant);
  if (split.warning) {
    log << "warning: " << *split.warning << '\n';
  }
  if (split.train.empty()) {
    throw FatalError("no training events before the split instant");
  }
  const std::int32_t trained_through = *split.train.max_day();
  const FingerprintMap fingerprints =
      update_fingerprints(split.train, trained_through);
  const std::vector<std::string> eligible =
      eligible_domains(fingerprints, config.min_clicks);
  if (eligible.size() < static_cast<std::size_t>(config.k_max)) {
    throw FatalError(
        "only " + std::to_string(eligible.size()) +
        " domains reach min_clicks; need at least k_max=" +
        std::to_string(config.k_max) + " (lower k_max or min_clicks)");
  }
  std::vector<Point> points;
  points.reserve(eligible.size());
  for (const std::string& domain : eligible) {
    points.push_back(fingerprints.at(domain).hourly_share);
  }
  SelectKParams params;
  params.k_min = config.k_min;
  params.k_max = config.k_max;
  params.elbow_threshold = config.elbow_threshold;
  params.n_restarts = config.n_restarts;
  params.kmeans.max_iters = config.max_iters;
  params.kmeans.tol = config.tol;
  SelectKResult selected = select_k(points, config.seed, params);
  selected.model.trained_through = trained_through;

  atomic_write(paths.model_json(), model_to_json(selected.model));
  write_manifest(config, "train", {paths.events_csv()}, {paths.model_json()});
  log << "train: " << eligible.size() << " eligible domains, k="
      << selected.model.k << ", silhouette=" << selected.model.silhouette
      << '\n';
}

void cmd_rules(const PipelineConfig& config, std::ostream& log) {
  const ArtifactPaths paths{config.output_dir};
  require_artifact(paths.model_json(), "train");
  const ClusterModel model = load_model(paths.model_json());
  const EventStore store = load_store(config, /*with_blocked_days=*/true);
  SplitResult split = split_train_test(store, config.split_instant);
  const std::map<std::string, int> assignments =
      train_assignments(split.train, model, config.min_clicks);
  const RuleSet ruleset = build_ruleset(model, split.train, assignments,
                                        config.min_profitable_hours);
  atomic_write(paths.ruleset_json(), ruleset_to_json(ruleset));
  write_manifest(config, "rules", {paths.events_csv(), paths.model_json()},
                 {paths.ruleset_json()});
  for (const BlockingRule& rule : ruleset.rules) {
    log << "cluster " << rule.cluster_id << ": " << render_rule(rule) << '\n';
  }
}

void cmd_assign(const PipelineConfig& config, std::optional<std::int32_t> day,
                std::ostream& log) {
  const ArtifactPaths paths{config.output_dir};
  require_artifact(paths.model_json(), "train");
  const ClusterModel model = load_model(paths.model_json());
  const EventStore store = load_store(config, /*with_blocked_days=*/true);
  if (store.empty()) {
    throw FatalError("event store is empty; nothing to assign");
  }
  const std::int32_t snapshot_day = day.value_or(*store.max_day());

  const AssignmentSnapshot snapshot =
      daily_snapshot(store, model, snapshot_day, config.min_clicks);
  std::ostringstream snapshot_out;
  write_snapshot_csv(snapshot, snapshot_out);
  atomic_write(paths.snapshot_csv(snapshot_day), snapshot_out.str());

  const FingerprintMap fingerprints = update_fingerprints(store, snapshot_day);
  std::ostringstream fp_out;
  write_fingerprint_csv(fingerprints, fp_out);
  atomic_write(paths.fingerprints_csv(snapshot_day), fp_out.str());

  write_manifest(config, "assign", {paths.events_csv(), paths.model_json()},
                 {paths.snapshot_csv(snapshot_day),
                  paths.fingerprints_csv(snapshot_day)});
  log << "assign " << format_civil_day(snapshot_day) << ": "
      << snapshot.assignments.size() << " assigned, "
      << snapshot.unassigned.size() << " below threshold\n";
}

void cmd_simulate(const PipelineConfig& config, std::ostream& log) {
  const ArtifactPaths paths{config.output_dir};
  require_artifact(paths.model_json(), "train");
  require_artifact(paths.ruleset_json(), "rules");
  const ClusterModel model = load_model(paths.model_json());
  const RuleSet ruleset = load_ruleset(paths.ruleset_json());
  const EventStore store = load_store(config, /*with_blocked_days=*/true);

  const SimulationReport report = replay(store, config.split_instant, model,
                                         ruleset, config.min_clicks);
  atomic_write(paths.report_json(), report_to_json(report));
  std::ostringstream daily_out;
  write_day_cluster_csv(report, daily_out);
  atomic_write(paths.report_daily_csv(), daily_out.str());

  write_manifest(
      config, "simulate",
      {paths.events_csv(), paths.model_json(), paths.ruleset_json()},
      {paths.report_json(), paths.report_daily_csv()});

  const Metrics baseline = metric_suite(report.baseline);
  const Metrics blocked = metric_suite(report.blocked);
  log << "simulate: baseline profit " << render_profit(baseline)
      << ", blocked profit " << render_profit(blocked);
  if (report.profit_increase_defined) {
    log << ", profit increase " << report.profit_increase * 100.0 << "%";
  }
  log << '\n';
}

void cmd_report(const PipelineConfig& config, std::ostream& log) {
  const ArtifactPaths paths{config.output_dir};
  require_artifact(paths.model_json(), "train");
  require_artifact(paths.ruleset_json(), "rules");
  require_artifact(paths.report_json(), "simulate");
  const ClusterModel model = load_model(paths.model_json());
  const RuleSet ruleset = load_ruleset(paths.ruleset_json());
  const SimulationReport report = load_report(paths.report_json());
  const EventStore store = load_store(config, /*with_blocked_days=*/true);
  SplitResult split = split_train_test(store, config.split_instant);
  const std::map<std::string, int> assignments =
      train_assignments(split.train, model, config.min_clicks);

  std::vector<std::string> outputs;
  outputs.push_back(write_figure_files(emit_centroids(model), config.output_dir,
                                       config.run_id, {paths.model_json()}));
  outputs.push_back(write_figure_files(
      emit_hourly_cr(split.train, assignments, ruleset), config.output_dir,
      config.run_id,
      {paths.events_csv(), paths.model_json(), paths.ruleset_json()}));
  outputs.push_back(write_figure_files(
      emit_moving_avg_ppc(report, config.ma_window_days), config.output_dir,
      config.run_id, {paths.report_json()}));
  RunSummaryInput summary{config.run_id, model, ruleset, report};
  outputs.push_back(write_figure_files(
      emit_summary(std::span<const RunSummaryInput>(&summary, 1)),
      config.output_dir, config.run_id,
      {paths.model_json(), paths.ruleset_json(), paths.report_json()}));

  write_manifest(
      config, "report",
      {paths.events_csv(), paths.model_json(), paths.ruleset_json(),
       paths.report_json()},
      outputs);
  log << "report: wrote " << outputs.size() << " figure datasets\n";
}

ActionList cmd_daily(const PipelineConfig& config,
                     std::optional<std::int32_t> day, std::ostream& log) {
  const ArtifactPaths paths{config.output_dir};
  require_artifact(paths.model_json(), "train");
  require_artifact(paths.ruleset_json(), "rules");
  const ClusterModel model = load_model(paths.model_json());
  const RuleSet ruleset = load_ruleset(paths.ruleset_json());
  EventStore store = load_store(config, /*with_blocked_days=*/true);
  if (store.empty()) {
    throw FatalError("event store is empty; nothing to do");
  }
  const std::int32_t action_day = day.value_or(*store.max_day());

  // The previous action list stayed in force through today, so the days it
  // covered are censored for fingerprint purposes.
  BlockState previous;
  const auto prev_day = latest_state_day_before(paths, action_day);
  if (prev_day) {
    std::ifstream in(paths.state_json(*prev_day), std::ios::binary);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    previous = block_state_from_json(buffer.str());
    for (const auto& [domain, scope] : previous) {
      for (std::int32_t d = *prev_day + 1; d <= action_day; ++d) {
        store.block_day(domain, d);
      }
    }
    std::ostringstream blocked_out;
    write_blocked_days_csv(store, blocked_out);
    atomic_write(paths.blocked_days_csv(), blocked_out.str());
  }

  const AssignmentSnapshot snapshot =
      daily_snapshot(store, model, action_day, config.min_clicks);
  const BlockState target = target_block_state(snapshot.assignments, ruleset);
  const ActionList actions = diff_block_state(action_day, previous, target);

  std::ostringstream actions_out;
  write_actions_csv(actions, actions_out);
  atomic_write(paths.actions_csv(action_day), actions_out.str());
  atomic_write(paths.state_json(action_day),
               block_state_to_json(action_day, target));

  std::vector<std::string> inputs = {paths.events_csv(), paths.model_json(),
                                     paths.ruleset_json()};
  if (prev_day) {
    inputs.push_back(paths.state_json(*prev_day));
  }
  write_manifest(config, "daily", inputs,
                 {paths.actions_csv(action_day), paths.state_json(action_day)});
  log << "daily " << format_civil_day(action_day) << ": "
      << actions.actions.size() << " actions, " << target.size()
      << " domains in blocked state\n";
  return actions;
}

}  // namespace fpopt::pipeline
