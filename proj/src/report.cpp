#include "fpopt/report.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <ostream>

#include <json.hpp>

#include "fpopt/errors.hpp"
#include "fpopt/sha256.hpp"

namespace fpopt {

namespace {

std::string render_g12(double value) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.12g", value);
  return buf;
}

std::string render_g9(double value) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.9g", value);
  return buf;
}

}  // namespace

FigureDataset emit_centroids(const ClusterModel& model) {
  FigureDataset dataset;
  dataset.kind = "centroid_fingerprints";
  dataset.columns.push_back("cluster_id");
  for (int hour = 0; hour < 24; ++hour) {
    dataset.columns.push_back("h" + std::to_string(hour));
  }
  for (int cluster = 0; cluster < model.k; ++cluster) {
    std::vector<std::string> row;
    row.push_back(std::to_string(cluster));
    for (const double share : model.centroids[static_cast<std::size_t>(cluster)]) {
      row.push_back(render_g12(share));
    }
    dataset.rows.push_back(std::move(row));
  }
  return dataset;
}

FigureDataset emit_hourly_cr(const EventStore& store,
                             const std::map<std::string, int>& assignments,
                             const RuleSet& rules) {
  const int k = static_cast<int>(rules.rules.size());
  std::vector<std::array<std::int64_t, 24>> clicks(
      static_cast<std::size_t>(k), std::array<std::int64_t, 24>{});
  std::vector<std::array<std::int64_t, 24>> conversions(
      static_cast<std::size_t>(k), std::array<std::int64_t, 24>{});
  for (const auto& [domain, cluster] : assignments) {
    if (cluster < 0 || cluster >= k) {
      continue;
    }
    const auto* indices = store.events_of(domain);
    if (indices == nullptr) {
      continue;
    }
    for (const std::uint32_t index : *indices) {
      const auto hour = static_cast<std::size_t>(store.hour_of(index));
      ++clicks[static_cast<std::size_t>(cluster)][hour];
      conversions[static_cast<std::size_t>(cluster)][hour] +=
          store.event(index).converted ? 1 : 0;
    }
  }

  FigureDataset dataset;
  dataset.kind = "hourly_cr_by_cluster";
  dataset.columns = {"cluster_id", "hour",    "clicks",       "conversions",
                     "cr",         "blocked", "window_start", "window_end"};
  for (int cluster = 0; cluster < k; ++cluster) {
    const BlockingRule& rule = rules.for_cluster(cluster);
    for (int hour = 0; hour < 24; ++hour) {
      const auto n_clicks =
          clicks[static_cast<std::size_t>(cluster)][static_cast<std::size_t>(hour)];
      const auto n_conv = conversions[static_cast<std::size_t>(cluster)]
                                     [static_cast<std::size_t>(hour)];
      const double cr =
          n_clicks > 0
              ? static_cast<double>(n_conv) / static_cast<double>(n_clicks)
              : 0.0;
      std::vector<std::string> row;
      row.push_back(std::to_string(cluster));
      row.push_back(std::to_string(hour));
      row.push_back(std::to_string(n_clicks));
      row.push_back(std::to_string(n_conv));
      row.push_back(render_g9(cr));
      row.push_back(is_blocked(rule, hour) ? "1" : "0");
      if (rule.kind == RuleKind::kBlockedWindow) {
        row.push_back(std::to_string(rule.window_start));
        row.push_back(std::to_string(rule.window_end));
      } else {
        row.push_back("");
        row.push_back("");
      }
      dataset.rows.push_back(std::move(row));
    }
  }
  return dataset;
}

FigureDataset emit_moving_avg_ppc(const SimulationReport& report,
                                  int window_days) {
  std::vector<double> baseline_ppc;
  std::vector<double> blocked_ppc;
  baseline_ppc.reserve(report.by_day.size());
  blocked_ppc.reserve(report.by_day.size());
  for (const DayArmTotals& day : report.by_day) {
    baseline_ppc.push_back(metric_suite(day.baseline).profit_per_click);
    blocked_ppc.push_back(metric_suite(day.blocked).profit_per_click);
  }
  const auto baseline_ma = moving_average(baseline_ppc, window_days);
  const auto blocked_ma = moving_average(blocked_ppc, window_days);

  FigureDataset dataset;
  dataset.kind = "moving_avg_profit_per_click";
  const std::string suffix = std::to_string(window_days);
  dataset.columns = {"day", "ppc_baseline", "ppc_blocked",
                     "ppc_baseline_ma" + suffix, "ppc_blocked_ma" + suffix};
  for (std::size_t i = 0; i < report.by_day.size(); ++i) {
    dataset.rows.push_back({format_civil_day(report.by_day[i].day),
                            render_g9(baseline_ppc[i]), render_g9(blocked_ppc[i]),
                            render_g9(baseline_ma[i]), render_g9(blocked_ma[i])});
  }
  return dataset;
}

FigureDataset emit_summary(std::span<const RunSummaryInput> runs) {
  FigureDataset dataset;
  dataset.kind = "offline_summary_table";
  dataset.columns = {"run_id", "cluster_id", "silhouette", "profit_increase",
                     "blocking_rule"};
  for (const RunSummaryInput& run : runs) {
    const std::string increase =
        run.report.profit_increase_defined
            ? render_g9(run.report.profit_increase)
            : "";
    for (int cluster = 0; cluster < run.model.k; ++cluster) {
      dataset.rows.push_back({run.run_id, std::to_string(cluster),
                              render_g9(run.model.silhouette), increase,
                              render_rule(run.rules.for_cluster(cluster))});
    }
  }
  return dataset;
}

void write_figure_csv(const FigureDataset& dataset, std::ostream& out) {
  for (std::size_t i = 0; i < dataset.columns.size(); ++i) {
    out << (i == 0 ? "" : ",") << dataset.columns[i];
  }
  out << '\n';
  for (const auto& row : dataset.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      out << (i == 0 ? "" : ",") << row[i];
    }
    out << '\n';
  }
}

std::string write_figure_files(const FigureDataset& dataset,
                               const std::string& dir,
                               const std::string& run_id,
                               const std::vector<std::string>& source_paths) {
  const std::string base = dir + "/" + dataset.kind + "_" + run_id;
  const std::string csv_path = base + ".csv";
  {
    std::ofstream out(csv_path, std::ios::binary);
    if (!out) {
      throw IoError("cannot write figure file: " + csv_path);
    }
    write_figure_csv(dataset, out);
  }
  nlohmann::ordered_json meta;
  const auto now = std::chrono::system_clock::now();
  meta["generated_at"] = format_rfc3339(
      std::chrono::duration_cast<std::chrono::seconds>(now.time_since_epoch())
          .count());
  nlohmann::ordered_json sources = nlohmann::ordered_json::object();
  for (const std::string& path : source_paths) {
    sources[path] = Sha256::of_file(path);
  }
  meta["sources"] = std::move(sources);
  {
    std::ofstream out(base + ".meta.json", std::ios::binary);
    if (!out) {
      throw IoError("cannot write figure metadata: " + base + ".meta.json");
    }
    out << meta.dump(2) << '\n';
  }
  return csv_path;
}

}  // namespace fpopt
