#include "fpopt/simulate.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "fpopt/errors.hpp"

namespace fpopt {

Metrics metric_suite(std::int64_t clicks, std::int64_t conversions,
                     Micros cost, Micros revenue) {
  Metrics metrics;
  metrics.profit = to_units(revenue - cost);
  if (clicks > 0) {
    metrics.cr = static_cast<double>(conversions) / static_cast<double>(clicks);
    metrics.profit_per_click = metrics.profit / static_cast<double>(clicks);
  }
  if (cost > 0) {
    metrics.roas = static_cast<double>(revenue) / static_cast<double>(cost);
    metrics.roas_defined = true;
  }
  return metrics;
}

Metrics metric_suite(const ArmTotals& totals) {
  return metric_suite(totals.clicks, totals.conversions, totals.cost,
                      totals.revenue);
}

namespace {

std::string format_fixed(double value, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", decimals, value);
  return buf;
}

}  // namespace

std::string render_cr_percent(const Metrics& metrics) {
  return format_fixed(metrics.cr * 100.0, 2);
}

std::string render_profit(const Metrics& metrics) {
  return format_fixed(metrics.profit, 2);
}

std::string render_roas(const Metrics& metrics) {
  return metrics.roas_defined ? format_fixed(metrics.roas, 2) : "undefined";
}

std::string render_profit_per_click(const Metrics& metrics) {
  return format_fixed(metrics.profit_per_click, 3);
}

SimulationReport replay(const EventStore& store, std::int64_t split_instant,
                        const ClusterModel& model, const RuleSet& rules,
                        std::int64_t min_clicks) {
  if (static_cast<int>(rules.rules.size()) < model.k) {
    throw FatalError("ruleset does not cover all clusters of the model");
  }

  // Test events grouped by civil day.
  std::map<std::int32_t, std::vector<std::uint32_t>> test_days;
  for (std::size_t i = 0; i < store.size(); ++i) {
    if (store.event(i).timestamp >= split_instant) {
      test_days[store.day_of(i)].push_back(static_cast<std::uint32_t>(i));
    }
  }
  if (test_days.empty()) {
    throw EmptyPeriod("no events at or after the split instant");
  }

  // Working copy accumulates this simulation's blocked days.
  EventStore working = store;

  SimulationReport report;
  const std::int32_t first_day = test_days.begin()->first;
  const std::int32_t last_day = test_days.rbegin()->first;

  for (std::int32_t day = first_day; day <= last_day; ++day) {
    DayArmTotals day_totals;
    day_totals.day = day;

    const auto it = test_days.find(day);
    if (it != test_days.end()) {
      const AssignmentSnapshot snapshot =
          daily_snapshot(working, model, day - 1, min_clicks);
      const std::vector<std::uint32_t>& indices = it->second;
      const auto n = static_cast<std::int64_t>(indices.size());

      // Per-event decisions fill independent slots; aggregation stays
      // serial in event order.
      std::vector<int> cluster_of(indices.size(), -1);
      std::vector<char> dropped(indices.size(), 0);

#pragma omp parallel for schedule(static)
      for (std::int64_t j = 0; j < n; ++j) {
        const std::uint32_t index = indices[static_cast<std::size_t>(j)];
        const ClickEvent& event = working.event(index);
        const auto assigned = snapshot.assignments.find(event.domain_id);
        if (assigned == snapshot.assignments.end()) {
          continue;
        }
        cluster_of[static_cast<std::size_t>(j)] = assigned->second;
        if (is_blocked(rules.for_cluster(assigned->second),
                       working.hour_of(index))) {
          dropped[static_cast<std::size_t>(j)] = 1;
        }
      }

      std::map<int, DayClusterBreakdown> by_cluster;
      for (std::size_t j = 0; j < indices.size(); ++j) {
        const std::uint32_t index = indices[j];
        const ClickEvent& event = working.event(index);
        const int cluster = cluster_of[j];

        day_totals.baseline.clicks += 1;
        day_totals.baseline.conversions += event.converted ? 1 : 0;
        day_totals.baseline.cost += event.cost;
        day_totals.baseline.revenue += event.revenue;

        auto& cell = by_cluster[cluster];
        cell.day = day;
        cell.cluster_id = cluster;
        if (dropped[j]) {
          cell.clicks_dropped += 1;
          working.block_day(event.domain_id, day);
        } else {
          cell.clicks_kept += 1;
          cell.conversions += event.converted ? 1 : 0;
          cell.cost += event.cost;
          cell.revenue += event.revenue;
          day_totals.blocked.clicks += 1;
          day_totals.blocked.conversions += event.converted ? 1 : 0;
          day_totals.blocked.cost += event.cost;
          day_totals.blocked.revenue += event.revenue;
        }
      }
      for (const auto& [cluster, cell] : by_cluster) {
        report.by_day_cluster.push_back(cell);
      }
    }

    report.baseline.clicks += day_totals.baseline.clicks;
    report.baseline.conversions += day_totals.baseline.conversions;
    report.baseline.cost += day_totals.baseline.cost;
    report.baseline.revenue += day_totals.baseline.revenue;
    report.blocked.clicks += day_totals.blocked.clicks;
    report.blocked.conversions += day_totals.blocked.conversions;
    report.blocked.cost += day_totals.blocked.cost;
    report.blocked.revenue += day_totals.blocked.revenue;
    report.by_day.push_back(day_totals);
  }

  const Micros base_profit = report.baseline.profit();
  if (base_profit != 0) {
    report.profit_increase =
        static_cast<double>(report.blocked.profit() - base_profit) /
        static_cast<double>(base_profit < 0 ? -base_profit : base_profit);
    report.profit_increase_defined = true;
  }
  return report;
}

std::vector<double> moving_average(std::span<const double> series,
                                   int window_days) {
  std::vector<double> out(series.size(), 0.0);
  if (window_days < 1) {
    throw FatalError("moving average window must be at least 1 day");
  }
  for (std::size_t i = 0; i < series.size(); ++i) {
    const std::size_t window = std::min<std::size_t>(
        static_cast<std::size_t>(window_days), i + 1);
    double sum = 0.0;
    for (std::size_t j = i + 1 - window; j <= i; ++j) {
      sum += series[j];
    }
    out[i] = sum / static_cast<double>(window);
  }
  return out;
}

namespace {

nlohmann::ordered_json arm_to_json(const ArmTotals& arm) {
  const Metrics metrics = metric_suite(arm);
  nlohmann::ordered_json doc;
  doc["clicks"] = arm.clicks;
  doc["conversions"] = arm.conversions;
  doc["cost_micros"] = arm.cost;
  doc["revenue_micros"] = arm.revenue;
  doc["cost"] = to_units(arm.cost);
  doc["revenue"] = to_units(arm.revenue);
  doc["profit"] = metrics.profit;
  doc["cr"] = metrics.cr;
  if (metrics.roas_defined) {
    doc["roas"] = metrics.roas;
  } else {
    doc["roas"] = nullptr;
  }
  doc["profit_per_click"] = metrics.profit_per_click;
  nlohmann::ordered_json rendered;
  rendered["cr_percent"] = render_cr_percent(metrics);
  rendered["profit"] = render_profit(metrics);
  rendered["roas"] = render_roas(metrics);
  rendered["profit_per_click"] = render_profit_per_click(metrics);
  doc["rendered"] = std::move(rendered);
  return doc;
}

ArmTotals arm_from_json(const nlohmann::json& doc) {
  ArmTotals arm;
  arm.clicks = doc.at("clicks").get<std::int64_t>();
  arm.conversions = doc.at("conversions").get<std::int64_t>();
  arm.cost = doc.at("cost_micros").get<Micros>();
  arm.revenue = doc.at("revenue_micros").get<Micros>();
  return arm;
}

nlohmann::ordered_json brief_arm_to_json(const ArmTotals& arm) {
  nlohmann::ordered_json doc;
  doc["clicks"] = arm.clicks;
  doc["conversions"] = arm.conversions;
  doc["cost_micros"] = arm.cost;
  doc["revenue_micros"] = arm.revenue;
  return doc;
}

}  // namespace

std::string report_to_json(const SimulationReport& report) {
  nlohmann::ordered_json doc;
  doc["baseline"] = arm_to_json(report.baseline);
  doc["blocked"] = arm_to_json(report.blocked);
  if (report.profit_increase_defined) {
    doc["profit_increase"] = report.profit_increase;
  } else {
    doc["profit_increase"] = nullptr;
  }
  nlohmann::ordered_json days = nlohmann::ordered_json::array();
  for (const DayArmTotals& day : report.by_day) {
    nlohmann::ordered_json row;
    row["day"] = format_civil_day(day.day);
    row["baseline"] = brief_arm_to_json(day.baseline);
    row["blocked"] = brief_arm_to_json(day.blocked);
    days.push_back(std::move(row));
  }
  doc["by_day"] = std::move(days);
  nlohmann::ordered_json cells = nlohmann::ordered_json::array();
  for (const DayClusterBreakdown& cell : report.by_day_cluster) {
    nlohmann::ordered_json row;
    row["day"] = format_civil_day(cell.day);
    row["cluster_id"] = cell.cluster_id;
    row["clicks_kept"] = cell.clicks_kept;
    row["clicks_dropped"] = cell.clicks_dropped;
    row["conversions"] = cell.conversions;
    row["cost_micros"] = cell.cost;
    row["revenue_micros"] = cell.revenue;
    cells.push_back(std::move(row));
  }
  doc["by_day_cluster"] = std::move(cells);
  return doc.dump(2) + "\n";
}

SimulationReport report_from_json(const std::string& text) {
  const auto doc = nlohmann::json::parse(text, nullptr, false);
  if (doc.is_discarded() || !doc.is_object()) {
    throw FatalError("report file is not valid JSON");
  }
  SimulationReport report;
  try {
    report.baseline = arm_from_json(doc.at("baseline"));
    report.blocked = arm_from_json(doc.at("blocked"));
    if (!doc.at("profit_increase").is_null()) {
      report.profit_increase = doc.at("profit_increase").get<double>();
      report.profit_increase_defined = true;
    }
    for (const auto& row : doc.at("by_day")) {
      DayArmTotals day;
      const auto parsed = parse_civil_day(row.at("day").get<std::string>());
      if (!parsed) {
        throw FatalError("report file: bad day");
      }
      day.day = *parsed;
      day.baseline = arm_from_json(row.at("baseline"));
      day.blocked = arm_from_json(row.at("blocked"));
      report.by_day.push_back(day);
    }
    for (const auto& row : doc.at("by_day_cluster")) {
      DayClusterBreakdown cell;
      const auto parsed = parse_civil_day(row.at("day").get<std::string>());
      if (!parsed) {
        throw FatalError("report file: bad day");
      }
      cell.day = *parsed;
      cell.cluster_id = row.at("cluster_id").get<int>();
      cell.clicks_kept = row.at("clicks_kept").get<std::int64_t>();
      cell.clicks_dropped = row.at("clicks_dropped").get<std::int64_t>();
      cell.conversions = row.at("conversions").get<std::int64_t>();
      cell.cost = row.at("cost_micros").get<Micros>();
      cell.revenue = row.at("revenue_micros").get<Micros>();
      report.by_day_cluster.push_back(cell);
    }
  } catch (const nlohmann::json::exception& e) {
    throw FatalError(std::string("report file: ") + e.what());
  }
  return report;
}

void save_report(const SimulationReport& report, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw IoError("cannot write report file: " + path);
  }
  out << report_to_json(report);
}

SimulationReport load_report(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot read report file: " + path);
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return report_from_json(buffer.str());
}

void write_day_cluster_csv(const SimulationReport& report, std::ostream& out) {
  out << "day,cluster_id,clicks_kept,clicks_dropped,conversions,cost,revenue,"
         "profit\n";
  for (const DayClusterBreakdown& cell : report.by_day_cluster) {
    out << format_civil_day(cell.day) << ',' << cell.cluster_id << ','
        << cell.clicks_kept << ',' << cell.clicks_dropped << ','
        << cell.conversions << ',' << format_money(cell.cost) << ','
        << format_money(cell.revenue) << ','
        << format_money(cell.revenue - cell.cost) << '\n';
  }
}

}  // namespace fpopt
