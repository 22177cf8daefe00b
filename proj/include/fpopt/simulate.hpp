#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "fpopt/assign.hpp"
#include "fpopt/rules.hpp"

namespace fpopt {

struct ArmTotals {
  std::int64_t clicks = 0;
  std::int64_t conversions = 0;
  Micros cost = 0;
  Micros revenue = 0;

  Micros profit() const { return revenue - cost; }

  friend bool operator==(const ArmTotals&, const ArmTotals&) = default;
};

struct Metrics {
  double cr = 0.0;                // conversions / clicks, 0 when no clicks
  double profit = 0.0;            // currency units
  double roas = 0.0;              // revenue / cost, meaningful iff roas_defined
  bool roas_defined = false;      // false when cost == 0
  double profit_per_click = 0.0;  // 0 when no clicks
};

Metrics metric_suite(std::int64_t clicks, std::int64_t conversions,
                     Micros cost, Micros revenue);
Metrics metric_suite(const ArmTotals& totals);

// Display renderings used in reports ("0.41" for CR %, "0.021" for profit
// per click, "1.23" for ROAS, "3931.55" for profit).
std::string render_cr_percent(const Metrics& metrics);
std::string render_profit(const Metrics& metrics);
std::string render_roas(const Metrics& metrics);
std::string render_profit_per_click(const Metrics& metrics);

// Kept-arm view of one (day, cluster) cell; cluster -1 carries events of
// unassigned domains, which are never dropped.
struct DayClusterBreakdown {
  std::int32_t day = 0;
  int cluster_id = -1;
  std::int64_t clicks_kept = 0;
  std::int64_t clicks_dropped = 0;
  std::int64_t conversions = 0;
  Micros cost = 0;
  Micros revenue = 0;

  friend bool operator==(const DayClusterBreakdown&,
                         const DayClusterBreakdown&) = default;
};

struct DayArmTotals {
  std::int32_t day = 0;
  ArmTotals baseline;
  ArmTotals blocked;

  friend bool operator==(const DayArmTotals&, const DayArmTotals&) = default;
};

struct SimulationReport {
  ArmTotals baseline;
  ArmTotals blocked;
  // (profit_blocked - profit_baseline) / |profit_baseline|; undefined when
  // the baseline profit is zero.
  double profit_increase = 0.0;
  bool profit_increase_defined = false;
  std::vector<DayClusterBreakdown> by_day_cluster;
  std::vector<DayArmTotals> by_day;

  friend bool operator==(const SimulationReport&,
                         const SimulationReport&) = default;
};

// Replays the test period (events at or after split_instant) day by day.
// Each day's assignments come from fingerprints through the previous day —
// train history plus prior test days, minus days this simulation blocked.
// Dropped events contribute to neither arm's cost nor revenue; the baseline
// arm keeps everything. Throws EmptyPeriod when no events fall in the test
// period.
SimulationReport replay(const EventStore& store, std::int64_t split_instant,
                        const ClusterModel& model, const RuleSet& rules,
                        std::int64_t min_clicks);

// Trailing mean over the last window_days values; shorter prefixes use what
// is available. Output aligns with the input.
std::vector<double> moving_average(std::span<const double> series,
                                   int window_days);

std::string report_to_json(const SimulationReport& report);
SimulationReport report_from_json(const std::string& text);
void save_report(const SimulationReport& report, const std::string& path);
SimulationReport load_report(const std::string& path);

// day,cluster_id,clicks_kept,clicks_dropped,conversions,cost,revenue,profit
void write_day_cluster_csv(const SimulationReport& report, std::ostream& out);

}  // namespace fpopt
