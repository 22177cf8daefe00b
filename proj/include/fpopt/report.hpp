#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "fpopt/clustering.hpp"
#include "fpopt/events.hpp"
#include "fpopt/rules.hpp"
#include "fpopt/simulate.hpp"

namespace fpopt {

// Plot-ready tabular dataset. Cells are pre-rendered so files come out
// byte-stable; provenance (source hashes, generation time) goes into a
// sidecar, never into the data file.
struct FigureDataset {
  std::string kind;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
};

// One row per centroid: cluster_id,h0..h23.
FigureDataset emit_centroids(const ClusterModel& model);

// Exactly 24 rows per cluster: cluster_id,hour,clicks,conversions,cr,
// blocked,window_start,window_end (window fields empty unless the cluster
// has a window rule).
FigureDataset emit_hourly_cr(const EventStore& store,
                             const std::map<std::string, int>& assignments,
                             const RuleSet& rules);

// Per-day profit per click for both arms with a trailing moving average.
FigureDataset emit_moving_avg_ppc(const SimulationReport& report,
                                  int window_days);

struct RunSummaryInput {
  std::string run_id;
  ClusterModel model;
  RuleSet rules;
  SimulationReport report;
};

// One row per (run, cluster): run_id,cluster_id,silhouette,profit_increase,
// blocking_rule — the rule rendered in the usual operator notation.
FigureDataset emit_summary(std::span<const RunSummaryInput> runs);

void write_figure_csv(const FigureDataset& dataset, std::ostream& out);

// Writes `<dir>/<kind>_<run_id>.csv` plus a `.meta.json` sidecar carrying
// the generation timestamp and sha256 of each source artifact.
std::string write_figure_files(const FigureDataset& dataset,
                               const std::string& dir,
                               const std::string& run_id,
                               const std::vector<std::string>& source_paths);

}  // namespace fpopt
