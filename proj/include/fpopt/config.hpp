#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>

#include "fpopt/io.hpp"
#include "fpopt/time.hpp"

namespace fpopt {

// Pipeline configuration, loaded from a flat key=value file. Environment
// variables override file values: key `x` is overridden by `FPOPT_X`.
struct PipelineConfig {
  TzOffset timezone;
  std::int64_t min_clicks = 50;
  int k_min = 2;
  int k_max = 8;
  double elbow_threshold = 0.10;
  int n_restarts = 10;
  int max_iters = 300;
  double tol = 1e-6;
  int min_profitable_hours = 6;
  std::uint64_t seed = 0;
  int ma_window_days = 14;
  std::string run_id = "run";
  std::string input_events;
  EventFormat input_format = EventFormat::kCsv;
  std::int64_t split_instant = 0;
  std::string split_raw;
  std::string output_dir;

  // Effective settings as sorted key=value lines; hashing this makes the
  // config hash independent of file layout.
  std::string canonical_text() const;
  std::string sha256() const;
};

using EnvLookup = std::function<std::optional<std::string>(const std::string&)>;

EnvLookup system_env();

// Parses and validates; throws ConfigError listing every violation.
PipelineConfig parse_config(const std::string& content, const EnvLookup& env);
PipelineConfig load_config(const std::string& path);
PipelineConfig load_config(const std::string& path, const EnvLookup& env);

}  // namespace fpopt
