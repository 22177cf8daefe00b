#include "fpopt/config.hpp"

#include <cctype>
#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <vector>

#include "fpopt/errors.hpp"
#include "fpopt/sha256.hpp"

namespace fpopt {

namespace {

const char* const kKnownKeys[] = {
    "timezone",    "min_clicks",   "k_min",
    "k_max",       "elbow_threshold", "n_restarts",
    "max_iters",   "tol",          "min_profitable_hours",
    "seed",        "ma_window_days", "run_id",
    "input_events", "input_format", "split",
    "output_dir"};

bool known_key(const std::string& key) {
  for (const char* candidate : kKnownKeys) {
    if (key == candidate) {
      return true;
    }
  }
  return false;
}

std::string trim(std::string_view text) {
  std::size_t begin = 0;
  std::size_t end = text.size();
  while (begin < end && std::isspace(static_cast<unsigned char>(text[begin]))) {
    ++begin;
  }
  while (end > begin && std::isspace(static_cast<unsigned char>(text[end - 1]))) {
    --end;
  }
  return std::string(text.substr(begin, end - begin));
}

template <typename T>
std::optional<T> parse_number(const std::string& text) {
  T value{};
  const char* begin = text.data();
  const char* end = begin + text.size();
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end) {
    return std::nullopt;
  }
  return value;
}

std::optional<double> parse_real(const std::string& text) {
  if (text.empty()) {
    return std::nullopt;
  }
  char* end = nullptr;
  const double value = std::strtod(text.c_str(), &end);
  if (end != text.c_str() + text.size()) {
    return std::nullopt;
  }
  return value;
}

std::string format_real(double value) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

}  // namespace

EnvLookup system_env() {
  return [](const std::string& name) -> std::optional<std::string> {
    const char* value = std::getenv(name.c_str());
    if (value == nullptr) {
      return std::nullopt;
    }
    return std::string(value);
  };
}

std::string PipelineConfig::canonical_text() const {
  std::ostringstream out;
  out << "elbow_threshold=" << format_real(elbow_threshold) << '\n'
      << "input_events=" << input_events << '\n'
      << "input_format=" << event_format_name(input_format) << '\n'
      << "k_max=" << k_max << '\n'
      << "k_min=" << k_min << '\n'
      << "ma_window_days=" << ma_window_days << '\n'
      << "max_iters=" << max_iters << '\n'
      << "min_clicks=" << min_clicks << '\n'
      << "min_profitable_hours=" << min_profitable_hours << '\n'
      << "n_restarts=" << n_restarts << '\n'
      << "output_dir=" << output_dir << '\n'
      << "run_id=" << run_id << '\n'
      << "seed=" << seed << '\n'
      << "split=" << split_raw << '\n'
      << "timezone=" << timezone.to_string() << '\n'
      << "tol=" << format_real(tol) << '\n';
  return out.str();
}

std::string PipelineConfig::sha256() const {
  return Sha256::of_string(canonical_text());
}

PipelineConfig parse_config(const std::string& content, const EnvLookup& env) {
  std::vector<std::string> violations;
  std::map<std::string, std::string> values;

  std::istringstream in(content);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string stripped = trim(line);
    if (stripped.empty() || stripped[0] == '#') {
      continue;
    }
    const auto eq = stripped.find('=');
    if (eq == std::string::npos) {
      violations.push_back("line " + std::to_string(line_no) +
                           ": expected key=value");
      continue;
    }
    const std::string key = trim(stripped.substr(0, eq));
    const std::string value = trim(stripped.substr(eq + 1));
    if (!known_key(key)) {
      violations.push_back("unknown key \"" + key + "\"");
      continue;
    }
    if (values.contains(key)) {
      violations.push_back("duplicate key \"" + key + "\"");
      continue;
    }
    values[key] = value;
  }

  for (const char* key : kKnownKeys) {
    std::string env_name = "FPOPT_";
    for (const char* p = key; *p != '\0'; ++p) {
      env_name.push_back(
          static_cast<char>(std::toupper(static_cast<unsigned char>(*p))));
    }
    if (const auto value = env(env_name)) {
      values[key] = *value;
    }
  }

  PipelineConfig config;
  auto take = [&](const char* key) -> std::optional<std::string> {
    const auto it = values.find(key);
    if (it == values.end()) {
      return std::nullopt;
    }
    return it->second;
  };

  if (const auto v = take("timezone")) {
    if (const auto tz = TzOffset::parse(*v)) {
      config.timezone = *tz;
    } else {
      violations.push_back("timezone: cannot parse \"" + *v +
                           "\" (use UTC or UTC+HH:MM)");
    }
  }
  if (const auto v = take("min_clicks")) {
    if (const auto n = parse_number<std::int64_t>(*v)) {
      config.min_clicks = *n;
    } else {
      violations.push_back("min_clicks: not an integer");
    }
  }
  if (const auto v = take("k_min")) {
    if (const auto n = parse_number<int>(*v)) {
      config.k_min = *n;
    } else {
      violations.push_back("k_min: not an integer");
    }
  }
  if (const auto v = take("k_max")) {
    if (const auto n = parse_number<int>(*v)) {
      config.k_max = *n;
    } else {
      violations.push_back("k_max: not an integer");
    }
  }
  if (const auto v = take("elbow_threshold")) {
    if (const auto x = parse_real(*v)) {
      config.elbow_threshold = *x;
    } else {
      violations.push_back("elbow_threshold: not a number");
    }
  }
  if (const auto v = take("n_restarts")) {
    if (const auto n = parse_number<int>(*v)) {
      config.n_restarts = *n;
    } else {
      violations.push_back("n_restarts: not an integer");
    }
  }
  if (const auto v = take("max_iters")) {
    if (const auto n = parse_number<int>(*v)) {
      config.max_iters = *n;
    } else {
      violations.push_back("max_iters: not an integer");
    }
  }
  if (const auto v = take("tol")) {
    if (const auto x = parse_real(*v)) {
      config.tol = *x;
    } else {
      violations.push_back("tol: not a number");
    }
  }
  if (const auto v = take("min_profitable_hours")) {
    if (const auto n = parse_number<int>(*v)) {
      config.min_profitable_hours = *n;
    } else {
      violations.push_back("min_profitable_hours: not an integer");
    }
  }
  if (const auto v = take("seed")) {
    if (const auto n = parse_number<std::uint64_t>(*v)) {
      config.seed = *n;
    } else {
      violations.push_back("seed: not an unsigned integer");
    }
  }
  if (const auto v = take("ma_window_days")) {
    if (const auto n = parse_number<int>(*v)) {
      config.ma_window_days = *n;
    } else {
      violations.push_back("ma_window_days: not an integer");
    }
  }
  if (const auto v = take("run_id")) {
    if (v->empty()) {
      violations.push_back("run_id: must not be empty");
    } else {
      config.run_id = *v;
    }
  }
  if (const auto v = take("input_events")) {
    config.input_events = *v;
  }
  if (const auto v = take("input_format")) {
    if (const auto format = parse_event_format(*v)) {
      config.input_format = *format;
    } else {
      violations.push_back("input_format: unknown format tag \"" + *v +
                           "\" (use csv or jsonl)");
    }
  }
  if (const auto v = take("split")) {
    if (const auto instant = parse_rfc3339(*v)) {
      config.split_instant = *instant;
      config.split_raw = *v;
    } else {
      violations.push_back("split: cannot parse RFC 3339 instant \"" + *v +
                           "\"");
    }
  }
  if (const auto v = take("output_dir")) {
    config.output_dir = *v;
  }

  if (config.input_events.empty()) {
    violations.push_back("input_events: required");
  }
  if (config.output_dir.empty()) {
    violations.push_back("output_dir: required");
  }
  if (config.split_raw.empty()) {
    violations.push_back("split: required");
  }
  if (config.min_clicks < 1) {
    violations.push_back("min_clicks: must be >= 1");
  }
  if (config.k_min < 2) {
    violations.push_back("k_min: must be >= 2");
  }
  if (config.k_max < config.k_min) {
    violations.push_back("k_max: must be >= k_min");
  }
  if (!(config.elbow_threshold > 0.0 && config.elbow_threshold < 1.0)) {
    violations.push_back("elbow_threshold: must be in (0, 1)");
  }
  if (config.n_restarts < 1) {
    violations.push_back("n_restarts: must be >= 1");
  }
  if (config.max_iters < 1) {
    violations.push_back("max_iters: must be >= 1");
  }
  if (!(config.tol > 0.0)) {
    violations.push_back("tol: must be > 0");
  }
  if (config.min_profitable_hours < 0 || config.min_profitable_hours > 24) {
    violations.push_back("min_profitable_hours: must be in [0, 24]");
  }
  if (config.ma_window_days < 1) {
    violations.push_back("ma_window_days: must be >= 1");
  }

  if (!violations.empty()) {
    std::string message = "invalid configuration:";
    for (const std::string& violation : violations) {
      message += "\n  - " + violation;
    }
    throw ConfigError(message);
  }
  return config;
}

PipelineConfig load_config(const std::string& path, const EnvLookup& env) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ConfigError("cannot open config file: " + path);
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str(), env);
}

PipelineConfig load_config(const std::string& path) {
  return load_config(path, system_env());
}

}  // namespace fpopt
