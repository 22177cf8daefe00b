#include "fpopt/io.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "fpopt/errors.hpp"

namespace fpopt {

namespace {

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
  return fields;
}

std::string_view strip_cr(std::string_view line) {
  if (!line.empty() && line.back() == '\r') {
    line.remove_suffix(1);
  }
  return line;
}

// Shared validation; returns an error reason or appends the event.
std::optional<std::string> finish_record(ClickEvent event,
                                         std::vector<ClickEvent>* events) {
  if (event.cost < 0) {
    return "negative cost";
  }
  if (event.revenue < 0) {
    return "negative revenue";
  }
  if (event.revenue > 0 && !event.converted) {
    return "revenue without conversion";
  }
  if (event.domain_id.empty()) {
    return "empty domain_id";
  }
  events->push_back(std::move(event));
  return std::nullopt;
}

void parse_csv_line(std::string_view line, std::size_t line_no,
                    ParseResult* result) {
  const auto fields = split_fields(line);
  if (fields.size() != 6) {
    result->errors.push_back({line_no, "wrong column count"});
    return;
  }
  ClickEvent event;
  const auto ts = parse_rfc3339(fields[0]);
  if (!ts) {
    result->errors.push_back({line_no, "bad timestamp"});
    return;
  }
  event.timestamp = *ts;
  event.domain_id = std::string(fields[1]);
  event.campaign_id = std::string(fields[2]);
  const auto cost = parse_money(fields[3]);
  if (!cost) {
    result->errors.push_back({line_no, "bad cost"});
    return;
  }
  event.cost = *cost;
  const auto revenue = parse_money(fields[4]);
  if (!revenue) {
    result->errors.push_back({line_no, "bad revenue"});
    return;
  }
  event.revenue = *revenue;
  if (fields[5] == "true") {
    event.converted = true;
  } else if (fields[5] == "false") {
    event.converted = false;
  } else {
    result->errors.push_back({line_no, "bad converted flag"});
    return;
  }
  if (auto reason = finish_record(std::move(event), &result->events)) {
    result->errors.push_back({line_no, *reason});
  }
}

std::optional<Micros> money_from_json(const nlohmann::json& value) {
  if (value.is_string()) {
    return parse_money(value.get_ref<const std::string&>());
  }
  if (value.is_number_integer()) {
    const auto units = value.get<std::int64_t>();
    if (units > INT64_MAX / kMicrosPerUnit || units < INT64_MIN / kMicrosPerUnit) {
      return std::nullopt;
    }
    return units * kMicrosPerUnit;
  }
  if (value.is_number_float()) {
    const double units = value.get<double>();
    const double micros = units * static_cast<double>(kMicrosPerUnit);
    if (!(micros >= static_cast<double>(INT64_MIN) &&
          micros <= static_cast<double>(INT64_MAX))) {
      return std::nullopt;
    }
    return static_cast<Micros>(micros >= 0 ? micros + 0.5 : micros - 0.5);
  }
  return std::nullopt;
}

void parse_jsonl_line(std::string_view line, std::size_t line_no,
                      ParseResult* result) {
  const auto parsed = nlohmann::json::parse(line, nullptr, false);
  if (parsed.is_discarded() || !parsed.is_object()) {
    result->errors.push_back({line_no, "invalid json"});
    return;
  }
  for (const char* field :
       {"timestamp", "domain_id", "campaign_id", "cost", "revenue", "converted"}) {
    if (!parsed.contains(field)) {
      result->errors.push_back({line_no, std::string("missing field: ") + field});
      return;
    }
  }
  if (!parsed["timestamp"].is_string() || !parsed["domain_id"].is_string() ||
      !parsed["campaign_id"].is_string() || !parsed["converted"].is_boolean()) {
    result->errors.push_back({line_no, "bad field type"});
    return;
  }
  ClickEvent event;
  const auto ts = parse_rfc3339(parsed["timestamp"].get_ref<const std::string&>());
  if (!ts) {
    result->errors.push_back({line_no, "bad timestamp"});
    return;
  }
  event.timestamp = *ts;
  event.domain_id = parsed["domain_id"].get<std::string>();
  event.campaign_id = parsed["campaign_id"].get<std::string>();
  const auto cost = money_from_json(parsed["cost"]);
  if (!cost) {
    result->errors.push_back({line_no, "bad cost"});
    return;
  }
  event.cost = *cost;
  const auto revenue = money_from_json(parsed["revenue"]);
  if (!revenue) {
    result->errors.push_back({line_no, "bad revenue"});
    return;
  }
  event.revenue = *revenue;
  event.converted = parsed["converted"].get<bool>();
  if (auto reason = finish_record(std::move(event), &result->events)) {
    result->errors.push_back({line_no, *reason});
  }
}

}  // namespace

std::optional<EventFormat> parse_event_format(std::string_view tag) {
  if (tag == "csv") {
    return EventFormat::kCsv;
  }
  if (tag == "jsonl") {
    return EventFormat::kJsonl;
  }
  return std::nullopt;
}

std::string_view event_format_name(EventFormat format) {
  return format == EventFormat::kCsv ? "csv" : "jsonl";
}

ParseResult parse_events(std::istream& in, EventFormat format) {
  if (!in) {
    throw IoError("event input stream is not readable");
  }
  ParseResult result;
  std::string raw;
  std::size_t line_no = 0;
  bool saw_header = false;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string_view line = strip_cr(raw);
    if (format == EventFormat::kCsv && !saw_header) {
      if (line != kEventCsvHeader) {
        throw FatalError("bad CSV header; expected \"" +
                         std::string(kEventCsvHeader) + "\"");
      }
      saw_header = true;
      continue;
    }
    if (line.empty()) {
      continue;
    }
    if (format == EventFormat::kCsv) {
      parse_csv_line(line, line_no, &result);
    } else {
      parse_jsonl_line(line, line_no, &result);
    }
  }
  if (in.bad()) {
    throw IoError("event input stream failed while reading");
  }
  if (format == EventFormat::kCsv && !saw_header) {
    throw FatalError("empty CSV input; header row is required");
  }
  return result;
}

ParseResult parse_events_file(const std::string& path, EventFormat format) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot open events file: " + path);
  }
  return parse_events(in, format);
}

void serialize_events(const std::vector<ClickEvent>& events, std::ostream& out,
                      EventFormat format) {
  if (format == EventFormat::kCsv) {
    out << kEventCsvHeader << '\n';
    for (const ClickEvent& event : events) {
      out << format_rfc3339(event.timestamp) << ',' << event.domain_id << ','
          << event.campaign_id << ',' << format_money(event.cost) << ','
          << format_money(event.revenue) << ','
          << (event.converted ? "true" : "false") << '\n';
    }
    return;
  }
  for (const ClickEvent& event : events) {
    nlohmann::ordered_json row;
    row["timestamp"] = format_rfc3339(event.timestamp);
    row["domain_id"] = event.domain_id;
    row["campaign_id"] = event.campaign_id;
    row["cost"] = format_money(event.cost);
    row["revenue"] = format_money(event.revenue);
    row["converted"] = event.converted;
    out << row.dump() << '\n';
  }
}

void write_record_errors_csv(const std::vector<RecordError>& errors,
                             std::ostream& out) {
  out << "line,reason\n";
  for (const RecordError& error : errors) {
    out << error.line << ',' << error.reason << '\n';
  }
}

void write_blocked_days_csv(const EventStore& store, std::ostream& out) {
  out << "domain_id,day\n";
  for (const auto& [domain, days] : store.blocked_days()) {
    for (const std::int32_t day : days) {
      out << domain << ',' << format_civil_day(day) << '\n';
    }
  }
}

void read_blocked_days_csv(std::istream& in, EventStore* store) {
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string_view line = strip_cr(raw);
    if (line_no == 1 || line.empty()) {
      continue;
    }
    const auto fields = split_fields(line);
    if (fields.size() != 2) {
      throw FatalError("blocked-days file: wrong column count at line " +
                       std::to_string(line_no));
    }
    const auto day = parse_civil_day(fields[1]);
    if (!day) {
      throw FatalError("blocked-days file: bad day at line " +
                       std::to_string(line_no));
    }
    store->block_day(fields[0], *day);
  }
}

}  // namespace fpopt
