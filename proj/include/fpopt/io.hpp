#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fpopt/events.hpp"

namespace fpopt {

enum class EventFormat { kCsv, kJsonl };

std::optional<EventFormat> parse_event_format(std::string_view tag);
std::string_view event_format_name(EventFormat format);

inline constexpr std::string_view kEventCsvHeader =
    "timestamp,domain_id,campaign_id,cost,revenue,converted";

struct ParseResult {
  std::vector<ClickEvent> events;  // valid records, input order preserved
  std::vector<RecordError> errors;
};

// Per-record violations become RecordErrors and the record is skipped.
// Throws IoError when the stream is unreadable and FatalError when the CSV
// header does not match the documented column order.
ParseResult parse_events(std::istream& in, EventFormat format);
ParseResult parse_events_file(const std::string& path, EventFormat format);

void serialize_events(const std::vector<ClickEvent>& events, std::ostream& out,
                      EventFormat format);

// "line,reason" rows under a header.
void write_record_errors_csv(const std::vector<RecordError>& errors,
                             std::ostream& out);

// blocked-day sidecar: "domain_id,day" rows under a header, sorted
void write_blocked_days_csv(const EventStore& store, std::ostream& out);
void read_blocked_days_csv(std::istream& in, EventStore* store);

}  // namespace fpopt
