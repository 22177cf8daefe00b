#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace fpopt {

// Fixed UTC offset applied uniformly when deriving hour-of-day and civil
// days. Accepted spellings: "UTC", "UTC+HH:MM", "UTC-HH:MM", "+HH:MM",
// "-HH:MM". One consistent clock for the whole pipeline keeps hour-of-day
// rules meaningful.
class TzOffset {
 public:
  constexpr TzOffset() = default;

  static std::optional<TzOffset> parse(std::string_view spec);

  constexpr std::int32_t seconds() const { return seconds_; }
  std::string to_string() const;

  friend bool operator==(TzOffset a, TzOffset b) = default;

 private:
  explicit constexpr TzOffset(std::int32_t s) : seconds_(s) {}
  std::int32_t seconds_ = 0;
};

// RFC 3339 timestamp at second precision, e.g. "2021-04-01T13:05:00Z" or
// "2021-04-01T15:05:00+02:00". Fractional seconds are accepted and truncated.
std::optional<std::int64_t> parse_rfc3339(std::string_view text);
std::string format_rfc3339(std::int64_t epoch_seconds);

// Civil days are counted from 1970-01-01 in the configured offset.
std::int32_t civil_day_of(std::int64_t epoch_seconds, TzOffset tz);
int hour_of_day(std::int64_t epoch_seconds, TzOffset tz);

std::string format_civil_day(std::int32_t day);
std::optional<std::int32_t> parse_civil_day(std::string_view text);

// First instant (epoch seconds) of the given civil day under tz.
std::int64_t day_start_instant(std::int32_t day, TzOffset tz);

inline constexpr std::int32_t kMaxCivilDay = INT32_MAX;

}  // namespace fpopt
