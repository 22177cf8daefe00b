#include "fpopt/time.hpp"

#include <charconv>
#include <cstdio>

namespace fpopt {

namespace {

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) {
    --q;
  }
  return q;
}

bool parse_uint(std::string_view text, std::size_t pos, std::size_t len,
                int* out) {
  if (pos + len > text.size()) {
    return false;
  }
  int value = 0;
  for (std::size_t i = pos; i < pos + len; ++i) {
    const char c = text[i];
    if (c < '0' || c > '9') {
      return false;
    }
    value = value * 10 + (c - '0');
  }
  *out = value;
  return true;
}

// days since 1970-01-01 from a proleptic Gregorian date
std::int64_t days_from_civil(int y, int m, int d) {
  y -= m <= 2;
  const std::int64_t era = floor_div(y, 400);
  const unsigned yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153u * (m + (m > 2 ? -3 : 9)) + 2u) / 5u + d - 1;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

void civil_from_days(std::int64_t z, int* y, int* m, int* d) {
  z += 719468;
  const std::int64_t era = floor_div(z, 146097);
  const unsigned doe = static_cast<unsigned>(z - era * 146097);
  const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  const std::int64_t year = static_cast<std::int64_t>(yoe) + era * 400;
  const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const unsigned mp = (5 * doy + 2) / 153;
  *d = static_cast<int>(doy - (153 * mp + 2) / 5 + 1);
  *m = static_cast<int>(mp + (mp < 10 ? 3 : -9));
  *y = static_cast<int>(year + (*m <= 2));
}

bool valid_date(int y, int m, int d) {
  if (m < 1 || m > 12 || d < 1) {
    return false;
  }
  static const int days_in_month[] = {31, 28, 31, 30, 31, 30,
                                      31, 31, 30, 31, 30, 31};
  int limit = days_in_month[m - 1];
  if (m == 2 && ((y % 4 == 0 && y % 100 != 0) || y % 400 == 0)) {
    limit = 29;
  }
  return d <= limit;
}

std::optional<int> parse_hhmm_offset(std::string_view text) {
  // "+HH:MM" or "-HH:MM"
  if (text.size() != 6 || (text[0] != '+' && text[0] != '-') ||
      text[3] != ':') {
    return std::nullopt;
  }
  int hh = 0, mm = 0;
  if (!parse_uint(text, 1, 2, &hh) || !parse_uint(text, 4, 2, &mm)) {
    return std::nullopt;
  }
  if (hh > 23 || mm > 59) {
    return std::nullopt;
  }
  const int total = hh * 3600 + mm * 60;
  return text[0] == '-' ? -total : total;
}

}  // namespace

std::optional<TzOffset> TzOffset::parse(std::string_view spec) {
  if (spec == "UTC" || spec == "utc" || spec == "Z" || spec == "z") {
    return TzOffset(0);
  }
  std::string_view rest = spec;
  if (rest.size() >= 3 && (rest.substr(0, 3) == "UTC" || rest.substr(0, 3) == "utc")) {
    rest.remove_prefix(3);
    if (rest.empty()) {
      return TzOffset(0);
    }
  }
  const auto offset = parse_hhmm_offset(rest);
  if (!offset) {
    return std::nullopt;
  }
  return TzOffset(*offset);
}

std::string TzOffset::to_string() const {
  if (seconds_ == 0) {
    return "UTC";
  }
  const char sign = seconds_ < 0 ? '-' : '+';
  const int abs_s = seconds_ < 0 ? -seconds_ : seconds_;
  char buf[16];
  std::snprintf(buf, sizeof(buf), "UTC%c%02d:%02d", sign, abs_s / 3600,
                (abs_s % 3600) / 60);
  return buf;
}

std::optional<std::int64_t> parse_rfc3339(std::string_view text) {
  // YYYY-MM-DDTHH:MM:SS[.frac](Z|+HH:MM|-HH:MM)
  if (text.size() < 20) {
    return std::nullopt;
  }
  int year = 0, month = 0, day = 0, hour = 0, minute = 0, second = 0;
  if (!parse_uint(text, 0, 4, &year) || text[4] != '-' ||
      !parse_uint(text, 5, 2, &month) || text[7] != '-' ||
      !parse_uint(text, 8, 2, &day)) {
    return std::nullopt;
  }
  if (text[10] != 'T' && text[10] != 't' && text[10] != ' ') {
    return std::nullopt;
  }
  if (!parse_uint(text, 11, 2, &hour) || text[13] != ':' ||
      !parse_uint(text, 14, 2, &minute) || text[16] != ':' ||
      !parse_uint(text, 17, 2, &second)) {
    return std::nullopt;
  }
  if (!valid_date(year, month, day) || hour > 23 || minute > 59 ||
      second > 60) {
    return std::nullopt;
  }
  if (second == 60) {
    second = 59;  // clamp leap seconds
  }
  std::size_t pos = 19;
  if (pos < text.size() && text[pos] == '.') {
    ++pos;
    const std::size_t frac_start = pos;
    while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') {
      ++pos;
    }
    if (pos == frac_start) {
      return std::nullopt;
    }
  }
  if (pos >= text.size()) {
    return std::nullopt;
  }
  int offset = 0;
  if (text[pos] == 'Z' || text[pos] == 'z') {
    if (pos + 1 != text.size()) {
      return std::nullopt;
    }
  } else {
    const auto parsed = parse_hhmm_offset(text.substr(pos));
    if (!parsed) {
      return std::nullopt;
    }
    offset = *parsed;
  }
  const std::int64_t days = days_from_civil(year, month, day);
  return days * 86400 + hour * 3600 + minute * 60 + second - offset;
}

std::string format_rfc3339(std::int64_t epoch_seconds) {
  const std::int64_t days = floor_div(epoch_seconds, 86400);
  const std::int64_t rem = epoch_seconds - days * 86400;
  int y = 0, m = 0, d = 0;
  civil_from_days(days, &y, &m, &d);
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%04d-%02d-%02dT%02d:%02d:%02dZ", y, m, d,
                static_cast<int>(rem / 3600), static_cast<int>((rem / 60) % 60),
                static_cast<int>(rem % 60));
  return buf;
}

std::int32_t civil_day_of(std::int64_t epoch_seconds, TzOffset tz) {
  return static_cast<std::int32_t>(
      floor_div(epoch_seconds + tz.seconds(), 86400));
}

int hour_of_day(std::int64_t epoch_seconds, TzOffset tz) {
  const std::int64_t shifted = epoch_seconds + tz.seconds();
  const std::int64_t day = floor_div(shifted, 86400);
  return static_cast<int>((shifted - day * 86400) / 3600);
}

std::string format_civil_day(std::int32_t day) {
  int y = 0, m = 0, d = 0;
  civil_from_days(day, &y, &m, &d);
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d", y, m, d);
  return buf;
}

std::optional<std::int32_t> parse_civil_day(std::string_view text) {
  if (text.size() != 10 || text[4] != '-' || text[7] != '-') {
    return std::nullopt;
  }
  int y = 0, m = 0, d = 0;
  if (!parse_uint(text, 0, 4, &y) || !parse_uint(text, 5, 2, &m) ||
      !parse_uint(text, 8, 2, &d) || !valid_date(y, m, d)) {
    return std::nullopt;
  }
  return static_cast<std::int32_t>(days_from_civil(y, m, d));
}

std::int64_t day_start_instant(std::int32_t day, TzOffset tz) {
  return static_cast<std::int64_t>(day) * 86400 - tz.seconds();
}

}  // namespace fpopt
