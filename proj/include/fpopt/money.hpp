#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace fpopt {

// Currency amounts are carried as integer micro-units so that sums stay
// exact and independent of accumulation order.
using Micros = std::int64_t;

inline constexpr Micros kMicrosPerUnit = 1'000'000;

// Parses a plain signed decimal with at most six fractional digits.
std::optional<Micros> parse_money(std::string_view text);

// Shortest decimal rendering; parse_money(format_money(x)) == x.
std::string format_money(Micros amount);

inline double to_units(Micros amount) {
  return static_cast<double>(amount) / static_cast<double>(kMicrosPerUnit);
}

}  // namespace fpopt
