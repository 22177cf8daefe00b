#include "fpopt/money.hpp"

namespace fpopt {

std::optional<Micros> parse_money(std::string_view text) {
  if (text.empty()) {
    return std::nullopt;
  }
  bool negative = false;
  std::size_t pos = 0;
  if (text[0] == '-' || text[0] == '+') {
    negative = text[0] == '-';
    pos = 1;
  }
  const std::size_t int_start = pos;
  Micros whole = 0;
  while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') {
    if (whole > (INT64_MAX - 9) / 10) {
      return std::nullopt;
    }
    whole = whole * 10 + (text[pos] - '0');
    ++pos;
  }
  if (pos == int_start) {
    return std::nullopt;
  }
  Micros frac = 0;
  if (pos < text.size() && text[pos] == '.') {
    ++pos;
    const std::size_t frac_start = pos;
    Micros scale = kMicrosPerUnit / 10;
    while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') {
      if (pos - frac_start >= 6) {
        return std::nullopt;  // beyond micro precision
      }
      frac += (text[pos] - '0') * scale;
      scale /= 10;
      ++pos;
    }
    if (pos == frac_start) {
      return std::nullopt;
    }
  }
  if (pos != text.size()) {
    return std::nullopt;
  }
  if (whole > INT64_MAX / kMicrosPerUnit) {
    return std::nullopt;
  }
  const Micros magnitude = whole * kMicrosPerUnit + frac;
  return negative ? -magnitude : magnitude;
}

std::string format_money(Micros amount) {
  std::string out;
  std::uint64_t magnitude;
  if (amount < 0) {
    out.push_back('-');
    magnitude = static_cast<std::uint64_t>(-(amount + 1)) + 1;
  } else {
    magnitude = static_cast<std::uint64_t>(amount);
  }
  out += std::to_string(magnitude / kMicrosPerUnit);
  std::uint64_t frac = magnitude % kMicrosPerUnit;
  if (frac != 0) {
    char digits[7];
    for (int i = 5; i >= 0; --i) {
      digits[i] = static_cast<char>('0' + frac % 10);
      frac /= 10;
    }
    int len = 6;
    while (len > 0 && digits[len - 1] == '0') {
      --len;
    }
    out.push_back('.');
    out.append(digits, static_cast<std::size_t>(len));
  }
  return out;
}

}  // namespace fpopt
