#include "fri/calendar.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <stdexcept>

namespace fri {

namespace {

bool parse_int(std::string_view s, int& out) {
  if (s.empty()) return false;
  for (char c : s)
    if (c < '0' || c > '9') return false;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc{} && ptr == s.data() + s.size();
}

}  // namespace

std::optional<Date> parse_date(std::string_view text) {
  if (text.size() != 10 || text[4] != '-' || text[7] != '-') return std::nullopt;
  int y = 0, m = 0, d = 0;
  if (!parse_int(text.substr(0, 4), y) || !parse_int(text.substr(5, 2), m) ||
      !parse_int(text.substr(8, 2), d))
    return std::nullopt;
  std::chrono::year_month_day ymd{std::chrono::year{y},
                                  std::chrono::month{static_cast<unsigned>(m)},
                                  std::chrono::day{static_cast<unsigned>(d)}};
  if (!ymd.ok()) return std::nullopt;
  return Date{ymd};
}

std::string format_date(Date d) {
  std::chrono::year_month_day ymd{d};
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
  return buf;
}

TradingCalendar::TradingCalendar(std::vector<Date> days) : days_(std::move(days)) {
  for (std::size_t i = 1; i < days_.size(); ++i) {
    if (!(days_[i - 1] < days_[i]))
      throw std::invalid_argument("trading calendar must be strictly increasing at " +
                                  format_date(days_[i]));
  }
}

std::optional<std::size_t> TradingCalendar::index_of(Date d) const {
  auto it = std::lower_bound(days_.begin(), days_.end(), d);
  if (it == days_.end() || *it != d) return std::nullopt;
  return static_cast<std::size_t>(it - days_.begin());
}

std::optional<std::size_t> TradingCalendar::next_on_or_after(Date d) const {
  auto it = std::lower_bound(days_.begin(), days_.end(), d);
  if (it == days_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - days_.begin());
}

TradingCalendar TradingCalendar::drop_front(std::size_t n) const {
  if (n >= days_.size()) return TradingCalendar{};
  return TradingCalendar{std::vector<Date>(days_.begin() + static_cast<std::ptrdiff_t>(n), days_.end())};
}

TradingCalendar weekday_calendar(Date first, std::size_t count) {
  std::vector<Date> days;
  days.reserve(count);
  Date d = first;
  while (days.size() < count) {
    std::chrono::weekday wd{d};
    if (wd != std::chrono::Saturday && wd != std::chrono::Sunday) days.push_back(d);
    d += std::chrono::days{1};
  }
  return TradingCalendar{std::move(days)};
}

}  // namespace fri
