#pragma once

#include <chrono>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace fri {

using Date = std::chrono::sys_days;

/// Parses a strict `YYYY-MM-DD` date. Returns nullopt on any malformed or
/// out-of-range input.
std::optional<Date> parse_date(std::string_view text);
std::string format_date(Date d);

/// Ordered list of trading days. Position in the list is the day index t
/// used by every graph and return series; size() is T+1.
class TradingCalendar {
 public:
  TradingCalendar() = default;
  explicit TradingCalendar(std::vector<Date> days);

  std::size_t size() const { return days_.size(); }
  bool empty() const { return days_.empty(); }
  Date operator[](std::size_t t) const { return days_[t]; }
  std::span<const Date> days() const { return days_; }

  std::optional<std::size_t> index_of(Date d) const;
  // First trading day on or after d.
  std::optional<std::size_t> next_on_or_after(Date d) const;

  // Calendar with the first `n` days removed.
  TradingCalendar drop_front(std::size_t n) const;

  bool operator==(const TradingCalendar&) const = default;

 private:
  std::vector<Date> days_;
};

/// Consecutive weekdays starting at `first` (or the next weekday after it).
TradingCalendar weekday_calendar(Date first, std::size_t count);

}  // namespace fri
