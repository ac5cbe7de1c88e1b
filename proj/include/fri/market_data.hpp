#pragma once

#include <cstddef>
#include <filesystem>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fri/calendar.hpp"

namespace fri {

inline constexpr double kMissing = std::numeric_limits<double>::quiet_NaN();

/// Per-ticker daily series over a shared calendar. Holds either price levels
/// or log returns; values are stored column-major so each ticker's series is
/// contiguous. Missing observations are NaN.
class ReturnPanel {
 public:
  ReturnPanel() = default;
  ReturnPanel(std::vector<std::string> tickers, TradingCalendar calendar,
              std::vector<double> column_major_values);

  std::size_t num_days() const { return calendar_.size(); }
  std::size_t num_tickers() const { return tickers_.size(); }
  const TradingCalendar& calendar() const { return calendar_; }
  const std::vector<std::string>& tickers() const { return tickers_; }

  std::span<const double> column(std::size_t ticker) const {
    return {values_.data() + ticker * num_days(), num_days()};
  }
  double at(std::size_t day, std::size_t ticker) const {
    return values_[ticker * num_days() + day];
  }

  std::optional<std::size_t> ticker_index(std::string_view ticker) const;
  // Throws std::invalid_argument naming the ticker.
  std::size_t require_ticker(std::string_view ticker) const;

  bool operator==(const ReturnPanel& other) const;

 private:
  std::vector<std::string> tickers_;
  TradingCalendar calendar_;
  std::vector<double> values_;
};

struct NewsRecord {
  Date date;
  std::string id;
  std::vector<std::string> tickers;  // sorted, unique
  std::optional<std::string> headline;

  bool operator==(const NewsRecord&) const = default;
};

struct PriceLoad {
  ReturnPanel prices;
  std::vector<std::string> dropped_tickers;  // incomplete records
};

struct NewsLoad {
  std::vector<NewsRecord> records;  // dates snapped to trading days, ordered by date
  std::size_t reassigned = 0;       // moved forward from a non-trading day
  std::size_t dropped_after_end = 0;
  std::size_t dropped_before_start = 0;
  std::size_t unknown_tickers_removed = 0;
};

/// Reads a long-format `date,ticker,adj_close` CSV. The calendar is the set
/// of dates seen in the file; tickers without a price on every one of those
/// dates are dropped and listed in `dropped_tickers`.
PriceLoad load_prices(const std::filesystem::path& path);
PriceLoad parse_prices(std::string_view csv, const std::string& source = "<prices>");

/// r_t = ln(p_t / p_{t-1}); the first calendar day is dropped.
ReturnPanel compute_log_returns(const ReturnPanel& prices);

NewsLoad load_news(const std::filesystem::path& path, std::span<const std::string> universe,
                   const TradingCalendar& calendar);
NewsLoad parse_news(std::string_view jsonl, std::span<const std::string> universe,
                    const TradingCalendar& calendar, const std::string& source = "<news>");

void write_prices_csv(const std::filesystem::path& path, const ReturnPanel& prices);
void write_news_jsonl(const std::filesystem::path& path, std::span<const NewsRecord> news);

std::string read_text_file(const std::filesystem::path& path);

}  // namespace fri
