#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fri/market_data.hpp"

namespace fri {

inline constexpr std::size_t kDefaultEpsilon = 21;

/// Trailing-window Pearson correlation for one pair. Slot k holds the
/// correlation over days (t-ε, t] with t = first_day() + k, so windows ending
/// at t and t+ε are adjacent and disjoint. NaN marks a window that is
/// constant for either leg or contains a missing return.
struct RollingCorrSeries {
  std::string first, second;
  std::size_t epsilon = kDefaultEpsilon;
  std::vector<double> values;

  std::size_t first_day() const { return epsilon; }
  std::size_t last_day() const { return epsilon + values.size() - 1; }
  std::optional<double> at(std::size_t t) const;
};

/// Pearson correlation of two equally sized windows; NaN when either window
/// is constant or holds a NaN.
double window_correlation(std::span<const double> a, std::span<const double> b);

RollingCorrSeries rolling_corr(const ReturnPanel& returns, std::string_view a, std::string_view b,
                               std::size_t epsilon = kDefaultEpsilon);

/// δ_t = σ over (t, t+ε] minus σ over (t-ε, t]. Nullopt when either window
/// is missing or out of range.
std::optional<double> corr_delta(const RollingCorrSeries& series, std::size_t t);

/// Precomputes every ticker's centred, unit-norm window vectors so any
/// pair's correlation at a window end is one ε-length dot product. Shared
/// read-only by the indicators.
class RollingCorrelator {
 public:
  RollingCorrelator(const ReturnPanel& returns, std::size_t epsilon);

  std::size_t epsilon() const { return epsilon_; }
  std::size_t num_days() const { return num_days_; }
  std::size_t first_day() const { return epsilon_; }
  std::size_t last_day() const { return num_days_ - 1; }
  std::size_t num_slots() const { return slots_; }

  // Correlation of columns a and b over the window ending at day t; NaN if
  // missing or t outside [ε, T].
  double corr(std::size_t a, std::size_t b, std::size_t t) const;
  // δ_t for the pair, NaN when undefined.
  double delta(std::size_t a, std::size_t b, std::size_t t) const;
  // Full series, one value per window end in [ε, T].
  std::vector<double> series(std::size_t a, std::size_t b) const;

 private:
  std::size_t epsilon_ = 0;
  std::size_t num_days_ = 0;
  std::size_t slots_ = 0;
  std::size_t num_tickers_ = 0;
  std::vector<double> unit_;       // [ticker][slot][ε]
  std::vector<unsigned char> ok_;  // [ticker][slot]
};

/// CSV rows `t,date,corr,mu` for a pair; corr is empty before the first
/// full window.
std::string rolling_corr_csv(const RollingCorrSeries& series, const TradingCalendar& calendar,
                             std::span<const std::uint8_t> mu);

}  // namespace fri
