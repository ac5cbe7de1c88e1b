#pragma once

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "fri/calendar.hpp"
#include "fri/graph.hpp"
#include "fri/market_data.hpp"

namespace fri::testing {

inline TradingCalendar days(std::size_t n) { return weekday_calendar(*parse_date("2023-01-02"), n); }

inline std::vector<std::string> names(std::size_t n) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(std::string(1, static_cast<char>('A' + i)));
  return out;
}

// Column-major panel from per-ticker columns.
inline ReturnPanel panel(const std::vector<std::vector<double>>& cols, std::vector<std::string> tickers = {}) {
  if (tickers.empty()) tickers = names(cols.size());
  std::vector<double> v;
  for (const auto& c : cols) v.insert(v.end(), c.begin(), c.end());
  return ReturnPanel(tickers, days(cols.empty() ? 0 : cols.front().size()), v);
}

inline std::vector<std::vector<double>> gaussian_columns(std::size_t n_tickers, std::size_t n_days,
                                                         unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> z(0.0, 0.01);
  std::vector<std::vector<double>> cols(n_tickers, std::vector<double>(n_days));
  for (auto& c : cols)
    for (double& x : c) x = z(rng);
  return cols;
}

// Textbook two-pass Pearson correlation, written independently of the library.
inline double pearson(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  return sxy / std::sqrt(sxx * syy);
}

inline std::vector<double> slice(const std::vector<double>& v, std::size_t from, std::size_t len) {
  return {v.begin() + static_cast<long>(from), v.begin() + static_cast<long>(from + len)};
}

}  // namespace fri::testing
