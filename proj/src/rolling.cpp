#include "fri/rolling.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace fri {

namespace {

bool constant_or_missing(std::span<const double> w) {
  for (double v : w)
    if (std::isnan(v)) return true;
  return std::all_of(w.begin(), w.end(), [&](double v) { return v == w.front(); });
}

void check_epsilon(std::size_t epsilon, std::size_t num_days) {
  if (epsilon < 2) throw std::invalid_argument("rolling window length must be at least 2");
  if (num_days < epsilon + 1)
    throw std::invalid_argument("series of " + std::to_string(num_days) + " days too short for window " +
                                std::to_string(epsilon));
}

}  // namespace

std::optional<double> RollingCorrSeries::at(std::size_t t) const {
  if (t < first_day() || t > last_day()) return std::nullopt;
  double v = values[t - first_day()];
  if (std::isnan(v)) return std::nullopt;
  return v;
}

double window_correlation(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size() || a.size() < 2) return kMissing;
  if (constant_or_missing(a) || constant_or_missing(b)) return kMissing;
  const double n = static_cast<double>(a.size());
  double ma = 0.0, mb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ma += a[i];
    mb += b[i];
  }
  ma /= n;
  mb /= n;
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double da = a[i] - ma, db = b[i] - mb;
    sab += da * db;
    saa += da * da;
    sbb += db * db;
  }
  if (saa <= 0.0 || sbb <= 0.0) return kMissing;
  return std::clamp(sab / std::sqrt(saa * sbb), -1.0, 1.0);
}

RollingCorrSeries rolling_corr(const ReturnPanel& returns, std::string_view a, std::string_view b,
                               std::size_t epsilon) {
  const std::size_t ia = returns.require_ticker(a);
  const std::size_t ib = returns.require_ticker(b);
  check_epsilon(epsilon, returns.num_days());
  RollingCorrSeries out{std::string(a), std::string(b), epsilon, {}};
  auto ca = returns.column(ia), cb = returns.column(ib);
  for (std::size_t t = epsilon; t < returns.num_days(); ++t)
    out.values.push_back(window_correlation(ca.subspan(t + 1 - epsilon, epsilon), cb.subspan(t + 1 - epsilon, epsilon)));
  return out;
}

std::optional<double> corr_delta(const RollingCorrSeries& series, std::size_t t) {
  auto before = series.at(t);
  auto after = series.at(t + series.epsilon);
  if (!before || !after) return std::nullopt;
  return *after - *before;
}

RollingCorrelator::RollingCorrelator(const ReturnPanel& returns, std::size_t epsilon)
    : epsilon_(epsilon), num_days_(returns.num_days()), num_tickers_(returns.num_tickers()) {
  check_epsilon(epsilon, num_days_);
  slots_ = num_days_ - epsilon;
  unit_.assign(num_tickers_ * slots_ * epsilon, 0.0);
  ok_.assign(num_tickers_ * slots_, 0);
  for (std::size_t i = 0; i < num_tickers_; ++i) {
    auto col = returns.column(i);
    for (std::size_t k = 0; k < slots_; ++k) {
      auto w = col.subspan(k + 1, epsilon);  // window ending at t = ε + k
      if (constant_or_missing(w)) continue;
      double m = 0.0;
      for (double v : w) m += v;
      m /= static_cast<double>(epsilon);
      double ss = 0.0;
      for (double v : w) ss += (v - m) * (v - m);
      if (ss <= 0.0) continue;
      const double inv = 1.0 / std::sqrt(ss);
      double* dst = &unit_[(i * slots_ + k) * epsilon];
      for (std::size_t j = 0; j < epsilon; ++j) dst[j] = (w[j] - m) * inv;
      ok_[i * slots_ + k] = 1;
    }
  }
}

double RollingCorrelator::corr(std::size_t a, std::size_t b, std::size_t t) const {
  if (t < epsilon_ || t >= num_days_) return kMissing;
  const std::size_t k = t - epsilon_;
  if (!ok_[a * slots_ + k] || !ok_[b * slots_ + k]) return kMissing;
  const double* x = &unit_[(a * slots_ + k) * epsilon_];
  const double* y = &unit_[(b * slots_ + k) * epsilon_];
  double s = 0.0;
  for (std::size_t j = 0; j < epsilon_; ++j) s += x[j] * y[j];
  return std::clamp(s, -1.0, 1.0);
}

double RollingCorrelator::delta(std::size_t a, std::size_t b, std::size_t t) const {
  return corr(a, b, t + epsilon_) - corr(a, b, t);
}

std::vector<double> RollingCorrelator::series(std::size_t a, std::size_t b) const {
  std::vector<double> out(slots_);
  for (std::size_t k = 0; k < slots_; ++k) out[k] = corr(a, b, epsilon_ + k);
  return out;
}

std::string rolling_corr_csv(const RollingCorrSeries& series, const TradingCalendar& calendar,
                             std::span<const std::uint8_t> mu) {
  std::ostringstream out;
  out << "t,date,corr,mu\n";
  for (std::size_t t = 0; t < calendar.size(); ++t) {
    out << t << ',' << format_date(calendar[t]) << ',';
    if (auto v = series.at(t)) {
      char buf[64];
      auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, *v);
      out.write(buf, ptr - buf);
    }
    out << ',' << (t < mu.size() ? int(mu[t]) : 0) << '\n';
  }
  return out.str();
}

}  // namespace fri
