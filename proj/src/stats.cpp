#include "fri/stats.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include <boost/math/distributions/students_t.hpp>

namespace fri {

namespace {

struct Moments {
  double mean = 0.0;
  double var = 0.0;  // sample (n-1) variance
  std::size_t n = 0;
};

Moments moments(std::span<const double> x) {
  Moments m;
  for (double v : x) {
    m.mean += v;
    ++m.n;
  }
  m.mean /= static_cast<double>(m.n);
  for (double v : x) m.var += (v - m.mean) * (v - m.mean);
  m.var /= static_cast<double>(m.n - 1);
  return m;
}

}  // namespace

double nan_mean(std::span<const double> x) {
  double s = 0.0;
  std::size_t n = 0;
  for (double v : x)
    if (!std::isnan(v)) {
      s += v;
      ++n;
    }
  return n ? s / static_cast<double>(n) : std::numeric_limits<double>::quiet_NaN();
}

double nan_pstdev(std::span<const double> x) {
  const double m = nan_mean(x);
  if (std::isnan(m)) return m;
  double s = 0.0;
  std::size_t n = 0;
  for (double v : x)
    if (!std::isnan(v)) {
      s += (v - m) * (v - m);
      ++n;
    }
  return std::sqrt(s / static_cast<double>(n));
}

WelchResult welch_greater(std::span<const double> x, std::span<const double> y) {
  if (x.size() < 2 || y.size() < 2) throw std::invalid_argument("Welch test needs at least two observations per sample");
  const Moments mx = moments(x), my = moments(y);
  const double vx = mx.var / static_cast<double>(mx.n);
  const double vy = my.var / static_cast<double>(my.n);
  const double diff = mx.mean - my.mean;
  WelchResult r;
  if (vx + vy <= 0.0) {
    r.t_stat = diff > 0 ? std::numeric_limits<double>::infinity()
                        : (diff < 0 ? -std::numeric_limits<double>::infinity() : 0.0);
    r.dof = static_cast<double>(mx.n + my.n - 2);
    r.p_value = diff > 0 ? 0.0 : 1.0;
    return r;
  }
  r.t_stat = diff / std::sqrt(vx + vy);
  r.dof = (vx + vy) * (vx + vy) /
          (vx * vx / static_cast<double>(mx.n - 1) + vy * vy / static_cast<double>(my.n - 1));
  boost::math::students_t dist(r.dof);
  r.p_value = boost::math::cdf(boost::math::complement(dist, r.t_stat));
  return r;
}

OlsFit ols_fit(std::span<const double> y, std::span<const double> x) {
  if (x.size() != y.size()) throw std::invalid_argument("ols_fit: series lengths differ");
  double sx = 0.0, sy = 0.0;
  std::size_t n = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (std::isnan(x[i]) || std::isnan(y[i])) continue;
    sx += x[i];
    sy += y[i];
    ++n;
  }
  if (n < 3) throw std::invalid_argument("ols_fit: fewer than 3 paired observations");
  const double mx = sx / static_cast<double>(n), my = sy / static_cast<double>(n);
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (std::isnan(x[i]) || std::isnan(y[i])) continue;
    const double dx = x[i] - mx, dy = y[i] - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  if (!(sxx > 0.0)) throw std::invalid_argument("ols_fit: regressor has zero variance");
  OlsFit f;
  f.n = n;
  f.beta = sxy / sxx;
  f.alpha = my - f.beta * mx;
  f.r2 = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
  return f;
}

}  // namespace fri
