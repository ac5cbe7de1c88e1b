#pragma once

#include <cstddef>
#include <span>

namespace fri {

/// Mean of the non-NaN values; NaN when there are none.
double nan_mean(std::span<const double> x);
/// Population standard deviation of the non-NaN values.
double nan_pstdev(std::span<const double> x);

struct WelchResult {
  double t_stat = 0.0;
  double dof = 0.0;
  double p_value = 1.0;
};

/// One-sided Welch test of H1: mean(x) > mean(y). Both samples need at
/// least two observations.
WelchResult welch_greater(std::span<const double> x, std::span<const double> y);

struct OlsFit {
  double alpha = 0.0;
  double beta = 0.0;
  double r2 = 0.0;
  std::size_t n = 0;
};

/// Univariate least squares y = alpha + beta * x over observations where
/// both values are present. Throws std::invalid_argument on fewer than three
/// observations or constant x.
OlsFit ols_fit(std::span<const double> y, std::span<const double> x);

}  // namespace fri
