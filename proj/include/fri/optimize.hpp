#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace fri {

struct SimplexOptions {
  int max_iterations = 500;
  double f_tolerance = 1e-8;  // spread of objective values across the simplex
  double initial_step = 0.5;
};

struct SimplexResult {
  std::vector<double> x;
  double value = 0.0;
  double initial_value = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Nelder-Mead minimisation (reflection 1, expansion 2, contraction 0.5,
/// shrink 0.5). The best vertex never gets worse, so the returned value is
/// at most the value at x0. Non-finite objective values are treated as +inf.
SimplexResult nelder_mead(const std::function<double(std::span<const double>)>& f, std::vector<double> x0,
                          const SimplexOptions& opts = {});

}  // namespace fri
