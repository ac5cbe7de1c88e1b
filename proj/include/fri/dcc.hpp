#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "fri/context.hpp"
#include "fri/factor.hpp"
#include "fri/garch.hpp"

namespace fri {

struct DccOptions {
  FitOptions fit;
  unsigned jobs = 1;
};

struct PairDccFit {
  std::string first, second;
  EdgeGroup group = EdgeGroup::low;
  bool converged = false;
  double a = 0.0;
  double b = 0.0;
  std::string failure;
};

struct DccGroupStats {
  double alpha = 0.0;  // mean DCC a over converged pairs
  double beta = 0.0;   // mean DCC b over converged pairs
  std::size_t fitted = 0;
  std::size_t failed = 0;
};

/// Group means of the DCC parameters and
/// Δ_DCC = α_high - α_low + β_low - β_high. Not applicable (Δ_DCC = 0) when
/// the high or low group has no converged fit.
struct DccReport {
  bool applicable = false;
  std::string reason;
  DccGroupStats high, medium, low;
  double delta_dcc = 0.0;
  std::vector<PairDccFit> pairs;  // sorted by pair
};

/// Fits GARCH(1,1) once per ticker, then DCC(1,1) per grouped pair.
DccReport delta_dcc(const GraphReturns& ctx, const PairGrouping& grouping, const DccOptions& opts = {});

/// Draws the construction sample with `factor` options, groups it, and fits.
/// Degenerate groupings produce a not-applicable report.
DccReport delta_dcc(const GraphReturns& ctx, const FactorOptions& factor, const DccOptions& opts = {});

}  // namespace fri
