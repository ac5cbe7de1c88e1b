#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "fri/context.hpp"
#include "fri/random.hpp"

namespace fri {

struct CssOptions {
  double alpha = 0.05;
  std::size_t min_pairs = 5;       // per side; fewer skips the day
  std::size_t isolated_ratio = 5;  // non-connected pairs sampled per connected pair
  std::uint64_t seed = 0;
  unsigned jobs = 1;
};

struct CsDay {
  std::size_t t = 0;
  bool evaluated = false;
  int cs = 0;
  double p_value = 1.0;
  std::size_t n_connected = 0;
  std::size_t n_isolated_sampled = 0;
  std::string skip_reason;
};

struct CssReport {
  std::vector<CsDay> per_day;
  double css = 0.0;
  std::size_t evaluable_days = 0;
  std::size_t skipped_days = 0;
};

struct CsDecision {
  bool evaluated = false;
  int cs = 0;
  double p_value = 1.0;
};

/// Tests whether connected pairs' |δ| exceed non-connected pairs' |δ| on
/// average (one-sided Welch). CS = 1 when p < alpha. Not evaluated when
/// either sample is below min_pairs.
CsDecision cs_test(std::span<const double> connected_abs_delta, std::span<const double> isolated_abs_delta,
                   double alpha, std::size_t min_pairs);

/// CS for day t in [ε, T-ε]; non-connected pairs are drawn from `sampler`.
CsDay cs_at(const GraphReturns& ctx, std::size_t t, const CssOptions& opts, Rng& sampler);

/// Mean CS over evaluable days. Each day's sampler is seeded from
/// (seed, t). Throws std::runtime_error when no day is evaluable.
CssReport css(const GraphReturns& ctx, const CssOptions& opts);

}  // namespace fri
