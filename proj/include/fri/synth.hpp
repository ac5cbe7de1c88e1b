#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "fri/graph.hpp"
#include "fri/market_data.hpp"
#include "fri/random.hpp"

namespace fri {

struct SynthConfig {
  std::size_t n_tickers = 40;
  std::size_t n_days = 300;  // return days; prices carry one extra leading day
  std::size_t epsilon = 21;
  std::size_t n_event_pairs = 30;
  std::size_t event_length_min = 40;
  std::size_t event_length_max = 50;
  // Event starts gather around this many evenly spaced episodes (0: uniform).
  std::size_t event_clusters = 2;
  std::size_t cluster_jitter = 0;
  double corr_boost = 0.8;  // common-shock loading λ; in-event correlation is λ²
  bool garch_legs = false;
  double news_rate_in_event = 2.0;    // expected co-mentions per event day (at least one)
  double news_rate_background = 0.3;  // expected random-pair co-mentions per day
  double volatility = 0.01;           // daily return std without GARCH legs
  std::uint64_t seed = 7;
};

struct PlantedEvent {
  std::string first, second;
  std::size_t start = 0;  // return-calendar day index
  std::size_t length = 0;
};

struct SynthDataset {
  ReturnPanel prices;
  ReturnPanel returns;
  std::vector<NewsRecord> news;
  GraphSet truth;  // news graph at tau = 0 over the return calendar
  std::vector<PlantedEvent> events;
};

/// Throws std::invalid_argument for invalid configurations, including event
/// windows longer than the period.
void validate(const SynthConfig& config);

/// Planted-event market: i.i.d. Gaussian (or GARCH(1,1)) legs; inside each
/// event window both legs load λ on a shared shock. News co-mentions are
/// emitted every event day plus Poisson background mentions of random pairs.
SynthDataset generate(const SynthConfig& config);

/// Applies node permutation `perm` (old index -> new index) to every edge.
GraphSet relabel_graphset(const GraphSet& gs, std::span<const std::uint32_t> perm);

/// Uniformly random node relabelling; preserves each day's edge count and
/// the multiset of per-pair edge counts.
GraphSet shuffle_graphset(const GraphSet& gs, std::uint64_t seed);

/// GARCH(1,1) path with Gaussian innovations started at the unconditional
/// variance.
std::vector<double> simulate_garch11(std::size_t n, double omega, double alpha, double beta, Rng& rng);

/// Bivariate standardized shocks following DCC(1,1) with unconditional
/// correlation `rbar`.
std::pair<std::vector<double>, std::vector<double>> simulate_dcc11(std::size_t n, double a, double b, double rbar,
                                                                   Rng& rng);

}  // namespace fri
