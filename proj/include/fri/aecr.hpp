#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fri/context.hpp"
#include "fri/graph.hpp"
#include "fri/rolling.hpp"

namespace fri {

/// Maximal run of consecutive days with μ = 1.
struct EventPeriod {
  std::size_t start = 0;
  std::size_t length = 0;

  bool operator==(const EventPeriod&) const = default;
};

std::vector<EventPeriod> detect_event_periods(std::span<const std::uint8_t> mu);
inline std::vector<EventPeriod> detect_event_periods(const EdgeSeries& es) { return detect_event_periods(es.mu); }

/// Whole-period statistics of a rolling-correlation series used by every
/// event of the pair: range (Δ_T) and population std, missing values
/// excluded.
struct SeriesSpread {
  double range = 0.0;
  double stdev = 0.0;
  std::size_t defined = 0;
};
SeriesSpread series_spread(std::span<const double> values);

/// EC for one event: 1 when the range of rolling values with window end in
/// [start, start + length] divided by the whole-period range exceeds the
/// whole-period std. Nullopt (skipped) when fewer than two rolling values
/// fall in the event or the whole-period range is zero.
std::optional<bool> event_capture(const RollingCorrSeries& series, const EventPeriod& ev);
std::optional<bool> event_capture(std::span<const double> values, std::size_t first_day, const SeriesSpread& spread,
                                  const EventPeriod& ev);

/// Mean EC over the non-skipped events; nullopt when none were evaluated.
std::optional<double> ecr(std::span<const std::optional<bool>> captures);

enum class PairUniverse {
  with_events,          // every pair with at least one detected event period
  strict_intersection,  // both nodes connected on every day
};

struct AecrOptions {
  PairUniverse universe = PairUniverse::with_events;
  unsigned jobs = 1;
};

struct PairEcr {
  std::string first, second;
  double ecr = 0.0;
  std::size_t rho = 0;  // evaluated event periods
  std::size_t captured = 0;
  std::size_t skipped_events = 0;
};

struct AecrReport {
  std::vector<PairEcr> per_pair;  // eligible pairs, in pair order
  double aecr = 0.0;
  std::size_t pairs_considered = 0;
  std::size_t pairs_without_evaluable_events = 0;
  std::size_t M() const { return per_pair.size(); }
};

/// Mean ECR over eligible pairs. Throws std::runtime_error when no pair
/// has an evaluable event.
AecrReport aecr(const GraphReturns& ctx, const AecrOptions& opts = {});

}  // namespace fri
