#include "fri/aecr.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "fri/parallel.hpp"
#include "fri/stats.hpp"

namespace fri {

std::vector<EventPeriod> detect_event_periods(std::span<const std::uint8_t> mu) {
  std::vector<EventPeriod> out;
  std::size_t t = 0;
  while (t < mu.size()) {
    if (!mu[t]) {
      ++t;
      continue;
    }
    const std::size_t start = t;
    while (t < mu.size() && mu[t]) ++t;
    out.push_back({start, t - start});
  }
  return out;
}

SeriesSpread series_spread(std::span<const double> values) {
  SeriesSpread s;
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (double v : values) {
    if (std::isnan(v)) continue;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
    ++s.defined;
  }
  if (s.defined == 0) return s;
  s.range = hi - lo;
  s.stdev = nan_pstdev(values);
  return s;
}

std::optional<bool> event_capture(std::span<const double> values, std::size_t first_day, const SeriesSpread& spread,
                                  const EventPeriod& ev) {
  if (!(spread.range > 0.0) || values.empty()) return std::nullopt;
  const std::size_t last_day = first_day + values.size() - 1;
  const std::size_t lo_day = std::max(ev.start, first_day);
  const std::size_t hi_day = std::min(ev.start + ev.length, last_day);
  if (lo_day > hi_day) return std::nullopt;

  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  std::size_t n = 0;
  for (std::size_t t = lo_day; t <= hi_day; ++t) {
    const double v = values[t - first_day];
    if (std::isnan(v)) continue;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
    ++n;
  }
  if (n < 2) return std::nullopt;
  return (hi - lo) / spread.range > spread.stdev;
}

std::optional<bool> event_capture(const RollingCorrSeries& series, const EventPeriod& ev) {
  return event_capture(series.values, series.first_day(), series_spread(series.values), ev);
}

std::optional<double> ecr(std::span<const std::optional<bool>> captures) {
  std::size_t n = 0, hits = 0;
  for (const auto& c : captures) {
    if (!c) continue;
    ++n;
    hits += *c ? 1 : 0;
  }
  if (n == 0) return std::nullopt;
  return static_cast<double>(hits) / static_cast<double>(n);
}

AecrReport aecr(const GraphReturns& ctx, const AecrOptions& opts) {
  const GraphSet& gs = ctx.graph();
  std::vector<NodePair> pairs;
  for (const auto& [pair, count] : edge_counts(gs)) pairs.push_back(pair);

  if (opts.universe == PairUniverse::strict_intersection) {
    std::vector<std::uint8_t> always(gs.num_nodes(), 1);
    for (std::size_t t = 0; t < gs.num_days(); ++t) {
      std::vector<std::uint8_t> today(gs.num_nodes(), 0);
      for (const auto& e : gs.edges(t)) today[e.pair.lo] = today[e.pair.hi] = 1;
      for (std::size_t i = 0; i < always.size(); ++i) always[i] &= today[i];
    }
    std::erase_if(pairs, [&](NodePair p) { return !always[p.lo] || !always[p.hi]; });
  }

  struct Slot {
    bool eligible = false;
    PairEcr result;
  };
  std::vector<Slot> slots(pairs.size());
  parallel_for(pairs.size(), opts.jobs, [&](std::size_t i) {
    const NodePair p = pairs[i];
    std::vector<std::uint8_t> mu(gs.num_days(), 0);
    for (std::size_t t = 0; t < gs.num_days(); ++t) mu[t] = gs.has_edge(t, p) ? 1 : 0;
    const auto events = detect_event_periods(mu);
    const auto values = ctx.series(p);
    const SeriesSpread spread = series_spread(values);

    std::vector<std::optional<bool>> captures;
    captures.reserve(events.size());
    for (const auto& ev : events) captures.push_back(event_capture(values, ctx.epsilon(), spread, ev));

    Slot& s = slots[i];
    s.result.first = gs.nodes()[p.lo];
    s.result.second = gs.nodes()[p.hi];
    for (const auto& c : captures) {
      if (!c) {
        ++s.result.skipped_events;
        continue;
      }
      ++s.result.rho;
      s.result.captured += *c ? 1 : 0;
    }
    if (auto r = ecr(captures)) {
      s.eligible = true;
      s.result.ecr = *r;
    }
  });

  AecrReport report;
  report.pairs_considered = pairs.size();
  double sum = 0.0;
  for (auto& s : slots) {
    if (!s.eligible) {
      ++report.pairs_without_evaluable_events;
      continue;
    }
    sum += s.result.ecr;
    report.per_pair.push_back(std::move(s.result));
  }
  if (report.per_pair.empty()) throw std::runtime_error("AECR: no pair has an evaluable event period");
  report.aecr = sum / static_cast<double>(report.per_pair.size());
  return report;
}

}  // namespace fri
