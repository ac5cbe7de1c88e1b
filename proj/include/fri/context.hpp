#pragma once

#include <cstddef>
#include <vector>

#include "fri/graph.hpp"
#include "fri/market_data.hpp"
#include "fri/rolling.hpp"

namespace fri {

/// A graph set paired with the return panel it is evaluated against, plus
/// the rolling-correlation cache every indicator reads. Both referenced
/// objects must outlive the context. Calendars must match day for day.
class GraphReturns {
 public:
  GraphReturns(const GraphSet& graph, const ReturnPanel& returns, std::size_t epsilon);

  const GraphSet& graph() const { return *graph_; }
  const ReturnPanel& returns() const { return *returns_; }
  const RollingCorrelator& correlator() const { return corr_; }
  std::size_t epsilon() const { return corr_.epsilon(); }
  // Index of the last day, T.
  std::size_t last_day() const { return graph_->num_days() - 1; }

  std::size_t column(std::uint32_t node) const { return column_[node]; }
  double corr(NodePair p, std::size_t t) const { return corr_.corr(column_[p.lo], column_[p.hi], t); }
  double delta(NodePair p, std::size_t t) const { return corr_.delta(column_[p.lo], column_[p.hi], t); }
  std::vector<double> series(NodePair p) const { return corr_.series(column_[p.lo], column_[p.hi]); }

 private:
  const GraphSet* graph_;
  const ReturnPanel* returns_;
  RollingCorrelator corr_;
  std::vector<std::size_t> column_;
};

}  // namespace fri
