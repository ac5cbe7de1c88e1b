#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "fri/calendar.hpp"
#include "fri/market_data.hpp"

namespace fri {

/// Unordered node pair stored as (lo, hi) node indices, lo < hi.
struct NodePair {
  std::uint32_t lo = 0;
  std::uint32_t hi = 0;

  static NodePair of(std::uint32_t a, std::uint32_t b) { return a < b ? NodePair{a, b} : NodePair{b, a}; }
  std::uint64_t key() const { return (static_cast<std::uint64_t>(lo) << 32) | hi; }

  auto operator<=>(const NodePair&) const = default;
};

struct Edge {
  NodePair pair;
  double weight = 0.0;  // ν in (0, 1]; presence of the entry is μ = 1

  bool operator==(const Edge&) const = default;
};

/// Sequence of daily relationship graphs over a fixed node set. Nodes are
/// kept in lexicographic order, so node index order equals symbol order.
/// Each day's edge list is sorted by pair and holds only μ = 1 edges.
class GraphSet {
 public:
  GraphSet() = default;
  GraphSet(std::vector<std::string> nodes, TradingCalendar calendar, std::vector<std::vector<Edge>> days);

  std::size_t num_days() const { return days_.size(); }
  std::size_t num_nodes() const { return nodes_.size(); }
  std::size_t num_pairs() const { return nodes_.size() * (nodes_.size() - (nodes_.empty() ? 0 : 1)) / 2; }
  const std::vector<std::string>& nodes() const { return nodes_; }
  const TradingCalendar& calendar() const { return calendar_; }
  std::span<const Edge> edges(std::size_t t) const { return days_[t]; }
  const std::vector<std::vector<Edge>>& days() const { return days_; }

  std::optional<std::uint32_t> node_index(std::string_view name) const;
  std::uint32_t require_node(std::string_view name) const;
  NodePair require_pair(std::string_view a, std::string_view b) const;

  // μ_t for a pair (binary search in the day's sorted list).
  bool has_edge(std::size_t t, NodePair p) const;
  double weight(std::size_t t, NodePair p) const;

  std::size_t total_edges() const;

  bool operator==(const GraphSet&) const = default;

 private:
  std::vector<std::string> nodes_;
  TradingCalendar calendar_;
  std::vector<std::vector<Edge>> days_;
};

/// μ and ν of one pair over every day; `first` is the smaller symbol.
struct EdgeSeries {
  std::string first, second;
  std::vector<std::uint8_t> mu;
  std::vector<double> nu;
};

struct NodePartition {
  std::vector<std::string> connected;  // degree >= 1 on the day
  std::vector<std::string> isolated;
};

/// Co-occurrence graph: an edge joins A and B on day t when more than `tau`
/// of the day's records mention both. Weight is the count divided by the
/// day's largest count among edges.
GraphSet build_news_graphset(std::span<const NewsRecord> news, std::span<const std::string> universe,
                             const TradingCalendar& calendar, int tau);

/// Edge when |trailing ε-day correlation| > θ. Days before the first full
/// window are empty. Weight is |corr| divided by the day's maximum.
GraphSet build_corr_graphset(const ReturnPanel& returns, std::size_t epsilon, double theta);

/// The same base edge list on every calendar day. Base weights are
/// renormalised by their maximum.
GraphSet build_static_graphset(std::vector<std::string> nodes, std::vector<Edge> base_edges,
                               const TradingCalendar& calendar);

EdgeSeries edge_series(const GraphSet& gs, std::string_view a, std::string_view b);
NodePartition node_partition(const GraphSet& gs, std::size_t t);
std::size_t edge_count(const GraphSet& gs, NodePair pair);

/// Number of days each pair is connected, for every pair connected at least
/// once, sorted by pair.
std::vector<std::pair<NodePair, std::size_t>> edge_counts(const GraphSet& gs);

/// One JSON object per day: {"t":..,"date":..,"edges":[["A","B",w],...]}.
void write_graphset_jsonl(const std::filesystem::path& path, const GraphSet& gs);
std::string graphset_to_jsonl(const GraphSet& gs);
/// Nodes are taken from `nodes` when given, else from symbols appearing in
/// the file.
GraphSet read_graphset_jsonl(const std::filesystem::path& path, std::span<const std::string> nodes = {});
GraphSet parse_graphset_jsonl(std::string_view text, std::span<const std::string> nodes = {},
                              const std::string& source = "<graph>");

}  // namespace fri
