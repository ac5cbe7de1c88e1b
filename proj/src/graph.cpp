#include "fri/graph.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include <nlohmann/json.hpp>

#include "fri/error.hpp"
#include "fri/rolling.hpp"

namespace fri {

namespace {

void sort_and_normalise(std::vector<Edge>& edges) {
  std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) { return a.pair < b.pair; });
  double max_w = 0.0;
  for (const auto& e : edges) max_w = std::max(max_w, e.weight);
  if (max_w > 0.0)
    for (auto& e : edges) e.weight = e.weight == max_w ? 1.0 : e.weight / max_w;
}

std::vector<std::string> sorted_unique(std::span<const std::string> names) {
  std::vector<std::string> out(names.begin(), names.end());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace

GraphSet::GraphSet(std::vector<std::string> nodes, TradingCalendar calendar, std::vector<std::vector<Edge>> days)
    : nodes_(std::move(nodes)), calendar_(std::move(calendar)), days_(std::move(days)) {
  if (days_.size() != calendar_.size()) throw std::invalid_argument("graph days do not match calendar length");
  for (std::size_t i = 1; i < nodes_.size(); ++i)
    if (!(nodes_[i - 1] < nodes_[i])) throw std::invalid_argument("graph nodes must be sorted and unique");
  const auto n = static_cast<std::uint32_t>(nodes_.size());
  for (std::size_t t = 0; t < days_.size(); ++t) {
    const auto& day = days_[t];
    for (std::size_t j = 0; j < day.size(); ++j) {
      const auto& e = day[j];
      if (e.pair.lo >= e.pair.hi || e.pair.hi >= n)
        throw std::invalid_argument("invalid edge on day " + std::to_string(t));
      if (!(e.weight > 0.0 && e.weight <= 1.0))
        throw std::invalid_argument("edge weight outside (0,1] on day " + std::to_string(t));
      if (j > 0 && !(day[j - 1].pair < e.pair))
        throw std::invalid_argument("edges unsorted or duplicated on day " + std::to_string(t));
    }
  }
}

std::optional<std::uint32_t> GraphSet::node_index(std::string_view name) const {
  auto it = std::lower_bound(nodes_.begin(), nodes_.end(), name);
  if (it == nodes_.end() || *it != name) return std::nullopt;
  return static_cast<std::uint32_t>(it - nodes_.begin());
}

std::uint32_t GraphSet::require_node(std::string_view name) const {
  auto idx = node_index(name);
  if (!idx) throw std::invalid_argument("unknown ticker " + std::string(name));
  return *idx;
}

NodePair GraphSet::require_pair(std::string_view a, std::string_view b) const {
  const auto ia = require_node(a), ib = require_node(b);
  if (ia == ib) throw std::invalid_argument("pair needs two distinct tickers, got " + std::string(a) + " twice");
  return NodePair::of(ia, ib);
}

bool GraphSet::has_edge(std::size_t t, NodePair p) const {
  const auto& day = days_[t];
  auto it = std::lower_bound(day.begin(), day.end(), p, [](const Edge& e, NodePair q) { return e.pair < q; });
  return it != day.end() && it->pair == p;
}

double GraphSet::weight(std::size_t t, NodePair p) const {
  const auto& day = days_[t];
  auto it = std::lower_bound(day.begin(), day.end(), p, [](const Edge& e, NodePair q) { return e.pair < q; });
  return (it != day.end() && it->pair == p) ? it->weight : 0.0;
}

std::size_t GraphSet::total_edges() const {
  std::size_t n = 0;
  for (const auto& d : days_) n += d.size();
  return n;
}

GraphSet build_news_graphset(std::span<const NewsRecord> news, std::span<const std::string> universe,
                             const TradingCalendar& calendar, int tau) {
  if (tau < 0) throw std::invalid_argument("tau must be non-negative");
  auto nodes = sorted_unique(universe);
  GraphSet index_only(nodes, calendar, std::vector<std::vector<Edge>>(calendar.size()));

  std::vector<std::map<NodePair, int>> counts(calendar.size());
  for (const auto& rec : news) {
    auto day = calendar.index_of(rec.date);
    if (!day) throw std::invalid_argument("news record " + rec.id + " is not aligned to a trading day");
    std::vector<std::uint32_t> ids;
    for (const auto& t : rec.tickers)
      if (auto i = index_only.node_index(t)) ids.push_back(*i);
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    for (std::size_t x = 0; x < ids.size(); ++x)
      for (std::size_t y = x + 1; y < ids.size(); ++y) ++counts[*day][NodePair{ids[x], ids[y]}];
  }

  std::vector<std::vector<Edge>> days(calendar.size());
  for (std::size_t t = 0; t < calendar.size(); ++t) {
    for (const auto& [pair, k] : counts[t])
      if (k > tau) days[t].push_back({pair, static_cast<double>(k)});
    sort_and_normalise(days[t]);
  }
  return GraphSet(std::move(nodes), calendar, std::move(days));
}

GraphSet build_corr_graphset(const ReturnPanel& returns, std::size_t epsilon, double theta) {
  if (!(theta >= 0.0 && theta < 1.0)) throw std::invalid_argument("theta must lie in [0, 1)");
  auto nodes = sorted_unique(returns.tickers());
  std::vector<std::size_t> column(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) column[i] = returns.require_ticker(nodes[i]);

  RollingCorrelator corr(returns, epsilon);
  std::vector<std::vector<Edge>> days(returns.num_days());
  for (std::size_t t = epsilon; t < returns.num_days(); ++t) {
    for (std::uint32_t a = 0; a < nodes.size(); ++a)
      for (std::uint32_t b = a + 1; b < nodes.size(); ++b) {
        const double c = std::abs(corr.corr(column[a], column[b], t));
        if (c > theta) days[t].push_back({NodePair{a, b}, c});
      }
    sort_and_normalise(days[t]);
  }
  return GraphSet(std::move(nodes), returns.calendar(), std::move(days));
}

GraphSet build_static_graphset(std::vector<std::string> nodes, std::vector<Edge> base_edges,
                               const TradingCalendar& calendar) {
  sort_and_normalise(base_edges);
  std::vector<std::vector<Edge>> days(calendar.size(), base_edges);
  return GraphSet(std::move(nodes), calendar, std::move(days));
}

EdgeSeries edge_series(const GraphSet& gs, std::string_view a, std::string_view b) {
  const NodePair p = gs.require_pair(a, b);
  EdgeSeries out{gs.nodes()[p.lo], gs.nodes()[p.hi], std::vector<std::uint8_t>(gs.num_days(), 0),
                 std::vector<double>(gs.num_days(), 0.0)};
  for (std::size_t t = 0; t < gs.num_days(); ++t) {
    const double w = gs.weight(t, p);
    if (w > 0.0) {
      out.mu[t] = 1;
      out.nu[t] = w;
    }
  }
  return out;
}

NodePartition node_partition(const GraphSet& gs, std::size_t t) {
  if (t >= gs.num_days()) throw std::out_of_range("day index " + std::to_string(t) + " out of range");
  std::vector<bool> connected(gs.num_nodes(), false);
  for (const auto& e : gs.edges(t)) connected[e.pair.lo] = connected[e.pair.hi] = true;
  NodePartition out;
  for (std::size_t i = 0; i < gs.num_nodes(); ++i)
    (connected[i] ? out.connected : out.isolated).push_back(gs.nodes()[i]);
  return out;
}

std::size_t edge_count(const GraphSet& gs, NodePair pair) {
  std::size_t n = 0;
  for (std::size_t t = 0; t < gs.num_days(); ++t) n += gs.has_edge(t, pair) ? 1 : 0;
  return n;
}

std::vector<std::pair<NodePair, std::size_t>> edge_counts(const GraphSet& gs) {
  std::unordered_map<std::uint64_t, std::size_t> counts;
  for (const auto& day : gs.days())
    for (const auto& e : day) ++counts[e.pair.key()];
  std::vector<std::pair<NodePair, std::size_t>> out;
  out.reserve(counts.size());
  for (const auto& [key, n] : counts)
    out.push_back({NodePair{static_cast<std::uint32_t>(key >> 32), static_cast<std::uint32_t>(key & 0xffffffffu)}, n});
  std::sort(out.begin(), out.end());
  return out;
}

std::string graphset_to_jsonl(const GraphSet& gs) {
  std::string out;
  for (std::size_t t = 0; t < gs.num_days(); ++t) {
    nlohmann::ordered_json line;
    line["t"] = t;
    line["date"] = format_date(gs.calendar()[t]);
    auto edges = nlohmann::ordered_json::array();
    for (const auto& e : gs.edges(t))
      edges.push_back(nlohmann::ordered_json::array({gs.nodes()[e.pair.lo], gs.nodes()[e.pair.hi], e.weight}));
    line["edges"] = std::move(edges);
    out += line.dump();
    out += '\n';
  }
  return out;
}

void write_graphset_jsonl(const std::filesystem::path& path, const GraphSet& gs) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << graphset_to_jsonl(gs);
}

GraphSet parse_graphset_jsonl(std::string_view text, std::span<const std::string> nodes, const std::string& source) {
  struct RawDay {
    Date date;
    std::vector<std::tuple<std::string, std::string, double>> edges;
    std::size_t line = 0;
  };
  std::vector<RawDay> raw;
  std::set<std::string> seen;

  std::size_t line_no = 0, pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    ++line_no;
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;

    nlohmann::json obj;
    try {
      obj = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw ParseError(source, line_no, std::string("malformed JSON: ") + e.what());
    }
    if (!obj.is_object() || !obj.contains("t") || !obj.contains("date") || !obj.contains("edges") ||
        !obj["edges"].is_array() || !obj["t"].is_number_unsigned() || !obj["date"].is_string())
      throw ParseError(source, line_no, "expected object with t, date, edges");
    if (obj["t"].get<std::size_t>() != raw.size())
      throw ParseError(source, line_no, "day index out of sequence");
    auto date = parse_date(obj["date"].get<std::string>());
    if (!date) throw ParseError(source, line_no, "unparseable date");
    RawDay day{*date, {}, line_no};
    for (const auto& e : obj["edges"]) {
      if (!e.is_array() || e.size() != 3 || !e[0].is_string() || !e[1].is_string() || !e[2].is_number())
        throw ParseError(source, line_no, "edge must be [\"A\",\"B\",weight]");
      auto a = e[0].get<std::string>(), b = e[1].get<std::string>();
      if (a == b) throw ParseError(source, line_no, "self-loop on " + a);
      seen.insert(a);
      seen.insert(b);
      day.edges.emplace_back(std::move(a), std::move(b), e[2].get<double>());
    }
    raw.push_back(std::move(day));
  }

  std::vector<std::string> node_list = nodes.empty() ? std::vector<std::string>(seen.begin(), seen.end())
                                                     : sorted_unique(nodes);
  std::vector<Date> dates;
  for (const auto& d : raw) dates.push_back(d.date);
  GraphSet index_only(node_list, TradingCalendar(dates), std::vector<std::vector<Edge>>(dates.size()));

  std::vector<std::vector<Edge>> days(raw.size());
  for (std::size_t t = 0; t < raw.size(); ++t) {
    for (const auto& [a, b, w] : raw[t].edges) {
      auto ia = index_only.node_index(a), ib = index_only.node_index(b);
      if (!ia || !ib)
        throw ParseError(source, raw[t].line, "edge names ticker outside universe (" + a + "," + b + ")");
      days[t].push_back({NodePair::of(*ia, *ib), w});
    }
    std::sort(days[t].begin(), days[t].end(), [](const Edge& x, const Edge& y) { return x.pair < y.pair; });
  }
  return GraphSet(std::move(node_list), TradingCalendar(std::move(dates)), std::move(days));
}

GraphSet read_graphset_jsonl(const std::filesystem::path& path, std::span<const std::string> nodes) {
  return parse_graphset_jsonl(read_text_file(path), nodes, path.string());
}

}  // namespace fri
