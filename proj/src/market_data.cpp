#include "fri/market_data.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "fri/error.hpp"

namespace fri {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_csv_line(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= line.size(); ++i) {
    if (i == line.size() || line[i] == ',') {
      fields.push_back(trim(line.substr(start, i - start)));
      start = i + 1;
    }
  }
  return fields;
}

// Iterates lines keeping 1-based numbering.
template <typename F>
void for_each_line(std::string_view text, F&& f) {
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    ++line_no;
    f(line_no, text.substr(pos, end - pos));
    pos = end + 1;
  }
}

std::string shortest(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

}  // namespace

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ReturnPanel::ReturnPanel(std::vector<std::string> tickers, TradingCalendar calendar,
                         std::vector<double> column_major_values)
    : tickers_(std::move(tickers)), calendar_(std::move(calendar)), values_(std::move(column_major_values)) {
  if (values_.size() != tickers_.size() * calendar_.size())
    throw std::invalid_argument("panel values do not match tickers x days");
  std::unordered_set<std::string> seen;
  for (const auto& t : tickers_) {
    if (t.empty()) throw std::invalid_argument("empty ticker symbol");
    if (!seen.insert(t).second) throw std::invalid_argument("duplicate ticker " + t);
  }
}

std::optional<std::size_t> ReturnPanel::ticker_index(std::string_view ticker) const {
  for (std::size_t i = 0; i < tickers_.size(); ++i)
    if (tickers_[i] == ticker) return i;
  return std::nullopt;
}

std::size_t ReturnPanel::require_ticker(std::string_view ticker) const {
  auto idx = ticker_index(ticker);
  if (!idx) throw std::invalid_argument("unknown ticker " + std::string(ticker));
  return *idx;
}

bool ReturnPanel::operator==(const ReturnPanel& other) const {
  if (tickers_ != other.tickers_ || !(calendar_ == other.calendar_)) return false;
  for (std::size_t i = 0; i < values_.size(); ++i) {
    const double a = values_[i], b = other.values_[i];
    if (!(a == b) && !(std::isnan(a) && std::isnan(b))) return false;
  }
  return true;
}

PriceLoad parse_prices(std::string_view csv, const std::string& source) {
  std::map<std::string, std::map<Date, double>> by_ticker;
  std::set<Date> all_dates;
  bool header_seen = false;

  for_each_line(csv, [&](std::size_t line_no, std::string_view raw) {
    std::string_view line = trim(raw);
    if (line.empty()) return;
    auto fields = split_csv_line(line);
    if (!header_seen) {
      if (fields.size() != 3 || fields[0] != "date" || fields[1] != "ticker" || fields[2] != "adj_close")
        throw ParseError(source, line_no, "expected header date,ticker,adj_close");
      header_seen = true;
      return;
    }
    if (fields.size() != 3) throw ParseError(source, line_no, "expected 3 fields");
    auto date = parse_date(fields[0]);
    if (!date) throw ParseError(source, line_no, "unparseable date '" + std::string(fields[0]) + "'");
    if (fields[1].empty()) throw ParseError(source, line_no, "empty ticker");
    double price = 0.0;
    auto [ptr, ec] = std::from_chars(fields[2].data(), fields[2].data() + fields[2].size(), price);
    if (ec != std::errc{} || ptr != fields[2].data() + fields[2].size() || !std::isfinite(price))
      throw ParseError(source, line_no, "unparseable price '" + std::string(fields[2]) + "'");
    auto& series = by_ticker[std::string(fields[1])];
    if (!series.emplace(*date, price).second)
      throw ParseError(source, line_no,
                       "duplicate row for (" + std::string(fields[0]) + ", " + std::string(fields[1]) + ")");
    all_dates.insert(*date);
  });
  if (!header_seen) throw ParseError(source, 1, "empty file");

  PriceLoad out;
  std::vector<std::string> kept;
  for (const auto& [ticker, series] : by_ticker) {
    if (series.size() == all_dates.size())
      kept.push_back(ticker);
    else
      out.dropped_tickers.push_back(ticker);
  }
  if (kept.empty()) throw std::runtime_error(source + ": empty universe after dropping incomplete tickers");

  std::vector<Date> days(all_dates.begin(), all_dates.end());
  std::vector<double> values;
  values.reserve(kept.size() * days.size());
  for (const auto& ticker : kept)
    for (const auto& [d, p] : by_ticker[ticker]) values.push_back(p);
  out.prices = ReturnPanel(std::move(kept), TradingCalendar(std::move(days)), std::move(values));
  return out;
}

PriceLoad load_prices(const std::filesystem::path& path) {
  return parse_prices(read_text_file(path), path.string());
}

ReturnPanel compute_log_returns(const ReturnPanel& prices) {
  const std::size_t n_days = prices.num_days();
  if (n_days < 2) throw std::invalid_argument("need at least two price days to compute returns");
  std::vector<double> values;
  values.reserve(prices.num_tickers() * (n_days - 1));
  for (std::size_t i = 0; i < prices.num_tickers(); ++i) {
    auto col = prices.column(i);
    for (std::size_t t = 0; t < n_days; ++t) {
      if (!(col[t] > 0.0))
        throw std::invalid_argument("non-positive price for " + prices.tickers()[i] + " on " +
                                    format_date(prices.calendar()[t]));
    }
    for (std::size_t t = 1; t < n_days; ++t) values.push_back(std::log(col[t] / col[t - 1]));
  }
  return ReturnPanel(prices.tickers(), prices.calendar().drop_front(1), std::move(values));
}

NewsLoad parse_news(std::string_view jsonl, std::span<const std::string> universe,
                    const TradingCalendar& calendar, const std::string& source) {
  std::set<std::string, std::less<>> known(universe.begin(), universe.end());
  NewsLoad out;
  for_each_line(jsonl, [&](std::size_t line_no, std::string_view raw) {
    std::string_view line = trim(raw);
    if (line.empty()) return;
    nlohmann::json obj;
    try {
      obj = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw ParseError(source, line_no, std::string("malformed JSON: ") + e.what());
    }
    if (!obj.is_object() || !obj.contains("date") || !obj["date"].is_string() || !obj.contains("id") ||
        !obj.contains("tickers") || !obj["tickers"].is_array())
      throw ParseError(source, line_no, "expected object with date, id, tickers");
    auto date = parse_date(obj["date"].get<std::string>());
    if (!date) throw ParseError(source, line_no, "unparseable date");

    NewsRecord rec;
    rec.id = obj["id"].is_string() ? obj["id"].get<std::string>() : obj["id"].dump();
    if (obj.contains("headline") && obj["headline"].is_string()) rec.headline = obj["headline"].get<std::string>();
    std::set<std::string> tickers;
    for (const auto& t : obj["tickers"]) {
      if (!t.is_string()) throw ParseError(source, line_no, "ticker entries must be strings");
      auto sym = t.get<std::string>();
      if (known.count(sym))
        tickers.insert(std::move(sym));
      else
        ++out.unknown_tickers_removed;
    }
    rec.tickers.assign(tickers.begin(), tickers.end());

    if (calendar.empty() || *date < calendar[0]) {
      ++out.dropped_before_start;
      return;
    }
    auto day = calendar.next_on_or_after(*date);
    if (!day) {
      ++out.dropped_after_end;
      return;
    }
    if (calendar[*day] != *date) ++out.reassigned;
    rec.date = calendar[*day];
    out.records.push_back(std::move(rec));
  });
  std::stable_sort(out.records.begin(), out.records.end(),
                   [](const NewsRecord& a, const NewsRecord& b) { return a.date < b.date; });
  return out;
}

NewsLoad load_news(const std::filesystem::path& path, std::span<const std::string> universe,
                   const TradingCalendar& calendar) {
  return parse_news(read_text_file(path), universe, calendar, path.string());
}

void write_prices_csv(const std::filesystem::path& path, const ReturnPanel& prices) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << "date,ticker,adj_close\n";
  for (std::size_t t = 0; t < prices.num_days(); ++t) {
    const std::string date = format_date(prices.calendar()[t]);
    for (std::size_t i = 0; i < prices.num_tickers(); ++i)
      out << date << ',' << prices.tickers()[i] << ',' << shortest(prices.at(t, i)) << '\n';
  }
}

void write_news_jsonl(const std::filesystem::path& path, std::span<const NewsRecord> news) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  for (const auto& rec : news) {
    nlohmann::ordered_json obj;
    obj["date"] = format_date(rec.date);
    obj["id"] = rec.id;
    obj["tickers"] = rec.tickers;
    if (rec.headline) obj["headline"] = *rec.headline;
    out << obj.dump() << '\n';
  }
}

}  // namespace fri
