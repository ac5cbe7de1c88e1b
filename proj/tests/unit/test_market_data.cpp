#include <cmath>
#include <filesystem>

#include "doctest.h"
#include "fri/error.hpp"
#include "fri/market_data.hpp"
#include "helpers.hpp"

using namespace fri;

TEST_CASE("parse_date accepts only strict ISO dates") {
  CHECK(parse_date("2023-03-15").has_value());
  CHECK(format_date(*parse_date("2023-03-15")) == "2023-03-15");
  CHECK_FALSE(parse_date("2023-3-15"));
  CHECK_FALSE(parse_date("2023-02-30"));
  CHECK_FALSE(parse_date("2023-03-15x"));
  CHECK_FALSE(parse_date(""));
}

TEST_CASE("trading calendar rejects unordered dates") {
  const Date d = *parse_date("2023-01-02");
  CHECK_THROWS_AS(TradingCalendar({d, d}), std::invalid_argument);
  CHECK_THROWS_AS(TradingCalendar({d + std::chrono::days(1), d}), std::invalid_argument);
  const TradingCalendar cal = weekday_calendar(*parse_date("2023-01-06"), 3);  // Friday
  CHECK(format_date(cal[1]) == "2023-01-09");
  CHECK(cal.next_on_or_after(*parse_date("2023-01-07")) == 1u);
  CHECK_FALSE(cal.next_on_or_after(*parse_date("2023-02-01")));
}

TEST_CASE("complete price file loads as a panel") {
  const auto load = parse_prices(
      "date,ticker,adj_close\n"
      "2023-01-03,B,20\n2023-01-02,A,10\n2023-01-02,B,21\n2023-01-03,A,11\n2023-01-04,A,12\n2023-01-04,B,22\n");
  CHECK(load.prices.num_days() == 3);
  CHECK(load.prices.num_tickers() == 2);
  CHECK(load.dropped_tickers.empty());
  CHECK(load.prices.at(1, 0) == 11.0);
  CHECK(load.prices.at(0, 1) == 21.0);
}

TEST_CASE("incomplete ticker is dropped with a record of it") {
  const auto load = parse_prices(
      "date,ticker,adj_close\n2023-01-02,A,10\n2023-01-02,B,21\n2023-01-03,A,11\n2023-01-04,A,12\n2023-01-04,B,22\n");
  CHECK(load.prices.tickers() == std::vector<std::string>{"A"});
  CHECK(load.dropped_tickers == std::vector<std::string>{"B"});
}

TEST_CASE("duplicate price row names the offender") {
  try {
    parse_prices("date,ticker,adj_close\n2023-01-02,A,10\n2023-01-02,A,11\n", "p.csv");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
    CHECK(std::string(e.what()).find("A") != std::string::npos);
    CHECK(std::string(e.what()).find("2023-01-02") != std::string::npos);
  }
}

TEST_CASE("malformed price rows are parse errors") {
  CHECK_THROWS_AS(parse_prices("date,ticker,adj_close\n2023-01-02,A\n"), ParseError);
  CHECK_THROWS_AS(parse_prices("date,ticker,adj_close\n2023-13-02,A,1\n"), ParseError);
  CHECK_THROWS_AS(parse_prices("date,ticker,adj_close\n2023-01-02,A,abc\n"), ParseError);
  CHECK_THROWS_AS(parse_prices("when,ticker,adj_close\n"), ParseError);
}

TEST_CASE("log returns") {
  using testing::panel;
  SUBCASE("ln(110/100)") {
    const auto r = compute_log_returns(panel({{100.0, 110.0}}));
    REQUIRE(r.num_days() == 1);
    CHECK(r.at(0, 0) == doctest::Approx(0.0953102).epsilon(1e-7));
  }
  SUBCASE("halving") {
    const auto r = compute_log_returns(panel({{100.0, 100.0, 50.0}}));
    CHECK(r.at(0, 0) == 0.0);
    CHECK(r.at(1, 0) == doctest::Approx(std::log(0.5)));
  }
  SUBCASE("constant prices give zero returns") {
    const auto r = compute_log_returns(panel({{5.0, 5.0, 5.0, 5.0}}));
    for (std::size_t t = 0; t < r.num_days(); ++t) CHECK(r.at(t, 0) == 0.0);
  }
  SUBCASE("non-positive price is rejected") {
    CHECK_THROWS_AS(compute_log_returns(panel({{1.0, 0.0}})), std::invalid_argument);
  }
}

TEST_CASE("returns are one day shorter and telescope to the total log change") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.95, 1.05);
  std::vector<double> p{100.0};
  for (int i = 0; i < 250; ++i) p.push_back(p.back() * u(rng));
  const auto r = compute_log_returns(testing::panel({p}));
  CHECK(r.num_days() == p.size() - 1);
  double sum = 0.0;
  for (std::size_t t = 0; t < r.num_days(); ++t) sum += r.at(t, 0);
  CHECK(std::abs(sum - std::log(p.back() / p.front())) < 1e-12);
}

TEST_CASE("news loading") {
  const TradingCalendar cal = weekday_calendar(*parse_date("2023-01-02"), 10);
  const std::vector<std::string> universe{"AAPL", "JPM", "MSFT"};
  SUBCASE("unknown tickers are filtered") {
    const auto n = parse_news(R"({"date":"2023-01-03","id":"1","tickers":["AAPL","XYZ"]})", universe, cal);
    REQUIRE(n.records.size() == 1);
    CHECK(n.records[0].tickers == std::vector<std::string>{"AAPL"});
    CHECK(n.unknown_tickers_removed == 1);
  }
  SUBCASE("weekend record moves to Monday") {
    const auto n = parse_news(R"({"date":"2023-01-07","id":"1","tickers":["AAPL","JPM"]})", universe, cal);
    REQUIRE(n.records.size() == 1);
    CHECK(format_date(n.records[0].date) == "2023-01-09");
    CHECK(n.reassigned == 1);
  }
  SUBCASE("empty ticker list is kept") {
    const auto n = parse_news(R"({"date":"2023-01-03","id":"1","tickers":[],"headline":"h"})", universe, cal);
    REQUIRE(n.records.size() == 1);
    CHECK(n.records[0].tickers.empty());
    CHECK(n.records[0].headline == "h");
  }
  SUBCASE("records outside the calendar are dropped and counted") {
    const auto n = parse_news(
        "{\"date\":\"2022-12-30\",\"id\":\"a\",\"tickers\":[\"AAPL\"]}\n"
        "{\"date\":\"2024-01-01\",\"id\":\"b\",\"tickers\":[\"AAPL\"]}\n",
        universe, cal);
    CHECK(n.records.empty());
    CHECK(n.dropped_before_start == 1);
    CHECK(n.dropped_after_end == 1);
  }
  SUBCASE("malformed line reports its line number") {
    try {
      parse_news("{\"date\":\"2023-01-03\",\"id\":\"1\",\"tickers\":[]}\n{oops\n", universe, cal, "n.jsonl");
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(e.line() == 2);
    }
  }
}

TEST_CASE("price and news files round-trip") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "fri_md_roundtrip";
  fs::create_directories(dir);
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(1.0, 500.0);
  std::vector<std::vector<double>> cols(3, std::vector<double>(12));
  for (auto& c : cols)
    for (double& x : c) x = u(rng);
  const ReturnPanel prices = testing::panel(cols, {"AA", "BB", "CC"});
  write_prices_csv(dir / "p.csv", prices);
  const auto first = load_prices(dir / "p.csv");
  CHECK(first.prices == prices);
  write_prices_csv(dir / "p2.csv", first.prices);
  CHECK(read_text_file(dir / "p.csv") == read_text_file(dir / "p2.csv"));

  std::vector<NewsRecord> news;
  NewsRecord r;
  r.date = prices.calendar()[2];
  r.id = "x1";
  r.tickers = {"AA", "CC"};
  r.headline = "quoted \"text\"";
  news.push_back(r);
  r.id = "x2";
  r.headline.reset();
  r.tickers = {"BB"};
  news.push_back(r);
  write_news_jsonl(dir / "n.jsonl", news);
  const auto back = load_news(dir / "n.jsonl", prices.tickers(), prices.calendar());
  CHECK(back.records == news);
  fs::remove_all(dir);
}
