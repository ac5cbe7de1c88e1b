#include "doctest.h"
#include "fri/aecr.hpp"
#include "fri/rolling.hpp"
#include "fri/synth.hpp"
#include "helpers.hpp"

using namespace fri;

TEST_CASE("same seed gives identical datasets") {
  SynthConfig c;
  c.n_days = 120;
  const auto a = generate(c), b = generate(c);
  CHECK(a.prices == b.prices);
  CHECK(a.returns == b.returns);
  CHECK(a.news == b.news);
  CHECK(a.truth == b.truth);
  c.seed = 8;
  CHECK_FALSE(generate(c).returns == a.returns);
}

TEST_CASE("returns come from the emitted prices") {
  const auto ds = generate(SynthConfig{.n_tickers = 6, .n_days = 50, .n_event_pairs = 2});
  CHECK(ds.prices.num_days() == 51);
  CHECK(compute_log_returns(ds.prices) == ds.returns);
  CHECK(ds.truth.calendar() == ds.returns.calendar());
}

TEST_CASE("without background news the truth graph equals the planted windows") {
  SynthConfig c;
  c.news_rate_background = 0.0;
  const auto ds = generate(c);
  CHECK(ds.events.size() == 30);
  std::size_t edges = 0;
  for (const auto& ev : ds.events) {
    const auto es = edge_series(ds.truth, ev.first, ev.second);
    const auto periods = detect_event_periods(es);
    REQUIRE(periods.size() == 1);
    CHECK(periods[0] == EventPeriod{ev.start, ev.length});
    edges += ev.length;
  }
  CHECK(ds.truth.total_edges() == edges);
}

TEST_CASE("no shock and no background leaves returns uncorrelated and graph confined to events") {
  SynthConfig c;
  c.corr_boost = 0.0;
  c.news_rate_background = 0.0;
  const auto ds = generate(c);
  for (std::size_t t = 0; t < ds.truth.num_days(); ++t)
    for (const auto& e : ds.truth.edges(t)) {
      bool inside = false;
      for (const auto& ev : ds.events) {
        const auto p = ds.truth.require_pair(ev.first, ev.second);
        inside |= p == e.pair && t >= ev.start && t < ev.start + ev.length;
      }
      CHECK(inside);
    }
}

TEST_CASE("a planted event raises the in-event correlation") {
  SynthConfig c;
  c.n_tickers = 2;
  c.n_event_pairs = 1;
  c.event_length_min = c.event_length_max = 42;
  c.event_clusters = 0;
  c.news_rate_background = 0.0;
  const auto ds = generate(c);
  const auto s = rolling_corr(ds.returns, "S0", "S1", 21);
  const auto& ev = ds.events.at(0);
  double in = 0, out = 0;
  std::size_t n_in = 0, n_out = 0;
  for (std::size_t t = s.first_day(); t <= s.last_day(); ++t) {
    // Windows lying entirely inside the event.
    if (t >= ev.start + 20 && t < ev.start + ev.length) {
      in += *s.at(t);
      ++n_in;
    } else if (t + 21 <= ev.start || t >= ev.start + ev.length + 21) {
      out += *s.at(t);
      ++n_out;
    }
  }
  REQUIRE(n_in > 0);
  REQUIRE(n_out > 0);
  CHECK(in / n_in > out / n_out + 0.3);
}

TEST_CASE("garch legs option and simulators") {
  SynthConfig c;
  c.garch_legs = true;
  c.n_days = 100;
  const auto ds = generate(c);
  CHECK(ds.returns.num_days() == 100);
  Rng rng(1);
  CHECK_THROWS_AS(simulate_dcc11(10, 0.5, 0.6, 0.0, rng), std::invalid_argument);
}

TEST_CASE("invalid configurations") {
  SynthConfig c;
  c.event_length_max = 400;
  CHECK_THROWS_AS(generate(c), std::invalid_argument);
  c = SynthConfig{};
  c.corr_boost = 1.0;
  CHECK_THROWS_AS(generate(c), std::invalid_argument);
  c = SynthConfig{};
  c.n_tickers = 4;
  c.n_event_pairs = 7;
  CHECK_THROWS_AS(generate(c), std::invalid_argument);
}
