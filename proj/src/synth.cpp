#include "fri/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <set>
#include <stdexcept>

namespace fri {

namespace {

constexpr int kPlacementAttempts = 10000;

std::string ticker_name(std::size_t i, std::size_t n) {
  const int width = n > 1 ? static_cast<int>(std::to_string(n - 1).size()) : 1;
  char buf[32];
  std::snprintf(buf, sizeof buf, "S%0*zu", width, i);
  return buf;
}

}  // namespace

void validate(const SynthConfig& c) {
  if (c.n_tickers < 2) throw std::invalid_argument("synth: need at least two tickers");
  if (c.n_days < 2) throw std::invalid_argument("synth: need at least two days");
  if (c.epsilon < 2) throw std::invalid_argument("synth: epsilon must be at least 2");
  if (c.event_length_min == 0 || c.event_length_min > c.event_length_max)
    throw std::invalid_argument("synth: event length range must satisfy 1 <= min <= max");
  if (c.event_length_max > c.n_days) throw std::invalid_argument("synth: event windows exceed the number of days");
  if (c.n_event_pairs > c.n_tickers * (c.n_tickers - 1) / 2)
    throw std::invalid_argument("synth: more event pairs than distinct pairs");
  if (!(c.corr_boost >= 0.0 && c.corr_boost < 1.0)) throw std::invalid_argument("synth: corr_boost must lie in [0,1)");
  if (c.news_rate_in_event < 0.0 || c.news_rate_background < 0.0)
    throw std::invalid_argument("synth: news rates must be non-negative");
  if (!(c.volatility > 0.0)) throw std::invalid_argument("synth: volatility must be positive");
}

SynthDataset generate(const SynthConfig& c) {
  validate(c);
  std::vector<std::string> tickers;
  for (std::size_t i = 0; i < c.n_tickers; ++i) tickers.push_back(ticker_name(i, c.n_tickers));

  const TradingCalendar price_calendar = weekday_calendar(*parse_date("2022-09-01"), c.n_days + 1);
  const TradingCalendar calendar = price_calendar.drop_front(1);

  // Event placement: distinct pairs, and no ticker in two overlapping windows.
  Rng place = make_rng(c.seed, "synth-events");
  std::uniform_int_distribution<std::size_t> pick_ticker(0, c.n_tickers - 1);
  std::uniform_int_distribution<std::size_t> pick_len(c.event_length_min, c.event_length_max);
  struct Placed {
    std::size_t a, b, start, length;
  };
  std::vector<Placed> placed;
  std::set<std::pair<std::size_t, std::size_t>> used_pairs;
  for (std::size_t k = 0; k < c.n_event_pairs; ++k) {
    bool ok = false;
    for (int attempt = 0; attempt < kPlacementAttempts && !ok; ++attempt) {
      std::size_t a = pick_ticker(place), b = pick_ticker(place);
      if (a == b) continue;
      if (a > b) std::swap(a, b);
      if (used_pairs.count({a, b})) continue;
      const std::size_t len = pick_len(place);
      std::size_t start;
      if (c.event_clusters == 0) {
        std::uniform_int_distribution<std::size_t> pick_start(0, c.n_days - len);
        start = pick_start(place);
      } else {
        const std::size_t cluster = k % c.event_clusters;
        const double centre = (static_cast<double>(cluster) + 0.5) * static_cast<double>(c.n_days) /
                              static_cast<double>(c.event_clusters);
        std::uniform_int_distribution<long> jitter(-static_cast<long>(c.cluster_jitter),
                                                   static_cast<long>(c.cluster_jitter));
        const long s0 = std::lround(centre - static_cast<double>(len) / 2.0) + jitter(place);
        start = static_cast<std::size_t>(std::clamp<long>(s0, 0, static_cast<long>(c.n_days - len)));
      }
      ok = std::none_of(placed.begin(), placed.end(), [&](const Placed& p) {
        const bool shares = p.a == a || p.a == b || p.b == a || p.b == b;
        const bool overlaps = start < p.start + p.length && p.start < start + len;
        return shares && overlaps;
      });
      if (ok) {
        placed.push_back({a, b, start, len});
        used_pairs.insert({a, b});
      }
    }
    if (!ok) throw std::invalid_argument("synth: cannot place event windows without overlapping tickers");
  }

  // Standardized shocks with common factors inside event windows.
  Rng shocks = make_rng(c.seed, "synth-shocks");
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> z(c.n_tickers * c.n_days);
  for (double& v : z) v = normal(shocks);
  const double lambda = c.corr_boost, keep = std::sqrt(1.0 - lambda * lambda);
  for (const auto& p : placed) {
    for (std::size_t t = p.start; t < p.start + p.length; ++t) {
      const double f = normal(shocks);
      z[p.a * c.n_days + t] = keep * z[p.a * c.n_days + t] + lambda * f;
      z[p.b * c.n_days + t] = keep * z[p.b * c.n_days + t] + lambda * f;
    }
  }

  // Prices from returns; column-major to match ReturnPanel.
  const double garch_alpha = 0.10, garch_beta = 0.85;
  const double var_target = c.volatility * c.volatility;
  std::vector<double> prices(c.n_tickers * (c.n_days + 1));
  for (std::size_t i = 0; i < c.n_tickers; ++i) {
    double log_p = std::log(100.0);
    double s2 = var_target, prev_r = 0.0;
    prices[i * (c.n_days + 1)] = 100.0;
    for (std::size_t t = 0; t < c.n_days; ++t) {
      double r;
      if (c.garch_legs) {
        if (t > 0) s2 = var_target * (1.0 - garch_alpha - garch_beta) + garch_alpha * prev_r * prev_r + garch_beta * s2;
        r = std::sqrt(s2) * z[i * c.n_days + t];
      } else {
        r = c.volatility * z[i * c.n_days + t];
      }
      prev_r = r;
      log_p += r;
      prices[i * (c.n_days + 1) + t + 1] = std::exp(log_p);
    }
  }

  SynthDataset out;
  out.prices = ReturnPanel(tickers, price_calendar, std::move(prices));
  out.returns = compute_log_returns(out.prices);

  // News stream.
  Rng news_rng = make_rng(c.seed, "synth-news");
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> mentions(c.n_days);
  for (const auto& p : placed) {
    for (std::size_t t = p.start; t < p.start + p.length; ++t) {
      std::size_t count;
      if (c.news_rate_in_event >= 1.0) {
        std::poisson_distribution<std::size_t> extra(c.news_rate_in_event - 1.0);
        count = 1 + (c.news_rate_in_event > 1.0 ? extra(news_rng) : 0);
      } else {
        std::poisson_distribution<std::size_t> pois(c.news_rate_in_event);
        count = c.news_rate_in_event > 0.0 ? pois(news_rng) : 0;
      }
      for (std::size_t k = 0; k < count; ++k) mentions[t].push_back({p.a, p.b});
    }
  }
  if (c.news_rate_background > 0.0) {
    std::poisson_distribution<std::size_t> bg(c.news_rate_background);
    for (std::size_t t = 0; t < c.n_days; ++t) {
      const std::size_t count = bg(news_rng);
      for (std::size_t k = 0; k < count; ++k) {
        std::size_t a = pick_ticker(news_rng), b = pick_ticker(news_rng);
        while (b == a) b = pick_ticker(news_rng);
        mentions[t].push_back({std::min(a, b), std::max(a, b)});
      }
    }
  }
  for (std::size_t t = 0; t < c.n_days; ++t) {
    for (std::size_t k = 0; k < mentions[t].size(); ++k) {
      const auto [a, b] = mentions[t][k];
      NewsRecord rec;
      rec.date = calendar[t];
      rec.id = "synth-" + std::to_string(t) + "-" + std::to_string(k);
      rec.tickers = {tickers[a], tickers[b]};
      out.news.push_back(std::move(rec));
    }
  }

  out.truth = build_news_graphset(out.news, tickers, calendar, 0);
  for (const auto& p : placed) out.events.push_back({tickers[p.a], tickers[p.b], p.start, p.length});
  return out;
}

GraphSet relabel_graphset(const GraphSet& gs, std::span<const std::uint32_t> perm) {
  if (perm.size() != gs.num_nodes()) throw std::invalid_argument("permutation size does not match node count");
  std::vector<std::vector<Edge>> days(gs.num_days());
  for (std::size_t t = 0; t < gs.num_days(); ++t) {
    for (const auto& e : gs.edges(t)) days[t].push_back({NodePair::of(perm[e.pair.lo], perm[e.pair.hi]), e.weight});
    std::sort(days[t].begin(), days[t].end(), [](const Edge& x, const Edge& y) { return x.pair < y.pair; });
  }
  return GraphSet(gs.nodes(), gs.calendar(), std::move(days));
}

GraphSet shuffle_graphset(const GraphSet& gs, std::uint64_t seed) {
  std::vector<std::uint32_t> perm(gs.num_nodes());
  std::iota(perm.begin(), perm.end(), 0u);
  Rng rng = make_rng(seed, "shuffle");
  std::shuffle(perm.begin(), perm.end(), rng);
  return relabel_graphset(gs, perm);
}

std::vector<double> simulate_garch11(std::size_t n, double omega, double alpha, double beta, Rng& rng) {
  if (!(omega > 0.0 && alpha >= 0.0 && beta >= 0.0 && alpha + beta < 1.0))
    throw std::invalid_argument("simulate_garch11: parameters violate stationarity");
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> r(n);
  double s2 = omega / (1.0 - alpha - beta), prev = 0.0;
  for (std::size_t t = 0; t < n; ++t) {
    if (t > 0) s2 = omega + alpha * prev * prev + beta * s2;
    r[t] = std::sqrt(s2) * normal(rng);
    prev = r[t];
  }
  return r;
}

std::pair<std::vector<double>, std::vector<double>> simulate_dcc11(std::size_t n, double a, double b, double rbar,
                                                                   Rng& rng) {
  if (!(a >= 0.0 && b >= 0.0 && a + b < 1.0 && rbar > -1.0 && rbar < 1.0))
    throw std::invalid_argument("simulate_dcc11: invalid parameters");
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> za(n), zb(n);
  double q11 = 1.0, q22 = 1.0, q12 = rbar;
  for (std::size_t t = 0; t < n; ++t) {
    if (t > 0) {
      const double c = 1.0 - a - b;
      q11 = c + a * za[t - 1] * za[t - 1] + b * q11;
      q22 = c + a * zb[t - 1] * zb[t - 1] + b * q22;
      q12 = c * rbar + a * za[t - 1] * zb[t - 1] + b * q12;
    }
    const double rho = q12 / std::sqrt(q11 * q22);
    const double e1 = normal(rng), e2 = normal(rng);
    za[t] = e1;
    zb[t] = rho * e1 + std::sqrt(1.0 - rho * rho) * e2;
  }
  return {std::move(za), std::move(zb)};
}

}  // namespace fri
