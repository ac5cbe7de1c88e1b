// Acceptance run: one PASS/FAIL/SKIP line per criterion, exit 1 on any FAIL.
// `--calibrate` additionally prints the 20-seed separation sweep used to pin
// the planted-structure margins.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "cli.hpp"
#include "fri/context.hpp"
#include "fri/css.hpp"
#include "fri/factor.hpp"
#include "fri/garch.hpp"
#include "fri/report.hpp"
#include "fri/rolling.hpp"
#include "fri/stats.hpp"
#include "fri/synth.hpp"

using namespace fri;
namespace fs = std::filesystem;

namespace {

struct Verdict {
  enum Kind { pass, fail, skip } kind = fail;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(const char* f, double a, double b = 0, double c = 0, double d = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c, d);
  return buf;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

ReturnPanel noise_panel(std::size_t n_tickers, std::size_t n_days, std::uint64_t seed) {
  Rng rng(seed);
  std::normal_distribution<double> z(0.0, 0.01);
  std::vector<std::string> names;
  for (std::size_t i = 0; i < n_tickers; ++i) names.push_back("N" + std::to_string(1000 + i));
  std::vector<double> v(n_tickers * n_days);
  for (double& x : v) x = z(rng);
  return ReturnPanel(names, weekday_calendar(*parse_date("2020-01-01"), n_days), std::move(v));
}

// Two-pass Pearson, independent of the library.
double pearson(std::span<const double> x, std::span<const double> y) {
  const double n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) mx += x[i], my += y[i];
  mx /= n, my /= n;
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  return sxy / std::sqrt(sxx * syy);
}

Verdict rolling_exactness() {
  const auto t0 = Clock::now();
  const std::size_t eps = kDefaultEpsilon;
  const ReturnPanel p = noise_panel(30, 600, 101);
  Rng rng(202);
  std::uniform_int_distribution<std::size_t> tick(0, 29), day(eps, 599);
  double worst = 0.0;
  for (int k = 0; k < 1000; ++k) {
    std::size_t a = tick(rng), b = tick(rng);
    while (b == a) b = tick(rng);
    const std::size_t t = day(rng);
    const RollingCorrSeries s = rolling_corr(p, p.tickers()[a], p.tickers()[b], eps);
    const double oracle = pearson(p.column(a).subspan(t + 1 - eps, eps), p.column(b).subspan(t + 1 - eps, eps));
    worst = std::max(worst, std::abs(*s.at(t) - oracle));
  }
  const double secs = seconds_since(t0);
  return {worst <= 1e-12 && secs < 5.0 ? Verdict::pass : Verdict::fail,
          fmt("1000 draws, max |err| %.2e (<= 1e-12), %.2f s (< 5 s)", worst, secs)};
}

Verdict ols_exactness() {
  Rng rng(303);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  double worst_line = 0.0, worst_oracle = 0.0;
  for (int k = 0; k < 100; ++k) {
    const double alpha = u(rng), beta = u(rng);
    const std::size_t n = 20 + k;
    std::vector<double> x(n), y(n), noisy(n);
    for (std::size_t i = 0; i < n; ++i) {
      x[i] = u(rng);
      y[i] = alpha + beta * x[i];
      noisy[i] = y[i] + 0.3 * u(rng);
    }
    const OlsFit line = ols_fit(y, x);
    worst_line = std::max({worst_line, std::abs(line.alpha - alpha), std::abs(line.beta - beta)});

    // Normal equations [n Sx; Sx Sxx] [a b]' = [Sy Sxy]' solved by Cramer's rule.
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) sx += x[i], sy += noisy[i], sxx += x[i] * x[i], sxy += x[i] * noisy[i];
    const double det = static_cast<double>(n) * sxx - sx * sx;
    const double a = (sy * sxx - sx * sxy) / det, b = (static_cast<double>(n) * sxy - sx * sy) / det;
    const OlsFit fit = ols_fit(noisy, x);
    worst_oracle = std::max({worst_oracle, std::abs(fit.alpha - a), std::abs(fit.beta - b)});
  }
  return {worst_line <= 1e-10 && worst_oracle <= 1e-10 ? Verdict::pass : Verdict::fail,
          fmt("exact lines max err %.2e, normal-equations oracle max err %.2e (<= 1e-10, 100 fixtures)", worst_line,
              worst_oracle)};
}

Verdict delta_beta_telescoping() {
  Rng rng(404);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  std::size_t exact = 0;
  double worst_mean_diff = 0.0;
  for (int k = 0; k < 100; ++k) {
    std::vector<double> b(2 + k % 19);
    for (double& x : b) x = u(rng);
    const double h = static_cast<double>(b.size());
    const double got = delta_beta(b);
    exact += got == (b.back() - b.front()) / (h - 1.0) ? 1 : 0;
    double sum = 0.0;
    for (std::size_t i = 1; i < b.size(); ++i) sum += b[i] - b[i - 1];
    worst_mean_diff = std::max(worst_mean_diff, std::abs(got - sum / (h - 1.0)));
  }
  return {exact == 100 ? Verdict::pass : Verdict::fail,
          fmt("%.0f/100 vectors bit-exact; successive-difference mean agrees to %.1e", static_cast<double>(exact),
              worst_mean_diff)};
}

Verdict garch_recovery() {
  std::vector<double> da, db;
  bool stationary = true;
  double slowest = 0.0;
  for (int s = 1; s <= 20; ++s) {
    Rng rng(derive_seed(505, "garch", static_cast<std::uint64_t>(s)));
    const auto r = simulate_garch11(4000, 0.05, 0.10, 0.85, rng);
    const auto t0 = Clock::now();
    const GarchFit f = fit_garch11(r);
    slowest = std::max(slowest, seconds_since(t0));
    stationary = stationary && f.alpha + f.beta < 1.0 && f.alpha >= 0.0 && f.beta >= 0.0 && f.omega > 0.0;
    da.push_back(std::abs(f.alpha - 0.10));
    db.push_back(std::abs(f.beta - 0.85));
  }
  const double ma = median(da), mb = median(db);
  return {ma <= 0.05 && mb <= 0.07 && stationary && slowest < 1.0 ? Verdict::pass : Verdict::fail,
          fmt("median |a-0.10| %.4f (<= 0.05), median |b-0.85| %.4f (<= 0.07), slowest fit %.3f s, stationary: ",
              ma, mb, slowest) +
              (stationary ? "all" : "NO")};
}

Verdict dcc_recovery() {
  std::vector<double> da, db;
  bool valid = true;
  for (int s = 1; s <= 20; ++s) {
    Rng rng(derive_seed(606, "dcc", static_cast<std::uint64_t>(s)));
    const auto [za, zb] = simulate_dcc11(4000, 0.05, 0.90, 0.3, rng);
    const DccFit f = fit_dcc11(za, zb);
    valid = valid && f.a >= 0.0 && f.b >= 0.0 && f.a + f.b < 1.0 &&
            std::all_of(f.correlation.begin(), f.correlation.end(), [](double r) { return r > -1.0 && r < 1.0; });
    da.push_back(std::abs(f.a - 0.05));
    db.push_back(std::abs(f.b - 0.90));
  }
  const double ma = median(da), mb = median(db);
  return {ma <= 0.04 && mb <= 0.08 && valid ? Verdict::pass : Verdict::fail,
          fmt("median |a-0.05| %.4f (<= 0.04), median |b-0.90| %.4f (<= 0.08), constraints ", ma, mb) +
              (valid ? "hold" : "VIOLATED")};
}

Verdict css_null_calibration() {
  // Independent returns and a graph of random pairs redrawn every day.
  const std::size_t n = 40, days = 700, edges_per_day = 12;
  const ReturnPanel returns = noise_panel(n, days, 707);
  Rng rng(708);
  std::uniform_int_distribution<std::uint32_t> node(0, n - 1);
  std::vector<std::vector<Edge>> d(days);
  for (auto& day : d) {
    while (day.size() < edges_per_day) {
      const std::uint32_t a = node(rng), b = node(rng);
      if (a == b) continue;
      const NodePair p = NodePair::of(a, b);
      if (std::none_of(day.begin(), day.end(), [&](const Edge& e) { return e.pair == p; })) day.push_back({p, 1.0});
    }
    std::sort(day.begin(), day.end(), [](const Edge& x, const Edge& y) { return x.pair < y.pair; });
  }
  const GraphSet gs(returns.tickers(), returns.calendar(), std::move(d));
  CssOptions o;
  o.seed = 709;
  o.jobs = 4;
  const CssReport r = css(GraphReturns(gs, returns, kDefaultEpsilon), o);
  const bool ok = r.evaluable_days >= 500 && std::abs(r.css - o.alpha) <= 0.02;
  return {ok ? Verdict::pass : Verdict::fail,
          fmt("rejection rate %.4f over %.0f evaluable days (alpha 0.05 +/- 0.02, >= 500 days)", r.css,
              static_cast<double>(r.evaluable_days))};
}

// Pinned planted-structure configuration and margins.
constexpr std::uint64_t kSeparationSeed = 7;
constexpr double kCssMargin = 0.2;
constexpr double kAecrMargin = 0.3;

// Event layout (40-50 day events in two episodes, background 0.3 mentions a
// day) is the generator default, chosen by the 20-seed sweep that
// `--calibrate` reprints.
SynthConfig separation_config(std::uint64_t seed) {
  SynthConfig c;  // 40 tickers, 300 days, 30 event pairs, corr_boost 0.8
  c.epsilon = kDefaultEpsilon;
  c.seed = seed;
  return c;
}

struct Separation {
  double css_true, css_null, aecr_true, aecr_null, db_true, db_null;
  bool factor_ok;
};

Separation separation_run(std::uint64_t seed) {
  const SynthDataset ds = generate(separation_config(seed));
  const GraphSet null = shuffle_graphset(ds.truth, derive_seed(seed, "acceptance-null"));
  EvalOptions o;
  o.seed = seed;
  o.jobs = 4;
  o.only = {Indicator::css, Indicator::aecr, Indicator::factor};
  const FriReport t = evaluate(ds.truth, ds.returns, o), s = evaluate(null, ds.returns, o);
  return {t.css_value(),        s.css_value(),        t.aecr_value(),
          s.aecr_value(),       t.delta_beta_value(), s.delta_beta_value(),
          t.factor.status == Status::ok && s.factor.status == Status::ok};
}

Verdict planted_separation() {
  const auto t0 = Clock::now();
  const Separation r = separation_run(kSeparationSeed);
  const double secs = seconds_since(t0);
  const bool css_ok = r.css_true >= r.css_null + kCssMargin;
  const bool aecr_ok = r.aecr_true >= r.aecr_null + kAecrMargin;
  const bool db_ok = r.factor_ok && r.db_true > r.db_null;
  std::ostringstream d;
  d << fmt("seed %.0f: CSS %.3f vs %.3f (need +0.2) ", static_cast<double>(kSeparationSeed), r.css_true, r.css_null)
    << (css_ok ? "ok" : "MISS") << fmt("; AECR %.3f vs %.3f (need +0.3) ", r.aecr_true, r.aecr_null)
    << (aecr_ok ? "ok" : "MISS") << fmt("; delta_beta %.4f vs %.4f (need >) ", r.db_true, r.db_null)
    << (db_ok ? "ok" : "MISS") << fmt("; %.1f s (< 120 s)", secs);
  return {css_ok && aecr_ok && db_ok && secs < 120.0 ? Verdict::pass : Verdict::fail, d.str()};
}

void calibrate_separation() {
  double min_css = 1e9, min_aecr = 1e9, sum_css = 0, sum_aecr = 0;
  int db_wins = 0;
  for (std::uint64_t s = 1; s <= 20; ++s) {
    const Separation r = separation_run(s);
    const double dc = r.css_true - r.css_null, da = r.aecr_true - r.aecr_null;
    min_css = std::min(min_css, dc);
    min_aecr = std::min(min_aecr, da);
    sum_css += dc;
    sum_aecr += da;
    db_wins += r.db_true > r.db_null ? 1 : 0;
    std::printf("  calibrate seed %2llu: css %+.3f aecr %+.3f delta_beta %.4f vs %.4f\n",
                static_cast<unsigned long long>(s), dc, da, r.db_true, r.db_null);
  }
  std::printf("  calibrate summary: css margin min %.3f mean %.3f; aecr margin min %.3f mean %.3f; "
              "delta_beta truth ahead on %d/20 seeds\n",
              min_css, sum_css / 20, min_aecr, sum_aecr / 20, db_wins);
}

Verdict static_degeneracy() {
  const SynthDataset ds = generate(separation_config(kSeparationSeed));
  // Every planted pair connected on every day.
  std::vector<Edge> base;
  for (const auto& e : ds.events) base.push_back({ds.truth.require_pair(e.first, e.second), 1.0});
  const GraphSet st = build_static_graphset(ds.truth.nodes(), base, ds.returns.calendar());
  EvalOptions o;
  o.seed = 1;
  o.only = {Indicator::factor, Indicator::dcc};
  const FriReport r = evaluate(st, ds.returns, o);
  const auto j = to_json(r);
  const bool ok = r.factor.status == Status::not_applicable && r.dcc.status == Status::not_applicable &&
                  j["summary"]["delta_beta"] == 0.0 && j["summary"]["delta_dcc"] == 0.0 && r.all_completed();
  return {ok ? Verdict::pass : Verdict::fail,
          std::string("delta_beta ") + to_string(r.factor.status) + " (" + r.factor.reason + "), delta_dcc " +
              to_string(r.dcc.status) + fmt("; reported %.1f / %.1f", r.delta_beta_value(), r.delta_dcc_value())};
}

Verdict eval_determinism() {
  const fs::path dir = fs::temp_directory_path() / ("fri_acceptance_" + std::to_string(::getpid()));
  fs::remove_all(dir);
  std::ostringstream sink;
  const std::string data = (dir / "data").string();
  if (cli::run({"synth", "--out-dir", data, "--seed", "7"}, sink, sink) != 0) return {Verdict::fail, sink.str()};
  auto eval = [&](const std::string& jobs) {
    const std::string out = (dir / ("jobs" + jobs)).string();
    cli::run({"eval", "--prices", data + "/prices.csv", "--graph", data + "/truth.jsonl", "--graph",
              data + "/shuffled.jsonl", "--seed", "11", "--jobs", jobs, "--out-dir", out},
             sink, sink);
    std::string all;
    for (const char* f : {"truth.report.json", "shuffled.report.json", "table.csv"}) {
      std::ifstream in(fs::path(out) / f, std::ios::binary);
      all += std::string(std::istreambuf_iterator<char>(in), {}) + '\0';
    }
    return all;
  };
  const std::string one = eval("1"), eight = eval("8");
  fs::remove_all(dir);
  const bool ok = one == eight && one.size() > 1000;
  return {ok ? Verdict::pass : Verdict::fail,
          fmt("two graphs, %.0f bytes of report output; --jobs 1 vs --jobs 8 ", static_cast<double>(one.size())) +
              (one == eight ? "byte-identical" : "DIFFER")};
}

Verdict trend_reproduction() {
  const char* dir = std::getenv("FRI_SPNEWS_DIR");
  if (!dir || !fs::exists(fs::path(dir) / "prices.csv") || !fs::exists(fs::path(dir) / "news.jsonl"))
    return {Verdict::skip, "set FRI_SPNEWS_DIR to a directory with prices.csv and news.jsonl to run"};
  const fs::path root(dir);
  const ReturnPanel returns = compute_log_returns(load_prices(root / "prices.csv").prices);
  const NewsLoad news = load_news(root / "news.jsonl", returns.tickers(), returns.calendar());
  std::vector<std::pair<std::string, GraphSet>> graphs;
  for (int tau = 0; tau <= 2; ++tau)
    graphs.emplace_back("tau" + std::to_string(tau),
                        build_news_graphset(news.records, returns.tickers(), returns.calendar(), tau));
  graphs.emplace_back("corr", build_corr_graphset(returns, kDefaultEpsilon, 0.6));
  const auto day0 = graphs[0].second.edges(0);
  graphs.emplace_back("static", build_static_graphset(returns.tickers(), {day0.begin(), day0.end()},
                                                      returns.calendar()));
  std::vector<double> css_v, aecr_v;
  std::ostringstream d;
  for (const auto& [name, g] : graphs) {
    EvalOptions o;
    o.jobs = 8;
    o.only = {Indicator::css, Indicator::aecr};
    const FriReport r = evaluate(g, returns, o);
    css_v.push_back(r.css_value());
    aecr_v.push_back(r.aecr_value());
    d << name << fmt(" css %.3f aecr %.3f; ", r.css_value(), r.aecr_value());
  }
  const bool ok = std::is_sorted(css_v.rbegin(), css_v.rend(), std::less_equal<>()) &&
                  std::is_sorted(aecr_v.rbegin(), aecr_v.rend(), std::less_equal<>());
  return {ok ? Verdict::pass : Verdict::fail, d.str() + "strict ordering tau0 > tau1 > tau2 > corr > static"};
}

}  // namespace

int main(int argc, char** argv) {
  const bool calibrate = argc > 1 && std::string(argv[1]) == "--calibrate";
  struct Criterion {
    const char* name;
    std::function<Verdict()> run;
  };
  const std::vector<Criterion> criteria{
      {"rolling correlation exactness", rolling_exactness},
      {"OLS exactness", ols_exactness},
      {"delta_beta telescoping", delta_beta_telescoping},
      {"GARCH(1,1) recovery", garch_recovery},
      {"DCC(1,1) recovery", dcc_recovery},
      {"CSS calibration under the null", css_null_calibration},
      {"planted-structure separation", planted_separation},
      {"static-graph degeneracy", static_degeneracy},
      {"eval determinism across --jobs", eval_determinism},
      {"trend reproduction on released news data", trend_reproduction},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Verdict o;
    try {
      o = criteria[i].run();
    } catch (const std::exception& e) {
      o = {Verdict::fail, std::string("threw: ") + e.what()};
    }
    const char* tag = o.kind == Verdict::pass ? "PASS" : o.kind == Verdict::skip ? "SKIP" : "FAIL";
    failures += o.kind == Verdict::fail;
    std::printf("[%s] %2zu %s: %s\n", tag, i + 1, criteria[i].name, o.detail.c_str());
    std::fflush(stdout);
    if (calibrate && i == 6) calibrate_separation();
  }
  std::printf("%d of %zu criteria failed\n", failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
