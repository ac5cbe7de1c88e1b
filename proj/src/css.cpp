#include "fri/css.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_set>

#include "fri/parallel.hpp"
#include "fri/stats.hpp"

namespace fri {

namespace {

// Draws up to `target` distinct pairs absent from the day's edge list.
std::vector<NodePair> sample_non_connected(const GraphSet& gs, std::size_t t, std::size_t target, Rng& rng) {
  const auto n = static_cast<std::uint32_t>(gs.num_nodes());
  const std::size_t available = gs.num_pairs() - gs.edges(t).size();
  target = std::min(target, available);
  std::vector<NodePair> out;
  if (target == 0) return out;

  if (2 * target >= available) {
    out.reserve(available);
    for (std::uint32_t a = 0; a < n; ++a)
      for (std::uint32_t b = a + 1; b < n; ++b)
        if (!gs.has_edge(t, NodePair{a, b})) out.push_back(NodePair{a, b});
    for (std::size_t i = 0; i < target; ++i) {
      std::uniform_int_distribution<std::size_t> pick(i, out.size() - 1);
      std::swap(out[i], out[pick(rng)]);
    }
    out.resize(target);
    return out;
  }

  std::unordered_set<std::uint64_t> chosen;
  std::uniform_int_distribution<std::uint32_t> node(0, n - 1);
  out.reserve(target);
  while (out.size() < target) {
    const std::uint32_t a = node(rng), b = node(rng);
    if (a == b) continue;
    const NodePair p = NodePair::of(a, b);
    if (gs.has_edge(t, p) || !chosen.insert(p.key()).second) continue;
    out.push_back(p);
  }
  return out;
}

}  // namespace

CsDecision cs_test(std::span<const double> connected_abs_delta, std::span<const double> isolated_abs_delta,
                   double alpha, std::size_t min_pairs) {
  CsDecision d;
  if (connected_abs_delta.size() < std::max<std::size_t>(min_pairs, 2) ||
      isolated_abs_delta.size() < std::max<std::size_t>(min_pairs, 2))
    return d;
  const WelchResult w = welch_greater(connected_abs_delta, isolated_abs_delta);
  d.evaluated = true;
  d.p_value = w.p_value;
  d.cs = w.p_value < alpha ? 1 : 0;
  return d;
}

CsDay cs_at(const GraphReturns& ctx, std::size_t t, const CssOptions& opts, Rng& sampler) {
  const std::size_t eps = ctx.epsilon();
  if (t < eps || t + eps > ctx.last_day())
    throw std::out_of_range("day " + std::to_string(t) + " has no before/after correlation windows");
  const GraphSet& gs = ctx.graph();

  CsDay day;
  day.t = t;
  std::vector<double> connected;
  for (const auto& e : gs.edges(t)) {
    const double d = ctx.delta(e.pair, t);
    if (!std::isnan(d)) connected.push_back(std::abs(d));
  }
  day.n_connected = connected.size();
  if (connected.size() < opts.min_pairs) {
    day.skip_reason = "too few connected pairs";
    return day;
  }

  std::vector<double> isolated;
  for (const auto& p : sample_non_connected(gs, t, connected.size() * opts.isolated_ratio, sampler)) {
    const double d = ctx.delta(p, t);
    if (!std::isnan(d)) isolated.push_back(std::abs(d));
  }
  day.n_isolated_sampled = isolated.size();
  if (isolated.size() < opts.min_pairs) {
    day.skip_reason = "too few non-connected pairs";
    return day;
  }

  const CsDecision d = cs_test(connected, isolated, opts.alpha, opts.min_pairs);
  day.evaluated = d.evaluated;
  day.cs = d.cs;
  day.p_value = d.p_value;
  return day;
}

CssReport css(const GraphReturns& ctx, const CssOptions& opts) {
  if (!(opts.alpha > 0.0 && opts.alpha < 1.0)) throw std::invalid_argument("alpha must lie in (0, 1)");
  const std::size_t eps = ctx.epsilon();
  if (ctx.last_day() < 2 * eps) throw std::runtime_error("CSS: period shorter than two correlation windows");
  const std::size_t first = eps, last = ctx.last_day() - eps;

  CssReport report;
  report.per_day.resize(last - first + 1);
  parallel_for(report.per_day.size(), opts.jobs, [&](std::size_t i) {
    Rng rng = make_rng(opts.seed, "css", first + i);
    report.per_day[i] = cs_at(ctx, first + i, opts, rng);
  });

  std::size_t hits = 0;
  for (const auto& d : report.per_day) {
    if (d.evaluated) {
      ++report.evaluable_days;
      hits += static_cast<std::size_t>(d.cs);
    } else {
      ++report.skipped_days;
    }
  }
  if (report.evaluable_days == 0) throw std::runtime_error("CSS: no evaluable days");
  report.css = static_cast<double>(hits) / static_cast<double>(report.evaluable_days);
  return report;
}

}  // namespace fri
