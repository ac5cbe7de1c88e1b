#include "fri/dcc.hpp"

#include <algorithm>
#include <map>
#include <optional>

#include "fri/error.hpp"
#include "fri/parallel.hpp"

namespace fri {

DccReport delta_dcc(const GraphReturns& ctx, const PairGrouping& grouping, const DccOptions& opts) {
  const GraphSet& gs = ctx.graph();

  std::vector<std::uint32_t> nodes;
  for (const auto& p : grouping.pairs) {
    nodes.push_back(p.lo);
    nodes.push_back(p.hi);
  }
  std::sort(nodes.begin(), nodes.end());
  nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());

  struct Leg {
    std::optional<GarchFit> fit;
    std::string failure;
  };
  std::vector<Leg> legs(nodes.size());
  parallel_for(nodes.size(), opts.jobs, [&](std::size_t i) {
    try {
      GarchFit f = fit_garch11(ctx.returns().column(ctx.column(nodes[i])), opts.fit);
      if (f.converged)
        legs[i].fit = std::move(f);
      else
        legs[i].failure = "GARCH did not converge for " + gs.nodes()[nodes[i]];
    } catch (const std::exception& e) {
      legs[i].failure = e.what();
    }
  });
  auto leg_of = [&](std::uint32_t node) -> const Leg& {
    return legs[static_cast<std::size_t>(std::lower_bound(nodes.begin(), nodes.end(), node) - nodes.begin())];
  };

  std::vector<std::size_t> order(grouping.pairs.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return grouping.pairs[x] < grouping.pairs[y]; });

  DccReport report;
  report.pairs.resize(order.size());
  parallel_for(order.size(), opts.jobs, [&](std::size_t k) {
    const std::size_t i = order[k];
    const NodePair p = grouping.pairs[i];
    PairDccFit& out = report.pairs[k];
    out.first = gs.nodes()[p.lo];
    out.second = gs.nodes()[p.hi];
    out.group = grouping.groups[i];
    const Leg& la = leg_of(p.lo);
    const Leg& lb = leg_of(p.hi);
    if (!la.fit || !lb.fit) {
      out.failure = !la.fit ? la.failure : lb.failure;
      return;
    }
    try {
      const DccFit f = fit_dcc11(la.fit->std_resid, lb.fit->std_resid, opts.fit);
      out.converged = f.converged;
      out.a = f.a;
      out.b = f.b;
      if (!f.converged) out.failure = "DCC did not converge";
    } catch (const std::exception& e) {
      out.failure = e.what();
    }
  });

  auto stats_of = [&](EdgeGroup g) {
    DccGroupStats s;
    for (const auto& f : report.pairs) {
      if (f.group != g) continue;
      if (!f.converged) {
        ++s.failed;
        continue;
      }
      s.alpha += f.a;
      s.beta += f.b;
      ++s.fitted;
    }
    if (s.fitted) {
      s.alpha /= static_cast<double>(s.fitted);
      s.beta /= static_cast<double>(s.fitted);
    }
    return s;
  };
  report.high = stats_of(EdgeGroup::high);
  report.medium = stats_of(EdgeGroup::medium);
  report.low = stats_of(EdgeGroup::low);

  if (report.high.fitted == 0 || report.low.fitted == 0) {
    report.reason = report.high.fitted == 0 ? "no converged pair in the high group" : "no converged pair in the low group";
    return report;
  }
  report.applicable = true;
  report.delta_dcc = report.high.alpha - report.low.alpha + report.low.beta - report.high.beta;
  return report;
}

DccReport delta_dcc(const GraphReturns& ctx, const FactorOptions& factor, const DccOptions& opts) {
  const FactorSamples samples = sample_factor_pairs(ctx.graph(), factor);
  std::map<NodePair, std::size_t> counts;
  for (const auto& [pair, c] : edge_counts(ctx.graph())) counts.emplace(pair, c);
  std::vector<std::size_t> c;
  for (const auto& p : samples.construct) c.push_back(counts[p]);
  try {
    const PairGrouping grouping = group_pairs(samples.construct, std::move(c), factor.phi_h, factor.phi_l);
    if (grouping.size(EdgeGroup::high) == 0 || grouping.size(EdgeGroup::low) == 0) {
      DccReport r;
      r.reason = std::string("degenerate grouping: ") + (grouping.size(EdgeGroup::high) == 0 ? "high" : "low") +
                 " group is empty";
      return r;
    }
    return delta_dcc(ctx, grouping, opts);
  } catch (const NotApplicable& e) {
    DccReport r;
    r.reason = e.what();
    return r;
  }
}

}  // namespace fri
