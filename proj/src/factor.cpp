#include "fri/factor.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <unordered_map>

#include "fri/error.hpp"
#include "fri/random.hpp"

namespace fri {

const char* to_string(EdgeGroup g) {
  switch (g) {
    case EdgeGroup::low:
      return "low";
    case EdgeGroup::medium:
      return "medium";
    case EdgeGroup::high:
      return "high";
  }
  return "?";
}

std::vector<NodePair> PairGrouping::members(EdgeGroup g) const {
  std::vector<NodePair> out;
  for (std::size_t i = 0; i < pairs.size(); ++i)
    if (groups[i] == g) out.push_back(pairs[i]);
  return out;
}

std::size_t PairGrouping::size(EdgeGroup g) const {
  return static_cast<std::size_t>(std::count(groups.begin(), groups.end(), g));
}

PairGrouping group_pairs(std::vector<NodePair> pairs, std::vector<std::size_t> counts, double phi_h, double phi_l) {
  if (pairs.size() != counts.size()) throw std::invalid_argument("group_pairs: pairs and counts differ in length");
  if (!(0.0 <= phi_l && phi_l <= phi_h && phi_h <= 1.0))
    throw std::invalid_argument("group_pairs: need 0 <= phi_l <= phi_h <= 1");
  PairGrouping g;
  g.max_edges = counts.empty() ? 0 : *std::max_element(counts.begin(), counts.end());
  if (g.max_edges == 0) throw NotApplicable("factor undefined: sampled pairs have no edges");
  g.high_threshold = phi_h * static_cast<double>(g.max_edges);
  g.low_threshold = phi_l * static_cast<double>(g.max_edges);
  g.groups.reserve(pairs.size());
  for (std::size_t c : counts) {
    const double x = static_cast<double>(c);
    g.groups.push_back(x >= g.high_threshold ? EdgeGroup::high
                                             : (x <= g.low_threshold ? EdgeGroup::low : EdgeGroup::medium));
  }
  g.pairs = std::move(pairs);
  g.counts = std::move(counts);
  return g;
}

FactorSamples sample_factor_pairs(const GraphSet& gs, const FactorOptions& opts) {
  std::vector<NodePair> candidates;
  for (const auto& [pair, count] : edge_counts(gs)) candidates.push_back(pair);

  FactorSamples s;
  s.candidates = candidates.size();
  Rng rng = make_rng(opts.seed, "factor-sample");
  std::shuffle(candidates.begin(), candidates.end(), rng);

  std::size_t n_construct = opts.construct_pairs, n_test = opts.test_pairs;
  const std::size_t wanted = n_construct + n_test;
  if (candidates.size() < wanted) {
    n_construct = static_cast<std::size_t>(std::llround(static_cast<double>(candidates.size()) *
                                                        static_cast<double>(opts.construct_pairs) /
                                                        static_cast<double>(std::max<std::size_t>(wanted, 1))));
    n_test = candidates.size() - n_construct;
    s.warnings.push_back("only " + std::to_string(candidates.size()) + " pairs have edges; sampled " +
                         std::to_string(n_construct) + " for construction and " + std::to_string(n_test) +
                         " for testing");
  }
  s.construct.assign(candidates.begin(), candidates.begin() + static_cast<std::ptrdiff_t>(n_construct));
  s.test.assign(candidates.begin() + static_cast<std::ptrdiff_t>(n_construct),
                candidates.begin() + static_cast<std::ptrdiff_t>(n_construct + n_test));
  std::sort(s.construct.begin(), s.construct.end());
  std::sort(s.test.begin(), s.test.end());
  return s;
}

std::vector<double> group_mean_series(const GraphReturns& ctx, std::span<const NodePair> pairs) {
  const std::size_t slots = ctx.correlator().num_slots();
  std::vector<double> sum(slots, 0.0);
  std::vector<std::size_t> n(slots, 0);
  for (const auto& p : pairs) {
    const auto s = ctx.series(p);
    for (std::size_t k = 0; k < slots; ++k)
      if (!std::isnan(s[k])) {
        sum[k] += s[k];
        ++n[k];
      }
  }
  std::vector<double> out(slots, std::numeric_limits<double>::quiet_NaN());
  for (std::size_t k = 0; k < slots; ++k)
    if (n[k]) out[k] = sum[k] / static_cast<double>(n[k]);
  return out;
}

namespace {

std::unordered_map<std::uint64_t, std::size_t> count_map(const GraphSet& gs) {
  std::unordered_map<std::uint64_t, std::size_t> m;
  for (const auto& [pair, count] : edge_counts(gs)) m.emplace(pair.key(), count);
  return m;
}

std::size_t lookup(const std::unordered_map<std::uint64_t, std::size_t>& m, NodePair p) {
  auto it = m.find(p.key());
  return it == m.end() ? 0 : it->second;
}

}  // namespace

HmlFactor construct_hml_factor(const GraphReturns& ctx, std::span<const NodePair> sample, const FactorOptions& opts) {
  const auto counts = count_map(ctx.graph());
  std::vector<NodePair> pairs(sample.begin(), sample.end());
  std::vector<std::size_t> c;
  c.reserve(pairs.size());
  for (const auto& p : pairs) c.push_back(lookup(counts, p));

  HmlFactor f;
  f.grouping = group_pairs(std::move(pairs), std::move(c), opts.phi_h, opts.phi_l);
  const auto high = f.grouping.members(EdgeGroup::high);
  const auto low = f.grouping.members(EdgeGroup::low);
  if (high.empty() || low.empty())
    throw NotApplicable("factor undefined: " + std::string(high.empty() ? "high" : "low") +
                        " group is empty (every sampled pair has a similar edge count)");
  f.first_day = ctx.epsilon();
  f.h_series = group_mean_series(ctx, high);
  f.m_series = group_mean_series(ctx, f.grouping.members(EdgeGroup::medium));
  f.l_series = group_mean_series(ctx, low);
  f.series.resize(f.h_series.size());
  for (std::size_t k = 0; k < f.series.size(); ++k) f.series[k] = f.h_series[k] - f.l_series[k];
  return f;
}

FactorTestResult regress_groups(std::span<const std::vector<double>> group_series, std::span<const double> hml,
                                std::vector<std::size_t> group_sizes) {
  FactorTestResult r;
  for (const auto& y : group_series) {
    const OlsFit fit = ols_fit(y, hml);
    r.alphas.push_back(fit.alpha);
    r.betas.push_back(fit.beta);
  }
  r.group_sizes = std::move(group_sizes);
  r.delta_beta = delta_beta(r.betas);
  return r;
}

FactorTestResult test_hml_factor(const GraphReturns& ctx, const HmlFactor& factor, std::span<const NodePair> sample,
                                 const FactorOptions& opts) {
  if (opts.groups < 2) throw std::invalid_argument("factor test needs at least two groups");
  if (sample.size() < opts.groups * 2)
    throw std::runtime_error("factor test: " + std::to_string(sample.size()) + " eligible pairs, need at least " +
                             std::to_string(opts.groups * 2));
  const auto counts = count_map(ctx.graph());
  std::vector<std::pair<std::size_t, NodePair>> sorted;
  for (const auto& p : sample) sorted.push_back({lookup(counts, p), p});
  std::sort(sorted.begin(), sorted.end());

  const std::size_t base = sorted.size() / opts.groups;
  const std::size_t extra = sorted.size() % opts.groups;
  std::vector<std::vector<double>> series;
  std::vector<std::size_t> sizes;
  std::size_t pos = 0;
  for (std::size_t g = 0; g < opts.groups; ++g) {
    const std::size_t size = base + (g >= opts.groups - extra ? 1 : 0);
    std::vector<NodePair> members;
    for (std::size_t i = 0; i < size; ++i) members.push_back(sorted[pos + i].second);
    pos += size;
    series.push_back(group_mean_series(ctx, members));
    sizes.push_back(size);
  }
  return regress_groups(series, factor.series, std::move(sizes));
}

double delta_beta(std::span<const double> betas) {
  if (betas.size() < 2) throw std::invalid_argument("delta_beta needs at least two coefficients");
  // The successive differences telescope; summing them would only add rounding.
  return (betas.back() - betas.front()) / static_cast<double>(betas.size() - 1);
}

}  // namespace fri
